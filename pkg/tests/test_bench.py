import json
import math

import numpy as np
import pytest
from pydantic import ValidationError

from mimkit.bench import (
    load_config,
    read_records,
    records_to_csv,
    render_svg,
    report,
    run_experiment,
)
from mimkit.bench.config import ExperimentConfig
from mimkit.bench.report import Summary
from mimkit.bench.runner import TrialRecord, materialize_trial
from mimkit.cli import main

LOW = {"kind": "lowdim", "n": 400, "p": 4}


def cfg(**kw):
    doc = {"data_source": LOW, "pipelines": [{"indicators": "none"}, {"indicators": "mim"}], "trials": 3}
    doc.update(kw)
    return ExperimentConfig.model_validate(doc)


def test_config_rejects_unknown_keys():
    with pytest.raises(ValidationError):
        cfg(bogus=1)
    with pytest.raises(ValidationError):
        ExperimentConfig.model_validate({"data_source": {**LOW, "q": 1}, "pipelines": [{}]})


def test_config_rules():
    csv_src = {"kind": "csv", "path": "x.csv", "response": "y"}
    with pytest.raises(ValidationError, match="omim"):
        cfg(data_source=csv_src, pipelines=[{"indicators": "omim"}])
    with pytest.raises(ValidationError, match="unique"):
        cfg(pipelines=[{"indicators": "mim"}, {"indicators": "mim"}])
    with pytest.raises(ValidationError, match="lambda_grid"):
        cfg(lambda_grid=[0.0, 1.0])
    with pytest.raises(ValidationError, match="linear"):
        cfg(model="logistic")
    assert cfg(mask={"kind": "self_masking", "lambda": 1.0}, lambda_grid=[0, 1]).sweep_values == [0.0, 1.0]


def test_relative_csv_path(tmp_path):
    (tmp_path / "c.json").write_text(json.dumps(
        {"data_source": {"kind": "csv", "path": "d.csv", "response": "y"}, "pipelines": [{}]}))
    assert load_config(tmp_path / "c.json").data_source.path == str(tmp_path / "d.csv")


def test_no_mask_makes_mim_equal_none():
    recs = run_experiment(cfg(trials=1))
    assert recs[0].value == recs[1].value
    assert recs[1].selected_indicators == 0


def test_pipelines_share_trial_data():
    c = cfg(mask={"kind": "self_masking", "lambda": 2.0})
    a, b = materialize_trial(c, 1), materialize_trial(c, 1)
    assert np.array_equal(a.train.mask, b.train.mask)
    assert np.array_equal(a.y_test.values, b.y_test.values)
    other = materialize_trial(c.model_copy(update={"master_seed": 5}), 1)
    assert not np.array_equal(a.train.mask, other.train.mask)


def test_parallel_invariance():
    c = cfg(mask={"kind": "self_masking", "lambda": 1.0}, lambda_grid=[0, 2])
    assert records_to_csv(run_experiment(c, 1, timing=False)) == records_to_csv(run_experiment(c, 2, timing=False))


def test_failed_trial_is_recorded():
    c = cfg(mask={"kind": "self_masking", "lambda": [1.0, 2.0]}, trials=1)
    recs = run_experiment(c)
    assert all(r.failed and math.isnan(r.value) for r in recs)


def test_records_round_trip(tmp_path):
    c = cfg(mask={"kind": "self_masking", "lambda": 1.0}, lambda_grid=[0, 1])
    recs = run_experiment(c)
    p = tmp_path / "r.csv"
    p.write_text(records_to_csv(recs))
    back = read_records(p)
    assert [r.value for r in back] == [r.value for r in recs]
    assert p.read_text().splitlines()[0] == "trial_id,pipeline_id,lambda,metric,value,selected_indicators,preproc_ms,fit_ms"


def _rec(pid, t, v, lam=0.0):
    return TrialRecord(t, pid, lam, "rmse", v, 0, None, None)


def test_report_single_record():
    s = report([_rec("a", 0, 2.5)])
    assert s.rows[0]["mean"] == 2.5 and s.rows[0]["sd"] == 0.0


def test_report_paired_identical():
    recs = [_rec(p, t, float(t)) for p in ("a", "b") for t in range(4)]
    s = report(recs, baseline="a")
    assert s.paired[0]["mean_diff"] == 0.0 and s.paired[0]["p_value"] == 1.0


def test_report_errors():
    with pytest.raises(ValueError):
        report([])
    with pytest.raises(ValueError):
        report([_rec("a", 0, 1.0)], group_by=("nope",))


def test_lambda_five_direction():
    c = cfg(data_source={"kind": "lowdim", "n": 2000, "p": 10}, mask={"kind": "self_masking", "lambda": 5.0},
            trials=20)
    s = report(run_experiment(c, timing=False), baseline="none")
    means = {r["pipeline_id"]: r["mean"] for r in s.rows}
    assert means["mim"] < means["none"]


def test_chart_structure():
    s = report([_rec("a", 0, 1.0, 0.0), _rec("a", 0, 2.0, 1.0)])
    svg = render_svg(s)
    assert svg.startswith("<svg") and svg.count("<polyline") == 1
    with pytest.raises(ValueError):
        render_svg(Summary(("pipeline_id", "lambda"), []))


def test_chart_two_series_six_points():
    recs = [_rec(p, t, 1.0 + t + lam, lam) for p in ("none", "mim") for lam in range(6) for t in range(2)]
    svg = render_svg(report(recs))
    assert svg.count("<polyline") == 2
    assert svg.count('class="sem"') == 12
    for line in svg.splitlines():
        if "<polyline" in line:
            assert len(line.split('points="')[1].split('"')[0].split()) == 6


def test_cli_end_to_end(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"data_source": LOW, "mask": {"kind": "self_masking", "lambda": 1.0},
                                "pipelines": [{"indicators": "none"}, {"indicators": "smim"}],
                                "trials": 2, "lambda_grid": [0, 3]}))
    assert main(["bench", "--config", str(conf), "--out", str(tmp_path / "a"), "--no-timing"]) == 0
    assert main(["bench", "--config", str(conf), "--out", str(tmp_path / "b"), "--jobs", "2", "--no-timing"]) == 0
    assert (tmp_path / "a/records.csv").read_bytes() == (tmp_path / "b/records.csv").read_bytes()
    for f in ("summary.csv", "paired.csv", "chart.svg"):
        assert (tmp_path / "a" / f).exists()
    assert main(["report", "--records", str(tmp_path / "a/records.csv"), "--baseline", "none",
                 "--chart", "--out", str(tmp_path / "r")]) == 0
    assert (tmp_path / "r/chart.svg").exists()
    assert main(["synth", "--n", "50", "--p", "3", "--out", str(tmp_path / "s.csv")]) == 0
    assert main(["mask", "--in", str(tmp_path / "s.csv"), "--lambda", "2", "--out", str(tmp_path / "m.csv")]) == 0
    assert "NA" in (tmp_path / "m.csv").read_text()
    assert main(["verify", "--suite", "single-feature", "--datasets", "30", "--out", str(tmp_path / "v")]) == 0
    assert json.loads((tmp_path / "v/verify.json").read_text())["single-feature"]["passed"]


def test_cli_bench_timing_columns(tmp_path):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"data_source": LOW, "pipelines": [{}], "trials": 1}))
    main(["bench", "--config", str(conf), "--out", str(tmp_path)])
    row = (tmp_path / "records.csv").read_text().splitlines()[1].split(",")
    assert float(row[6]) >= 0 and float(row[7]) >= 0
