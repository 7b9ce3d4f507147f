"""Trial runner: data -> mask -> split -> preprocess -> fit -> test metric.

Seed layout per trial (``root = SeedStream(master_seed)``)::

    root.child("trial", t).child("data")              synthetic features / beta / noise
    root.child("trial", t).child("split")             train/test shuffle
    root.child("trial", t).child("blocks", v)         informative-block draw, sweep value v
    root.child("trial", t).child("mask", v)           cell masking, sweep value v

Data and split are shared across sweep values of one trial; every pipeline
of a trial sees the identical masked data and split.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from ..ingest import make_schema, read_csv, read_header
from ..linear import fit_logistic, fit_ols, fit_one_vs_rest, predict
from ..masking import BlockMaskSpec, MaskSpec, apply_self_mask, draw_block_mask_spec
from ..metrics import (
    ONE_MINUS_AUC,
    RMSE,
    accuracy,
    auc,
    metric_for_response,
    rmse,
)
from ..preprocess import fit_pipeline
from ..synth import HighDimSpec, LowDimSpec, gen_highdim, gen_lowdim
from ..tabular import MaskedDataset, Response, SeedStream, split_train_test
from .config import ExperimentConfig

log = logging.getLogger(__name__)

RECORDS_HEADER = ["trial_id", "pipeline_id", "lambda", "metric", "value",
                  "selected_indicators", "preproc_ms", "fit_ms"]


@dataclass(frozen=True)
class TrialRecord:
    trial_id: int
    pipeline_id: str
    lam: Optional[float]
    metric: str
    value: float
    selected_indicators: int
    preproc_ms: Optional[float]
    fit_ms: Optional[float]
    error: Optional[str] = None

    @property
    def failed(self) -> bool:
        return self.error is not None


@dataclass(frozen=True, eq=False)
class TrialData:
    train: MaskedDataset
    y_train: Response
    test: MaskedDataset
    y_test: Response
    complete: Optional[np.ndarray]
    truth_lambdas: Optional[np.ndarray]


def load_source(config: ExperimentConfig):
    """Read a CSV data source once; synthetic sources return None."""
    src = config.data_source
    if src.kind != "csv":
        return None
    schema = make_schema(read_header(src.path), src.response, src.categorical, src.missing_markers)
    return read_csv(src.path, schema, src.response_kind)


def trial_seed(config: ExperimentConfig, trial_id: int) -> SeedStream:
    return SeedStream(config.master_seed).child("trial", trial_id)


def _sweep_label(value: Optional[float]) -> str:
    return "-" if value is None else repr(float(value))


def materialize_trial(config: ExperimentConfig, trial_id: int, sweep_value: Optional[float] = None,
                      loaded=None) -> TrialData:
    seed = trial_seed(config, trial_id)
    src = config.data_source
    complete = None
    names: tuple[str, ...] = ()
    if src.kind == "lowdim":
        complete, y, _ = gen_lowdim(LowDimSpec(src.n, src.p, src.rho, src.snr, seed.child("data")))
    elif src.kind == "highdim":
        complete, y, _ = gen_highdim(HighDimSpec(src.n, src.p, src.block_count, src.block_size,
                                                 src.rho_within, src.snr, seed.child("data")))
    else:
        if loaded is None:
            loaded = load_source(config)
        base, y = loaded
        names = base.column_names
        if config.mask.kind != "none":
            if base.mask.any():
                raise ValueError("cannot apply a synthetic mask to a CSV that already has missing values")
            complete = base.values.copy()

    mask_cfg = config.mask
    label = _sweep_label(sweep_value)
    truth = None
    if mask_cfg.kind == "none":
        data = MaskedDataset.from_complete(complete) if src.kind != "csv" else loaded[0]
        truth = np.zeros(data.n_features)
    else:
        p = complete.shape[1]
        if mask_cfg.kind == "self_masking":
            lam = mask_cfg.lam if sweep_value is None else sweep_value
            spec = MaskSpec(np.asarray(lam, dtype=float)) if isinstance(lam, list) else MaskSpec.uniform(lam, p)
        elif mask_cfg.kind == "mcar":
            spec = MaskSpec.mcar(mask_cfg.rate, p)
        else:
            p_inf = mask_cfg.p_inf if sweep_value is None else sweep_value
            block_spec = BlockMaskSpec.contiguous(src.block_count, src.block_size,
                                                  mask_cfg.informative_lambda, p_inf)
            spec, _ = draw_block_mask_spec(block_spec, seed.child("blocks", label))
        data = apply_self_mask(complete, spec, seed.child("mask", label), names)
        truth = spec.per_feature_lambda if spec.mechanism == "self_masking" else np.zeros(p)
    if src.kind == "csv":
        truth = None
    (train, y_train), (test, y_test) = split_train_test(data, y, config.train_fraction, seed.child("split"))
    return TrialData(train, y_train, test, y_test, complete, truth)


def _ms(t0: int, t1: int) -> float:
    return (t1 - t0) / 1e6


def run_trial(config: ExperimentConfig, trial_id: int, sweep_value: Optional[float] = None,
              loaded=None, timing: bool = True) -> list[TrialRecord]:
    """All pipelines of one trial on a shared data / mask / split draw."""
    try:
        td = materialize_trial(config, trial_id, sweep_value, loaded)
    except Exception as exc:  # noqa: BLE001 - recorded, run continues
        log.warning("trial %s (sweep %s) failed during data preparation: %s", trial_id, sweep_value, exc)
        metric = RMSE if config.model == "linear" else ONE_MINUS_AUC
        return [TrialRecord(trial_id, p.pipeline_id, sweep_value, metric, math.nan, -1, None, None,
                            f"{type(exc).__name__}: {exc}") for p in config.pipelines]

    metric = metric_for_response(td.y_train.kind, td.y_train.n_classes)
    ridge = config.effective_ridge
    records = []
    for pcfg in config.pipelines:
        try:
            t0 = time.perf_counter_ns()
            fitted = fit_pipeline(td.train, td.y_train, pcfg.indicators, pcfg.indicator_centering,
                                  config.alpha, td.truth_lambdas)
            d_train = fitted.transform(td.train)
            d_test = fitted.transform(td.test)
            t1 = time.perf_counter_ns()
            if config.model == "linear":
                model = fit_ols(d_train, td.y_train, ridge=ridge)
                value = rmse(predict(model, d_test), td.y_test.values)
            elif td.y_train.n_classes == 2:
                model = fit_logistic(d_train, td.y_train, ridge=ridge, max_iter=config.logistic_max_iter,
                                     tol=config.logistic_tol)
                value = 1.0 - auc(predict(model, d_test), td.y_test.values)
            else:
                model = fit_one_vs_rest(d_train, td.y_train, td.y_train.n_classes, ridge=ridge,
                                        max_iter=config.logistic_max_iter, tol=config.logistic_tol)
                value = 1.0 - accuracy(model.predict_labels(d_test), td.y_test.values)
            t2 = time.perf_counter_ns()
            records.append(TrialRecord(
                trial_id, pcfg.pipeline_id, sweep_value, metric, float(value), len(fitted.kept),
                _ms(t0, t1) if timing else None, _ms(t1, t2) if timing else None,
            ))
        except Exception as exc:  # noqa: BLE001 - recorded, run continues
            log.warning("trial %s pipeline %s failed: %s", trial_id, pcfg.pipeline_id, exc)
            records.append(TrialRecord(trial_id, pcfg.pipeline_id, sweep_value, metric, math.nan, -1,
                                       None, None, f"{type(exc).__name__}: {exc}"))
    return records


def _run_job(args):
    config, trial_id, sweep_value, loaded, timing = args
    return run_trial(config, trial_id, sweep_value, loaded, timing)


def run_experiment(config: ExperimentConfig, jobs: int = 1, timing: bool = True) -> list[TrialRecord]:
    """Run every (sweep value, trial) pair; records come back in sweep, trial,
    pipeline order regardless of ``jobs``."""
    loaded = load_source(config)
    work = [(config, t, v, loaded, timing) for v in config.sweep_values for t in range(config.trials)]
    if jobs <= 1:
        results = [_run_job(w) for w in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_job, work))
    return [rec for batch in results for rec in batch]


def _fmt(v: Optional[float]) -> str:
    if v is None:
        return ""
    return repr(float(v))


def records_to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(RECORDS_HEADER)
    for r in records:
        w.writerow([
            r.trial_id, r.pipeline_id, _fmt(r.lam), r.metric, _fmt(r.value),
            "" if r.failed else r.selected_indicators,
            "" if r.preproc_ms is None else f"{r.preproc_ms:.3f}",
            "" if r.fit_ms is None else f"{r.fit_ms:.3f}",
        ])
    return buf.getvalue()


def write_records(records, path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(records_to_csv(records))


def read_records(path) -> list[TrialRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != RECORDS_HEADER:
            raise ValueError(f"{path}: unexpected records header {header}")
        out = []
        for row in reader:
            tid, pid, lam, metric, value, sel, pre, fit = row
            v = float(value) if value else math.nan
            out.append(TrialRecord(
                int(tid), pid, float(lam) if lam else None, metric, v,
                int(sel) if sel else -1,
                float(pre) if pre else None, float(fit) if fit else None,
                None if sel else "failed",
            ))
        return out
