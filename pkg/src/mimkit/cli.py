"""Command line entry point: ``mimkit {synth,mask,bench,report,verify}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from .bench import (
    emit_chart,
    load_config,
    read_records,
    report,
    run_experiment,
    write_paired,
    write_records,
    write_summary,
)
from .bench.verify import diagnostic_sweep, lowdim_config, single_feature_sweep
from .ingest import make_schema, read_csv, read_header, write_csv
from .masking import MaskSpec, apply_self_mask
from .synth import HighDimSpec, LowDimSpec, gen_highdim, gen_lowdim
from .tabular import MaskedDataset, SeedStream

log = logging.getLogger("mimkit")


def _synth(args) -> int:
    opts = {"kind": args.kind, "n": args.n, "p": args.p, "rho": args.rho, "snr": args.snr,
            "block_count": args.block_count, "block_size": args.block_size}
    if args.config:
        opts.update(json.loads(Path(args.config).read_text(encoding="utf-8")))
    seed = SeedStream(args.seed)
    if opts["kind"] == "lowdim":
        X, y, _ = gen_lowdim(LowDimSpec(opts["n"], opts["p"], opts.get("rho", 0.3), opts["snr"], seed))
    elif opts["kind"] == "highdim":
        b, d = opts["block_count"], opts["block_size"]
        X, y, _ = gen_highdim(HighDimSpec(opts["n"], b * d, b, d, opts.get("rho_within", opts.get("rho", 0.5)),
                                          opts["snr"], seed))
    else:
        raise SystemExit(f"unknown synthetic kind {opts['kind']!r}")
    out = Path(args.out)
    if out.suffix != ".csv":
        out = out / "synth.csv"
    write_csv(MaskedDataset.from_complete(X), y, out)
    print(f"wrote {X.shape[0]} rows x {X.shape[1]} features to {out}")
    return 0


def _mask(args) -> int:
    schema = make_schema(read_header(args.input), args.response)
    data, y = read_csv(args.input, schema)
    if data.mask.any():
        raise SystemExit("input already has missing values; masking needs complete data")
    if args.config:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        lam = doc.get("per_feature_lambda", doc.get("lambda", 0.0))
        lam = np.full(data.n_features, float(lam)) if np.isscalar(lam) else np.asarray(lam, dtype=float)
        spec = MaskSpec(lam, doc.get("mechanism", "self_masking"), doc.get("rate", 0.5))
    else:
        spec = MaskSpec.uniform(args.lam, data.n_features)
    masked = apply_self_mask(data.values, spec, SeedStream(args.seed), data.column_names)
    out = Path(args.out)
    if out.suffix != ".csv":
        out = out / "masked.csv"
    write_csv(masked, y, out, response_name=args.response)
    print(f"masked {int(masked.mask.sum())} of {masked.mask.size} cells; wrote {out}")
    return 0


def _summarize(records, out: Path, baseline: str | None, sweep_name: str | None) -> None:
    group = ("pipeline_id", "lambda", "metric")
    summary = report(records, group, baseline=baseline)
    write_summary(summary, out / "summary.csv")
    write_paired(summary, out / "paired.csv")
    lams = {r.lam for r in records}
    if None not in lams and len(lams) > 1:
        emit_chart(summary, out / "chart.svg", x_label=sweep_name or "lambda",
                   y_label=records[0].metric)


def _bench(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = config.model_copy(update={"master_seed": args.seed})
    out = Path(args.out)
    records = run_experiment(config, jobs=args.jobs, timing=not args.no_timing)
    write_records(records, out / "records.csv")
    failed = [r for r in records if r.failed]
    ok = [r for r in records if not r.failed]
    if ok:
        ids = [p.pipeline_id for p in config.pipelines]
        _summarize(ok, out, ids[0], config.sweep_name)
    print(f"{len(records)} records ({len(failed)} failed) written to {out / 'records.csv'}")
    for r in failed:
        print(f"  trial {r.trial_id} {r.pipeline_id}: {r.error}", file=sys.stderr)
    return 1 if failed else 0


def _report(args) -> int:
    records = read_records(args.records)
    out = Path(args.out)
    summary = report(records, tuple(args.group_by.split(",")), baseline=args.baseline)
    write_summary(summary, out / "summary.csv")
    if args.baseline:
        write_paired(summary, out / "paired.csv")
    if args.chart:
        emit_chart(summary, out / "chart.svg", x_key=args.x_key, y_label=records[0].metric)
    for row in summary.rows:
        print(", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in row.items()))
    return 0


def _verify(args) -> int:
    results = {}
    ok = True
    seed = args.seed or 0
    if args.suite in ("single-feature", "all"):
        sw = single_feature_sweep(args.datasets, seed=seed)
        passed = sw.max_beta_violation < 1e-10 and sw.max_gamma_violation < 1e-10
        results["single-feature"] = {"passed": passed, **sw.__dict__}
        print(f"[{'PASS' if passed else 'FAIL'}] single-feature identity over {sw.datasets} datasets: "
              f"max beta gap {sw.max_beta_violation:.2e}, max gamma gap {sw.max_gamma_violation:.2e}")
        ok &= passed
    if args.suite in ("coefficient-norms", "all"):
        cfg = lowdim_config(args.n, lambdas=[0, 1, 2, 3, 4, 5], trials=args.trials, seed=seed)
        pts = diagnostic_sweep(cfg, centered=True)
        gam = [p.gamma_norm_mean for p in pts]
        inversions = sum(1 for a, b in zip(gam, gam[1:]) if b < a)
        passed = inversions <= 1 and pts[-1].beta_gap_mean < pts[-1].gamma_norm_mean
        results["coefficient-norms"] = {"passed": passed, "points": [p.__dict__ for p in pts]}
        for p in pts:
            print(f"  lambda={p.lam:g}: |beta - beta_mim|={p.beta_gap_mean:.4f}  |gamma|={p.gamma_norm_mean:.4f}")
        print(f"[{'PASS' if passed else 'FAIL'}] indicator norm grows with informativeness")
        ok &= passed
    if args.suite in ("group-means", "all"):
        cfg = lowdim_config(args.n * 2, rho=0.0, lambdas=[3.0], trials=args.trials, seed=seed)
        pt = diagnostic_sweep(cfg, centered=True)[0]
        passed = pt.identity_error_mean < 0.1
        results["group-means"] = {"passed": passed, **pt.__dict__}
        print(f"[{'PASS' if passed else 'FAIL'}] indicator coefficient vs group-mean difference: "
              f"mean abs gap {pt.identity_error_mean:.4f}")
        ok &= passed
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "verify.json").write_text(json.dumps(results, indent=2) + "\n", encoding="utf-8")
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mimkit", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="write a synthetic complete dataset to CSV")
    p.add_argument("--config", help="JSON with kind/n/p/rho/snr/block_count/block_size")
    p.add_argument("--kind", choices=["lowdim", "highdim"], default="lowdim")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--p", type=int, default=10)
    p.add_argument("--rho", type=float, default=0.3)
    p.add_argument("--snr", type=float, default=10.0)
    p.add_argument("--block-count", type=int, default=100)
    p.add_argument("--block-size", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output .csv path or directory")
    p.set_defaults(func=_synth)

    p = sub.add_parser("mask", help="apply a self-masking / MCAR mask to a complete CSV")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--response", default="y")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0)
    p.add_argument("--config", help="JSON MaskSpec: per_feature_lambda|lambda, mechanism, rate")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_mask)

    p = sub.add_parser("bench", help="run an experiment config")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, help="override master_seed")
    p.add_argument("--out", default="results")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--no-timing", action="store_true",
                   help="leave preproc_ms/fit_ms empty so records are byte-reproducible")
    p.set_defaults(func=_bench)

    p = sub.add_parser("report", help="aggregate a records CSV")
    p.add_argument("--records", required=True)
    p.add_argument("--group-by", default="pipeline_id,lambda")
    p.add_argument("--baseline")
    p.add_argument("--chart", action="store_true")
    p.add_argument("--x-key", default="lambda")
    p.add_argument("--out", default="results")
    p.set_defaults(func=_report)

    p = sub.add_parser("verify", help="run coefficient diagnostic suites")
    p.add_argument("--suite", choices=["single-feature", "coefficient-norms", "group-means", "all"], default="all")
    p.add_argument("--datasets", type=int, default=1000)
    p.add_argument("--n", type=int, default=10000)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
