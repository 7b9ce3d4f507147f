"""Aggregation of trial records: group summaries, paired comparisons, time ratios."""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..stats import paired_t_test

GROUP_KEYS = ("pipeline_id", "lambda", "metric", "trial_id")


def _key_value(rec, key):
    return rec.lam if key == "lambda" else getattr(rec, key)


@dataclass
class Summary:
    group_by: tuple[str, ...]
    rows: list[dict]
    paired: list[dict] = field(default_factory=list)
    baseline: str | None = None


def _sd(v: np.ndarray) -> float:
    return float(v.std(ddof=1)) if v.size > 1 else 0.0


def report(records, group_by=("pipeline_id", "lambda"), baseline: str | None = None) -> Summary:
    """Per-group mean, SD and SEM of the metric value.

    With a ``baseline`` pipeline id, every other pipeline is also compared
    to it trial-by-trial (difference = pipeline - baseline, paired t-test
    p-value) and its mean wall time is reported as a ratio to the baseline's.
    Failed records are skipped.
    """
    records = list(records)
    if not records:
        raise ValueError("no records to report")
    group_by = tuple(group_by)
    unknown = [k for k in group_by if k not in GROUP_KEYS]
    if unknown:
        raise ValueError(f"unknown group key(s) {unknown}; allowed: {GROUP_KEYS}")
    ok = [r for r in records if not r.failed and not math.isnan(r.value)]
    if baseline is not None and baseline not in {r.pipeline_id for r in records}:
        raise ValueError(f"baseline pipeline {baseline!r} not present in records")

    groups: dict[tuple, list] = {}
    for r in ok:
        groups.setdefault(tuple(_key_value(r, k) for k in group_by), []).append(r)

    def time_of(rs):
        ts = [r.preproc_ms + r.fit_ms for r in rs if r.preproc_ms is not None and r.fit_ms is not None]
        return float(np.mean(ts)) if ts else None

    rows = []
    for key in sorted(groups, key=lambda k: tuple((v is None, v) for v in k)):
        rs = groups[key]
        v = np.array([r.value for r in rs])
        row = dict(zip(group_by, key))
        row.update(n=len(rs), mean=float(v.mean()), sd=_sd(v), sem=_sd(v) / math.sqrt(v.size),
                   mean_ms=time_of(rs), time_ratio=None)
        rows.append(row)

    paired = []
    if baseline is not None:
        # pairing is always within (lambda, metric) by trial id
        by_cell: dict[tuple, dict[str, dict[int, object]]] = {}
        for r in ok:
            by_cell.setdefault((r.lam, r.metric), {}).setdefault(r.pipeline_id, {})[r.trial_id] = r
        for (lam, metric) in sorted(by_cell, key=lambda k: ((k[0] is None, k[0]), k[1])):
            cell = by_cell[(lam, metric)]
            base = cell.get(baseline, {})
            base_time = time_of(base.values())
            for pid in sorted(cell):
                if pid == baseline:
                    continue
                trials = sorted(set(cell[pid]) & set(base))
                if not trials:
                    continue
                a = np.array([cell[pid][t].value for t in trials])
                b = np.array([base[t].value for t in trials])
                test = paired_t_test(a, b)
                d = a - b
                own_time = time_of(cell[pid].values())
                ratio = own_time / base_time if own_time is not None and base_time else None
                paired.append(dict(pipeline_id=pid, baseline=baseline, **{"lambda": lam}, metric=metric,
                                   n=len(trials), mean_diff=float(d.mean()), sd_diff=_sd(d),
                                   sem_diff=_sd(d) / math.sqrt(d.size), t=test.statistic,
                                   p_value=test.p_value, time_ratio=ratio))
        if "pipeline_id" in group_by:
            ratios = {(p["pipeline_id"], p["lambda"], p["metric"]): p["time_ratio"] for p in paired}
            for row in rows:
                if row["pipeline_id"] == baseline:
                    row["time_ratio"] = 1.0 if row["mean_ms"] else None
                    continue
                k = (row["pipeline_id"], row.get("lambda"), row.get("metric"))
                if k in ratios:
                    row["time_ratio"] = ratios[k]
    return Summary(group_by, rows, paired, baseline)


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _write_rows(rows: list[dict], path) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if not rows:
            return
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(list(rows[0]))
        for r in rows:
            w.writerow([_cell(v) for v in r.values()])


def write_summary(summary: Summary, path) -> None:
    _write_rows(summary.rows, path)


def write_paired(summary: Summary, path) -> None:
    _write_rows(summary.paired, path)
