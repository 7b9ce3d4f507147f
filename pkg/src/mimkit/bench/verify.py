"""Diagnostic suites behind ``mimkit verify``."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from ..linear import (
    aggregate_diagnostics,
    coefficient_diagnostics,
    single_feature_check,
)
from ..tabular import SeedStream
from .config import ExperimentConfig
from .runner import materialize_trial


@dataclass(frozen=True)
class SingleFeatureSweep:
    datasets: int
    max_beta_violation: float
    max_gamma_violation: float


def random_single_feature(n: int, seed: SeedStream):
    """Random ``(x, mask, y)`` with at least one missing and two observed rows."""
    rng = seed.generator()
    x = rng.standard_normal(n)
    y = 1.5 * x + rng.standard_normal(n) + rng.normal(0, 3)
    n_miss = int(rng.integers(1, n - 1))
    mask = np.zeros(n, dtype=bool)
    mask[rng.choice(n, n_miss, replace=False)] = True
    return x, mask, y


def single_feature_sweep(datasets: int = 1000, sizes=(10, 50, 200), seed: int = 0) -> SingleFeatureSweep:
    root = SeedStream(seed).child("single_feature")
    worst_b = worst_g = 0.0
    for i in range(datasets):
        n = sizes[i % len(sizes)]
        rep = single_feature_check(*random_single_feature(n, root.child(i)))
        worst_b = max(worst_b, rep.beta_violation)
        worst_g = max(worst_g, rep.gamma_violation)
    return SingleFeatureSweep(datasets, worst_b, worst_g)


def lowdim_config(n: int, p: int = 10, rho: float = 0.3, snr: float = 10.0, lambdas=(0.0,),
                  trials: int = 20, seed: int = 0, pipelines=("none", "mim"), centered: bool = False,
                  ridge: float | None = None) -> ExperimentConfig:
    return ExperimentConfig.model_validate({
        "data_source": {"kind": "lowdim", "n": n, "p": p, "rho": rho, "snr": snr},
        "mask": {"kind": "self_masking", "lambda": 0.0},
        "pipelines": [{"indicators": m, "indicator_centering": centered} for m in pipelines],
        "model": "linear",
        "ridge": ridge,
        "trials": trials,
        "master_seed": seed,
        "lambda_grid": list(lambdas),
    })


def diagnostic_sweep(config: ExperimentConfig, centered: bool = True):
    """Coefficient diagnostics on the training split of every (lambda, trial)
    of a self-masking config; returns one aggregated point per lambda."""
    outputs = []
    for lam in config.sweep_values:
        for t in range(config.trials):
            td = materialize_trial(config, t, lam)
            outputs.append((lam if lam is not None else 0.0,
                            coefficient_diagnostics(td.train, td.y_train, centered=centered)))
    return aggregate_diagnostics(outputs)


def as_jsonable(obj):
    if isinstance(obj, list):
        return [as_jsonable(o) for o in obj]
    return asdict(obj)
