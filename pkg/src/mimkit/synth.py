"""Synthetic regression data: equicorrelated (low-dim) and block-diagonal (high-dim).

Both generators draw the standard-normal matrix, the coefficients and the
noise from separate sub-streams of the generator spec's seed, and correlate features
through the lower Cholesky factor of ``rho * 11^T + (1 - rho) * I``.  With a
single block the high-dim generator therefore produces exactly the same
feature matrix as the low-dim one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .tabular import Response, SeedStream


@dataclass(frozen=True)
class LowDimSpec:
    n: int
    p: int
    rho: float = 0.3
    snr: float = 10.0
    seed: SeedStream = SeedStream(0)


@dataclass(frozen=True)
class HighDimSpec:
    n: int
    p: int
    block_count: int = 100
    block_size: int = 10
    rho_within: float = 0.5
    snr: float = 10.0
    seed: SeedStream = SeedStream(0)


def equicorrelation(p: int, rho: float) -> np.ndarray:
    return rho * np.ones((p, p)) + (1.0 - rho) * np.eye(p)


def _cholesky(p: int, rho: float) -> np.ndarray:
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"rho must lie in [0, 1), got {rho}")
    try:
        return np.linalg.cholesky(equicorrelation(p, rho))
    except np.linalg.LinAlgError as exc:
        raise ValueError(f"covariance is not positive definite for rho={rho}") from exc


def _check_common(n, p, snr):
    if n < 1 or p < 1:
        raise ValueError(f"need n >= 1 and p >= 1, got n={n}, p={p}")
    if not snr > 0:
        raise ValueError(f"snr must be positive, got {snr}")


def gen_lowdim(spec: LowDimSpec):
    """Return ``(X, Y, beta)`` with ``X ~ N(0, Sigma)`` and ``Y = X beta + eps``.

    The noise variance is ``beta' Sigma beta / snr`` (population signal
    variance for the drawn coefficients).
    """
    _check_common(spec.n, spec.p, spec.snr)
    L = _cholesky(spec.p, spec.rho)
    Z = spec.seed.child("features").generator().standard_normal((spec.n, spec.p))
    X = Z @ L.T
    beta = spec.seed.child("beta").generator().standard_normal(spec.p)
    signal_var = float(beta @ equicorrelation(spec.p, spec.rho) @ beta)
    sigma = np.sqrt(signal_var / spec.snr)
    eps = sigma * spec.seed.child("noise").generator().standard_normal(spec.n)
    return X, Response.continuous(X @ beta + eps), beta


def block_means(X: np.ndarray, block_count: int, block_size: int) -> np.ndarray:
    """Row-wise means of each contiguous block of ``block_size`` columns."""
    return X.reshape(X.shape[0], block_count, block_size).mean(axis=2)


def gen_highdim(spec: HighDimSpec):
    """Return ``(X, Y, beta)`` where ``Y = Xbar beta + eps`` and ``Xbar`` holds
    the per-row block means; ``beta`` has one entry per block."""
    _check_common(spec.n, spec.p, spec.snr)
    b, d = spec.block_count, spec.block_size
    if b < 1 or d < 1 or b * d != spec.p:
        raise ValueError(f"p={spec.p} must equal block_count*block_size={b}*{d}")
    L = _cholesky(d, spec.rho_within)
    Z = spec.seed.child("features").generator().standard_normal((spec.n, spec.p))
    X = np.empty_like(Z)
    for k in range(b):
        cols = slice(k * d, (k + 1) * d)
        X[:, cols] = Z[:, cols] @ L.T
    beta = spec.seed.child("beta").generator().standard_normal(b)
    # Var(block mean) = (1 + (d - 1) rho) / d, independent across blocks
    mean_var = (1.0 + (d - 1) * spec.rho_within) / d
    signal_var = float(mean_var * beta @ beta)
    sigma = np.sqrt(signal_var / spec.snr)
    eps = sigma * spec.seed.child("noise").generator().standard_normal(spec.n)
    return X, Response.continuous(block_means(X, b, d) @ beta + eps), beta
