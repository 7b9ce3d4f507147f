"""Hypothesis tests used to pick indicators: Welch t, Pearson chi-squared, BH.

Tail probabilities come from ``scipy.special.stdtr`` (regularized incomplete
beta) and ``scipy.special.chdtrc`` (regularized upper incomplete gamma).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import chdtrc, stdtr


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float
    df: float
    degenerate: bool = False
    low_expected_counts: bool = False

    __test__ = False  # not a pytest class


def _degenerate(df: float = 0.0) -> TestResult:
    return TestResult(0.0, 1.0, df, degenerate=True)


def welch_t_test(group_a, group_b) -> TestResult:
    """Two-sided Welch t-test with Satterthwaite degrees of freedom.

    Groups smaller than two, or two zero-variance groups, return the
    degenerate result (statistic 0, p-value 1).
    """
    a = np.asarray(group_a, dtype=np.float64).ravel()
    b = np.asarray(group_b, dtype=np.float64).ravel()
    na, nb = a.size, b.size
    if na < 2 or nb < 2:
        return _degenerate()
    va, vb = a.var(ddof=1), b.var(ddof=1)
    if va == 0.0 and vb == 0.0:
        return _degenerate()
    qa, qb = va / na, vb / nb
    se2 = qa + qb
    t = (a.mean() - b.mean()) / np.sqrt(se2)
    df = se2 ** 2 / (qa ** 2 / (na - 1) + qb ** 2 / (nb - 1))
    p = 2.0 * stdtr(df, -abs(t))
    return TestResult(float(t), float(min(1.0, p)), float(df))


def paired_t_test(x, y) -> TestResult:
    """Two-sided paired t-test on ``x - y``."""
    d = np.asarray(x, dtype=np.float64) - np.asarray(y, dtype=np.float64)
    n = d.size
    if n < 2:
        return _degenerate()
    sd = d.std(ddof=1)
    mean = d.mean()
    if sd == 0.0:
        # identical differences: no spread to test against
        if mean == 0.0:
            return _degenerate(n - 1)
        return TestResult(float(np.sign(mean) * np.inf), 0.0, float(n - 1), degenerate=True)
    t = mean / (sd / np.sqrt(n))
    return TestResult(float(t), float(min(1.0, 2.0 * stdtr(n - 1, -abs(t)))), float(n - 1))


def contingency_table(y, r) -> np.ndarray:
    y = np.asarray(y).ravel()
    r = np.asarray(r).astype(bool).ravel()
    if y.shape != r.shape:
        raise ValueError(f"length mismatch: y has {y.size}, r has {r.size}")
    levels, codes = np.unique(y, return_inverse=True)
    table = np.zeros((levels.size, 2), dtype=np.int64)
    np.add.at(table, (codes, r.astype(np.intp)), 1)
    return table


def chi2_from_table(table) -> TestResult:
    """Pearson chi-squared on a contingency table, no continuity correction.

    All-zero rows and columns are dropped first; fewer than two remaining
    rows or columns gives the degenerate result.
    """
    t = np.asarray(table, dtype=np.float64)
    t = t[t.sum(axis=1) > 0][:, t.sum(axis=0) > 0]
    if t.ndim != 2 or t.shape[0] < 2 or t.shape[1] < 2:
        return _degenerate()
    total = t.sum()
    expected = np.outer(t.sum(axis=1), t.sum(axis=0)) / total
    stat = float(((t - expected) ** 2 / expected).sum())
    df = float((t.shape[0] - 1) * (t.shape[1] - 1))
    return TestResult(stat, float(chdtrc(df, stat)), df,
                      low_expected_counts=bool((expected < 5).any()))


def chi2_independence(y, r) -> TestResult:
    """Chi-squared test of independence between class labels ``y`` and a binary ``r``."""
    return chi2_from_table(contingency_table(y, r))


def benjamini_hochberg(p_values, alpha: float) -> np.ndarray:
    """Step-up BH procedure; returns boolean reject flags in input order.

    With ``k`` the largest rank such that ``p_(k) <= k * alpha / m``, every
    hypothesis whose p-value is at most ``p_(k)`` is rejected (ties included).
    """
    p = np.asarray(p_values, dtype=np.float64).ravel()
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    if np.isnan(p).any() or (p < 0).any() or (p > 1).any():
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    if m == 0:
        return np.zeros(0, dtype=bool)
    sorted_p = np.sort(p)
    below = np.flatnonzero(sorted_p <= np.arange(1, m + 1) * alpha / m)
    if below.size == 0:
        return np.zeros(m, dtype=bool)
    return p <= sorted_p[below[-1]]
