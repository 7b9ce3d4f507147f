"""Numerical checks of the closed-form OLS behaviour of zero imputation with
missing indicators.

All fits here follow the theoretical setting: Y is centered, each feature is
centered over its observed entries and zero-imputed, and no intercept is
fitted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..preprocess import add_indicators, fit_standardizer, transform_standardize
from ..tabular import MaskedDataset
from .ols import fit_ols


@dataclass(frozen=True)
class SingleFeatureReport:
    beta: float
    beta_mim: float
    gamma_mim: float
    missing_mean: float
    beta_violation: float
    gamma_violation: float

    def holds(self, tol: float = 1e-10) -> bool:
        return self.beta_violation < tol and self.gamma_violation < tol


def single_feature_check(x, mask, y) -> SingleFeatureReport:
    """Single-feature exactness check.

    With one zero-imputed feature and its raw indicator, the OLS slope equals
    the slope without the indicator and the indicator coefficient equals the
    mean of centered Y over the missing rows, exactly in finite samples.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    mask = np.asarray(mask, dtype=bool).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if not (x.size == mask.size == y.size):
        raise ValueError("x, mask and y must have equal length")
    n_miss = int(mask.sum())
    if n_miss < 1 or mask.size - n_miss < 2:
        raise ValueError("need at least one missing and two observed rows")
    yc = y - y.mean()
    z = np.where(mask, 0.0, x - x[~mask].mean())
    beta = fit_ols(z[:, None], yc, intercept=False).beta[0]
    mim = fit_ols(np.column_stack([z, mask.astype(float)]), yc, intercept=False)
    missing_mean = float(yc[mask].mean())
    return SingleFeatureReport(
        float(beta), float(mim.coef[0]), float(mim.coef[1]), missing_mean,
        abs(float(mim.coef[0]) - float(beta)), abs(float(mim.coef[1]) - missing_mean),
    )


@dataclass(frozen=True, eq=False)
class CoefficientDiagnostics:
    beta_gap: float
    gamma_norm: float
    per_indicator_target: np.ndarray
    gamma: np.ndarray
    indicator_source: tuple[int, ...]

    @property
    def identity_error(self) -> float:
        """Mean over indicators of |gamma_j - (E[Y|R_j=1] - E[Y|R_j=0])|."""
        if not self.gamma.size:
            return 0.0
        return float(np.mean(np.abs(self.gamma - self.per_indicator_target)))


def coefficient_diagnostics(data: MaskedDataset, y, centered: bool = True,
                            ridge: float = 0.0) -> CoefficientDiagnostics:
    """Fit OLS with and without indicators on ``data`` and compare coefficients.

    ``centered`` uses ``R_j - mean(R_j)`` as indicator columns, the setting
    in which each indicator coefficient tends to the group-mean difference
    of Y between missing and observed rows.
    """
    y = np.asarray(getattr(y, "values", y), dtype=np.float64).ravel()
    yc = y - y.mean()
    z = transform_standardize(data, fit_standardizer(data))
    which = z.partially_observed()
    plain = fit_ols(z.filled(0.0), yc, ridge=ridge, intercept=False)
    aug = add_indicators(z, which, centered=centered)
    mim = fit_ols(aug, yc, ridge=ridge, intercept=False)
    target = np.array([yc[data.mask[:, j]].mean() - yc[~data.mask[:, j]].mean() for j in which])
    return CoefficientDiagnostics(
        float(np.linalg.norm(plain.beta - mim.beta)),
        float(np.linalg.norm(mim.gamma)),
        target, mim.gamma, tuple(int(j) for j in which),
    )


@dataclass(frozen=True)
class DiagnosticPoint:
    lam: float
    trials: int
    beta_gap_mean: float
    beta_gap_sem: float
    gamma_norm_mean: float
    gamma_norm_sem: float
    identity_error_mean: float


def _sem(v: np.ndarray) -> float:
    return float(v.std(ddof=1) / np.sqrt(v.size)) if v.size > 1 else 0.0


def aggregate_diagnostics(trial_outputs) -> list[DiagnosticPoint]:
    """Aggregate per-trial diagnostics into one point per lambda.

    ``trial_outputs`` is an iterable of ``(lam, CoefficientDiagnostics)``; the
    result is sorted by lambda.
    """
    groups: dict[float, list[CoefficientDiagnostics]] = {}
    for lam, diag in trial_outputs:
        groups.setdefault(float(lam), []).append(diag)
    out = []
    for lam in sorted(groups):
        ds = groups[lam]
        bg = np.array([d.beta_gap for d in ds])
        gn = np.array([d.gamma_norm for d in ds])
        ie = np.array([d.identity_error for d in ds])
        out.append(DiagnosticPoint(lam, len(ds), float(bg.mean()), _sem(bg), float(gn.mean()), _sem(gn),
                                   float(ie.mean())))
    return out


def block_coefficient_shift(data_a: MaskedDataset, data_b: MaskedDataset, y, features,
                            centered: bool = True) -> float:
    """Largest change in MIM coefficients (feature and indicator) on ``features``
    between two maskings of the same data.

    When blocks are independent and the two masks differ only outside the
    block holding ``features``, the population coefficients on that block
    coincide, so the shift is pure sampling noise.
    """
    if data_a.values.shape != data_b.values.shape:
        raise ValueError("both datasets must share a shape")
    features = [int(j) for j in features]
    y = np.asarray(getattr(y, "values", y), dtype=np.float64).ravel()
    yc = y - y.mean()
    coefs = []
    for data in (data_a, data_b):
        z = transform_standardize(data, fit_standardizer(data))
        which = z.partially_observed()
        fit = fit_ols(add_indicators(z, which, centered=centered), yc, intercept=False)
        gamma_by_feature = dict(zip(which.tolist(), fit.gamma))
        coefs.append((fit.beta[features], np.array([gamma_by_feature.get(j, 0.0) for j in features])))
    (ba, ga), (bb, gb) = coefs
    return float(max(np.max(np.abs(ba - bb)), np.max(np.abs(ga - gb))))
