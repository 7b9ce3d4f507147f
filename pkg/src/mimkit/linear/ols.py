from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.linalg.lapack import dpocon
from scipy.special import expit

from ..preprocess import AugmentedMatrix

# reciprocal condition number (after unit-diagonal scaling) below which an
# unregularized normal-equation system is treated as singular
SINGULAR_RCOND = 1e-13


class SingularSystemError(np.linalg.LinAlgError):
    """Normal equations are singular at ridge=0; retry with ridge > 0."""


@dataclass(frozen=True, eq=False)
class LinearFit:
    beta: np.ndarray
    gamma: np.ndarray
    intercept: float
    ridge_penalty: float
    link: str = "identity"
    flags: dict = field(default_factory=dict)

    @property
    def coef(self) -> np.ndarray:
        return np.concatenate([self.beta, self.gamma])

    @property
    def width(self) -> int:
        return self.beta.size + self.gamma.size

    def to_dict(self) -> dict:
        return {
            "beta": self.beta.tolist(),
            "gamma": self.gamma.tolist(),
            "intercept": self.intercept,
            "ridge_penalty": self.ridge_penalty,
            "link": self.link,
            "flags": self.flags,
        }

    @classmethod
    def from_dict(cls, doc: dict) -> "LinearFit":
        return cls(np.asarray(doc["beta"], float), np.asarray(doc["gamma"], float),
                   float(doc["intercept"]), float(doc["ridge_penalty"]), doc.get("link", "identity"),
                   dict(doc.get("flags", {})))


def as_design(design) -> tuple[np.ndarray, int]:
    """Return ``(matrix, indicator_offset)`` for an AugmentedMatrix or array."""
    if isinstance(design, AugmentedMatrix):
        return design.design, design.indicator_offset
    D = np.asarray(design, dtype=np.float64)
    if D.ndim != 2:
        raise ValueError("design must be a 2-D matrix")
    return D, D.shape[1]


def with_intercept(D: np.ndarray) -> np.ndarray:
    return np.hstack([np.ones((D.shape[0], 1)), D])


def solve_spd(A: np.ndarray, b: np.ndarray, check_singular: bool) -> np.ndarray:
    """Solve ``A x = b`` for symmetric positive (semi)definite ``A`` by Cholesky.

    The system is Jacobi-scaled to unit diagonal first.  With
    ``check_singular`` an exactly or numerically singular ``A`` raises
    :class:`SingularSystemError` instead of returning a least-norm answer.
    """
    d = np.sqrt(np.diag(A).copy())
    if check_singular and (d == 0).any():
        raise SingularSystemError("design has an all-zero column; set ridge > 0")
    d[d == 0] = 1.0
    As = A / np.outer(d, d)
    try:
        c, lower = cho_factor(As, lower=False, check_finite=False)
    except LinAlgError as exc:
        raise SingularSystemError("normal equations are not positive definite; set ridge > 0") from exc
    if check_singular:
        anorm = np.abs(As).sum(axis=0).max()
        rcond, info = dpocon(c, anorm)
        if info != 0 or rcond < SINGULAR_RCOND:
            raise SingularSystemError(f"normal equations are numerically singular (rcond={rcond:.2e}); "
                                      "set ridge > 0")
    return cho_solve((c, lower), b / d, check_finite=False) / d


def fit_ols(design, y, ridge: float = 0.0, intercept: bool = True) -> LinearFit:
    """Least squares on the (ridge-regularized) normal equations.

    Solves ``(D'D + ridge * I) c = D'y`` with the intercept column, when
    present, left unpenalized.
    """
    if ridge < 0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")
    D, offset = as_design(design)
    y = np.asarray(getattr(y, "values", y), dtype=np.float64).ravel()
    if y.size != D.shape[0]:
        raise ValueError(f"design has {D.shape[0]} rows, y has {y.size}")
    X = with_intercept(D) if intercept else D
    if ridge == 0 and X.shape[0] < X.shape[1]:
        raise SingularSystemError(f"n={X.shape[0]} < {X.shape[1]} columns; set ridge > 0")
    A = X.T @ X
    if ridge:
        pen = np.full(X.shape[1], ridge)
        if intercept:
            pen[0] = 0.0
        A[np.diag_indices_from(A)] += pen
    coef = solve_spd(A, X.T @ y, check_singular=(ridge == 0))
    b0 = float(coef[0]) if intercept else 0.0
    w = coef[1:] if intercept else coef
    return LinearFit(w[:offset].copy(), w[offset:].copy(), b0, float(ridge))


def predict(fit: LinearFit, design, proba: bool = True) -> np.ndarray:
    """Linear score, passed through the logistic link for logistic fits when
    ``proba`` is set."""
    D, _ = as_design(design)
    if D.shape[1] != fit.width:
        raise ValueError(f"design width {D.shape[1]} does not match fitted width {fit.width}")
    score = D @ fit.coef + fit.intercept
    if fit.link == "logit" and proba:
        return expit(score)
    return score
