"""Ridge-penalized logistic regression fitted by IRLS (damped Newton)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve
from scipy.special import expit, log_expit

from .ols import LinearFit, as_design, predict, with_intercept


def penalized_loglik(w: np.ndarray, X: np.ndarray, y: np.ndarray, pen: np.ndarray) -> float:
    eta = X @ w
    return float(np.sum(y * log_expit(eta) + (1 - y) * log_expit(-eta)) - 0.5 * np.sum(pen * w * w))


def penalized_gradient(w: np.ndarray, X: np.ndarray, y: np.ndarray, pen: np.ndarray) -> np.ndarray:
    return X.T @ (y - expit(X @ w)) - pen * w


def fit_logistic(design, y, ridge: float = 1e-4, max_iter: int = 100, tol: float = 1e-8,
                 intercept: bool = True) -> LinearFit:
    """Maximize ``loglik(w) - ridge/2 * ||w||^2`` (intercept unpenalized).

    Converged when the Newton step or the penalized gradient has max-norm
    below ``tol``.  Non-convergence is reported through ``flags`` rather
    than raised; so is perfect separation of the training data at ridge=0.
    """
    if ridge < 0:
        raise ValueError(f"ridge must be >= 0, got {ridge}")
    D, offset = as_design(design)
    y = np.asarray(getattr(y, "values", y), dtype=np.float64).ravel()
    if y.size != D.shape[0]:
        raise ValueError(f"design has {D.shape[0]} rows, y has {y.size}")
    if not np.isin(y, (0.0, 1.0)).all():
        raise ValueError("logistic regression needs binary 0/1 labels")
    X = with_intercept(D) if intercept else D
    m = X.shape[1]
    pen = np.full(m, float(ridge))
    if intercept:
        pen[0] = 0.0
    w = np.zeros(m)
    if intercept:
        rate = np.clip(y.mean(), 1e-12, 1 - 1e-12)
        w[0] = np.log(rate / (1 - rate))
    obj = penalized_loglik(w, X, y, pen)
    converged = False
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        grad = penalized_gradient(w, X, y, pen)
        if np.max(np.abs(grad)) < tol:
            converged = True
            break
        prob = expit(X @ w)
        weights = prob * (1 - prob)
        H = (X * weights[:, None]).T @ X
        H[np.diag_indices_from(H)] += pen
        try:
            step = cho_solve(cho_factor(H, check_finite=False), grad, check_finite=False)
        except LinAlgError:
            step = np.linalg.lstsq(H, grad, rcond=None)[0]
        t = 1.0
        while True:
            cand = w + t * step
            cand_obj = penalized_loglik(cand, X, y, pen)
            if cand_obj >= obj or t < 1e-10:
                break
            t *= 0.5
        w, obj = cand, cand_obj
        if np.max(np.abs(t * step)) < tol:
            converged = True
            break
    flags = {"iterations": n_iter}
    if not converged:
        flags["not_converged"] = True
    if ridge == 0:
        eta = X @ w
        if np.all(np.where(y == 1, eta > 0, eta < 0)):
            flags["separation"] = True
    b0 = float(w[0]) if intercept else 0.0
    coef = w[1:] if intercept else w
    return LinearFit(coef[:offset].copy(), coef[offset:].copy(), b0, float(ridge), "logit", flags)


@dataclass(frozen=True, eq=False)
class OneVsRestFit:
    """One binary logistic fit per class; predicts the highest-probability class."""

    fits: tuple[LinearFit, ...]

    def predict_proba(self, design) -> np.ndarray:
        P = np.column_stack([predict(f, design) for f in self.fits])
        return P / P.sum(axis=1, keepdims=True)

    def predict_labels(self, design) -> np.ndarray:
        return np.argmax(self.predict_proba(design), axis=1)


def fit_one_vs_rest(design, labels, n_classes: int, **kw) -> OneVsRestFit:
    labels = np.asarray(getattr(labels, "values", labels))
    return OneVsRestFit(tuple(fit_logistic(design, (labels == c).astype(float), **kw)
                              for c in range(n_classes)))
