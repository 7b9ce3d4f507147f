"""Linear and logistic predictors plus coefficient diagnostics."""

from .diagnostics import (
    CoefficientDiagnostics,
    DiagnosticPoint,
    SingleFeatureReport,
    aggregate_diagnostics,
    block_coefficient_shift,
    coefficient_diagnostics,
    single_feature_check,
)
from .logistic import OneVsRestFit, fit_logistic, fit_one_vs_rest
from .ols import LinearFit, SingularSystemError, fit_ols, predict

__all__ = [
    "DiagnosticPoint",
    "LinearFit",
    "OneVsRestFit",
    "SingularSystemError",
    "SingleFeatureReport",
    "CoefficientDiagnostics",
    "block_coefficient_shift",
    "coefficient_diagnostics",
    "fit_logistic",
    "fit_ols",
    "fit_one_vs_rest",
    "predict",
    "single_feature_check",
    "aggregate_diagnostics",
]
