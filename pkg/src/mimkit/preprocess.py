"""Preprocessing: observed-entry standardization, zero (mean) imputation,
missing indicators (all / selective / oracle) and categorical missing levels.

Everything that is fitted (means, scales, missing rates, the selected
indicator set) is learned from training data only and frozen into a
:class:`FittedPipeline`, which also round-trips through a versioned JSON
document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .stats import benjamini_hochberg, chi2_independence, welch_t_test
from .tabular import MaskedDataset, Response

PIPELINE_FORMAT = "mimkit.pipeline"
PIPELINE_VERSION = 1

INDICATOR_MODES = ("none", "mim", "smim", "omim")


@dataclass(frozen=True, eq=False)
class StandardizeParams:
    means: np.ndarray
    scales: np.ndarray
    flags: dict = field(default_factory=dict)


def fit_standardizer(train: MaskedDataset) -> StandardizeParams:
    """Observed-entry mean and population (1/n) standard deviation per feature.

    Features with no observed value get ``(0, 1)`` and a ``no_observed``
    flag; zero-variance features get scale 1 and a ``zero_variance`` flag.
    """
    p = train.n_features
    means = np.zeros(p)
    scales = np.ones(p)
    no_observed, zero_var = [], []
    for j in range(p):
        obs = train.values[~train.mask[:, j], j]
        if obs.size == 0:
            no_observed.append(j)
            continue
        means[j] = obs.mean()
        sd = np.sqrt(np.mean((obs - means[j]) ** 2))
        if sd > 0:
            scales[j] = sd
        else:
            zero_var.append(j)
    flags = {}
    if no_observed:
        flags["no_observed"] = no_observed
    if zero_var:
        flags["zero_variance"] = zero_var
    return StandardizeParams(means, scales, flags)


def transform_standardize(data: MaskedDataset, params: StandardizeParams) -> MaskedDataset:
    if data.n_features != params.means.shape[0]:
        raise ValueError(f"schema mismatch: data has {data.n_features} features, "
                         f"standardizer was fitted on {params.means.shape[0]}")
    z = (data.filled(0.0) - params.means) / params.scales
    return MaskedDataset(z, data.mask, data.column_names)


def impute_mean(data: MaskedDataset) -> np.ndarray:
    """Zero-fill masked cells; after standardization this is mean imputation."""
    return data.filled(0.0)


@dataclass(frozen=True, eq=False)
class AugmentedMatrix:
    design: np.ndarray
    indicator_offset: int
    indicator_source: tuple[int, ...]

    @property
    def n_indicators(self) -> int:
        return len(self.indicator_source)

    @property
    def features(self) -> np.ndarray:
        return self.design[:, :self.indicator_offset]

    @property
    def indicators(self) -> np.ndarray:
        return self.design[:, self.indicator_offset:]


def add_indicators(data: MaskedDataset, which: Sequence[int], centered: bool = False,
                   missing_rates=None) -> AugmentedMatrix:
    """Zero-impute ``data`` and append one mask column per index in ``which``.

    Raw mode appends ``R_j`` in {0, 1}; centered mode appends ``R_j - rate_j``.
    When ``missing_rates`` is None the call is treated as fitting: every
    index must be partially observed in ``data`` and rates come from ``data``.
    Pass the training rates when transforming held-out data.
    """
    which = [int(j) for j in which]
    if missing_rates is None:
        partial = set(data.partially_observed().tolist())
        bad = [j for j in which if j not in partial]
        if bad:
            raise ValueError(f"features {bad} are not partially observed; no indicator allowed")
        missing_rates = data.mask.mean(axis=0)
    missing_rates = np.asarray(missing_rates, dtype=np.float64)
    base = impute_mean(data)
    ind = data.mask[:, which].astype(np.float64)
    if centered and which:
        ind = ind - missing_rates[which]
    return AugmentedMatrix(np.hstack([base, ind]), data.n_features, tuple(which))


@dataclass(frozen=True, eq=False)
class SelectionResult:
    p_values: np.ndarray
    kept: tuple[int, ...]
    alpha: float
    test_kinds: tuple[str, ...]


def smim_select(mask, response: Response, alpha: float = 0.1) -> SelectionResult:
    """Selective MIM: keep indicators whose missingness is associated with Y.

    Continuous responses use the Welch t-test between ``Y | R_j = 0`` and
    ``Y | R_j = 1``; categorical ones a chi-squared test on the class by
    ``R_j`` table.  Features that are fully observed or fully missing get
    p-value 1 and are never kept.  BH at level ``alpha`` picks the survivors.
    """
    mask = np.asarray(mask, dtype=bool)
    n, p = mask.shape
    if len(response) != n:
        raise ValueError(f"response length {len(response)} does not match mask rows {n}")
    y = response.values
    p_values = np.ones(p)
    kinds = []
    counts = mask.sum(axis=0)
    for j in range(p):
        if counts[j] == 0 or counts[j] == n:
            kinds.append("skipped")
            continue
        r = mask[:, j]
        if response.is_continuous:
            res = welch_t_test(y[~r], y[r])
            kinds.append("welch_t")
        else:
            res = chi2_independence(y, r)
            kinds.append("chi2")
        p_values[j] = res.p_value
    reject = benjamini_hochberg(p_values, alpha) if p else np.zeros(0, dtype=bool)
    partial = (counts > 0) & (counts < n)
    kept = tuple(np.flatnonzero(reject & partial).tolist())
    return SelectionResult(p_values, kept, alpha, tuple(kinds))


def oracle_select(ground_truth_lambdas) -> tuple[int, ...]:
    if ground_truth_lambdas is None:
        raise ValueError("oracle selection needs the ground-truth lambdas of a synthetic run")
    lam = np.asarray(ground_truth_lambdas, dtype=np.float64)
    return tuple(np.flatnonzero(lam > 0).tolist())


MISSING_LEVEL = "__missing__"


@dataclass(frozen=True, eq=False)
class CategoricalEncoding:
    matrix: np.ndarray
    levels: tuple[str, ...]
    flags: tuple[str, ...] = ()


def encode_categorical_missing(column: Sequence, missing=None) -> CategoricalEncoding:
    """One-hot encode a categorical column with missing values as their own level.

    ``missing`` is an optional boolean vector; otherwise ``None`` entries are
    missing.  The extra level is only added when something is missing and
    always comes last, so its column equals the feature's missing indicator.
    """
    values = list(column)
    if missing is None:
        missing = [v is None for v in values]
    missing = np.asarray(missing, dtype=bool)
    if missing.size != len(values):
        raise ValueError("missing flags must match the column length")
    levels = sorted({str(v) for v, m in zip(values, missing) if not m})
    if missing.any():
        levels.append(MISSING_LEVEL)
    index = {lv: i for i, lv in enumerate(levels)}
    out = np.zeros((len(values), len(levels)))
    for i, (v, m) in enumerate(zip(values, missing)):
        out[i, index[MISSING_LEVEL if m else str(v)]] = 1.0
    flags = ("all_missing",) if values and missing.all() else ()
    return CategoricalEncoding(out, tuple(levels), flags)


@dataclass(frozen=True, eq=False)
class FittedPipeline:
    """Frozen preprocessing state: standardizer, indicator set and rates."""

    standardizer: StandardizeParams
    mode: str
    kept: tuple[int, ...]
    centered: bool
    missing_rates: np.ndarray
    alpha: float = 0.1
    p_values: np.ndarray | None = None
    flags: dict = field(default_factory=dict)

    def transform(self, data: MaskedDataset) -> AugmentedMatrix:
        z = transform_standardize(data, self.standardizer)
        return add_indicators(z, self.kept, self.centered, missing_rates=self.missing_rates)

    def to_dict(self) -> dict:
        return {
            "format": PIPELINE_FORMAT,
            "version": PIPELINE_VERSION,
            "standardizer": {
                "means": self.standardizer.means.tolist(),
                "scales": self.standardizer.scales.tolist(),
                "flags": self.standardizer.flags,
            },
            "indicators": {
                "mode": self.mode,
                "kept": list(self.kept),
                "centered": self.centered,
                "missing_rates": self.missing_rates.tolist(),
            },
            "alpha": self.alpha,
            "p_values": None if self.p_values is None else self.p_values.tolist(),
            "flags": self.flags,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, doc: dict) -> "FittedPipeline":
        if doc.get("format") != PIPELINE_FORMAT:
            raise ValueError(f"not a pipeline document: format={doc.get('format')!r}")
        if doc.get("version") != PIPELINE_VERSION:
            raise ValueError(f"unsupported pipeline document version {doc.get('version')!r}")
        st, ind = doc["standardizer"], doc["indicators"]
        return cls(
            StandardizeParams(np.asarray(st["means"], float), np.asarray(st["scales"], float),
                              dict(st.get("flags", {}))),
            ind["mode"], tuple(ind["kept"]), bool(ind["centered"]),
            np.asarray(ind["missing_rates"], float), float(doc["alpha"]),
            None if doc.get("p_values") is None else np.asarray(doc["p_values"], float),
            dict(doc.get("flags", {})),
        )

    @classmethod
    def from_json(cls, text: str) -> "FittedPipeline":
        return cls.from_dict(json.loads(text))


def fit_pipeline(train: MaskedDataset, response: Response, mode: str = "mim", centered: bool = False,
                 alpha: float = 0.1, ground_truth_lambdas=None) -> FittedPipeline:
    """Fit standardizer and indicator selection on the training split."""
    if mode not in INDICATOR_MODES:
        raise ValueError(f"unknown indicator mode {mode!r}; expected one of {INDICATOR_MODES}")
    params = fit_standardizer(train)
    partial = train.partially_observed()
    p_values = None
    if mode == "none":
        kept: tuple[int, ...] = ()
    elif mode == "mim":
        kept = tuple(partial.tolist())
    elif mode == "smim":
        sel = smim_select(train.mask, response, alpha)
        kept, p_values = sel.kept, sel.p_values
    else:
        allowed = set(partial.tolist())
        kept = tuple(j for j in oracle_select(ground_truth_lambdas) if j in allowed)
    flags = {}
    counts = train.missing_counts()
    fully_missing = np.flatnonzero(counts == train.n_rows).tolist()
    if fully_missing:
        flags["fully_missing_in_train"] = fully_missing
    return FittedPipeline(params, mode, kept, centered, train.mask.mean(axis=0), alpha, p_values, flags)
