"""Missingness generators over complete data: self-masking, MCAR, block-informative."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .tabular import MaskedDataset, SeedStream

SELF_MASKING = "self_masking"
MCAR_FIXED_RATE = "mcar_fixed_rate"


@dataclass(frozen=True, eq=False)
class MaskSpec:
    """Per-feature informativeness and the masking mechanism.

    For ``self_masking`` a cell is missing with probability
    ``1 - sigmoid(lambda_j * x)``; ``lambda_j = 0`` is MCAR at rate 0.5.
    ``mcar_fixed_rate`` ignores the lambdas and masks every cell with ``rate``.
    """

    per_feature_lambda: np.ndarray
    mechanism: str = SELF_MASKING
    rate: float = 0.5

    def __post_init__(self):
        lam = np.array(self.per_feature_lambda, dtype=np.float64).ravel()
        if not np.isfinite(lam).all():
            raise ValueError("lambda values must be finite")
        if self.mechanism not in (SELF_MASKING, MCAR_FIXED_RATE):
            raise ValueError(f"unknown mechanism {self.mechanism!r}")
        if self.mechanism == MCAR_FIXED_RATE and not 0.0 <= self.rate <= 1.0:
            raise ValueError(f"rate must be in [0, 1], got {self.rate}")
        lam.setflags(write=False)
        object.__setattr__(self, "per_feature_lambda", lam)

    @classmethod
    def uniform(cls, lam: float, p: int) -> "MaskSpec":
        return cls(np.full(p, float(lam)))

    @classmethod
    def mcar(cls, rate: float, p: int) -> "MaskSpec":
        return cls(np.zeros(p), MCAR_FIXED_RATE, rate)


@dataclass(frozen=True)
class BlockMaskSpec:
    blocks: tuple[tuple[int, ...], ...]
    informative_lambda: float = 2.0
    p_inf: float = 0.5

    def __post_init__(self):
        blocks = tuple(tuple(int(j) for j in b) for b in self.blocks)
        flat = [j for b in blocks for j in b]
        if any(len(b) == 0 for b in blocks) or sorted(flat) != list(range(len(flat))):
            raise ValueError("blocks must be non-empty and partition 0..p-1")
        for b in blocks:
            if list(b) != list(range(b[0], b[0] + len(b))):
                raise ValueError(f"block {b} is not contiguous")
        if not 0.0 <= self.p_inf <= 1.0:
            raise ValueError(f"p_inf must be in [0, 1], got {self.p_inf}")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def contiguous(cls, n_blocks: int, block_size: int, informative_lambda: float = 2.0,
                   p_inf: float = 0.5) -> "BlockMaskSpec":
        blocks = tuple(tuple(range(i * block_size, (i + 1) * block_size)) for i in range(n_blocks))
        return cls(blocks, informative_lambda, p_inf)

    @property
    def n_features(self) -> int:
        return sum(len(b) for b in self.blocks)


def mask_probability(x, lam):
    """P(missing | x) under self-masking: ``1 - 1 / (1 + exp(-lam * x))``."""
    # 1 - sigmoid(t) == sigmoid(-t); expit stays accurate in both tails
    return expit(-np.multiply(lam, x))


def apply_self_mask(data, spec: MaskSpec, seed: SeedStream, column_names=()) -> MaskedDataset:
    """Mask a complete matrix cell-by-cell under ``spec``.

    Each column draws its uniforms from its own sub-stream, so columns are
    independent given the data and may be processed in any order.  The
    input matrix is not modified; keep it as the ground truth.
    """
    X = np.asarray(data, dtype=np.float64)
    if X.ndim != 2:
        raise ValueError("data must be a 2-D matrix")
    if not np.isfinite(X).all():
        raise ValueError("apply_self_mask expects complete, finite data")
    n, p = X.shape
    if spec.per_feature_lambda.shape[0] != p:
        raise ValueError(f"MaskSpec has {spec.per_feature_lambda.shape[0]} lambdas for {p} features")
    mask = np.empty((n, p), dtype=bool)
    for j in range(p):
        u = seed.child("column", j).generator().random(n)
        if spec.mechanism == MCAR_FIXED_RATE:
            prob = spec.rate
        else:
            prob = mask_probability(X[:, j], spec.per_feature_lambda[j])
        mask[:, j] = u < prob
    return MaskedDataset(X, mask, tuple(column_names))


def draw_block_mask_spec(block_spec: BlockMaskSpec, seed: SeedStream) -> tuple[MaskSpec, np.ndarray]:
    """Pick informative blocks; returns the realized MaskSpec and a boolean
    per-feature vector marking the informative (ground-truth) features."""
    rng = seed.generator()
    informative_blocks = rng.random(len(block_spec.blocks)) < block_spec.p_inf
    lam = np.zeros(block_spec.n_features)
    for block, hit in zip(block_spec.blocks, informative_blocks):
        if hit:
            lam[list(block)] = block_spec.informative_lambda
    return MaskSpec(lam), lam != 0
