"""Core data model: partially observed feature matrices, responses, seeds.

Randomness
----------
Every random draw in the package comes from a :class:`SeedStream`.  A stream
is the pair ``(master_seed, stream_id)`` and maps onto numpy's Philox4x64
counter-based generator with the 128-bit key ``master_seed | stream_id << 64``
and a zero counter.  Sub-streams are derived with :meth:`SeedStream.child`,
which hashes the parent ``stream_id`` together with a label path using
BLAKE2b (8-byte digest).  Normal variates use ``Generator.standard_normal``
(ziggurat), uniforms use ``Generator.random``.  Given the same numpy release,
results are bit-identical across platforms and across process boundaries.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

_U64 = (1 << 64) - 1


@dataclass(frozen=True)
class SeedStream:
    master_seed: int
    stream_id: int = 0

    def __post_init__(self):
        for name in ("master_seed", "stream_id"):
            v = getattr(self, name)
            if not (0 <= int(v) <= _U64):
                raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {v}")

    def child(self, *labels) -> "SeedStream":
        """Derive an independent sub-stream identified by ``labels``."""
        h = hashlib.blake2b(digest_size=8)
        h.update(self.stream_id.to_bytes(8, "little"))
        for label in labels:
            h.update(b"\x1f")
            h.update(str(label).encode("utf-8"))
        return SeedStream(self.master_seed, int.from_bytes(h.digest(), "little"))

    def generator(self) -> np.random.Generator:
        key = int(self.master_seed) | (int(self.stream_id) << 64)
        return np.random.Generator(np.random.Philox(key=key, counter=0))


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class MaskedDataset:
    """Numeric n x p matrix with a boolean mask (True = missing).

    Masked cells hold NaN, but the mask is authoritative: code must never
    read ``values`` where ``mask`` is set without imputing first.
    """

    values: np.ndarray
    mask: np.ndarray
    column_names: tuple[str, ...] = field(default=())

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        mask = np.array(self.mask, dtype=bool)
        if values.ndim != 2 or values.shape != mask.shape:
            raise ValueError(f"values {values.shape} and mask {mask.shape} must be equal 2-D shapes")
        names = tuple(self.column_names) or tuple(f"x{j}" for j in range(values.shape[1]))
        if len(names) != values.shape[1]:
            raise ValueError(f"expected {values.shape[1]} column names, got {len(names)}")
        if np.isnan(values[~mask]).any():
            raise ValueError("NaN found in an observed cell; mark it in the mask instead")
        values[mask] = np.nan
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "mask", _frozen(mask))
        object.__setattr__(self, "column_names", names)

    @classmethod
    def from_complete(cls, complete, mask=None, column_names: Sequence[str] = ()) -> "MaskedDataset":
        complete = np.asarray(complete, dtype=np.float64)
        if mask is None:
            mask = np.zeros(complete.shape, dtype=bool)
        return cls(complete, mask, tuple(column_names))

    @property
    def n_rows(self) -> int:
        return self.values.shape[0]

    @property
    def n_features(self) -> int:
        return self.values.shape[1]

    def take(self, rows) -> "MaskedDataset":
        rows = np.asarray(rows, dtype=np.intp)
        return MaskedDataset(self.values[rows], self.mask[rows], self.column_names)

    def missing_counts(self) -> np.ndarray:
        return self.mask.sum(axis=0)

    def partially_observed(self) -> np.ndarray:
        """Indices of features with at least one missing and one observed cell."""
        counts = self.missing_counts()
        return np.flatnonzero((counts > 0) & (counts < self.n_rows))

    def filled(self, fill: float = 0.0) -> np.ndarray:
        out = np.where(self.mask, fill, self.values)
        return out


CONTINUOUS = "continuous"
CATEGORICAL = "categorical"


@dataclass(frozen=True, eq=False)
class Response:
    kind: str
    values: np.ndarray
    n_classes: int = 0

    def __post_init__(self):
        if self.kind == CONTINUOUS:
            values = np.array(self.values, dtype=np.float64)
            if not np.isfinite(values).all():
                raise ValueError("continuous response must be finite")
            object.__setattr__(self, "n_classes", 0)
        elif self.kind == CATEGORICAL:
            values = np.array(self.values)
            if values.size and not np.all(np.equal(np.mod(values, 1), 0)):
                raise ValueError("categorical labels must be integers")
            values = values.astype(np.int64)
            k = int(self.n_classes)
            if k < 2:
                raise ValueError(f"categorical response needs k >= 2 classes, got {k}")
            if values.size and (values.min() < 0 or values.max() >= k):
                raise ValueError(f"labels must lie in 0..{k - 1}")
        else:
            raise ValueError(f"unknown response kind {self.kind!r}")
        if values.ndim != 1:
            raise ValueError("response must be one-dimensional")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def continuous(cls, values) -> "Response":
        return cls(CONTINUOUS, values)

    @classmethod
    def categorical(cls, labels, n_classes: int | None = None) -> "Response":
        labels = np.asarray(labels)
        if n_classes is None:
            n_classes = int(labels.max()) + 1 if labels.size else 2
        return cls(CATEGORICAL, labels, n_classes)

    @property
    def is_continuous(self) -> bool:
        return self.kind == CONTINUOUS

    def __len__(self) -> int:
        return self.values.shape[0]

    def take(self, rows) -> "Response":
        return Response(self.kind, self.values[np.asarray(rows, dtype=np.intp)], self.n_classes)


def round_half_up(x: float) -> int:
    return int(np.floor(x + 0.5))


def split_train_test(data: MaskedDataset, response: Response, train_fraction: float, seed: SeedStream):
    """Shuffle rows and cut them into ``((train, y_train), (test, y_test))``.

    The train part holds ``round_half_up(n * train_fraction)`` rows.
    """
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = data.n_rows
    if len(response) != n:
        raise ValueError(f"row count mismatch: data has {n}, response has {len(response)}")
    n_train = round_half_up(n * train_fraction)
    if n_train == 0 or n_train == n:
        raise ValueError(f"n={n} is too small for train_fraction={train_fraction}: a partition would be empty")
    tr, te = split_indices(n, train_fraction, seed)
    return (data.take(tr), response.take(tr)), (data.take(te), response.take(te))


def split_indices(n: int, train_fraction: float, seed: SeedStream) -> tuple[np.ndarray, np.ndarray]:
    """Row indices used by :func:`split_train_test` for the same arguments."""
    n_train = round_half_up(n * train_fraction)
    order = seed.generator().permutation(n)
    return order[:n_train], order[n_train:]
