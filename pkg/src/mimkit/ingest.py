"""CSV reading and writing with missing-value markers.

Writer contract: UTF-8, LF line endings, a header row, masked cells written
as ``NA`` and floats in shortest round-trip form (``repr``), so reading a
written file back reproduces observed values bit-exactly.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .preprocess import encode_categorical_missing
from .tabular import MaskedDataset, Response

DEFAULT_MISSING_MARKERS = frozenset({"", "NA", "NaN"})
NUMERIC, CATEGORICAL, RESPONSE = "numeric", "categorical", "response"


class CsvFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ColumnSchema:
    name: str
    kind: str = NUMERIC
    missing_markers: frozenset = field(default=DEFAULT_MISSING_MARKERS)

    def __post_init__(self):
        if self.kind not in (NUMERIC, CATEGORICAL, RESPONSE):
            raise ValueError(f"unknown column kind {self.kind!r}")
        object.__setattr__(self, "missing_markers", frozenset(self.missing_markers))


def make_schema(header: Sequence[str], response: str, categorical: Sequence[str] = (),
                missing_markers=DEFAULT_MISSING_MARKERS) -> list[ColumnSchema]:
    """Schema for ``header``: ``response`` is the response column, names in
    ``categorical`` are categorical, everything else numeric."""
    if response not in header:
        raise CsvFormatError(f"response column {response!r} not in header")
    unknown = set(categorical) - set(header)
    if unknown:
        raise CsvFormatError(f"categorical columns {sorted(unknown)} not in header")
    cats = set(categorical)
    return [ColumnSchema(h, RESPONSE if h == response else CATEGORICAL if h in cats else NUMERIC,
                         missing_markers) for h in header]


def read_header(path) -> list[str]:
    with open(path, newline="", encoding="utf-8") as fh:
        return next(csv.reader(fh), [])


def _parse_float(cell: str, row: int, name: str) -> float:
    try:
        if "_" in cell:
            raise ValueError
        v = float(cell)
    except ValueError:
        raise CsvFormatError(f"row {row}, column {name!r}: cannot parse {cell!r} as a number") from None
    if not math.isfinite(v):
        raise CsvFormatError(f"row {row}, column {name!r}: non-finite value {cell!r}")
    return v


def _label_order(labels: set[str]) -> list[str]:
    try:
        return sorted(labels, key=float)
    except ValueError:
        return sorted(labels)


def read_csv(path, schema: Sequence[ColumnSchema], response_kind: str = "continuous"):
    """Load ``(MaskedDataset, Response)`` from a CSV file.

    Numeric cells equal to a marker (after trimming whitespace) are masked.
    Categorical columns are one-hot encoded with an explicit missing level,
    producing fully observed 0/1 columns named ``"<col>=<level>"``.  A
    categorical response is coded 0..k-1 in sorted label order.
    """
    schema = list(schema)
    by_name = {c.name: c for c in schema}
    if [c.kind for c in schema].count(RESPONSE) != 1:
        raise CsvFormatError("schema must contain exactly one response column")
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise CsvFormatError(f"{path}: empty file, expected a header row")
        if sorted(header) != sorted(by_name) or len(set(header)) != len(header):
            raise CsvFormatError(f"{path}: header {header} does not match schema {sorted(by_name)}")
        rows = list(reader)
    cols: dict[str, list[str]] = {h: [] for h in header}
    for i, row in enumerate(rows, start=2):
        if len(row) != len(header):
            raise CsvFormatError(f"row {i}: expected {len(header)} fields, got {len(row)}")
        for h, cell in zip(header, row):
            cols[h].append(cell.strip())

    blocks, names = [], []
    masks = []
    response = None
    for h in header:
        spec = by_name[h]
        cells = cols[h]
        missing = [c in spec.missing_markers for c in cells]
        if spec.kind == RESPONSE:
            if any(missing):
                first = missing.index(True) + 2
                raise CsvFormatError(f"row {first}: response column {h!r} is missing")
            if response_kind == "continuous":
                response = Response.continuous([_parse_float(c, i + 2, h) for i, c in enumerate(cells)])
            else:
                order = _label_order(set(cells))
                code = {lv: k for k, lv in enumerate(order)}
                response = Response.categorical([code[c] for c in cells], max(2, len(order)))
        elif spec.kind == NUMERIC:
            vals = [0.0 if m else _parse_float(c, i + 2, h) for i, (c, m) in enumerate(zip(cells, missing))]
            blocks.append(np.asarray(vals, dtype=np.float64).reshape(-1, 1))
            masks.append(np.asarray(missing, dtype=bool).reshape(-1, 1))
            names.append(h)
        else:
            enc = encode_categorical_missing(cells, missing)
            blocks.append(enc.matrix)
            masks.append(np.zeros(enc.matrix.shape, dtype=bool))
            names.extend(f"{h}={lv}" for lv in enc.levels)
    n = len(rows)
    values = np.hstack(blocks) if blocks else np.zeros((n, 0))
    mask = np.hstack(masks) if masks else np.zeros((n, 0), dtype=bool)
    return MaskedDataset(values, mask, tuple(names)), response


def format_float(v: float) -> str:
    return repr(float(v))


def write_csv(data: MaskedDataset, response: Response | None, path, response_name: str = "y") -> None:
    """Write features (masked cells as ``NA``) followed by the response column."""
    header = list(data.column_names)
    if response is not None:
        if len(response) != data.n_rows:
            raise ValueError(f"response has {len(response)} rows, data has {data.n_rows}")
        header.append(response_name)
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for i in range(data.n_rows):
            row = ["NA" if data.mask[i, j] else format_float(data.values[i, j]) for j in range(data.n_features)]
            if response is not None:
                v = response.values[i]
                row.append(format_float(v) if response.is_continuous else str(int(v)))
            w.writerow(row)
