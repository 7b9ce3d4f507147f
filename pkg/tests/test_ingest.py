import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from mimkit.ingest import CsvFormatError, make_schema, read_csv, read_header, write_csv
from mimkit.tabular import MaskedDataset, Response


def _write(tmp_path, text):
    p = tmp_path / "d.csv"
    p.write_text(text, encoding="utf-8")
    return p


def _read(path, response="y", **kw):
    cats = kw.pop("categorical", ())
    return read_csv(path, make_schema(read_header(path), response, cats), **kw)


def test_markers_are_masked(tmp_path):
    data, y = _read(_write(tmp_path, "a,b,y\n1,NA,0.5\n,2,1.5\nNaN, 3 ,2\n"))
    assert data.mask.tolist() == [[False, True], [True, False], [True, False]]
    assert data.values[2, 1] == 3.0
    assert y.values.tolist() == [0.5, 1.5, 2.0]


def test_custom_markers(tmp_path):
    p = _write(tmp_path, "a,y\n?,1\n2,2\n")
    data, _ = read_csv(p, make_schema(read_header(p), "y", missing_markers={"?"}))
    assert data.mask[:, 0].tolist() == [True, False]


def test_bad_cell_reports_location(tmp_path):
    with pytest.raises(CsvFormatError, match=r"row 3, column 'a'"):
        _read(_write(tmp_path, "a,y\n1,1\nabc,2\n"))
    with pytest.raises(CsvFormatError, match="non-finite"):
        _read(_write(tmp_path, "a,y\ninf,1\n"))
    with pytest.raises(CsvFormatError, match="row 2"):
        _read(_write(tmp_path, "a,y\n1\n"))


def test_missing_response_is_an_error(tmp_path):
    with pytest.raises(CsvFormatError, match="response"):
        _read(_write(tmp_path, "a,y\n1,NA\n"))


def test_header_mismatch(tmp_path):
    p = _write(tmp_path, "a,y\n1,2\n")
    with pytest.raises(CsvFormatError):
        read_csv(p, make_schema(["a", "b", "y"], "y"))


def test_categorical_columns(tmp_path):
    data, y = _read(_write(tmp_path, "c,y\nred,a\nNA,b\nblue,a\n"), categorical=["c"],
                    response_kind="categorical")
    assert data.column_names == ("c=blue", "c=red", "c=__missing__")
    assert not data.mask.any()
    assert data.values[:, 2].tolist() == [0.0, 1.0, 0.0]
    assert y.values.tolist() == [0, 1, 0] and y.n_classes == 2


def test_empty_dataset(tmp_path):
    p = tmp_path / "e.csv"
    write_csv(MaskedDataset(np.zeros((0, 2)), np.zeros((0, 2), bool), ("a", "b")), Response.continuous([]), p)
    assert p.read_text() == "a,b,y\n"
    data, y = _read(p)
    assert data.n_rows == 0 and len(y) == 0


def test_writer_format(tmp_path):
    p = tmp_path / "w.csv"
    d = MaskedDataset(np.array([[1.5, 0.0]]), np.array([[False, True]]), ("a", "b"))
    write_csv(d, Response.continuous([0.1]), p)
    assert p.read_bytes() == b"a,b,y\n1.5,NA,0.1\n"


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 20).flatmap(lambda n: st.tuples(
    arrays(np.float64, (n, 3), elements=st.floats(allow_nan=False, allow_infinity=False)),
    arrays(np.bool_, (n, 3)),
    arrays(np.float64, n, elements=st.floats(allow_nan=False, allow_infinity=False)))))
def test_round_trip(tmp_path_factory, drawn):
    values, mask, yv = drawn
    p = tmp_path_factory.mktemp("rt") / "rt.csv"
    write_csv(MaskedDataset(values, mask), Response.continuous(yv), p)
    data, y = _read(p)
    assert np.array_equal(data.mask, mask)
    assert np.array_equal(data.values[~mask], values[~mask])
    assert np.array_equal(y.values, yv)
