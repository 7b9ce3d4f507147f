import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import auc_pairwise

from mimkit.metrics import (
    ONE_MINUS_ACCURACY,
    ONE_MINUS_AUC,
    RMSE,
    accuracy,
    auc,
    metric_for_response,
    rmse,
)

vecs = st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=30)


def test_rmse_examples():
    assert rmse([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert rmse([2.0, 3.0, 4.0], [1.0, 2.0, 3.0]) == 1.0
    assert rmse([0.0, 0.0], [3.0, 4.0]) == pytest.approx(math.sqrt(12.5), abs=1e-15)


def test_rmse_errors():
    with pytest.raises(ValueError):
        rmse([], [])
    with pytest.raises(ValueError):
        rmse([1.0], [1.0, 2.0])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 20).flatmap(lambda n: st.tuples(*[st.lists(st.floats(-1e3, 1e3), min_size=n, max_size=n)] * 3)))
def test_rmse_triangle(abc):
    a, b, c = abc
    assert rmse(a, c) <= rmse(a, b) + rmse(b, c) + 1e-9


def test_auc_examples():
    assert auc([0.1, 0.2, 0.8, 0.9], [0, 0, 1, 1]) == 1.0
    assert auc([0.5] * 4, [0, 1, 0, 1]) == 0.5
    assert auc([0.1, 0.4, 0.35, 0.8], [0, 0, 1, 1]) == 0.75


def test_auc_single_class():
    with pytest.raises(ValueError):
        auc([0.1, 0.2], [1, 1])


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10).map(lambda v: round(v, 1)), st.integers(0, 1)), min_size=2, max_size=40)
       .filter(lambda xs: len({lab for _, lab in xs}) == 2))
def test_auc_matches_pairwise(pairs):
    s = [a for a, _ in pairs]
    lab = [b for _, b in pairs]
    assert abs(auc(s, lab) - auc_pairwise(s, lab)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(-10, 10), st.integers(0, 1)), min_size=2, max_size=40, unique_by=lambda t: t[0])
       .filter(lambda xs: len({lab for _, lab in xs}) == 2))
def test_auc_complement(pairs):
    s = np.array([a for a, _ in pairs])
    lab = [b for _, b in pairs]
    assert auc(-s, lab) == pytest.approx(1 - auc(s, lab), abs=1e-12)


def test_accuracy_examples():
    assert accuracy([0, 1, 2], [0, 1, 2]) == 1.0
    assert accuracy([1, 0], [0, 1]) == 0.0
    assert accuracy([0, 1, 1, 1], [0, 1, 1, 0]) == 0.75


def test_metric_names():
    assert metric_for_response("continuous", 0) == RMSE
    assert metric_for_response("categorical", 2) == ONE_MINUS_AUC
    assert metric_for_response("categorical", 4) == ONE_MINUS_ACCURACY
