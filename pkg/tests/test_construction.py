import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adiabatic.construction import (
    EntropyEvaluator,
    ReferencePair,
    affine_uniqueness_check,
    availability,
    canonical_entropy,
)
from adiabatic.errors import ModelDefectError, NonMonotoneError
from adiabatic.construction import _threshold
from adiabatic.relations import EntropyRelation
from adiabatic.states import StatePoint

TOL = 1e-7


def model(values):
    pts = [StatePoint("sys", (v,), True) for v in values]
    return EntropyRelation(lambda x: x.coords[0]), pts


def test_references_map_to_zero_and_one():
    rel, (x0, x1) = model([2.0, 5.0])
    ev = EntropyEvaluator(rel, ReferencePair(x0, x1), TOL)
    assert abs(ev(x0)) <= TOL and abs(ev(x1) - 1.0) <= TOL


def test_outside_unit_interval():
    # S* = -1, 0, 1, 3 with references at 0 and 1
    rel, pts = model([0.0, 1.0, -1.0, 3.0])
    ev = EntropyEvaluator(rel, ReferencePair(pts[0], pts[1]), TOL)
    assert abs(ev(pts[2]) + 1.0) <= TOL
    assert abs(ev(pts[3]) - 3.0) <= TOL
    assert abs(canonical_entropy(ev, pts[3], "inf") - 3.0) <= TOL


def test_references_must_be_strictly_ordered():
    rel, (a, b) = model([1.0, 1.0])
    with pytest.raises(ModelDefectError):
        EntropyEvaluator(rel, ReferencePair(a, b))
    rel, (a, b) = model([2.0, 1.0])
    with pytest.raises(ModelDefectError):
        EntropyEvaluator(rel, ReferencePair(a, b))


def test_bad_form_and_space():
    rel, (a, b) = model([0.0, 1.0])
    ev = EntropyEvaluator(rel, ReferencePair(a, b))
    with pytest.raises(ValueError):
        canonical_entropy(ev, a, "mid")
    with pytest.raises(ValueError):
        canonical_entropy(ev, StatePoint("other", (0.0,), True))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=8, unique=True))
def test_reconstruction_is_affine(values):
    values = sorted(values)
    if values[-1] - values[0] < 1e-2:
        return
    rel, pts = model(values)
    ev = EntropyEvaluator(rel, ReferencePair(pts[0], pts[-1]), TOL)
    s = {i: ev(p) for i, p in enumerate(pts)}
    star = dict(enumerate(values))
    fit = affine_uniqueness_check(s, star)
    assert fit.alpha > 0
    assert fit.max_residual <= 10 * TOL * (values[-1] - values[0])
    for i, p in enumerate(pts):
        assert abs(canonical_entropy(ev, p, "inf") - s[i]) <= 2 * TOL


def test_affine_check_errors():
    with pytest.raises(ValueError):
        affine_uniqueness_check({"a": 1.0, "b": 1.0}, {"a": 0.0, "b": 1.0})
    with pytest.raises(ModelDefectError):
        affine_uniqueness_check({"a": 0.0, "b": 1.0}, {"a": 1.0, "b": 0.0})
    fit = affine_uniqueness_check({"a": 0.0, "b": 1.0, "c": 2.0}, {"a": 1.0, "b": 3.0, "c": 5.0})
    assert math.isclose(fit.alpha, 2.0) and math.isclose(fit.beta, 1.0) and fit.max_residual < 1e-12


def test_threshold_detects_non_monotone_predicate():
    with pytest.raises(NonMonotoneError):
        _threshold(lambda l: not (0.3 < l < 0.6), 1e-6, 5)
    with pytest.raises(NonMonotoneError):
        _threshold(lambda l: l > 0.5, 1e-6, 5)
    assert abs(_threshold(lambda l: l <= 0.37, 1e-9, 5) - 0.37) < 1e-9
    assert abs(_threshold(lambda l: l <= -6.5, 1e-9, 5) + 6.5) < 1e-9


def test_availability():
    assert availability(U=3.0, U0=1.0, T0=2.0, S=0.5, S0=0.0) == 1.0
    with pytest.raises(ValueError):
        availability(1.0, 1.0, 0.0, 0.0, 0.0)
