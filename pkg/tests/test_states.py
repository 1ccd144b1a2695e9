import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from adiabatic.errors import StateError
from adiabatic.states import (
    CompoundState,
    ScaledState,
    StatePoint,
    as_compound,
    combination,
    compose,
    same_content,
    scale,
)

X = StatePoint("gas", (1.0, 2.0), True)
Y = StatePoint("gas", (3.0, 4.0), False)
Z = StatePoint("solid", (5.0,), True)


def test_coords_normalized_and_label():
    p = StatePoint("s", (1, 2))
    assert p.coords == (1.0, 2.0)
    assert p.label == "s(1, 2)"
    assert StatePoint("s", (), name="a").label == "a"


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_coords_rejected(bad):
    with pytest.raises(StateError):
        StatePoint("s", (0.0, bad))


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf])
def test_scale_must_be_positive(bad):
    with pytest.raises(StateError):
        ScaledState(bad, X)
    with pytest.raises(StateError):
        scale(bad, X)


def test_compose_flattens():
    c = compose(compose(X, Y), Z)
    assert [p.state for p in c.parts] == [X, Y, Z]
    assert not c.is_simple
    assert as_compound(X).is_simple and as_compound(X).single == X


def test_scale_distributes():
    c = scale(2.0, compose(X, scale(0.5, Z)))
    assert [p.scale for p in c.parts] == [2.0, 1.0]


def test_combination_skips_zero_and_rejects_negative():
    c = combination([(0.0, X), (0.3, Y)])
    assert len(c.parts) == 1 and c.parts[0].scale == 0.3
    with pytest.raises(StateError):
        combination([(-0.1, X)])
    with pytest.raises(StateError):
        CompoundState(())


def test_matter_content():
    c = compose(scale(0.25, X), scale(0.75, Y), Z)
    assert c.matter_content() == {"gas": 1.0, "solid": 1.0}
    assert same_content(c, compose(X, Z))
    assert not same_content(c, as_compound(X))


@given(st.floats(0.01, 100), st.floats(0.01, 100))
def test_scaling_composes_multiplicatively(a, b):
    c1 = scale(a, scale(b, X))
    c2 = scale(a * b, X)
    assert math.isclose(c1.parts[0].scale, c2.parts[0].scale, rel_tol=1e-12)


@given(st.lists(st.floats(0.01, 10), min_size=1, max_size=6))
def test_content_of_combination_is_coefficient_sum(coefs):
    c = combination([(a, X) for a in coefs])
    assert math.isclose(c.matter_content()["gas"], sum(coefs), rel_tol=1e-12)
