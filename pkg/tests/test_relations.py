import itertools

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adiabatic.errors import StateError, UnsupportedQuery
from adiabatic.relations import (
    EntropyRelation,
    FiniteRelation,
    GridRelation,
    adiabatically_equivalent,
    comparable,
    precedes,
    reachable_set,
    strictly_precedes,
    transitive_reflexive_closure,
    transitive_reflexive_closure_matrix,
)
from adiabatic.states import StatePoint, combination, compose, scale


def nodes(*names):
    return [StatePoint("main", (), False, n) for n in names]


def test_closure_of_empty_relation_is_diagonal():
    rel = FiniteRelation.from_edges(nodes("a", "b"), [], close=True)
    assert sorted(rel.edges()) == [("a", "a"), ("b", "b")]


def test_closure_adds_transitive_edge():
    rel = FiniteRelation.from_edges(nodes("a", "b", "c"), [("a", "b"), ("b", "c")], close=True)
    assert set(rel.edges()) == {("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "c"), ("a", "c")}


def test_closure_idempotent_on_closed_input():
    rel = FiniteRelation.from_edges(nodes("a", "b", "c"), [("a", "b"), ("b", "c")], close=True)
    again = transitive_reflexive_closure(rel)
    assert again is rel
    assert np.array_equal(transitive_reflexive_closure_matrix(rel.matrix), rel.matrix)


@st.composite
def digraphs(draw):
    n = draw(st.integers(1, 9))
    bits = draw(st.lists(st.booleans(), min_size=n * n, max_size=n * n))
    return np.array(bits, dtype=bool).reshape(n, n)


@settings(max_examples=150, deadline=None)
@given(digraphs())
def test_closure_matches_networkx(m):
    got = transitive_reflexive_closure_matrix(m)
    g = nx.DiGraph()
    g.add_nodes_from(range(len(m)))
    g.add_edges_from(zip(*np.nonzero(m)))
    want = np.zeros_like(m)
    for i in range(len(m)):
        want[i, list(nx.descendants(g, i) | {i})] = True
    assert np.array_equal(got, want)
    assert np.all(got >= m)  # extensive
    assert np.array_equal(transitive_reflexive_closure_matrix(got), got)


def test_derived_predicates():
    a, b, c = nodes("a", "b", "c")
    rel = FiniteRelation.from_edges([a, b, c], [("a", "b"), ("b", "a"), ("a", "c")], close=True)
    assert adiabatically_equivalent(rel, a, b)
    assert strictly_precedes(rel, a, c) and not strictly_precedes(rel, a, b)
    assert comparable(rel, c, b)


def test_finite_relation_errors():
    a, b = nodes("a", "b")
    with pytest.raises(StateError):
        FiniteRelation.from_edges([a, b], [("a", "zz")])
    with pytest.raises(StateError):
        FiniteRelation((a, a), np.eye(2))
    rel = FiniteRelation.from_edges([a, b], [], close=True)
    with pytest.raises(StateError):
        rel.node("zz")
    with pytest.raises(UnsupportedQuery):
        precedes(rel, compose(a, b), compose(b, a))
    with pytest.raises(UnsupportedQuery):
        precedes(rel, scale(2.0, a), scale(2.0, b))


def test_product_nodes_answer_compound_queries():
    a, b, ab, ba = nodes("a", "b", "ab", "ba")
    rel = FiniteRelation.from_edges(
        [a, b, ab, ba], [("ab", "ba")], products={("a", "b"): "ab", ("b", "a"): "ba"}, close=True
    )
    assert rel.supports_composition
    assert precedes(rel, compose(a, b), compose(b, a))
    assert not precedes(rel, compose(b, a), compose(a, b))


def grid_1d(*gens, lo=0.0, hi=1.0, h=0.25):
    return GridRelation("line", (lo,), (hi,), (h,), tuple(gens))


def test_reachable_set_without_generators_is_start_cell():
    g = grid_1d()
    x = StatePoint("line", (0.5,))
    assert reachable_set(g, x) == {g.state_at((2,))}


def test_rubbing_only_reaches_upper_quadrant():
    h = 0.5

    def up1(c):
        return c + np.array([h, 0.0])

    def up2(c):
        return c + np.array([0.0, h])

    g = GridRelation("q", (0.0, 0.0), (2.0, 2.0), (h, h), (("u1", up1), ("u2", up2)))
    x = StatePoint("q", (0.5, 1.0))
    mask = g.reachable_mask(x)
    expect = np.zeros(g.shape, dtype=bool)
    expect[1:, 2:] = True
    assert np.array_equal(mask, expect)


def test_grid_out_of_bounds_and_space_errors():
    g = grid_1d()
    with pytest.raises(StateError):
        g.reachable_mask(StatePoint("line", (2.0,)))
    with pytest.raises(StateError):
        g.reachable_mask(StatePoint("other", (0.0,)))
    with pytest.raises(ValueError):
        GridRelation("bad", (0.0,), (1.0,), (0.3,))


def test_grid_reachability_is_forward_closed():
    h = 0.25

    def step(c):
        out = c + h
        out[c[:, 0] >= 0.74] = np.nan
        return out

    g = grid_1d(("step", step), hi=2.0)
    x = StatePoint("line", (0.0,))
    for y in reachable_set(g, x):
        assert reachable_set(g, y) <= reachable_set(g, x)
    assert max(s.coords[0] for s in reachable_set(g, x)) == 0.75


def test_entropy_relation_scaled_products():
    s = {"a": 0.0, "b": 1.0, "c": 2.0}
    pts = {k: StatePoint("sys", (), True, k) for k in s}
    rel = EntropyRelation(lambda x: s[x.name])
    a, b, c = pts["a"], pts["b"], pts["c"]
    assert precedes(rel, combination([(0.5, a), (0.5, c)]), b)
    assert precedes(rel, b, combination([(0.5, a), (0.5, c)]))
    assert not precedes(rel, combination([(0.4, a), (0.6, c)]), b)
    # different matter content is never related
    assert not precedes(rel, scale(2.0, a), c)


@given(st.lists(st.floats(-5, 5), min_size=3, max_size=3), st.floats(0.01, 0.99))
def test_entropy_relation_matches_weighted_sum(vals, lam):
    pts = [StatePoint("sys", (v,), True) for v in vals]
    rel = EntropyRelation(lambda x: x.coords[0])
    lhs = combination([(1 - lam, pts[0]), (lam, pts[1])])
    want = (1 - lam) * vals[0] + lam * vals[1] <= vals[2] + 1e-12
    assert precedes(rel, lhs, pts[2]) == want


def test_reflexive_transitive_on_small_entropy_model():
    pts = [StatePoint("sys", (v,), True) for v in (0.0, 0.5, 1.0)]
    rel = EntropyRelation(lambda x: x.coords[0])
    for x in pts:
        assert precedes(rel, x, x)
    for x, y, z in itertools.product(pts, repeat=3):
        if precedes(rel, x, y) and precedes(rel, y, z):
            assert precedes(rel, x, z)
