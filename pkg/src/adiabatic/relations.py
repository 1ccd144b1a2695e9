"""Adiabatic-accessibility relation models.

Every model answers ``precedes(a, b)`` for states it covers.  Four variants
are provided:

* :class:`FiniteRelation` - explicit node list and boolean matrix, with
  optional materialized product (pair) nodes;
* :class:`GridRelation` - reachability on a uniform grid under generator
  moves;
* :class:`EntropyRelation` - relation on scaled products induced by a known
  additive entropy, used to exercise the entropy construction;
* :class:`PredicateRelation` - a closed-form membership test on single
  states of one space.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .errors import StateError, UnsupportedQuery
from .states import (
    COORD_ATOL,
    CompoundState,
    StateLike,
    StatePoint,
    as_compound,
    same_content,
)


class RelationModel:
    """Base class; subclasses implement :meth:`_precedes`."""

    supports_scaling = False
    supports_composition = False

    def precedes(self, a: StateLike, b: StateLike) -> bool:
        return bool(self._precedes(as_compound(a), as_compound(b)))

    def _precedes(self, a: CompoundState, b: CompoundState) -> bool:
        raise NotImplementedError


def precedes(model: RelationModel, a: StateLike, b: StateLike) -> bool:
    """``a ≺ b``: ``b`` is adiabatically accessible from ``a``."""
    return model.precedes(a, b)


def strictly_precedes(model: RelationModel, a: StateLike, b: StateLike) -> bool:
    return model.precedes(a, b) and not model.precedes(b, a)


def adiabatically_equivalent(model: RelationModel, a: StateLike, b: StateLike) -> bool:
    return model.precedes(a, b) and model.precedes(b, a)


def comparable(model: RelationModel, a: StateLike, b: StateLike) -> bool:
    return model.precedes(a, b) or model.precedes(b, a)


# ---------------------------------------------------------------------------
# finite explicit relations


def transitive_reflexive_closure_matrix(m: np.ndarray) -> np.ndarray:
    """Reflexive-transitive closure of a square boolean matrix (Warshall)."""
    r = np.array(m, dtype=bool, copy=True)
    n = r.shape[0]
    if r.shape != (n, n):
        raise ValueError(f"relation matrix must be square, got {r.shape}")
    np.fill_diagonal(r, True)
    for k in range(n):
        r |= r[:, k : k + 1] & r[k : k + 1, :]
    return r


@dataclass(frozen=True, eq=False)
class FiniteRelation(RelationModel):
    """Explicit relation on a finite node set.

    ``products`` maps a pair of node names ``(x, y)`` to the name of the node
    standing for the composite ``(x, y)``; queries on two-part compounds of
    unscaled nodes are answered through it.
    """

    nodes: tuple[StatePoint, ...]
    matrix: np.ndarray
    products: Mapping[tuple[str, str], str] = field(default_factory=dict)
    closed: bool = False

    def __post_init__(self):
        nodes = tuple(self.nodes)
        m = np.asarray(self.matrix, dtype=bool)
        if m.shape != (len(nodes), len(nodes)):
            raise StateError(f"matrix shape {m.shape} does not match {len(nodes)} nodes")
        names = [n.name for n in nodes]
        if any(not nm for nm in names) or len(set(names)) != len(names):
            raise StateError("finite relation nodes need unique non-empty names")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "products", dict(self.products))
        object.__setattr__(self, "_index", {nd.name: i for i, nd in enumerate(nodes)})
        for pair, prod in self.products.items():
            for nm in (*pair, prod):
                if nm not in self._index:
                    raise StateError(f"product table refers to unknown node {nm!r}")

    @property
    def supports_composition(self) -> bool:  # type: ignore[override]
        return bool(self.products)

    @classmethod
    def from_edges(
        cls,
        nodes: Sequence[StatePoint],
        edges: Iterable[tuple[str, str]],
        products: Mapping[tuple[str, str], str] | None = None,
        close: bool = False,
    ) -> "FiniteRelation":
        index = {nd.name: i for i, nd in enumerate(nodes)}
        m = np.zeros((len(nodes), len(nodes)), dtype=bool)
        for a, b in edges:
            try:
                m[index[a], index[b]] = True
            except KeyError as exc:
                raise StateError(f"edge refers to unknown node {exc.args[0]!r}") from None
        rel = cls(tuple(nodes), m, products or {})
        return transitive_reflexive_closure(rel) if close else rel

    def __len__(self):
        return len(self.nodes)

    def node(self, name: str) -> StatePoint:
        try:
            return self.nodes[self._index[name]]
        except KeyError:
            raise StateError(f"unknown node {name!r}") from None

    def index(self, state: StatePoint) -> int:
        i = self._index.get(state.name)
        if i is None or self.nodes[i] != state:
            raise StateError(f"state {state} is not a node of this model")
        return i

    def compose_nodes(self, x: StatePoint, y: StatePoint) -> StatePoint:
        try:
            return self.node(self.products[(x.name, y.name)])
        except KeyError:
            raise UnsupportedQuery(f"product node ({x}, {y}) is not materialized") from None

    def resolve(self, c: CompoundState) -> int:
        if c.is_simple:
            return self.index(c.single)
        if len(c.parts) == 2 and all(p.scale == 1.0 for p in c.parts):
            x, y = (p.state for p in c.parts)
            return self.index(self.compose_nodes(x, y))
        raise UnsupportedQuery(f"finite model cannot decide scaled compound {c}")

    def _precedes(self, a, b):
        return self.matrix[self.resolve(a), self.resolve(b)]

    def edges(self) -> list[tuple[str, str]]:
        ii, jj = np.nonzero(self.matrix)
        return [(self.nodes[i].name, self.nodes[j].name) for i, j in zip(ii, jj)]

    def with_matrix(self, matrix: np.ndarray, closed: bool = False) -> "FiniteRelation":
        return FiniteRelation(self.nodes, matrix, self.products, closed)

    def states_in(self, space_id: str) -> list[StatePoint]:
        return [n for n in self.nodes if n.space_id == space_id]


def transitive_reflexive_closure(model: FiniteRelation) -> FiniteRelation:
    """Smallest reflexive and transitive relation containing ``model``'s."""
    if model.closed:
        return model
    return model.with_matrix(transitive_reflexive_closure_matrix(model.matrix), closed=True)


# ---------------------------------------------------------------------------
# generator-induced grid relations

Generator = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class GridRelation(RelationModel):
    """Reachability on a uniform grid.

    Each generator maps an ``(n, d)`` array of coordinates to an ``(n, d)``
    array of successor coordinates (one successor per state; NaN rows mean
    "no move").  Successors are snapped to the nearest grid node; those
    outside the bounds are discarded.
    """

    space_id: str
    lower: tuple[float, ...]
    upper: tuple[float, ...]
    h: tuple[float, ...]
    generators: tuple[tuple[str, Generator], ...] = ()
    equilibrium: Callable[[np.ndarray], bool] | None = None

    def __post_init__(self):
        lo, hi, h = (np.asarray(v, dtype=float) for v in (self.lower, self.upper, self.h))
        if not (lo.shape == hi.shape == h.shape and lo.ndim == 1 and lo.size > 0):
            raise ValueError("lower, upper and h must be equal-length 1-d sequences")
        if np.any(h <= 0) or np.any(hi < lo):
            raise ValueError("grid needs h > 0 and upper >= lower")
        steps = (hi - lo) / h
        counts = np.rint(steps).astype(int)
        if np.any(np.abs(steps - counts) > 1e-9 * np.maximum(1.0, steps)):
            raise ValueError("grid extent must be an integer multiple of h on every axis")
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "_lo", lo)
        object.__setattr__(self, "_h", h)
        object.__setattr__(self, "shape", tuple(int(c) + 1 for c in counts))
        object.__setattr__(self, "_cache", {})

    @property
    def ndim(self) -> int:
        return len(self.shape)

    def snap(self, coords) -> tuple[int, ...]:
        x = np.asarray(coords, dtype=float)
        if x.shape != (self.ndim,):
            raise StateError(f"expected {self.ndim} coordinates, got {x.shape}")
        f = (x - self._lo) / self._h
        idx = np.floor(f + 0.5 + COORD_ATOL).astype(int)
        if np.any(idx < 0) or np.any(idx >= np.asarray(self.shape)):
            raise StateError(f"state {tuple(x)} lies outside the grid bounds")
        return tuple(int(i) for i in idx)

    def coords_of(self, idx) -> np.ndarray:
        return self._lo + np.asarray(idx, dtype=float) * self._h

    def state_at(self, idx) -> StatePoint:
        c = self.coords_of(idx)
        eq = bool(self.equilibrium(c)) if self.equilibrium is not None else False
        return StatePoint(self.space_id, tuple(c), eq)

    def _check_space(self, s: StatePoint):
        if s.space_id != self.space_id:
            raise StateError(f"unknown space {s.space_id!r} (model covers {self.space_id!r})")

    def reachable_mask(self, x: StatePoint) -> np.ndarray:
        """Boolean array over the grid marking cells reachable from ``x``."""
        self._check_space(x)
        start = self.snap(x.coords)
        mask = self._cache.get(start)
        if mask is None:
            mask = self._explore(start)
            mask.setflags(write=False)
            self._cache[start] = mask
        return mask

    def _explore(self, start: tuple[int, ...]) -> np.ndarray:
        shape = np.asarray(self.shape)
        visited = np.zeros(self.shape, dtype=bool)
        visited[start] = True
        frontier = np.array([start], dtype=int)
        while frontier.size:
            coords = self._lo + frontier * self._h
            found = []
            for _, gen in self.generators:
                succ = np.asarray(gen(coords), dtype=float)
                ok = np.all(np.isfinite(succ), axis=1)
                idx = np.floor((succ[ok] - self._lo) / self._h + 0.5 + COORD_ATOL).astype(int)
                inside = np.all((idx >= 0) & (idx < shape), axis=1)
                found.append(idx[inside])
            cand = np.unique(np.concatenate(found), axis=0) if found else np.empty((0, self.ndim), int)
            if cand.size == 0:
                break
            fresh = ~visited[tuple(cand.T)]
            frontier = cand[fresh]
            visited[tuple(frontier.T)] = True
        return visited

    def _precedes(self, a, b):
        try:
            x, y = a.single, b.single
        except StateError:
            raise UnsupportedQuery("grid models decide single unscaled states only") from None
        self._check_space(x)
        self._check_space(y)
        return self.reachable_mask(x)[self.snap(y.coords)]

    def grid_states(self) -> list[StatePoint]:
        return [self.state_at(idx) for idx in np.ndindex(*self.shape)]


def reachable_set(model: GridRelation, x: StatePoint) -> set[StatePoint]:
    """Grid states reachable from the cell of ``x`` (forward sector)."""
    mask = model.reachable_mask(x)
    return {model.state_at(idx) for idx in zip(*np.nonzero(mask))}


# ---------------------------------------------------------------------------
# relation induced by a known additive entropy


@dataclass(frozen=True, eq=False)
class EntropyRelation(RelationModel):
    """``a ≺ b`` iff same matter content and ``S(a) <= S(b)``.

    ``S`` is extended additively and extensively from the elementary states,
    so scaled products of any order are decided on demand.
    """

    entropy: Callable[[StatePoint], float]
    atol: float = 1e-12

    supports_scaling = True
    supports_composition = True

    def total_entropy(self, c: CompoundState) -> float:
        return sum(p.scale * float(self.entropy(p.state)) for p in c.parts)

    def _precedes(self, a, b):
        if not same_content(a, b):
            return False
        return self.total_entropy(a) <= self.total_entropy(b) + self.atol


@dataclass(frozen=True, eq=False)
class PredicateRelation(RelationModel):
    """Closed-form relation on single states of one space."""

    space_id: str
    predicate: Callable[[StatePoint, StatePoint], bool]

    def _precedes(self, a, b):
        try:
            x, y = a.single, b.single
        except StateError:
            raise UnsupportedQuery("predicate relations decide single unscaled states only") from None
        for s in (x, y):
            if s.space_id != self.space_id:
                raise StateError(f"unknown space {s.space_id!r}")
        return self.predicate(x, y)
