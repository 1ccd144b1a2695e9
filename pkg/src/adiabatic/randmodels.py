"""Seeded random finite models for property harnesses.

Each state gets an entropy interval ``[a, b]`` drawn from the equilibrium
entropy values (equilibrium states have ``a = b = S``).  The base relation
is ``x ≺ y`` iff ``b_x <= a_y``, plus random extra edges between
non-equilibrium states that respect the componentwise order of intervals,
closed reflexively and transitively.  By construction the equilibrium
restriction is characterized by ``S``, every state has equilibrium
predecessors and successors, and ``S_-(x) = a_x``, ``S_+(x) = b_x``.

Product nodes ``(x, y)`` carry the interval sums and relate by the interval
order or componentwise, which keeps the product relation transitive and
consistent with the base relation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .nonequilibrium import EmbeddedModel
from .relations import FiniteRelation, transitive_reflexive_closure_matrix
from .states import StatePoint

BASE_SPACE = "main"
PAIR_SPACE = "mainxmain"


@dataclass
class RandomModel:
    relation: FiniteRelation
    entropy: dict[str, float]
    intervals: dict[str, tuple[float, float]]
    mode: str

    def embedded(self) -> EmbeddedModel:
        return EmbeddedModel.finite(self.relation, self.entropy)

    def base_nodes(self) -> list[StatePoint]:
        return self.relation.states_in(BASE_SPACE)


def _intervals(rng, values, n_noneq, mode):
    distinct = sorted(set(values))
    out = []
    for _ in range(n_noneq):
        degenerate = mode == "benign" or (mode == "mixed" and rng.random() < 0.5)
        if degenerate or len(distinct) < 3:
            v = float(rng.choice(distinct))
            out.append((v, v))
            continue
        i = int(rng.integers(0, len(distinct) - 2))
        j = int(rng.integers(i + 2, len(distinct)))
        out.append((distinct[i], distinct[j]))
    return out


def random_finite_model(
    rng: np.random.Generator,
    max_states: int = 12,
    products: bool = True,
    extra_edge_prob: float = 0.3,
) -> RandomModel:
    """Draw one closed finite model satisfying N1-N2 (see module docstring)."""
    if max_states < 4:
        raise ValueError("need max_states >= 4")
    n_eq = int(rng.integers(3, min(7, max_states - 1) + 1))
    values = rng.integers(0, 6, n_eq).astype(float)
    while len(set(values)) < 2:
        values = rng.integers(0, 6, n_eq).astype(float)
    n_noneq = int(rng.integers(1, max_states - n_eq + 1))
    mode = str(rng.choice(["benign", "mixed", "random"]))
    iv = [(v, v) for v in values] + _intervals(rng, values, n_noneq, mode)

    names = [f"e{i}" for i in range(n_eq)] + [f"x{i}" for i in range(n_noneq)]
    nodes = [StatePoint(BASE_SPACE, (), i < n_eq, nm) for i, nm in enumerate(names)]
    a = np.array([p[0] for p in iv])
    b = np.array([p[1] for p in iv])
    n = len(nodes)
    m = b[:, None] <= a[None, :]
    np.fill_diagonal(m, True)
    noneq = np.arange(n_eq, n)
    for i in noneq:
        for j in noneq:
            if i != j and a[i] <= a[j] and b[i] <= b[j] and rng.random() < extra_edge_prob:
                m[i, j] = True
    m = transitive_reflexive_closure_matrix(m)
    entropy = {names[i]: float(values[i]) for i in range(n_eq)}
    intervals = {names[i]: (float(a[i]), float(b[i])) for i in range(n)}

    if not products:
        return RandomModel(FiniteRelation(tuple(nodes), m, closed=True), entropy, intervals, mode)

    pair_idx = [(i, j) for i in range(n) for j in range(n)]
    pa = np.array([a[i] + a[j] for i, j in pair_idx])
    pb = np.array([b[i] + b[j] for i, j in pair_idx])
    ii = np.array([p[0] for p in pair_idx])
    jj = np.array([p[1] for p in pair_idx])
    pm = (pb[:, None] <= pa[None, :]) | (m[ii][:, ii] & m[jj][:, jj])
    np.fill_diagonal(pm, True)
    pnodes = [
        StatePoint(PAIR_SPACE, (), nodes[i].is_equilibrium and nodes[j].is_equilibrium, f"({names[i]},{names[j]})")
        for i, j in pair_idx
    ]
    full = np.zeros((n + len(pnodes),) * 2, dtype=bool)
    full[:n, :n] = m
    full[n:, n:] = pm
    full = transitive_reflexive_closure_matrix(full)
    table = {(names[i], names[j]): pnodes[k].name for k, (i, j) in enumerate(pair_idx)}
    for k, (i, j) in enumerate(pair_idx):
        intervals[pnodes[k].name] = (float(pa[k]), float(pb[k]))
    rel = FiniteRelation(tuple(nodes + pnodes), full, table, closed=True)
    return RandomModel(rel, entropy, intervals, mode)


def break_transitivity(model: EmbeddedModel, rng: np.random.Generator):
    """Remove edges so that ``S_-`` is no longer monotone along some pair.

    Picks ``x ≺ y`` (both non-equilibrium) with ``S_-(x)`` above the minimum
    equilibrium entropy and deletes every edge into ``y`` from equilibrium
    states of larger entropy than that minimum.  Returns the corrupted
    relation and the pair, or ``None`` if the model offers no such pair.
    """
    from .nonequilibrium import s_minus  # local: avoid cycle at import time

    rel = model.relation
    base = [nd for nd in rel.nodes if nd.space_id == BASE_SPACE]
    eq = [z for z in base if z.is_equilibrium]
    s_min = min(model.entropy(z) for z in eq)
    cands = []
    noneq = [nd for nd in base if not nd.is_equilibrium]
    for y in noneq:
        for x in noneq:
            if x != y and rel.precedes(x, y) and s_minus(model, x).value > s_min:
                cands.append((x, y))
    if not cands:
        return None
    x, y = cands[int(rng.integers(len(cands)))]
    m = rel.matrix.copy()
    jy = rel.index(y)
    for z in eq:
        if model.entropy(z) > s_min:
            m[rel.index(z), jy] = False
    return rel.with_matrix(m, closed=False), (x, y)
