"""Axiom (A1-A6) and comparison-property checkers.

Finite explicit models are checked exhaustively for A1/A2; everything else
is checked on the supplied samples.  Queries a model cannot decide (scaled or
composite states on models without that structure) make the corresponding
axiom not-applicable rather than failing.
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from .errors import UnsupportedQuery
from .relations import FiniteRelation, RelationModel, adiabatically_equivalent, comparable
from .reports import FAIL, NA, PASS, Check, Report
from .states import StatePoint, combination, compose, scale

AXIOMS = ("A1", "A2", "A3", "A4", "A5", "A6", "CP")
DEFAULT_LAMBDAS = (0.25, 0.5, 0.75)


class AxiomReport(Report):
    def reverify(self, model: RelationModel) -> bool:
        """True iff every failure's witness still exhibits its violation."""
        return all(witness_violates(model, c.name, c.witness) for c in self.failures())


def _mix(lam: float, x: StatePoint, y: StatePoint):
    return combination(((1.0 - lam, x), (lam, y)))


def witness_violates(model: RelationModel, axiom: str, w: tuple) -> bool:
    p = model.precedes
    if axiom == "A1":
        (x,) = w
        return not p(x, x)
    if axiom == "A2":
        x, y, z = w
        return p(x, y) and p(y, z) and not p(x, z)
    if axiom == "A3":
        x, x2, y, y2 = w
        return p(x, x2) and p(y, y2) and not p(compose(x, y), compose(x2, y2))
    if axiom == "A4":
        lam, x, y = w
        return p(x, y) and not p(scale(lam, x), scale(lam, y))
    if axiom == "A5":
        lam, x = w
        return not adiabatically_equivalent(model, x, _mix(lam, x, x))
    if axiom == "A6":
        x, y, z0, z1, eps = w
        lhs = all(p(compose(x, scale(e, z0)), compose(y, scale(e, z1))) for e in eps)
        return lhs and not p(x, y)
    if axiom == "CP":
        a, b = w
        return not comparable(model, a, b)
    raise ValueError(f"unknown axiom {axiom!r}")


def _validate_eps(eps: Sequence[float]) -> tuple[float, ...]:
    eps = tuple(float(e) for e in eps)
    if any(e <= 0 for e in eps):
        raise ValueError("epsilon values must be positive")
    if any(b >= a for a, b in zip(eps, eps[1:])):
        raise ValueError("epsilon_sequence must be strictly decreasing")
    return eps


def _check_a1(model, samples) -> Check:
    if isinstance(model, FiniteRelation):
        bad = np.nonzero(~np.diag(model.matrix))[0]
        if bad.size:
            return Check("A1", FAIL, (model.nodes[bad[0]],), "exhaustive")
        return Check("A1", PASS, detail=f"exhaustive over {len(model)} nodes")
    for x in samples:
        if not model.precedes(x, x):
            return Check("A1", FAIL, (x,))
    return Check("A1", PASS, detail=f"{len(samples)} samples")


def _check_a2(model, samples) -> Check:
    if isinstance(model, FiniteRelation):
        m = model.matrix.astype(np.int64)
        viol = ((m @ m) > 0) & ~model.matrix
        if viol.any():
            i, k = (int(v) for v in np.argwhere(viol)[0])
            j = int(np.nonzero(model.matrix[i] & model.matrix[:, k])[0][0])
            return Check("A2", FAIL, tuple(model.nodes[t] for t in (i, j, k)), "exhaustive")
        return Check("A2", PASS, detail=f"exhaustive over {len(model)} nodes")
    rel = {(a, b): model.precedes(a, b) for a in samples for b in samples}
    for x, y, z in itertools.product(samples, repeat=3):
        if rel[x, y] and rel[y, z] and not rel[x, z]:
            return Check("A2", FAIL, (x, y, z))
    return Check("A2", PASS, detail=f"{len(samples)}^3 sampled triples")


def _related_pairs(model, samples):
    return [(a, b) for a in samples for b in samples if model.precedes(a, b)]


def _check_a3(model, samples, max_cases) -> Check:
    pairs = _related_pairs(model, samples)
    tested = 0
    for (x, x2), (y, y2) in itertools.product(pairs, repeat=2):
        if tested >= max_cases:
            break
        try:
            ok = model.precedes(compose(x, y), compose(x2, y2))
        except UnsupportedQuery:
            continue
        tested += 1
        if not ok:
            return Check("A3", FAIL, (x, x2, y, y2))
    if tested == 0:
        return Check("A3", NA, detail="model decides no compound pairs among the samples")
    return Check("A3", PASS, detail=f"{tested} compound queries")


def _eq_samples(samples):
    return [s for s in samples if s.is_equilibrium]


def _check_a4(model, samples, lambdas) -> Check:
    if not model.supports_scaling:
        return Check("A4", NA, detail="model declares no scaling action")
    eq = _eq_samples(samples)
    if not eq:
        return Check("A4", NA, detail="not required on non-equilibrium states")
    factors = sorted(set(lambdas) | {0.5, 2.0})
    for x, y in _related_pairs(model, eq):
        for lam in factors:
            if not model.precedes(scale(lam, x), scale(lam, y)):
                return Check("A4", FAIL, (lam, x, y))
    return Check("A4", PASS, detail=f"factors {factors}")


def _check_a5(model, samples, lambdas) -> Check:
    if not model.supports_scaling:
        return Check("A5", NA, detail="model declares no scaling action")
    eq = _eq_samples(samples)
    if not eq:
        return Check("A5", NA, detail="not required on non-equilibrium states")
    for x in eq:
        for lam in lambdas:
            if not adiabatically_equivalent(model, x, _mix(lam, x, x)):
                return Check("A5", FAIL, (lam, x))
    return Check("A5", PASS)


def _check_a6(model, samples, eps, catalysts) -> Check:
    if not catalysts or not eps:
        return Check("A6", NA, detail="no catalyst pairs or epsilons supplied")
    if not (model.supports_scaling and model.supports_composition):
        return Check("A6", NA, detail="model cannot form (X, eps Z) compounds")
    premises = 0
    for x, y in itertools.product(samples, repeat=2):
        for z0, z1 in catalysts:
            try:
                lhs = all(
                    model.precedes(compose(x, scale(e, z0)), compose(y, scale(e, z1))) for e in eps
                )
            except UnsupportedQuery:
                return Check("A6", NA, detail="catalysed compounds not decidable")
            if lhs:
                premises += 1
                if not model.precedes(x, y):
                    return Check("A6", FAIL, (x, y, z0, z1, eps))
    return Check("A6", PASS, detail=f"{premises} premises at {len(eps)} finite epsilons")


def _check_cp(model, samples, lambdas) -> Check:
    by_space: dict[str, list[StatePoint]] = {}
    for s in samples:
        by_space.setdefault(s.space_id, []).append(s)
    if model.supports_scaling:
        grid = (0.0, *lambdas, 1.0)
        for group in by_space.values():
            for lam in grid:
                mixes = [_mix(lam, x, y) for x in group for y in group]
                for a, b in itertools.combinations(mixes, 2):
                    if not comparable(model, a, b):
                        return Check("CP", FAIL, (a, b), f"lambda={lam:g}")
        return Check("CP", PASS, detail=f"lambda grid {list(grid)}")
    for group in by_space.values():
        for a, b in itertools.combinations(group, 2):
            if not comparable(model, a, b):
                return Check("CP", FAIL, (a, b))
    return Check("CP", PASS, detail="pairwise comparability of samples")


def check_axioms(
    model: RelationModel,
    sample_states: Sequence[StatePoint],
    epsilon_sequence: Sequence[float] = (),
    catalyst_pairs: Sequence[tuple[StatePoint, StatePoint]] = (),
    lambdas: Sequence[float] = DEFAULT_LAMBDAS,
    max_cases: int = 20000,
) -> AxiomReport:
    """Check A1-A6 and CP, returning one record per axiom.

    A6 is only a finite-epsilon necessary-condition test: whenever
    ``(X, eZ0) ≺ (Y, eZ1)`` holds for every supplied ``e``, ``X ≺ Y`` must hold.
    """
    samples = list(sample_states)
    if not samples:
        raise ValueError("check_axioms needs at least one sample state")
    eps = _validate_eps(epsilon_sequence)
    lambdas = tuple(float(l) for l in lambdas)
    report = AxiomReport("axioms")
    report.add(_check_a1(model, samples))
    report.add(_check_a2(model, samples))
    report.add(_check_a3(model, samples, max_cases))
    report.add(_check_a4(model, samples, lambdas))
    report.add(_check_a5(model, samples, lambdas))
    report.add(_check_a6(model, samples, eps, list(catalyst_pairs)))
    report.add(_check_cp(model, samples, lambdas))
    return report
