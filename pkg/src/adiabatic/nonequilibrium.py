"""Entropy bounds for non-equilibrium states.

For a state ``x`` of the enlarged space, ``S_-(x)`` is the largest
equilibrium entropy from which ``x`` can be reached and ``S_+(x)`` the
smallest equilibrium entropy reachable from ``x``.  This module computes
both, checks their structural properties on models, and derives
maximum-work bounds from them.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import ModelDefectError
from .relations import FiniteRelation, RelationModel, adiabatically_equivalent, comparable
from .reports import NA, Check, Report, check
from .states import StatePoint

CHECK_TOL = 1e-9


class Bound(NamedTuple):
    value: float
    witness: StatePoint | None


@dataclass(frozen=True, eq=False)
class EmbeddedModel:
    """A relation on the enlarged space with a marked equilibrium subset.

    ``equilibrium_states(space_id)`` lists the equilibrium candidates the
    sup/inf range over.  ``closed_form`` may supply exact ``(S_-, S_+)``
    bounds; generic enumeration is used otherwise.  ``resolution`` is the
    accuracy bound of grid discretizations (0 for exact models).
    """

    relation: RelationModel
    is_equilibrium: Callable[[StatePoint], bool]
    entropy: Callable[[StatePoint], float]
    equilibrium_states: Callable[[str], Sequence[StatePoint]]
    energy: Callable[[StatePoint], float] | None = None
    compose: Callable[[StatePoint, StatePoint], StatePoint] | None = None
    closed_form: Callable[[StatePoint], tuple[Bound | None, Bound | None]] | None = None
    resolution: float = 0.0

    def precedes(self, a, b) -> bool:
        return self.relation.precedes(a, b)

    @classmethod
    def finite(
        cls,
        relation: FiniteRelation,
        entropy: Mapping[str, float],
        energy: Mapping[str, float] | None = None,
        vectorized: bool = True,
    ) -> "EmbeddedModel":
        """Wrap a finite relation; product equilibrium nodes get additive entropy.

        With ``vectorized`` the sup/inf are read off the relation matrix in one
        pass per state (same tie-breaking as the generic enumeration).
        """
        inverse = {v: k for k, v in relation.products.items()}
        table: dict[str, float] = {}

        def S(x: StatePoint) -> float:
            if x.name in table:
                return table[x.name]
            if x.name in entropy:
                val = float(entropy[x.name])
            elif x.name in inverse and x.is_equilibrium:
                a, b = inverse[x.name]
                val = S(relation.node(a)) + S(relation.node(b))
            else:
                raise ModelDefectError(f"no equilibrium entropy for node {x.name!r}")
            table[x.name] = val
            return val

        eq_by_space: dict[str, list[StatePoint]] = {}
        for n in relation.nodes:
            if n.is_equilibrium:
                eq_by_space.setdefault(n.space_id, []).append(n)
        for nodes in eq_by_space.values():
            for n in nodes:
                S(n)

        eq_index = {
            sp: (np.array([relation.index(z) for z in zs]), np.array([S(z) for z in zs]), zs)
            for sp, zs in eq_by_space.items()
        }

        def band(x: StatePoint) -> tuple[Bound, Bound]:
            k = relation.index(x)
            if x.space_id not in eq_index:
                raise ModelDefectError(f"space {x.space_id!r} has no equilibrium states (N2 violated)")
            idx, vals, zs = eq_index[x.space_id]
            below = relation.matrix[idx, k]
            above = relation.matrix[k, idx]
            lo = int(np.argmax(np.where(below, vals, -np.inf)))
            hi = int(np.argmin(np.where(above, vals, np.inf)))
            # a missing side is reported as None; s_minus/s_plus raise for it
            return (
                Bound(float(vals[lo]), zs[lo]) if below.any() else None,
                Bound(float(vals[hi]), zs[hi]) if above.any() else None,
            )

        energy_fn = None
        if energy is not None:
            energy_fn = lambda x: float(energy[x.name])  # noqa: E731
        return cls(
            relation=relation,
            is_equilibrium=lambda x: x.is_equilibrium,
            entropy=S,
            equilibrium_states=lambda sp: eq_by_space.get(sp, []),
            energy=energy_fn,
            compose=relation.compose_nodes if relation.products else None,
            closed_form=band if vectorized else None,
        )


@dataclass(frozen=True)
class EntropyBand:
    s_minus: float
    s_plus: float
    witness_minus: StatePoint | None = None
    witness_plus: StatePoint | None = None

    @property
    def delta_s(self) -> float:
        return self.s_plus - self.s_minus


def s_minus(model: EmbeddedModel, x: StatePoint) -> Bound:
    """Largest equilibrium entropy ``S(X')`` over ``X' ≺ x`` with its maximizer."""
    if model.closed_form is not None:
        b = model.closed_form(x)[0]
        if b is None:
            raise ModelDefectError(f"no equilibrium predecessor of {x} (N2 violated)")
        return b
    best: Bound | None = None
    for z in model.equilibrium_states(x.space_id):
        if model.precedes(z, x):
            s = model.entropy(z)
            if best is None or s > best.value:
                best = Bound(s, z)
    if best is None:
        raise ModelDefectError(f"no equilibrium predecessor of {x} (N2 violated)")
    return best


def s_plus(model: EmbeddedModel, x: StatePoint) -> Bound:
    """Smallest equilibrium entropy ``S(X'')`` over ``x ≺ X''`` with its minimizer."""
    if model.closed_form is not None:
        b = model.closed_form(x)[1]
        if b is None:
            raise ModelDefectError(f"no equilibrium successor of {x} (N2 violated)")
        return b
    best: Bound | None = None
    for z in model.equilibrium_states(x.space_id):
        if model.precedes(x, z):
            s = model.entropy(z)
            if best is None or s < best.value:
                best = Bound(s, z)
    if best is None:
        raise ModelDefectError(f"no equilibrium successor of {x} (N2 violated)")
    return best


def entropy_band(model: EmbeddedModel, x: StatePoint) -> EntropyBand:
    lo, hi = s_minus(model, x), s_plus(model, x)
    return EntropyBand(lo.value, hi.value, lo.witness, hi.witness)


# ---------------------------------------------------------------------------
# structural checks


def _bands(model, states):
    return {x: entropy_band(model, x) for x in states}


def verify_prop1(
    model: EmbeddedModel,
    samples: Sequence[StatePoint],
    candidate_extension: Callable[[StatePoint], float] | None = None,
    pairs: Sequence[tuple[StatePoint, StatePoint]] | None = None,
    composition: bool | None = None,
    tol: float = CHECK_TOL,
) -> Report:
    """Check properties (a)-(g) of ``S_-``/``S_+`` on sampled states.

    ``pairs`` restricts (d)/(e) to the given ordered pairs; by default all
    ordered pairs of samples are used.  ``composition=None`` runs the
    super/subadditivity chain when the model can compose, ``True`` demands it.
    """
    samples = list(dict.fromkeys(samples))
    if composition and model.compose is None:
        raise ValueError("composition check requested but the model has no compose action")
    bands = _bands(model, samples)
    if pairs is None:
        pairs = [(x, y) for x in samples for y in samples if x.space_id == y.space_id]
    else:
        for x, y in pairs:
            for s in (x, y):
                if s not in bands:
                    bands[s] = entropy_band(model, s)
    rep = Report("prop1")
    rel = {}

    def prec(a, b):
        if (a, b) not in rel:
            rel[a, b] = model.precedes(a, b)
        return rel[a, b]

    bad = next((x for x, b in bands.items() if not (math.isfinite(b.s_minus) and math.isfinite(b.s_plus))), None)
    rep.add(check("a_finite", bad is None, (bad,)))

    bad = None
    for x, b in bands.items():
        if b.s_minus > b.s_plus + tol:
            bad = (x, b.s_minus, b.s_plus)
            break
        if model.is_equilibrium(x):
            s = model.entropy(x)
            if abs(b.s_minus - s) > tol or abs(b.s_plus - s) > tol:
                bad = (x, b.s_minus, b.s_plus)
                break
    rep.add(check("b_agree_on_equilibrium", bad is None, bad or ()))

    bad = None
    for x, b in bands.items():
        w1, w2 = b.witness_minus, b.witness_plus
        if w1 is None or w2 is None:
            continue
        if not (model.is_equilibrium(w1) and model.is_equilibrium(w2) and prec(w1, x) and prec(x, w2)):
            bad = (w1, x, w2)
            break
        if abs(model.entropy(w1) - b.s_minus) > tol or abs(model.entropy(w2) - b.s_plus) > tol:
            bad = (w1, x, w2)
            break
    rep.add(check("c_attained", bad is None, bad or ()))

    bad_d = bad_e = None
    n_related = 0
    for x, y in pairs:
        bx, by = bands[x], bands[y]
        related = prec(x, y)
        if related:
            n_related += 1
            if bad_d is None and (bx.s_minus > by.s_minus + tol or bx.s_plus > by.s_plus + tol):
                bad_d = (x, y)
        if bad_e is None and bx.s_plus <= by.s_minus and not related:
            bad_e = (x, y)
    rep.add(check("d_monotone", bad_d is None, bad_d or (), f"{n_related} related pairs"))
    rep.add(check("e_sufficient", bad_e is None, bad_e or (), f"{len(pairs)} pairs"))

    if composition is False or model.compose is None:
        rep.add(Check("f_super_subadditive", NA, detail="no compose action"))
    else:
        bad = None
        count = 0
        for x1, x2 in itertools.product(samples, repeat=2):
            if x1.space_id != x2.space_id:
                continue
            try:
                x12 = model.compose(x1, x2)
            except Exception:  # unmaterialized product
                continue
            count += 1
            b1, b2, b12 = bands[x1], bands[x2], entropy_band(model, x12)
            chain = (b1.s_minus + b2.s_minus, b12.s_minus, b12.s_plus, b1.s_plus + b2.s_plus)
            if any(u > v + tol for u, v in zip(chain, chain[1:])):
                bad = (x1, x2)
                break
        if count == 0:
            rep.add(Check("f_super_subadditive", NA, detail="no materialized products"))
        else:
            rep.add(check("f_super_subadditive", bad is None, bad or (), f"{count} products"))

    if candidate_extension is None:
        rep.add(Check("g_sandwich", NA, detail="no candidate extension"))
    else:
        bad = None
        for x, b in bands.items():
            v = candidate_extension(x)
            if not (b.s_minus - tol <= v <= b.s_plus + tol):
                bad = (x, v)
                break
        rep.add(check("g_sandwich", bad is None, bad or ()))
    rep.values["samples"] = len(samples)
    return rep


@dataclass
class Theorem4Result:
    conditions: dict[str, bool]
    witnesses: dict[str, tuple] = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return len(set(self.conditions.values())) == 1

    def report(self) -> Report:
        rep = Report("thm4")
        vals = self.conditions
        if self.consistent:
            state = "true" if next(iter(vals.values())) else "false"
            rep.add(Check("consistency", "pass", detail=f"conditions {state}, consistent"))
        else:
            wit = tuple(sorted(k for k, v in vals.items() if v))
            rep.add(Check("consistency", "fail", wit, "conditions disagree"))
        for k, v in vals.items():
            rep.values[f"condition_{k}"] = v
        for k, w in self.witnesses.items():
            rep.values[f"witness_{k}"] = w
        rep.values["condition_i"] = vals["ii"]
        rep.values["condition_iii"] = vals["ii"]
        return rep


def check_theorem4_preconditions(model: EmbeddedModel, states, eq, bands, tol=CHECK_TOL):
    rel = model.relation
    if isinstance(rel, FiniteRelation):
        m = rel.matrix
        if not m.diagonal().all() or (((m.astype(int) @ m.astype(int)) > 0) & ~m).any():
            raise ModelDefectError("relation is not reflexive and transitive (N1)")
    for z, w in itertools.product(eq, repeat=2):
        if model.precedes(z, w) != (model.entropy(z) <= model.entropy(w) + tol):
            raise ModelDefectError(f"equilibrium entropy does not characterize {z} vs {w}")
    values = sorted({model.entropy(z) for z in eq})
    for x in states:
        b = bands[x]
        if b.s_plus - b.s_minus > tol and not any(b.s_minus + tol < v < b.s_plus - tol for v in values):
            raise ModelDefectError(
                f"no equilibrium state with entropy strictly between S_-({x}) and S_+({x}); "
                "a finite model needs one for the equivalences to hold"
            )


def verify_theorem4(model: EmbeddedModel, space: str | None = None, tol: float = CHECK_TOL) -> Theorem4Result:
    """Evaluate conditions (ii), (iv), (v), (vi) on one space of a finite model.

    (i) and (iii) are reported through (ii).  Preconditions (closure, N2,
    entropy characterizing the equilibrium relation, and an equilibrium
    state inside every non-trivial band) raise :class:`ModelDefectError`.
    """
    rel = model.relation
    if not isinstance(rel, FiniteRelation):
        raise TypeError("verify_theorem4 needs a finite relation")
    space = space or rel.nodes[0].space_id
    states = rel.states_in(space)
    eq = [z for z in states if model.is_equilibrium(z)]
    bands = _bands(model, states)  # raises on N2 violations
    check_theorem4_preconditions(model, states, eq, bands, tol)

    conds: dict[str, bool] = {}
    wits: dict[str, tuple] = {}
    bad = next((x for x in states if bands[x].delta_s > tol), None)
    conds["ii"] = bad is None
    if bad is not None:
        wits["ii"] = (bad,)
    bad = next(((x, y) for x, y in itertools.combinations(states, 2) if not comparable(rel, x, y)), None)
    conds["iv"] = bad is None
    if bad is not None:
        wits["iv"] = bad
    bad = next(((x, z) for x in states for z in eq if not comparable(rel, x, z)), None)
    conds["v"] = bad is None
    if bad is not None:
        wits["v"] = bad
    bad = next((x for x in states if not any(adiabatically_equivalent(rel, x, z) for z in eq)), None)
    conds["vi"] = bad is None
    if bad is not None:
        wits["vi"] = (bad,)
    return Theorem4Result(conds, wits)


# ---------------------------------------------------------------------------
# maximum work


@dataclass(frozen=True)
class MaxWorkBounds:
    lower: float
    upper: float
    T0: float
    x0: StatePoint
    U0: float
    S0: float

    def __post_init__(self):
        if self.lower > self.upper + CHECK_TOL:
            raise ValueError("lower work bound exceeds upper bound")

    def contains(self, phi: float, tol: float = CHECK_TOL) -> bool:
        return self.lower - tol <= phi <= self.upper + tol


def max_work_bounds(model: EmbeddedModel, x: StatePoint, x0: StatePoint, T0: float) -> MaxWorkBounds:
    """Bounds on the work extractable from ``x`` ending in equilibrium ``x0``
    with a reservoir at ``T0``: ``(U-U0) - T0 (S_± - S0)``."""
    if not T0 > 0:
        raise ValueError("T0 must be positive")
    if model.energy is None:
        raise ValueError("model declares no energy map")
    if not model.is_equilibrium(x0):
        raise ValueError(f"final state {x0} is not an equilibrium state")
    U, U0, S0 = model.energy(x), model.energy(x0), model.entropy(x0)
    band = entropy_band(model, x)
    return MaxWorkBounds(
        lower=(U - U0) - T0 * (band.s_plus - S0),
        upper=(U - U0) - T0 * (band.s_minus - S0),
        T0=T0,
        x0=x0,
        U0=U0,
        S0=S0,
    )


def gb_entropy(phi: float, U: float, U0: float, T0: float, S0: float) -> float:
    """Entropy defined by inverting the maximum-work relation."""
    if not T0 > 0:
        raise ValueError("T0 must be positive")
    return S0 + ((U - U0) - phi) / T0


def gb_checks(
    model: EmbeddedModel,
    phi_oracle: Callable[[StatePoint], float],
    samples: Sequence[StatePoint],
    x0: StatePoint,
    T0: float,
    pairs: Sequence[tuple[StatePoint, StatePoint]] | None = None,
    tol: float = CHECK_TOL,
) -> Report:
    """Sandwich ``S_- <= S_GB <= S_+`` on samples and monotonicity on related pairs."""
    if not T0 > 0:
        raise ValueError("T0 must be positive")
    if model.energy is None:
        raise ValueError("model declares no energy map")
    U0, S0 = model.energy(x0), model.entropy(x0)

    def sgb(x):
        return gb_entropy(phi_oracle(x), model.energy(x), U0, T0, S0)

    rep = Report("gb")
    bad = None
    for x in samples:
        b = entropy_band(model, x)
        v = sgb(x)
        if not (b.s_minus - tol <= v <= b.s_plus + tol):
            bad = (x, v, b.s_minus, b.s_plus)
            break
    rep.add(check("gb_sandwich", bad is None, bad or (), f"{len(samples)} samples"))
    if pairs is None:
        pairs = [(x, y) for x in samples for y in samples if x != y and model.precedes(x, y)]
    bad = None
    for x, y in pairs:
        if not model.precedes(x, y):
            continue
        if sgb(x) > sgb(y) + tol:
            bad = (x, y)
            break
    rep.add(check("gb_monotone", bad is None, bad or (), f"{len(pairs)} related pairs"))
    return rep
