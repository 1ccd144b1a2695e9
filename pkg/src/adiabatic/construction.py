"""Entropy built from the accessibility relation alone.

With reference states ``X0 ≺≺ X1`` the entropy of ``X`` is the largest
``lam`` such that ``((1 - lam) X0, lam X1) ≺ X`` (equivalently the smallest
``lam`` with ``X ≺ ((1 - lam) X0, lam X1)``).  Outside ``[0, 1]`` terms with
negative coefficients are moved to the other side of the relation, e.g. for
``lam > 1`` the query becomes ``lam X1 ≺ ((lam - 1) X0, X)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import ModelDefectError, NonMonotoneError
from .relations import RelationModel, strictly_precedes
from .states import StatePoint, combination

DEFAULT_TOL = 1e-6
MAX_DOUBLINGS = 60


@dataclass(frozen=True)
class ReferencePair:
    x0: StatePoint
    x1: StatePoint

    def __post_init__(self):
        if self.x0.space_id != self.x1.space_id:
            raise ValueError("reference states must belong to the same space")


@dataclass(frozen=True, eq=False)
class EntropyEvaluator:
    """Canonical entropy on one space, normalized to S(x0)=0, S(x1)=1."""

    model: RelationModel
    refs: ReferencePair
    tol: float = DEFAULT_TOL
    probes: int = 5

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if not strictly_precedes(self.model, self.refs.x0, self.refs.x1):
            raise ModelDefectError(
                f"reference states are not strictly ordered: {self.refs.x0} ≺≺ {self.refs.x1} fails"
            )

    def __call__(self, x: StatePoint) -> float:
        return canonical_entropy(self, x)


def _split(terms):
    """Sort signed terms into (left, right) sides with positive coefficients."""
    left, right = [], []
    for coef, st, side in terms:
        if coef == 0:
            continue
        if (coef > 0) == (side == "L"):
            left.append((abs(coef), st))
        else:
            right.append((abs(coef), st))
    return combination(left), combination(right)


def reference_below(model: RelationModel, refs: ReferencePair, x: StatePoint, lam: float) -> bool:
    """``((1 - lam) X0, lam X1) ≺ x``, rewritten for lam outside [0, 1]."""
    a, b = _split([(1.0 - lam, refs.x0, "L"), (lam, refs.x1, "L"), (1.0, x, "R")])
    return model.precedes(a, b)


def reference_above(model: RelationModel, refs: ReferencePair, x: StatePoint, lam: float) -> bool:
    """``x ≺ ((1 - lam) X0, lam X1)``, rewritten for lam outside [0, 1]."""
    a, b = _split([(1.0, x, "L"), (1.0 - lam, refs.x0, "R"), (lam, refs.x1, "R")])
    return model.precedes(a, b)


def _threshold(pred, tol: float, probes: int) -> float:
    """Locate the switch point of a monotone boolean predicate.

    ``pred`` must be True below the threshold and False above it.  The
    bracket starts at [0, 1] and is extended by doubling.  Every evaluation
    is recorded; a True above a False raises :class:`NonMonotoneError`.
    """
    seen: dict[float, bool] = {}

    def ev(lam: float) -> bool:
        if lam not in seen:
            seen[lam] = bool(pred(lam))
        return seen[lam]

    lo, hi = 0.0, 1.0
    p_lo, p_hi = ev(lo), ev(hi)
    if p_hi and not p_lo:
        raise NonMonotoneError("predicate false at lam=0 but true at lam=1")
    if p_hi:
        step = 1.0
        for _ in range(MAX_DOUBLINGS):
            lo, hi = hi, hi + step
            step *= 2
            if not ev(hi):
                break
        else:
            raise NonMonotoneError("predicate never turned false while extending upward")
    elif not p_lo:
        step = 1.0
        for _ in range(MAX_DOUBLINGS):
            hi, lo = lo, lo - step
            step *= 2
            if ev(lo):
                break
        else:
            raise NonMonotoneError("predicate never turned true while extending downward")
    for t in np.linspace(lo, hi, probes + 2)[1:-1]:
        ev(float(t))
    trues = [l for l, v in seen.items() if v]
    falses = [l for l, v in seen.items() if not v]
    lo = max(trues)
    hi = min(l for l in falses if l > lo) if any(l > lo for l in falses) else hi
    if falses and min(falses) < lo:
        raise NonMonotoneError(f"predicate re-crossed: false at {min(falses)!r}, true at {lo!r}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if ev(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def canonical_entropy(ev: EntropyEvaluator, x: StatePoint, form: str = "sup") -> float:
    """Entropy of ``x`` on the scale S(X0)=0, S(X1)=1, to within ``ev.tol``.

    ``form="sup"`` searches ``sup{lam : ((1-lam)X0, lam X1) ≺ x}``;
    ``form="inf"`` searches ``inf{lam : x ≺ ((1-lam)X0, lam X1)}``.
    """
    if x.space_id != ev.refs.x0.space_id:
        raise ValueError(f"state {x} is not in the reference space {ev.refs.x0.space_id!r}")
    if form == "sup":
        return _threshold(lambda l: reference_below(ev.model, ev.refs, x, l), ev.tol, ev.probes)
    if form == "inf":
        return _threshold(lambda l: not reference_above(ev.model, ev.refs, x, l), ev.tol, ev.probes)
    raise ValueError(f"form must be 'sup' or 'inf', got {form!r}")


class AffineFit(NamedTuple):
    alpha: float
    beta: float
    max_residual: float


def affine_uniqueness_check(
    s_a: Mapping[Hashable, float],
    s_b: Mapping[Hashable, float],
    samples: Sequence[Hashable] | None = None,
) -> AffineFit:
    """Least-squares fit ``s_b ≈ alpha * s_a + beta`` over ``samples``.

    Two entropies for the same relation must agree up to such a change of
    scale with ``alpha > 0``; a non-positive slope is a model violation.
    """
    keys = list(samples) if samples is not None else list(s_a)
    if len(keys) < 2:
        raise ValueError("need at least two samples for an affine fit")
    a = np.array([s_a[k] for k in keys], dtype=float)
    b = np.array([s_b[k] for k in keys], dtype=float)
    if np.ptp(a) == 0:
        raise ValueError("all reference entropies are equal; the entropy is a constant")
    design = np.column_stack([a, np.ones_like(a)])
    (alpha, beta), *_ = np.linalg.lstsq(design, b, rcond=None)
    if alpha <= 0:
        raise ModelDefectError(f"fitted slope {alpha:g} is not positive")
    resid = float(np.max(np.abs(b - (alpha * a + beta))))
    return AffineFit(float(alpha), float(beta), resid)


def availability(U: float, U0: float, T0: float, S: float, S0: float) -> float:
    """Maximum work ``(U - U0) - T0 (S - S0)`` extractable in an environment at T0."""
    if not T0 > 0:
        raise ValueError("environment temperature T0 must be positive")
    return (U - U0) - T0 * (S - S0)
