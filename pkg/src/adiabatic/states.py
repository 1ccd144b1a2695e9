"""State points, scaled copies and compound states.

Compound states are kept in a canonical flattened form: a tuple of
``ScaledState`` parts.  Composition concatenates parts, scaling multiplies
every part's scale.  Zero-scale parts never appear; callers that need a
formal ``0 * X`` simply leave the part out (see :func:`combination`).
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Union

from .errors import StateError

COORD_ATOL = 1e-12


@dataclass(frozen=True)
class StatePoint:
    """A point of one state space.

    ``name`` is an optional label used by finite models; two points with the
    same coordinates but different names are different states.
    """

    space_id: str
    coords: tuple[float, ...] = ()
    is_equilibrium: bool = False
    name: str = ""

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if not all(math.isfinite(c) for c in coords):
            raise StateError(f"non-finite coordinates in {self.label}: {coords}")
        object.__setattr__(self, "coords", coords)

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        inner = ", ".join(f"{c:g}" for c in self.coords)
        return f"{self.space_id}({inner})"

    def __str__(self):
        return self.label


@dataclass(frozen=True)
class ScaledState:
    scale: float
    state: StatePoint

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise StateError(f"scale must be positive and finite, got {self.scale!r}")
        object.__setattr__(self, "scale", float(self.scale))

    def __str__(self):
        if self.scale == 1.0:
            return str(self.state)
        return f"{self.scale:g}*{self.state}"


@dataclass(frozen=True)
class CompoundState:
    parts: tuple[ScaledState, ...] = field(default_factory=tuple)

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise StateError("a compound state needs at least one part")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, state: "StateLike") -> "CompoundState":
        return as_compound(state)

    @property
    def is_simple(self) -> bool:
        """A single unscaled part, i.e. just a point of one space."""
        return len(self.parts) == 1 and self.parts[0].scale == 1.0

    @property
    def single(self) -> StatePoint:
        if not self.is_simple:
            raise StateError(f"{self} is not a single unscaled state")
        return self.parts[0].state

    def matter_content(self) -> dict[str, float]:
        """Total scale carried by each elementary space."""
        content: dict[str, float] = defaultdict(float)
        for p in self.parts:
            content[p.state.space_id] += p.scale
        return dict(content)

    def __str__(self):
        if len(self.parts) == 1:
            return str(self.parts[0])
        return "(" + ", ".join(str(p) for p in self.parts) + ")"


StateLike = Union[StatePoint, ScaledState, CompoundState]


def as_compound(state: StateLike) -> CompoundState:
    if isinstance(state, CompoundState):
        return state
    if isinstance(state, ScaledState):
        return CompoundState((state,))
    if isinstance(state, StatePoint):
        return CompoundState((ScaledState(1.0, state),))
    raise TypeError(f"cannot interpret {state!r} as a state")


def compose(*parts: StateLike) -> CompoundState:
    """Juxtapose states without interaction; nested compounds are flattened."""
    if not parts:
        raise StateError("compose() needs at least one state")
    flat: list[ScaledState] = []
    for p in parts:
        flat.extend(as_compound(p).parts)
    return CompoundState(tuple(flat))


def scale(lam: float, state: StateLike) -> CompoundState:
    """Scaled copy ``lam * state``; distributes over compound parts."""
    if not (lam > 0 and math.isfinite(lam)):
        raise StateError(f"scale factor must be positive and finite, got {lam!r}")
    c = as_compound(state)
    return CompoundState(tuple(ScaledState(lam * p.scale, p.state) for p in c.parts))


def combination(terms: Iterable[tuple[float, StatePoint]]) -> CompoundState:
    """Build ``(a1 X1, a2 X2, ...)`` skipping zero coefficients.

    Negative coefficients are rejected; move such terms to the other side of
    the relation instead.
    """
    parts = []
    for coef, st in terms:
        if coef < 0:
            raise StateError(f"negative coefficient {coef} in combination")
        if coef > 0:
            parts.append(ScaledState(coef, st))
    return CompoundState(tuple(parts))


def same_content(a: CompoundState, b: CompoundState, atol: float = COORD_ATOL) -> bool:
    ca, cb = a.matter_content(), b.matter_content()
    keys = set(ca) | set(cb)
    return all(abs(ca.get(k, 0.0) - cb.get(k, 0.0)) <= atol * max(1.0, ca.get(k, 0.0)) for k in keys)

