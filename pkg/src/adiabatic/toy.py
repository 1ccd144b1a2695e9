"""Two glued blocks with temperatures ``(t1, t2)``.

Allowed operations are rubbing (raising either temperature) and heat
conduction through the glue layer, which moves the state along the segment
towards ``(m, m)``, ``m = (t1 + t2) / 2``.  The forward sector of ``x`` is
therefore everything componentwise above some point of that segment.
Equilibrium states are the diagonal, with entropy ``S(T, T) = log T``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import StateError
from .nonequilibrium import Bound, EmbeddedModel
from .relations import GridRelation, PredicateRelation
from .states import COORD_ATOL, StatePoint

SPACE = "blocks"


@dataclass(frozen=True)
class BlockPairState:
    t1: float
    t2: float
    c: float = 1.0

    def __post_init__(self):
        if not (self.t1 > 0 and self.t2 > 0 and self.c > 0):
            raise StateError(f"temperatures and heat capacity must be positive: {self}")

    @property
    def is_equilibrium(self) -> bool:
        return self.t1 == self.t2

    @property
    def energy(self) -> float:
        return self.c * (self.t1 + self.t2)

    def point(self) -> StatePoint:
        return StatePoint(SPACE, (self.t1, self.t2), self.is_equilibrium)


def block_point(t1: float, t2: float) -> StatePoint:
    return BlockPairState(t1, t2).point()


def _temps(x) -> tuple[float, float]:
    if isinstance(x, BlockPairState):
        return x.t1, x.t2
    if isinstance(x, StatePoint):
        if len(x.coords) != 2:
            raise StateError(f"{x} is not a block-pair state")
        t1, t2 = x.coords
    else:
        t1, t2 = x
    if not (t1 > 0 and t2 > 0):
        raise StateError(f"temperatures must be positive, got ({t1}, {t2})")
    return float(t1), float(t2)


def sector_parameter_interval(x, y, atol: float = COORD_ATOL) -> tuple[float, float]:
    """Range of segment parameters ``s`` for which ``y`` lies above the point
    ``x + s (m - x)``; empty when ``lo > hi``."""
    x1, x2 = _temps(x)
    y1, y2 = _temps(y)
    m = 0.5 * (x1 + x2)
    lo, hi = 0.0, 1.0
    for xi, yi in ((x1, y1), (x2, y2)):
        d = m - xi
        slack = yi - xi + atol
        if d > 0:
            hi = min(hi, slack / d)
        elif d < 0:
            lo = max(lo, slack / d)
        elif slack < 0:
            return 1.0, 0.0
    return lo, hi


def toy_precedes(x, y) -> bool:
    """Closed-form forward-sector membership ``x ≺ y``."""
    lo, hi = sector_parameter_interval(x, y)
    return lo <= hi


def toy_s_minus(x) -> float:
    t1, t2 = _temps(x)
    return min(math.log(t1), math.log(t2))


def toy_s_plus(x) -> float:
    t1, t2 = _temps(x)
    return math.log(0.5 * (t1 + t2))


def toy_extended_entropy(x) -> float:
    """Extension obtained when a reversible engine may equilibrate the blocks."""
    t1, t2 = _temps(x)
    return 0.5 * (math.log(t1) + math.log(t2))


def toy_entropy(x) -> float:
    """Equilibrium entropy ``log T`` of a diagonal state."""
    t1, t2 = _temps(x)
    if abs(t1 - t2) > COORD_ATOL * max(t1, t2):
        raise StateError(f"{x} is not an equilibrium (diagonal) state")
    return math.log(t1)


def toy_band_witnesses(x) -> tuple[StatePoint, StatePoint]:
    t1, t2 = _temps(x)
    lo, m = min(t1, t2), 0.5 * (t1 + t2)
    return block_point(lo, lo), block_point(m, m)


def sector_polygon(x, top: float, right: float | None = None) -> list[tuple[float, float]]:
    """Ordered boundary vertices of the forward sector clipped to a box."""
    t1, t2 = _temps(x)
    right = top if right is None else right
    m = 0.5 * (t1 + t2)
    a, b = ((t1, t2), (m, m)) if t1 <= t2 else ((m, m), (t1, t2))
    verts = [(a[0], top), a, b, (right, b[1]), (right, top)]
    out: list[tuple[float, float]] = []
    for v in verts:
        if not out or out[-1] != v:
            out.append(v)
    return out


def toy_relation() -> PredicateRelation:
    return PredicateRelation(SPACE, toy_precedes)


def toy_embedded_model(c: float = 1.0) -> EmbeddedModel:
    """Analytic toy model with closed-form ``S_-``/``S_+`` and energy ``c (t1 + t2)``."""

    def band(x):
        w1, w2 = toy_band_witnesses(x)
        return Bound(toy_s_minus(x), w1), Bound(toy_s_plus(x), w2)

    return EmbeddedModel(
        relation=toy_relation(),
        is_equilibrium=lambda x: x.coords[0] == x.coords[1],
        entropy=toy_entropy,
        equilibrium_states=lambda sp: [],
        energy=lambda x: c * sum(_temps(x)),
        closed_form=band,
    )


# ---------------------------------------------------------------------------
# grid discretization


def _commensurate(step: float, h: float) -> bool:
    r = step / h
    return r >= 1 - 1e-9 and abs(r - round(r)) <= 1e-9


def toy_grid_model(
    bounds: tuple[float, float] = (1.0, 5.0),
    h: float = 0.05,
    rub_step: float | None = None,
    fourier_step: float | None = None,
    rubbing: bool = True,
    conduction: bool = True,
) -> GridRelation:
    """Grid version of the toy relation on ``[lo, hi]^2``.

    Generators: ``+rub_step`` on either temperature, and a conduction step
    moving both temperatures ``fourier_step`` towards their mean (never past
    it; shorter moves are rounded down to whole cells).
    """
    lo, hi = map(float, bounds)
    rub_step = h if rub_step is None else rub_step
    fourier_step = h if fourier_step is None else fourier_step
    if not (h > 0 and lo > 0 and hi > lo):
        raise ValueError("need 0 < lo < hi and h > 0")
    if not (_commensurate(rub_step, h) and _commensurate(fourier_step, h)):
        raise ValueError("rub_step and fourier_step must be positive multiples of h")

    gens = []
    if rubbing:
        gens.append(("rub1", lambda c: c + np.array([rub_step, 0.0])))
        gens.append(("rub2", lambda c: c + np.array([0.0, rub_step])))
    if conduction:

        def conduct(c):
            half = 0.5 * (c[:, 1] - c[:, 0])
            cells = np.floor(np.abs(half) / h + 1e-9) * h
            move = np.sign(half) * np.minimum(fourier_step, cells)
            out = np.column_stack([c[:, 0] + move, c[:, 1] - move])
            out[move == 0] = np.nan
            return out

        gens.append(("conduct", conduct))
    return GridRelation(
        SPACE,
        (lo, lo),
        (hi, hi),
        (h, h),
        tuple(gens),
        equilibrium=lambda c: abs(c[0] - c[1]) <= 1e-9 * h,
    )


def toy_grid_embedded(grid: GridRelation, c: float = 1.0) -> EmbeddedModel:
    """Generic (enumerating) embedded model over a square toy grid."""
    if grid.shape[0] != grid.shape[1] or grid.lower[0] != grid.lower[1]:
        raise ValueError("toy grid must be square")
    diag = [grid.state_at((i, i)) for i in range(grid.shape[0])]
    diag = [StatePoint(SPACE, d.coords, True) for d in diag]
    return EmbeddedModel(
        relation=grid,
        is_equilibrium=lambda x: abs(x.coords[0] - x.coords[1]) <= 1e-9,
        entropy=lambda x: math.log(x.coords[0]),
        equilibrium_states=lambda sp: diag if sp == SPACE else [],
        energy=lambda x: c * sum(_temps(x)),
        resolution=grid.h[0] / grid.lower[0],
    )
