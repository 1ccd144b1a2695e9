"""Adaptive Simpson quadrature."""

from __future__ import annotations

import math
from typing import Callable

MAX_DEPTH = 50


def adaptive_simpson(
    f: Callable[[float], float],
    a: float,
    b: float,
    rtol: float = 1e-10,
    atol: float = 1e-14,
    max_depth: int = MAX_DEPTH,
) -> float:
    """Integrate ``f`` over ``[a, b]`` by recursive Simpson bisection.

    Each panel is accepted when the Richardson estimate ``|S2 - S1| / 15``
    falls below its share of ``max(atol, rtol * |coarse estimate|)``.
    """
    if a == b:
        return 0.0
    fa, fm, fb = f(a), f(0.5 * (a + b)), f(b)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    # a 5-point initial estimate keeps the global tolerance honest when
    # the 3-point rule happens to be accidentally exact
    q = [a + (b - a) * k / 4.0 for k in range(5)]
    fq = [fa, f(q[1]), fm, f(q[3]), fb]
    ref = (b - a) / 12.0 * (fq[0] + 4 * fq[1] + 2 * fq[2] + 4 * fq[3] + fq[4])
    eps = max(atol, rtol * abs(ref))
    return _recurse(f, a, b, fa, fm, fb, whole, eps, max_depth)


def _recurse(f, a, b, fa, fm, fb, whole, eps, depth):
    m = 0.5 * (a + b)
    lm, rm = 0.5 * (a + m), 0.5 * (m + b)
    flm, frm = f(lm), f(rm)
    left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
    right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * eps:
        if not math.isfinite(delta):
            raise ArithmeticError("non-finite integrand value")
        return left + right + delta / 15.0
    return _recurse(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) + _recurse(
        f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1
    )
