"""Equilibrium equations of state, path-integrated entropy and Planck's
empirical-to-absolute temperature conversion.

An :class:`EquilibriumEOS` gives internal energy ``U(theta, V)`` and
pressure ``P(theta, V)`` in terms of an empirical temperature ``theta``.
When ``theta`` is not the absolute temperature the conversion is obtained
from the EOS itself via :func:`planck_absolute_temperature`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import SingularIntegrandError
from .quadrature import adaptive_simpson

FD_REL_STEP = 1e-5
QUAD_RTOL = 1e-10


@dataclass(frozen=True, eq=False)
class EquilibriumEOS:
    """``U`` and ``P`` on the rectangle ``theta_range x v_range``.

    ``absolute`` says whether ``theta`` already is the absolute temperature;
    otherwise ``theta0``/``t0`` anchor the Planck conversion.  ``entropy`` is
    an optional closed form used by tests as an oracle.
    """

    name: str
    U: Callable[[float, float], float]
    P: Callable[[float, float], float]
    theta_range: tuple[float, float]
    v_range: tuple[float, float]
    absolute: bool = True
    theta0: float = 1.0
    t0: float = 1.0
    entropy: Callable[[float, float], float] | None = None

    def contains(self, theta: float, v: float) -> bool:
        (t_lo, t_hi), (v_lo, v_hi) = self.theta_range, self.v_range
        return t_lo <= theta <= t_hi and v_lo <= v <= v_hi

    def temperature(self, theta: float, v: float | None = None) -> float:
        if self.absolute:
            return theta
        v = self.v_range[0] if v is None else v
        return planck_absolute_temperature(self, self.theta0, self.t0, theta, v)


def ideal_gas(
    c: float = 1.5,
    R: float = 1.0,
    theta_power: float = 1.0,
    theta_range=(0.1, 100.0),
    v_range=(0.1, 100.0),
) -> EquilibriumEOS:
    """Ideal gas ``U = c R T``, ``P V = R T`` with empirical ``theta = T**theta_power``.

    ``theta0 = t0 = 1`` so the Planck conversion is anchored at ``T = 1``.
    """
    p = theta_power

    def T(theta):
        return theta ** (1.0 / p)

    return EquilibriumEOS(
        name=f"ideal-gas(c={c:g},R={R:g},power={p:g})",
        U=lambda th, v: c * R * T(th),
        P=lambda th, v: R * T(th) / v,
        theta_range=theta_range,
        v_range=v_range,
        absolute=(p == 1.0),
        entropy=lambda th, v: c * R * math.log(T(th)) + R * math.log(v),
    )


def van_der_waals(
    c: float = 1.5,
    R: float = 1.0,
    a: float = 0.5,
    b: float = 0.05,
    theta_power: float = 1.0,
    theta_range=(0.1, 100.0),
    v_range=(0.5, 100.0),
) -> EquilibriumEOS:
    """Van der Waals fluid ``U = c R T - a/V``, ``P = R T/(V - b) - a/V**2``."""
    p = theta_power
    if v_range[0] <= b:
        raise ValueError("volume range must stay above the co-volume b")

    def T(theta):
        return theta ** (1.0 / p)

    return EquilibriumEOS(
        name=f"van-der-waals(c={c:g},R={R:g},a={a:g},b={b:g},power={p:g})",
        U=lambda th, v: c * R * T(th) - a / v,
        P=lambda th, v: R * T(th) / (v - b) - a / v**2,
        theta_range=theta_range,
        v_range=v_range,
        absolute=(p == 1.0),
        entropy=lambda th, v: c * R * math.log(T(th)) + R * math.log(v - b),
    )


PRESETS = {"ideal-gas": ideal_gas, "van-der-waals": van_der_waals}


def eos_preset(name: str, **params) -> EquilibriumEOS:
    try:
        factory = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown EOS preset {name!r}; choose from {sorted(PRESETS)}") from None
    return factory(**params)


def _partial(f: Callable[[float], float], x: float) -> float:
    h = FD_REL_STEP * max(abs(x), 1e-8)
    return (f(x + h) - f(x - h)) / (2.0 * h)


def planck_absolute_temperature(
    eos: EquilibriumEOS, theta0: float, t0: float, theta: float, v: float
) -> float:
    """Absolute temperature at empirical temperature ``theta``.

    ``T = t0 * exp(int_{theta0}^{theta} dP/dtheta / (P + dU/dV) dtheta')`` with
    the partial derivatives taken at fixed volume ``v`` by central
    differences.  The result must not depend on ``v``; see
    :func:`planck_volume_residual`.
    """
    if not (t0 > 0 and theta0 > 0):
        raise ValueError("t0 and theta0 must be positive")
    for th in (theta0, theta):
        if not eos.contains(th, v):
            raise ValueError(f"(theta={th}, V={v}) lies outside the EOS rectangle")
    sign = None

    def integrand(th):
        nonlocal sign
        dp = _partial(lambda t: eos.P(t, v), th)
        du = _partial(lambda vv: eos.U(th, vv), v)
        den = eos.P(th, v) + du
        s = den > 0
        if den == 0 or (sign is not None and s != sign):
            raise SingularIntegrandError(f"P + dU/dV vanishes near theta={th:g}, V={v:g}")
        sign = s
        return dp / den

    return t0 * math.exp(adaptive_simpson(integrand, theta0, theta, rtol=QUAD_RTOL))


def planck_volume_residual(
    eos: EquilibriumEOS, theta0: float, t0: float, theta: float, volumes: Sequence[float]
) -> float:
    """Largest relative spread of the Planck temperature across ``volumes``."""
    ts = np.array([planck_absolute_temperature(eos, theta0, t0, theta, v) for v in volumes])
    return float(np.ptp(ts) / np.max(np.abs(ts)))


def entropy_by_path_integration(
    eos: EquilibriumEOS,
    ref: tuple[float, float],
    target: tuple[float, float],
    path: Sequence[tuple[float, float]] = (),
) -> float:
    """Entropy difference ``S(target) - S(ref)`` along a polyline.

    Integrates ``dU/T + P dV/T`` over the straight segments
    ``ref -> path[0] -> ... -> target``.  Temperatures come from the EOS
    (Planck conversion when ``theta`` is empirical).
    """
    verts = [tuple(map(float, ref)), *(tuple(map(float, p)) for p in path), tuple(map(float, target))]
    for th, v in verts:
        if not eos.contains(th, v):
            raise ValueError(f"path vertex (theta={th}, V={v}) lies outside the EOS rectangle")
    total = 0.0
    for (th_a, v_a), (th_b, v_b) in zip(verts, verts[1:]):
        dth, dv = th_b - th_a, v_b - v_a
        if dth == 0 and dv == 0:
            continue

        def integrand(s, th_a=th_a, v_a=v_a, dth=dth, dv=dv):
            th, v = th_a + s * dth, v_a + s * dv
            T = eos.temperature(th, v)
            if not T > 0:
                raise SingularIntegrandError(f"non-positive temperature at theta={th:g}")
            dU = _partial(lambda t: eos.U(t, v), th) * dth + _partial(lambda w: eos.U(th, w), v) * dv
            return (dU + eos.P(th, v) * dv) / T

        total += adaptive_simpson(integrand, 0.0, 1.0, rtol=QUAD_RTOL)
    return total
