"""Lumped heat-conduction dynamics for the two-block system.

* :func:`cattaneo_simulate` - flux relaxation ``tau dq/dt = -(q + k grad T)``
  with the lumped gradient ``grad T = T2 - T1``, so ``tau = 0`` is Fourier's
  law ``q = k (T1 - T2)``; ``q`` is the heat flow from block 1 to block 2.
* :func:`carnot_gap_experiment` - a reversible engine equilibrating the
  blocks through finite contact conductances while heat leaks directly
  through the glue layer.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SimulationError
from .toy import BlockPairState, toy_extended_entropy

CSV_COLUMNS = ("time", "t1", "t2", "q", "S_classical", "dS_dt")


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, dt: float) -> np.ndarray:
    k1 = f(t, y)
    k2 = f(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = f(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = f(t + dt, y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


@dataclass(frozen=True)
class CattaneoParams:
    tau: float = 0.0
    k: float = 1.0
    c: float = 1.0
    dt: float = 0.01
    t_end: float = 20.0

    def __post_init__(self):
        if self.tau < 0:
            raise ValueError("tau must be non-negative")
        if not (self.k > 0 and self.c > 0 and self.dt > 0 and self.t_end > 0):
            raise ValueError("k, c, dt and t_end must be positive")
        scale = min(self.tau, self.c / self.k) if self.tau > 0 else self.c / self.k
        if self.dt > scale / 50.0 * (1 + 1e-12):
            raise SimulationError(f"dt={self.dt:g} exceeds min(tau, C/k)/50 = {scale / 50:g}")


@dataclass
class Trajectory:
    time: np.ndarray
    t1: np.ndarray
    t2: np.ndarray
    q: np.ndarray
    s_classical: np.ndarray
    ds_dt: np.ndarray

    def energy(self, c: float) -> np.ndarray:
        return c * (self.t1 + self.t2)

    def columns(self) -> list[np.ndarray]:
        return [self.time, self.t1, self.t2, self.q, self.s_classical, self.ds_dt]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(",".join(CSV_COLUMNS) + "\n")
        for row in zip(*self.columns()):
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
        return buf.getvalue()


def cattaneo_simulate(params: CattaneoParams, x0: BlockPairState, q0: float = 0.0) -> Trajectory:
    """Integrate the lumped two-block conduction model with fixed-step RK4.

    Records the classical entropy ``C (log T1 + log T2)`` and its rate
    (finite differences of the recorded series).
    """
    C, k, tau, dt = params.c, params.k, params.tau, params.dt
    n = int(math.ceil(params.t_end / dt - 1e-9))
    if tau > 0:

        def rhs(t, y):
            T1, T2, q = y
            return np.array([-q / C, q / C, -(q - k * (T1 - T2)) / tau])

        y = np.array([x0.t1, x0.t2, q0], dtype=float)
    else:

        def rhs(t, y):
            q = k * (y[0] - y[1])
            return np.array([-q / C, q / C])

        y = np.array([x0.t1, x0.t2], dtype=float)

    out = np.empty((n + 1, 3))
    out[0] = (y[0], y[1], y[2] if tau > 0 else k * (y[0] - y[1]))
    for i in range(1, n + 1):
        y = rk4_step(rhs, (i - 1) * dt, y, dt)
        if not (y[0] > 0 and y[1] > 0):
            raise SimulationError(f"temperature left the positive range at t={i * dt:g}: {y[:2]}")
        out[i] = (y[0], y[1], y[2] if tau > 0 else k * (y[0] - y[1]))
    time = dt * np.arange(n + 1)
    t1, t2, q = out.T
    s = C * (np.log(t1) + np.log(t2))
    ds = np.gradient(s, time) if n > 0 else np.zeros(1)
    return Trajectory(time, t1, t2, q, s, ds)


@dataclass(frozen=True)
class CarnotCouplingParams:
    """Engine protocol parameters.

    The engine draws heat from the hotter block at rate
    ``throughput * |T1 - T2|`` through contact conductance ``kappa``; its
    working temperatures are set so the cycle itself is reversible.
    """

    kappa: float = 10.0
    k_leak: float = 0.0
    c: float = 1.0
    dt: float = 0.01
    t_end: float = 500.0
    throughput: float = 0.25
    tol: float = 1e-6

    def __post_init__(self):
        if not (self.kappa > 0 and self.c > 0 and self.dt > 0 and self.t_end > 0):
            raise ValueError("kappa, c, dt and t_end must be positive")
        if self.k_leak < 0 or not self.throughput > 0:
            raise ValueError("k_leak must be >= 0 and throughput > 0")
        rate = max(self.throughput, self.k_leak)
        if self.dt > self.c / rate / 50.0 * (1 + 1e-12):
            raise SimulationError(f"dt={self.dt:g} exceeds C/max(throughput, k_leak)/50")


@dataclass(frozen=True)
class CarnotGapResult:
    work_extracted: float
    entropy_produced: float
    production_integral: float
    final_state: BlockPairState
    duration: float


def _engine_rates(T1, T2, p: CarnotCouplingParams):
    """Heat rates into block 1/2, work rate and entropy production rate."""
    hot_first = T1 >= T2
    Th, Tc = (T1, T2) if hot_first else (T2, T1)
    dT = Th - Tc
    qh = p.throughput * dT
    th = Th - qh / p.kappa
    r = qh / (p.kappa * th) if th > 0 else math.inf
    if not r < 1:
        raise SimulationError("engine protocol infeasible: contact temperature collapsed")
    tc = Tc / (1.0 - r)
    if dT > 0 and not tc < th:
        raise SimulationError(f"engine protocol infeasible at kappa={p.kappa:g}: no work window")
    qc = qh * tc / th
    leak = p.k_leak * dT
    sigma = qh * (1 / th - 1 / Th) + qc * (1 / Tc - 1 / tc) + leak * (1 / Tc - 1 / Th)
    into_hot, into_cold = -(qh + leak), qc + leak
    d1, d2 = (into_hot, into_cold) if hot_first else (into_cold, into_hot)
    return d1, d2, qh - qc, sigma


def carnot_gap_experiment(params: CarnotCouplingParams, x0: BlockPairState) -> CarnotGapResult:
    """Equilibrate the blocks with a reversible engine behind finite contacts.

    Runs until ``|T1 - T2| < params.tol``.  ``entropy_produced`` is measured
    on the extended-entropy scale, ``production_integral`` is the integrated
    physical production rate (equal to ``2 C`` times the former).
    """
    C = params.c
    if x0.c != C:
        raise ValueError("initial state heat capacity differs from params.c")
    if abs(x0.t1 - x0.t2) < params.tol:
        return CarnotGapResult(0.0, 0.0, 0.0, x0, 0.0)

    def rhs(t, y):
        d1, d2, w, s = _engine_rates(y[0], y[1], params)
        return np.array([d1 / C, d2 / C, w, s])

    y = np.array([x0.t1, x0.t2, 0.0, 0.0])
    t, dt = 0.0, params.dt
    while abs(y[0] - y[1]) >= params.tol:
        if t >= params.t_end:
            raise SimulationError(f"no equilibration within t_end={params.t_end:g}")
        y = rk4_step(rhs, t, y, dt)
        t += dt
        if not (y[0] > 0 and y[1] > 0):
            raise SimulationError("temperature left the positive range")
    final = BlockPairState(float(y[0]), float(y[1]), C)
    produced = toy_extended_entropy(final) - toy_extended_entropy(x0)
    return CarnotGapResult(float(y[2]), produced, float(y[3]), final, t)
