import csv
import io
import math

import numpy as np
import pytest

from adiabatic.dynamics import (
    CarnotCouplingParams,
    CattaneoParams,
    carnot_gap_experiment,
    cattaneo_simulate,
    rk4_step,
)
from adiabatic.errors import SimulationError
from adiabatic.toy import BlockPairState


def test_rk4_exponential():
    y = np.array([1.0])
    for i in range(100):
        y = rk4_step(lambda t, y: -y, i * 0.01, y, 0.01)
    assert y[0] == pytest.approx(math.exp(-1.0), rel=1e-9)


def test_fourier_limit_monotone_and_conservative():
    tr = cattaneo_simulate(CattaneoParams(tau=0.0), BlockPairState(1.0, 3.0))
    e = tr.energy(1.0)
    assert np.max(np.abs(e - e[0])) / e[0] <= 1e-9
    assert tr.ds_dt.min() >= -1e-9
    assert tr.t1[-1] == pytest.approx(2.0, abs=1e-6)


def test_cattaneo_overshoots():
    tr = cattaneo_simulate(CattaneoParams(tau=1.0), BlockPairState(1.0, 3.0))
    signs = np.sign(tr.q[np.abs(tr.q) > 1e-12])
    assert np.any(np.diff(signs) != 0)
    assert tr.ds_dt.min() < -1e-6
    e = tr.energy(1.0)
    assert np.max(np.abs(e - e[0])) / e[0] <= 1e-9


def test_equilibrium_start_stays_put():
    tr = cattaneo_simulate(CattaneoParams(tau=0.5), BlockPairState(2.0, 2.0))
    assert np.all(tr.t1 == 2.0) and np.all(tr.q == 0.0)


def test_step_size_guard():
    with pytest.raises(SimulationError):
        CattaneoParams(tau=0.1, dt=0.01)
    with pytest.raises(SimulationError):
        CattaneoParams(tau=0.0, k=10.0, dt=0.01)
    with pytest.raises(ValueError):
        CattaneoParams(tau=-1.0)


def test_trajectory_csv():
    tr = cattaneo_simulate(CattaneoParams(t_end=0.05), BlockPairState(1.0, 3.0))
    rows = list(csv.reader(io.StringIO(tr.to_csv())))
    assert rows[0] == ["time", "t1", "t2", "q", "S_classical", "dS_dt"]
    assert len(rows) == len(tr.time) + 1
    assert float(rows[1][1]) == 1.0


def test_carnot_gap_trends():
    x0 = BlockPairState(1.0, 3.0)
    prods = [carnot_gap_experiment(CarnotCouplingParams(kappa=k), x0).entropy_produced for k in (1, 10, 100)]
    assert prods[0] > prods[1] > prods[2] > 0
    leak = [carnot_gap_experiment(CarnotCouplingParams(kappa=k, k_leak=0.1), x0) for k in (1, 10, 100)]
    assert all(r.entropy_produced > 0.05 for r in leak)
    r = leak[0]
    assert r.production_integral == pytest.approx(2 * r.entropy_produced, rel=1e-6)
    # energy balance: work out equals internal energy lost
    assert r.work_extracted == pytest.approx(x0.energy - r.final_state.energy, abs=1e-9)


def test_carnot_equilibrium_start():
    r = carnot_gap_experiment(CarnotCouplingParams(), BlockPairState(2.0, 2.0))
    assert r.entropy_produced == 0.0 and r.work_extracted == 0.0


def test_carnot_timeout():
    with pytest.raises(SimulationError):
        carnot_gap_experiment(CarnotCouplingParams(t_end=1.0), BlockPairState(1.0, 3.0))
