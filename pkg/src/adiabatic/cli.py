"""Scenario runner.

Usage::

    adiabatic SUBCOMMAND [--config PATH] [--out DIR] [--seed N] [--verbose]

Every subcommand writes ``report.txt`` (one check per line), ``summary.json``
(sorted-key JSON tree) and, where there is numeric output, a CSV file into
the output directory.  Exit status: 0 when every check passes, 1 when a check
fails, 2 when the configuration cannot be used.

The config file is TOML.  Keys are read from the table named after the
subcommand (``[band]``, ``[cattaneo]``, ...) and from ``[model]``; see
README.md for the full list.
"""

from __future__ import annotations

import argparse
import io
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import toy
from .axioms import check_axioms
from .construction import EntropyEvaluator, ReferencePair, affine_uniqueness_check, canonical_entropy
from .dynamics import CarnotCouplingParams, CattaneoParams, carnot_gap_experiment, cattaneo_simulate
from .edgelist import EdgeListError, load_edgelist
from .eos import PRESETS, eos_preset, planck_absolute_temperature, planck_volume_residual
from .errors import AdiabaticError
from .nonequilibrium import (
    EmbeddedModel,
    entropy_band,
    gb_checks,
    max_work_bounds,
    verify_prop1,
    verify_theorem4,
)
from .randmodels import break_transitivity, random_finite_model
from .relations import EntropyRelation
from .reports import NA, Check, Report, check, dumps_summary, write_atomic
from .states import StatePoint

log = logging.getLogger("adiabatic")


class ConfigError(Exception):
    pass


@dataclass
class Scenario:
    name: str
    config: dict[str, Any]
    base_dir: Path
    seed: int | None
    csv: dict[str, str] = field(default_factory=dict)

    def section(self, key: str | None = None) -> dict[str, Any]:
        sec = self.config.get(key or self.name, {})
        if not isinstance(sec, dict):
            raise ConfigError(f"[{key or self.name}] must be a table")
        return sec

    def get(self, key: str, default=None, kind: type | tuple = object, section: str | None = None):
        sec = self.section(section)
        val = sec.get(key, default)
        if val is None:
            return None
        if kind is float and isinstance(val, int) and not isinstance(val, bool):
            val = float(val)
        if not isinstance(val, kind):
            raise ConfigError(f"[{section or self.name}] {key} has the wrong type: {val!r}")
        return val

    def rng(self) -> np.random.Generator:
        if self.seed is None:
            raise ConfigError(f"subcommand {self.name!r} is randomized and needs a seed (--seed or 'seed' key)")
        return np.random.default_rng(self.seed)


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(_fmt(v) if isinstance(v, float) else str(v) for v in r) + "\n")
    return buf.getvalue()


def _pair(v, what) -> tuple[float, float]:
    if not (isinstance(v, (list, tuple)) and len(v) == 2 and all(isinstance(t, (int, float)) for t in v)):
        raise ConfigError(f"{what} must be a pair of numbers, got {v!r}")
    return float(v[0]), float(v[1])


def _toy_states(sc: Scenario, default=((1.0, 3.0),)) -> list[StatePoint]:
    raw = sc.get("states", [list(s) for s in default], list)
    try:
        return [toy.block_point(*_pair(s, "toy state")) for s in raw]
    except AdiabaticError as exc:
        raise ConfigError(str(exc)) from None


def _finite_model(sc: Scenario):
    path = sc.get("file", None, str, section="model")
    if path is None:
        raise ConfigError("[model] file is required for finite models")
    full = (sc.base_dir / path).resolve()
    try:
        mf = load_edgelist(full, close=bool(sc.get("close", False, bool, section="model")))
    except (OSError, EdgeListError) as exc:
        raise ConfigError(f"cannot load {path}: {exc}") from None
    energy = sc.get("energy", None, dict, section="model")
    return mf, EmbeddedModel.finite(mf.relation, mf.entropy, energy)


def _model_kind(sc: Scenario, default: str) -> str:
    return sc.get("kind", default, str, section="model")


# ---------------------------------------------------------------------------
# subcommands


def run_axioms(sc: Scenario) -> Report:
    kind = _model_kind(sc, "finite")
    eps = sc.get("epsilons", [], list)
    if kind == "finite":
        mf, _ = _finite_model(sc)
        rel = mf.relation
        samples = list(rel.nodes)
        names = sc.get("catalysts", [], list)
        try:
            cats = [(rel.node(a), rel.node(b)) for a, b in names]
        except (ValueError, AdiabaticError) as exc:
            raise ConfigError(f"bad catalyst pair: {exc}") from None
    elif kind == "toy-grid":
        rel = _toy_grid(sc)
        restrict = sc.get("restrict", "all", str)
        stride = sc.get("stride", 8, int)
        idxs = [(i, j) for i in range(0, rel.shape[0], stride) for j in range(0, rel.shape[1], stride)]
        samples = [rel.state_at(ij) for ij in idxs]
        if restrict == "equilibrium":
            samples = [rel.state_at((i, i)) for i in range(0, rel.shape[0], stride)]
        elif restrict != "all":
            raise ConfigError("restrict must be 'all' or 'equilibrium'")
        cats = []
    else:
        raise ConfigError(f"axioms supports model kinds 'finite' and 'toy-grid', not {kind!r}")
    try:
        rep = check_axioms(rel, samples, eps, cats)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    expect = sc.get("expect", {}, dict)
    for name, status in sorted(expect.items()):
        got = rep[name].status
        rep.add(check(f"expect_{name}", got == status, (got,), f"expected {status}"))
    return rep


def _toy_grid(sc: Scenario):
    bounds = _pair(sc.get("bounds", [1.0, 5.0], list, section="model"), "[model] bounds")
    h = sc.get("h", 0.05, float, section="model")
    try:
        return toy.toy_grid_model(bounds, h)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def run_entropy(sc: Scenario) -> Report:
    tol = sc.get("tol", 1e-6, float)
    rep = Report("entropy")
    rows = []
    table = sc.get("states", None, dict)
    if table is not None:
        models = [{k: float(v) for k, v in table.items()}]
    else:
        rng = sc.rng()
        n_models = sc.get("models", 20, int)
        n_states = sc.get("states_per_model", 8, int)
        models = []
        for _ in range(n_models):
            vals = rng.uniform(-1.0, 2.0, n_states)
            models.append({f"s{i}": float(v) for i, v in enumerate(vals)})
    worst = worst_forms = worst_refs = 0.0
    for mi, table in enumerate(models):
        pts = {k: StatePoint("sys", (v,), True, k) for k, v in table.items()}
        rel = EntropyRelation(lambda x: x.coords[0])
        order = sorted(pts, key=lambda k: table[k])
        if table[order[0]] == table[order[-1]]:
            raise ConfigError("entropy model needs at least two distinct entropy values")
        ev = EntropyEvaluator(rel, ReferencePair(pts[order[0]], pts[order[-1]]), tol)
        mid = [k for k in order if table[order[0]] < table[k] < table[order[-1]]]
        alt = (pts[mid[0]], pts[mid[-1]]) if len(mid) >= 2 and table[mid[0]] < table[mid[-1]] else None
        s_sup = {k: canonical_entropy(ev, p) for k, p in pts.items()}
        s_inf = {k: canonical_entropy(ev, p, "inf") for k, p in pts.items()}
        fit = affine_uniqueness_check(s_sup, table)
        worst = max(worst, fit.max_residual)
        worst_forms = max(worst_forms, max(abs(s_sup[k] - s_inf[k]) for k in pts))
        if alt is not None:
            ev2 = EntropyEvaluator(rel, ReferencePair(*alt), tol)
            s_alt = {k: canonical_entropy(ev2, p) for k, p in pts.items()}
            worst_refs = max(worst_refs, affine_uniqueness_check(s_sup, s_alt).max_residual)
        for k in sorted(pts):
            rows.append((mi, k, table[k], s_sup[k], s_inf[k]))
    rep.add(check("reconstruction", worst <= 10 * tol, (worst,), f"max residual {worst:.3g} <= {10 * tol:g}"))
    rep.add(check("sup_inf_agree", worst_forms <= 2 * tol, (worst_forms,), f"max gap {worst_forms:.3g}"))
    rep.add(check("reference_change_affine", worst_refs <= 10 * tol, (worst_refs,), f"max residual {worst_refs:.3g}"))
    rep.values.update(models=len(models), max_residual=worst, max_form_gap=worst_forms)
    sc.csv["entropy.csv"] = _csv(("model", "state", "S_star", "S_sup", "S_inf"), rows)
    return rep


def _band_model(sc: Scenario):
    kind = _model_kind(sc, "toy")
    if kind == "toy":
        return toy.toy_embedded_model(sc.get("c", 1.0, float, section="model")), _toy_states(sc)
    if kind == "toy-grid":
        grid = _toy_grid(sc)
        return toy.toy_grid_embedded(grid), _toy_states(sc)
    if kind == "finite":
        mf, em = _finite_model(sc)
        names = sc.get("nodes", None, list)
        nodes = list(mf.relation.nodes) if names is None else [mf.relation.node(n) for n in names]
        return em, nodes
    raise ConfigError(f"unknown model kind {kind!r}")


def run_band(sc: Scenario) -> Report:
    model, states = _band_model(sc)
    rep = Report("band")
    rows = []
    for x in states:
        b = entropy_band(model, x)
        rows.append((x.label, b.s_minus, b.s_plus, b.delta_s))
        rep.add(check(f"band[{x.label}]", b.s_minus <= b.s_plus + 1e-12, (x,), "S- <= S+"))
    sc.csv["band.csv"] = _csv(("state", "s_minus", "s_plus", "delta_s"), rows)
    rep.values["rows"] = [list(r) for r in rows]
    return rep


def run_prop1(sc: Scenario) -> Report:
    kind = _model_kind(sc, "random")
    rep = Report("prop1")
    if kind == "finite":
        mf, em = _finite_model(sc)
        sub = verify_prop1(em, list(mf.relation.nodes))
        rep.extend(sub.checks)
        return rep
    if kind != "random":
        raise ConfigError(f"prop1 supports model kinds 'finite' and 'random', not {kind!r}")
    rng = sc.rng()
    n = sc.get("models", 100, int)
    max_states = sc.get("max_states", 12, int)
    negatives = sc.get("negative_controls", True, bool)
    failures: dict[str, int] = {}
    first: dict[str, tuple] = {}
    detected = tried = 0
    for i in range(n):
        rm = random_finite_model(rng, max_states)
        em = rm.embedded()
        r = verify_prop1(em, rm.base_nodes())
        for c in r.failures():
            failures[c.name] = failures.get(c.name, 0) + 1
            first.setdefault(c.name, (i, *c.witness))
        if negatives:
            broken = break_transitivity(em, rng)
            if broken is not None:
                tried += 1
                rel, _ = broken
                bad = verify_prop1(EmbeddedModel.finite(rel, rm.entropy), rm.base_nodes(), composition=False)
                detected += bad["d_monotone"].status == "fail" and bool(bad["d_monotone"].witness)
    for name in ("a_finite", "b_agree_on_equilibrium", "c_attained", "d_monotone", "e_sufficient", "f_super_subadditive"):
        k = failures.get(name, 0)
        rep.add(check(name, k == 0, first.get(name, ()), f"{k} violations over {n} models"))
    if negatives:
        rep.add(check("negative_controls_detected", detected == tried, (tried - detected,), f"{detected}/{tried}"))
    rep.values.update(models=n, negative_controls=tried)
    return rep


def run_thm4(sc: Scenario) -> Report:
    kind = _model_kind(sc, "finite")
    if kind == "finite":
        _, em = _finite_model(sc)
        try:
            return verify_theorem4(em, sc.get("space", None, str)).report()
        except AdiabaticError as exc:
            raise ConfigError(f"theorem preconditions fail: {exc}") from None
    if kind != "random":
        raise ConfigError(f"thm4 supports model kinds 'finite' and 'random', not {kind!r}")
    rng = sc.rng()
    n = sc.get("models", 500, int)
    rep = Report("thm4")
    disagree, n_true = [], 0
    for i in range(n):
        rm = random_finite_model(rng, sc.get("max_states", 12, int), products=False)
        res = verify_theorem4(rm.embedded())
        if not res.consistent:
            disagree.append(i)
        n_true += all(res.conditions.values())
    rep.add(check("consistency", not disagree, tuple(disagree[:5]), f"{n} models, {n_true} all-true"))
    rep.values.update(models=n, all_true=n_true, all_false=n - n_true - len(disagree))
    return rep


def run_workbounds(sc: Scenario) -> Report:
    c = sc.get("c", 1.0, float, section="model")
    model = toy.toy_embedded_model(c)
    states = _toy_states(sc)
    x0 = toy.block_point(*_pair(sc.get("x0", [2.0, 2.0], list), "x0"))
    T0 = sc.get("T0", 1.0, float)
    if not T0 > 0:
        raise ConfigError("T0 must be positive")
    S0 = toy.toy_entropy(x0)
    U0 = model.energy(x0)

    def phi(x):
        return (model.energy(x) - U0) - T0 * (toy.toy_extended_entropy(x) - S0)

    rep = Report("workbounds")
    rows = []
    for x in states:
        wb = max_work_bounds(model, x, x0, T0)
        ph = phi(x)
        rows.append((x.label, wb.lower, wb.upper, ph))
        rep.add(check(f"bounds[{x.label}]", wb.contains(ph), (x, ph), "availability of extension inside bounds"))
    n_pairs = sc.get("pairs", 100, int)
    pairs = []
    if n_pairs:
        rng = sc.rng()
        while len(pairs) < n_pairs:
            x = toy.block_point(*rng.uniform(1.0, 5.0, 2))
            y = toy.block_point(*rng.uniform(1.0, 5.0, 2))
            if toy.toy_precedes(x, y):
                pairs.append((x, y))
    rep.extend(gb_checks(model, phi, states, x0, T0, pairs).checks)
    sc.csv["workbounds.csv"] = _csv(("state", "lower", "upper", "phi_extension"), rows)
    return rep


def run_toy_sector(sc: Scenario) -> Report:
    states = _toy_states(sc)
    top = sc.get("top", 5.0, float)
    rep = Report("toy-sector")
    rows = []
    for x in states:
        for k, (a, b) in enumerate(toy.sector_polygon(x, top)):
            rows.append((x.label, k, a, b))
        lo, hi, ext = toy.toy_s_minus(x), toy.toy_s_plus(x), toy.toy_extended_entropy(x)
        rep.values[f"closed_forms[{x.label}]"] = {"s_minus": lo, "s_plus": hi, "extended": ext}
        rep.add(check(f"ordering[{x.label}]", lo <= ext <= hi, (x,), "S- <= S_hat <= S+"))
    h = sc.get("grid_h", None, float)
    if h is not None:
        grid = toy.toy_grid_model((1.0, top), h)
        for x in states:
            n_bad, n_total = grid_sector_disagreements(grid, x)
            rep.add(check(f"grid_agrees[{x.label}]", n_bad == 0, (x, n_bad), f"{n_total} grid nodes"))
    sc.csv["sector.csv"] = _csv(("state", "vertex", "t1", "t2"), rows)
    return rep


def grid_sector_disagreements(grid, x: StatePoint) -> tuple[int, int]:
    """Count grid nodes where reachability and the analytic sector disagree
    away from the sector boundary (further than one cell)."""
    mask = grid.reachable_mask(x)
    xs = grid.state_at(grid.snap(x.coords))
    h = grid.h[0]
    bad = 0
    for idx in np.ndindex(*grid.shape):
        c = grid.coords_of(idx)
        analytic = toy.toy_precedes(xs, c)
        if bool(mask[idx]) == analytic:
            continue
        near = toy.toy_precedes(xs, c + h) and not toy.toy_precedes(xs, np.maximum(c - h, 1e-9))
        bad += not near
    return bad, int(np.prod(grid.shape))


def run_cattaneo(sc: Scenario) -> Report:
    try:
        params = CattaneoParams(
            tau=sc.get("tau", 0.0, float),
            k=sc.get("k", 1.0, float),
            c=sc.get("c", 1.0, float),
            dt=sc.get("dt", 0.01, float),
            t_end=sc.get("t_end", 20.0, float),
        )
        x0 = toy.BlockPairState(*_pair(sc.get("x0", [1.0, 3.0], list), "x0"), c=params.c)
    except (ValueError, AdiabaticError) as exc:
        raise ConfigError(str(exc)) from None
    tr = cattaneo_simulate(params, x0, sc.get("q0", 0.0, float))
    e = tr.energy(params.c)
    drift = float(np.max(np.abs(e - e[0])) / abs(e[0]))
    sign_changes = int(np.sum(np.diff(np.sign(tr.q[np.abs(tr.q) > 1e-12])) != 0))
    min_rate = float(np.min(tr.ds_dt))
    rep = Report("cattaneo")
    rep.add(check("energy_conserved", drift <= 1e-9, (drift,), f"relative drift {drift:.3g}"))
    if params.tau == 0:
        rep.add(check("entropy_monotone", min_rate >= -1e-9, (min_rate,), f"min dS/dt {min_rate:.3g}"))
    else:
        rep.add(Check("entropy_monotone", NA, detail=f"min dS/dt {min_rate:.3g} (not required for tau > 0)"))
    if sc.get("expect_oscillation", params.tau > 0, bool):
        rep.add(check("flux_sign_change", sign_changes >= 1, (sign_changes,), f"{sign_changes} sign changes"))
        rep.add(check("entropy_decreases_somewhere", min_rate < -1e-6, (min_rate,)))
    rep.values.update(energy_drift=drift, flux_sign_changes=sign_changes, min_entropy_rate=min_rate)
    sc.csv["trajectory.csv"] = tr.to_csv()
    return rep


def run_carnot_gap(sc: Scenario) -> Report:
    kappas = [float(k) for k in sc.get("kappas", [1.0, 10.0, 100.0], list)]
    leaks = [float(k) for k in sc.get("k_leaks", [0.0, 0.1], list)]
    x0 = toy.BlockPairState(*_pair(sc.get("x0", [1.0, 3.0], list), "x0"), c=sc.get("c", 1.0, float))
    rep = Report("carnot-gap")
    rows = []
    by_leak: dict[float, list[float]] = {}
    for kl in leaks:
        for kap in kappas:
            try:
                p = CarnotCouplingParams(
                    kappa=kap,
                    k_leak=kl,
                    c=x0.c,
                    dt=sc.get("dt", 0.01, float),
                    t_end=sc.get("t_end", 500.0, float),
                    throughput=sc.get("throughput", 0.25, float),
                )
            except ValueError as exc:
                raise ConfigError(str(exc)) from None
            r = carnot_gap_experiment(p, x0)
            by_leak.setdefault(kl, []).append(r.entropy_produced)
            rows.append((kap, kl, r.work_extracted, r.entropy_produced, r.final_state.t1, r.final_state.t2, r.duration))
    for kl, prods in by_leak.items():
        if x0.t1 == x0.t2:
            rep.add(check(f"no_production[k_leak={kl:g}]", all(p == 0 for p in prods), tuple(prods)))
        elif kl == 0:
            dec = all(b < a for a, b in zip(prods, prods[1:]))
            rep.add(check("production_decreases_with_kappa", dec, tuple(prods), "k_leak = 0"))
        else:
            rep.add(check(f"gap_remains[k_leak={kl:g}]", min(prods) > 0, tuple(prods)))
    sc.csv["carnot_gap.csv"] = _csv(
        ("kappa", "k_leak", "work", "entropy_produced", "t1_final", "t2_final", "duration"), rows
    )
    return rep


def run_planck(sc: Scenario) -> Report:
    preset = sc.get("eos", "ideal-gas", str)
    if preset not in PRESETS:
        raise ConfigError(f"unknown EOS preset {preset!r}")
    params = sc.get("params", {"theta_power": 2.0}, dict)
    try:
        eos = eos_preset(preset, **params)
    except TypeError as exc:
        raise ConfigError(f"bad EOS parameters: {exc}") from None
    theta0 = sc.get("theta0", 1.0, float)
    t0 = sc.get("t0", 1.0, float)
    thetas = [float(t) for t in sc.get("thetas", [0.5, 2.0, 4.0, 9.0], list)]
    vols = [float(v) for v in sc.get("volumes", [1.0, 10.0], list)]
    power = float(params.get("theta_power", 1.0))
    rep = Report("planck")
    rows = []
    worst_v = worst_exact = 0.0
    for th in thetas:
        T = planck_absolute_temperature(eos, theta0, t0, th, vols[0])
        expect = t0 * (th / theta0) ** (1.0 / power)
        res = planck_volume_residual(eos, theta0, t0, th, vols)
        worst_v = max(worst_v, res)
        worst_exact = max(worst_exact, abs(T - expect) / expect)
        rows.append((th, T, expect, res))
    anchor = planck_absolute_temperature(eos, theta0, t0, theta0, vols[0])
    rep.add(check("volume_independence", worst_v <= 1e-8, (worst_v,), f"max spread {worst_v:.3g}"))
    rep.add(check("matches_power_law", worst_exact <= 1e-8, (worst_exact,), f"max rel error {worst_exact:.3g}"))
    rep.add(check("anchor", anchor == t0, (anchor,), "T(theta0) = t0"))
    sc.csv["planck.csv"] = _csv(("theta", "T", "T_expected", "volume_spread"), rows)
    return rep


SUBCOMMANDS: dict[str, Callable[[Scenario], Report]] = {
    "axioms": run_axioms,
    "entropy": run_entropy,
    "band": run_band,
    "prop1": run_prop1,
    "thm4": run_thm4,
    "workbounds": run_workbounds,
    "toy-sector": run_toy_sector,
    "cattaneo": run_cattaneo,
    "carnot-gap": run_carnot_gap,
    "planck": run_planck,
}


def load_config(path: str | None) -> tuple[dict[str, Any], Path]:
    if path is None:
        return {}, Path.cwd()
    p = Path(path)
    try:
        with p.open("rb") as fh:
            return tomllib.load(fh), p.resolve().parent
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error in {path}: {exc}") from None


def run(subcommand: str, config: dict[str, Any], out: Path, seed: int | None = None, base_dir: Path | None = None) -> int:
    """Run one scenario, write its artifacts and return the exit status."""
    if subcommand not in SUBCOMMANDS:
        raise ConfigError(f"unknown subcommand {subcommand!r}")
    if seed is None:
        seed = config.get("seed")
        if seed is not None and not isinstance(seed, int):
            raise ConfigError("seed must be an integer")
    sc = Scenario(subcommand, config, base_dir or Path.cwd(), seed)
    try:
        rep = SUBCOMMANDS[subcommand](sc)
    except (ValueError, TypeError, KeyError) as exc:
        raise ConfigError(str(exc)) from None
    summary = {"scenario": subcommand, "seed": seed, "report": rep.to_dict()}
    write_atomic(out / "report.txt", rep.text())
    write_atomic(out / "summary.json", dumps_summary(summary))
    for name, text in sc.csv.items():
        write_atomic(out / name, text)
    for line in rep.lines():
        log.info(line)
    return 0 if rep.passed else 1


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(prog="adiabatic", description=__doc__.split("\n\n")[0])
    ap.add_argument("subcommand", choices=sorted(SUBCOMMANDS))
    ap.add_argument("--config", help="TOML scenario file")
    ap.add_argument("--out", default=None, help="output directory (default: out/<subcommand>)")
    ap.add_argument("--seed", type=int, default=None, help="seed for randomized harnesses")
    ap.add_argument("--verbose", action="store_true")
    args = ap.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    out = Path(args.out) if args.out else Path("out") / args.subcommand
    try:
        config, base = load_config(args.config)
        status = run(args.subcommand, config, out, args.seed, base)
    except ConfigError as exc:
        print(f"adiabatic: {exc}", file=sys.stderr)
        return 2
    print(f"{args.subcommand}: {'PASS' if status == 0 else 'FAIL'} ({out})")
    return status


if __name__ == "__main__":
    sys.exit(main())
