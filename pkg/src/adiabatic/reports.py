"""Check records, text reports and machine-readable summaries."""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable

from .states import CompoundState, ScaledState, StatePoint

PASS, FAIL, NA = "pass", "fail", "not-applicable"


@dataclass
class Check:
    """Outcome of one named check.

    ``witness`` holds the states (or state tuples) that exhibit a failure;
    a failing check always carries one.
    """

    name: str
    status: str
    witness: tuple = ()
    detail: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL, NA):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == FAIL and not self.witness:
            raise ValueError(f"failing check {self.name!r} has no witness")
        self.witness = tuple(self.witness)

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def line(self) -> str:
        parts = [f"{self.name:<28}", f"{self.status:<15}"]
        if self.witness:
            parts.append("witness=" + format_witness(self.witness))
        if self.detail:
            parts.append(self.detail)
        return " ".join(parts).rstrip()

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"status": self.status}
        if self.witness:
            d["witness"] = [jsonable(w) for w in self.witness]
        if self.detail:
            d["detail"] = self.detail
        return d


def check(name: str, ok: bool, witness=(), detail: str = "") -> Check:
    return Check(name, PASS if ok else FAIL, witness if not ok else (), detail)


@dataclass
class Report:
    title: str
    checks: list[Check] = field(default_factory=list)
    values: dict[str, Any] = field(default_factory=dict)

    def add(self, c: Check) -> Check:
        self.checks.append(c)
        return c

    def extend(self, cs: Iterable[Check]):
        for c in cs:
            self.add(c)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if c.status == FAIL]

    def lines(self) -> list[str]:
        out = [f"# {self.title}"]
        out.extend(c.line() for c in self.checks)
        for k in sorted(self.values):
            out.append(f"{k} = {format_value(self.values[k])}")
        out.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return out

    def text(self) -> str:
        return "\n".join(self.lines()) + "\n"

    def to_dict(self) -> dict[str, Any]:
        return {
            "title": self.title,
            "passed": self.passed,
            "checks": {c.name: c.to_dict() for c in self.checks},
            "values": {k: jsonable(v) for k, v in self.values.items()},
        }


def format_value(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (tuple, list, StatePoint)):
        return format_witness(v)
    return str(v)


def format_witness(w) -> str:
    if isinstance(w, (tuple, list)):
        return "(" + ", ".join(format_witness(x) for x in w) + ")"
    if isinstance(w, StatePoint):
        if w.name:
            return w.name
        return "(" + ", ".join(f"{c:.6g}" for c in w.coords) + ")"
    if isinstance(w, float):
        return f"{w:.6g}"
    return str(w)


def jsonable(v):
    if isinstance(v, StatePoint):
        d: dict[str, Any] = {"space": v.space_id, "coords": list(v.coords), "eq": v.is_equilibrium}
        if v.name:
            d["name"] = v.name
        return d
    if isinstance(v, ScaledState):
        return {"scale": v.scale, "state": jsonable(v.state)}
    if isinstance(v, CompoundState):
        return [jsonable(p) for p in v.parts]
    if isinstance(v, dict):
        return {str(k): jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    if hasattr(v, "item") and callable(v.item):  # numpy scalars
        return v.item()
    return v


def dumps_summary(tree: dict[str, Any]) -> str:
    """Canonical JSON for summaries: sorted keys, fixed indentation."""
    return json.dumps(jsonable(tree), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_atomic(path: str | os.PathLike, text: str) -> Path:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", dir=path.parent)
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path
