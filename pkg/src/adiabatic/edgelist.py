"""Plain-text edge-list format for finite relations.

Grammar, one directive per line, ``#`` starts a comment::

    node NAME eq|noneq [coords...]    declare a node (space "main")
    product NAME A B                  NAME stands for the composite (A, B)
    entropy NAME VALUE                equilibrium entropy of node NAME
    FROM TO                           FROM ≺ TO

Nodes first seen in an edge are declared non-equilibrium with no
coordinates.  Product nodes live in the space ``"<space of A>x<space of B>"``
and are equilibrium iff both factors are.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from pathlib import Path

from .relations import FiniteRelation, transitive_reflexive_closure
from .states import StatePoint

DEFAULT_SPACE = "main"


class EdgeListError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


@dataclass
class FiniteModelFile:
    relation: FiniteRelation
    entropy: dict[str, float] = field(default_factory=dict)


def parse_edgelist(text: str, close: bool = False) -> FiniteModelFile:
    decls: dict[str, tuple[bool, tuple[float, ...]]] = {}
    order: list[str] = []
    products: dict[str, tuple[str, str]] = {}
    entropy: dict[str, float] = {}
    entropy_line: dict[str, int] = {}
    edges: list[tuple[str, str]] = []

    def declare(name, eq=False, coords=(), lineno=0, explicit=False):
        if name in decls:
            if explicit:
                raise EdgeListError(lineno, f"node {name!r} declared twice")
            return
        decls[name] = (eq, coords)
        order.append(name)

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        head = tok[0]
        if head == "node":
            if len(tok) < 3 or tok[2] not in ("eq", "noneq"):
                raise EdgeListError(lineno, "expected 'node NAME eq|noneq [coords...]'")
            try:
                coords = tuple(float(t) for t in tok[3:])
            except ValueError:
                raise EdgeListError(lineno, "coordinates must be numbers") from None
            if not all(math.isfinite(c) for c in coords):
                raise EdgeListError(lineno, "coordinates must be finite")
            if tok[1] in decls and tok[1] not in products and decls[tok[1]] == (False, ()):
                decls[tok[1]] = (tok[2] == "eq", coords)  # upgrade an edge-implied node
            else:
                declare(tok[1], tok[2] == "eq", coords, lineno, explicit=True)
        elif head == "product":
            if len(tok) != 4:
                raise EdgeListError(lineno, "expected 'product NAME A B'")
            if tok[1] in decls:
                raise EdgeListError(lineno, f"node {tok[1]!r} declared twice")
            products[tok[1]] = (tok[2], tok[3])
            decls[tok[1]] = (False, ())
            order.append(tok[1])
        elif head == "entropy":
            if len(tok) != 3:
                raise EdgeListError(lineno, "expected 'entropy NAME VALUE'")
            try:
                entropy[tok[1]] = float(tok[2])
            except ValueError:
                raise EdgeListError(lineno, "entropy value must be a number") from None
            if not math.isfinite(entropy[tok[1]]):
                raise EdgeListError(lineno, "entropy value must be finite")
            entropy_line[tok[1]] = lineno
        elif len(tok) == 2:
            declare(tok[0])
            declare(tok[1])
            edges.append((tok[0], tok[1]))
        else:
            raise EdgeListError(lineno, f"cannot parse {line!r}")

    def space_of(name, seen=()):
        if name not in products:
            return DEFAULT_SPACE, decls[name][0]
        if name in seen:
            raise EdgeListError(0, f"cyclic product definition at {name!r}")
        a, b = products[name]
        for f in (a, b):
            if f not in decls:
                raise EdgeListError(0, f"product {name!r} refers to unknown node {f!r}")
        sa, ea = space_of(a, (*seen, name))
        sb, eb = space_of(b, (*seen, name))
        return f"{sa}x{sb}", ea and eb

    nodes = []
    for name in order:
        space, eq = space_of(name)
        nodes.append(StatePoint(space, decls[name][1], eq, name))
    for name in entropy:
        if name not in decls:
            raise EdgeListError(entropy_line[name], f"entropy given for unknown node {name!r}")
    table = {pair: name for name, pair in products.items()}
    rel = FiniteRelation.from_edges(nodes, edges, table)
    if close:
        rel = transitive_reflexive_closure(rel)
    return FiniteModelFile(rel, entropy)


def load_edgelist(path: str | os.PathLike, close: bool = False) -> FiniteModelFile:
    return parse_edgelist(Path(path).read_text(), close=close)


def dump_edgelist(rel: FiniteRelation, entropy: dict[str, float] | None = None) -> str:
    lines = []
    names = {n.name for n in rel.nodes}
    inverse = {v: k for k, v in rel.products.items()}
    for n in rel.nodes:
        if n.name in inverse:
            a, b = inverse[n.name]
            lines.append(f"product {n.name} {a} {b}")
        else:
            coords = " ".join(repr(c) for c in n.coords)
            lines.append(f"node {n.name} {'eq' if n.is_equilibrium else 'noneq'} {coords}".rstrip())
    for name, val in sorted((entropy or {}).items()):
        if name in names:
            lines.append(f"entropy {name} {val!r}")
    lines.extend(f"{a} {b}" for a, b in rel.edges())
    return "\n".join(lines) + "\n"
