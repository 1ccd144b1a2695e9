"""Finite relations from edge-list files.

``three_node.edges`` has equilibrium states a, b, c (entropy 0, 1, 2) and
a non-equilibrium x with b ≺ x ≺ c: its entropy is only bracketed.
``three_node_thm4.edges`` adds an equilibrium z with entropy 1.5 that x
cannot be compared with, so every comparability condition fails at once.
"""

from pathlib import Path

from adiabatic import EmbeddedModel, check_axioms, entropy_band, verify_theorem4
from adiabatic.edgelist import load_edgelist

DATA = Path(__file__).parent / "data"

mf = load_edgelist(DATA / "three_node.edges", close=True)
model = EmbeddedModel.finite(mf.relation, mf.entropy)
print(check_axioms(mf.relation, mf.relation.nodes).text())
for n in mf.relation.nodes:
    b = entropy_band(model, n)
    print(f"{n.name}: S- = {b.s_minus} ({b.witness_minus.name}), S+ = {b.s_plus} ({b.witness_plus.name})")

for name in ("three_node_thm4.edges", "equivalent.edges"):
    mf = load_edgelist(DATA / name, close=True)
    print()
    print(name)
    print(verify_theorem4(EmbeddedModel.finite(mf.relation, mf.entropy)).report().text())
