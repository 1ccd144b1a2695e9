"""Two copper blocks: forward sectors, the entropy band and its grid check.

A state is a temperature pair (T1, T2).  Rubbing raises either temperature,
and conduction moves both towards the mean.  The states reachable from X
are everything above the segment from X to its equilibrium point.
Equilibrium states (T, T) carry entropy log T; off the diagonal only the
bracket [S-, S+] is determined by the relation.
"""

import math

from adiabatic import entropy_band, toy
from adiabatic.cli import grid_sector_disagreements

model = toy.toy_embedded_model()
print(f"{'state':>12} {'S-':>8} {'S_hat':>8} {'S+':>8} {'width':>8}")
for t1, t2 in [(1, 3), (2, 2), (1, 5), (4, 1.5)]:
    x = toy.block_point(t1, t2)
    b = entropy_band(model, x)
    print(f"{str((t1, t2)):>12} {b.s_minus:8.4f} {toy.toy_extended_entropy(x):8.4f} {b.s_plus:8.4f} {b.delta_s:8.4f}")

x = toy.block_point(1.0, 3.0)
print("\nforward sector of (1, 3), clipped to [1, 5]^2:", toy.sector_polygon(x, 5.0))
for y in [(2, 2), (1, 5), (5, 2), (1.5, 2.4)]:
    print(f"  (1, 3) -> {y}: {'reachable' if toy.toy_precedes(x, y) else 'not reachable'}")

# the same relation built from elementary moves on a grid
h = 0.05
grid = toy.toy_grid_model((1.0, 5.0), h)
gmodel = toy.toy_grid_embedded(grid)
gb = entropy_band(gmodel, x)
print(f"\ngrid h={h}: S- = {gb.s_minus:.4f} (exact 0), S+ = {gb.s_plus:.4f} (exact {math.log(2):.4f})")
bad, total = grid_sector_disagreements(grid, x)
print(f"grid reachability vs sector: {bad} mismatches away from the boundary out of {total} nodes")
