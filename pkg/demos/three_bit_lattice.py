"""The complete ground-projection lattice of 2-local 3-bit Hamiltonians.

Everything here is exact rational arithmetic: the subspace U_(2) of
functions on {0,1}^3 spanned by at-most-2-local terms, its 16 coatoms,
the membership strata, and the dual-lattice counts.
"""

from itertools import combinations

from groundlattice import Projection, build_lattice, enumerate_coatoms, is_ground_projection
from groundlattice.fixtures import (
    bipartite_edges,
    parity_classes,
    three_bit_configurations,
    three_bit_two_local,
)
from groundlattice.jsonio import lattice_to_dot

u = three_bit_two_local()
print(f"dim U_(2) = {u.dim} over {u.ambient_n} configurations")

confs = three_bit_configurations()
plus, minus = parity_classes()
print(f"parity classes: +1 -> {sorted(confs[i] for i in plus)}")
print(f"                -1 -> {sorted(confs[i] for i in minus)}")

# The 16 coatoms: complements are exactly the cross-parity pairs, i.e. the
# edges of the complete bipartite graph between the parity classes.
coatoms, flag = enumerate_coatoms(u)
print(f"\ncoatoms ({flag}): {len(coatoms)}")
edges = {frozenset(range(8)) - p.classical_support for p in coatoms}
assert edges == set(bipartite_edges())
for p in coatoms[:4]:
    comp = sorted(frozenset(range(8)) - p.classical_support)
    print(f"  rank-6 coatom, complement {[confs[i] for i in comp]}")
print("  ...")

# Membership strata: every support of size <= 3 is a ground set; no
# size-7 support is; sizes 4-6 are mixed.
print("\nmembership counts by support size:")
for size in range(9):
    total = 0
    members = 0
    for sub in combinations(range(8), size):
        total += 1
        if is_ground_projection(Projection.from_support(8, sub), u):
            members += 1
    print(f"  |p| = {size}: {members:3d} of {total:3d}")

# The full lattice, built top-down by intersecting coatoms.
lattice = build_lattice(u)
print(f"\nlattice: {lattice.node_count} nodes, {len(lattice.hasse_edges)} covers, "
      f"{len(lattice.coatoms)} coatoms, completeness={lattice.completeness_flag}")

dot = lattice_to_dot(lattice)
print(f"DOT export: {len(dot.splitlines())} lines (pipe to `dot -Tsvg` to draw)")
