"""Frustration-free ground sets on three bits, next to the full lattice.

A frustration-free 2-local Hamiltonian's ground set is the intersection of
its local terms' ground sets, so the node set of this smaller lattice is
the closure of cylinder sets under intersection.  It sits inside the full
ground-projection lattice of U_(2).
"""

from itertools import combinations

from groundlattice import build_lattice, ff_lattice_3bit
from groundlattice.fixtures import parity_classes, three_bit_two_local

ff = ff_lattice_3bit()
print(f"frustration-free lattice: {ff.node_count} nodes, "
      f"{len(ff.coatoms)} coatoms")

full = build_lattice(three_bit_two_local())
print(f"full ground-projection lattice: {full.node_count} nodes")

ff_supports = {p.classical_support for p in ff.nodes}
full_supports = {p.classical_support for p in full.nodes}
assert ff_supports <= full_supports
print(f"every frustration-free ground set is a ground set: "
      f"{len(ff_supports)} <= {len(full_supports)} nodes")

# Small supports: everything of size <= 2 is frustration-free reachable.
for size in range(3):
    count = sum(1 for sub in combinations(range(8), size)
                if frozenset(sub) in ff_supports)
    print(f"  supports of size {size}: {count} of {len(list(combinations(range(8), size)))}")

# Where the two lattices differ first: size-3 supports.
in_full_only = sorted(
    tuple(sorted(s)) for s in (full_supports - ff_supports) if len(s) == 3)
print(f"\nsize-3 ground sets that are NOT frustration-free reachable: "
      f"{len(in_full_only)}")
plus, minus = parity_classes()
inside_class = [s for s in in_full_only
                if frozenset(s) <= plus or frozenset(s) <= minus]
print(f"of those, {len(inside_class)} lie inside a single parity class "
      f"(the dual five-set exceptions, seen from below)")
