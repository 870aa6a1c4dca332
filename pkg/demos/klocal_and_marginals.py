"""k-local spaces, partial traces, and marginal bodies for small systems."""

import numpy as np

from groundlattice import SiteSystem, build_klocal, marginal_map, partial_trace
from groundlattice.manybody import (
    affine_dimension,
    klocal_dimension,
    marginal_polytope_vertices,
    truncation_rows,
)

# Dimension of U_(k) on uniform sites follows a closed form; the builders
# must reproduce it exactly.
print("dim U_(k) for bits (classical) and qubits (quantum):")
for n_sites in range(2, 5):
    row = []
    for k in range(1, n_sites + 1):
        bits = build_klocal(SiteSystem.bits(n_sites), k)
        qubits = build_klocal(SiteSystem.qubits(n_sites), k)
        assert bits.dim == klocal_dimension(SiteSystem.bits(n_sites), k)
        assert qubits.dim == klocal_dimension(SiteSystem.qubits(n_sites), k)
        row.append(f"k={k}: {bits.dim}/{qubits.dim}")
    print(f"  N={n_sites}:  " + "   ".join(row))
print("(three qubits, k=2: 37 means the marginal body has dimension 36)")

# Partial traces: trace out site 2 of sigma_X (x) I and get 2 sigma_X.
sx = np.array([[0, 1], [1, 0]], dtype=complex)
sys2 = SiteSystem.qubits(2)
print(f"\ntr_2(sigma_X (x) I) =\n{np.real(partial_trace(np.kron(sx, np.eye(2)), sys2, (1,)))}")

# Marginals of a random 3-qubit state: overlapping 2-body marginals agree
# after tracing down to the shared site.
rng = np.random.default_rng(1)
g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
rho = g @ g.conj().T
rho /= np.trace(rho).real
sys3 = SiteSystem.qubits(3)
tup = marginal_map(rho, sys3, 2)
pair_sys = SiteSystem.qubits(2)
m01 = tup.entries[(0, 1)]
m12 = tup.entries[(1, 2)]
site1_a = partial_trace(m01, pair_sys, (0,))
site1_b = partial_trace(m12, pair_sys, (1,))
print(f"\n2-body marginals of a random state on subsets {tup.subsets()}")
print(f"overlap consistency at site 1: "
      f"|tr m_01 - tr m_12| = {np.linalg.norm(site1_a - site1_b):.2e}")

# Classical marginal polytope: 0-1 vertices from the truncation matrix.
bits3 = SiteSystem.bits(3)
cols = marginal_polytope_vertices(bits3, 2)
rows = truncation_rows(bits3, 2)
print(f"\n3-bit, k=2 marginal polytope: {len(cols)} vertices of length {len(rows)}, "
      f"affine dimension {affine_dimension(cols)}")
print("first vertex (configuration (0,0,0)):")
for (nu, y), val in zip(rows, cols[0]):
    if val:
        print(f"  subset {nu} sees {y}")
