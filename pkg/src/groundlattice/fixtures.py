"""Named fixtures: the rank-three non-commutative example and the 3-bit system.

These embed the library's reference instances as code so that tests and
the ``verify`` command need no external data.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product

import numpy as np

from .linalg import Projection
from .manybody import SiteSystem, build_klocal
from .subspace import OperatorSubspace, from_spanning_set

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


def block_plus_scalar(two_by_two: np.ndarray, scalar: float) -> np.ndarray:
    out = np.zeros((3, 3), dtype=complex)
    out[:2, :2] = two_by_two
    out[2, 2] = scalar
    return out


def rank_one_qubit(z: complex) -> np.ndarray:
    """p(z) = [[1, conj(z)], [z, 1]] / 2, a rank-one projection for |z| = 1."""
    return 0.5 * np.array([[1, np.conj(z)], [z, 1]], dtype=complex)


# the two distinguished unit phases with real part -1/2
Z_PLUS = -0.5 + 0.5j * np.sqrt(3.0)
Z_MINUS = -0.5 - 0.5j * np.sqrt(3.0)

M3_A1 = block_plus_scalar(SIGMA_X, 2.0)
M3_A2 = block_plus_scalar(SIGMA_Y, 0.0)
U_PLUS = block_plus_scalar(2.0 * rank_one_qubit(Z_PLUS), 0.0)
U_MINUS = block_plus_scalar(2.0 * rank_one_qubit(Z_MINUS), 0.0)


def m3_subspace() -> OperatorSubspace:
    """Span of the identity, sigma_X (+) 2, and sigma_Y (+) 0 inside M_3."""
    return from_spanning_set([np.eye(3, dtype=complex), M3_A1, M3_A2])


def m3_p_plus() -> Projection:
    cols = np.hstack([block_plus_scalar(rank_one_qubit(-Z_PLUS), 0.0)[:, :2],
                      np.eye(3, dtype=complex)[:, 2:]])
    return Projection.from_columns(3, cols)


def m3_p_minus() -> Projection:
    cols = np.hstack([block_plus_scalar(rank_one_qubit(-Z_MINUS), 0.0)[:, :2],
                      np.eye(3, dtype=complex)[:, 2:]])
    return Projection.from_columns(3, cols)


def m3_p_bottom() -> Projection:
    """The rank-one projection 0 (+) 1, the meet of the two special coatoms."""
    return Projection.from_columns(3, np.eye(3, dtype=complex)[:, 2:])


def m3_known_coatoms() -> list[Projection]:
    """The two rank-two coatoms; a measure-zero stratum that random sampling
    cannot hit, so lattice construction merges them in explicitly."""
    return [m3_p_plus(), m3_p_minus()]


# --------------------------------------------------------------------------
# three bits, 2-local
# --------------------------------------------------------------------------

def three_bit_system() -> SiteSystem:
    return SiteSystem.bits(3)


def three_bit_two_local() -> OperatorSubspace:
    return build_klocal(three_bit_system(), 2)


def three_bit_configurations() -> list[tuple[int, int, int]]:
    return list(product((0, 1), repeat=3))


def parity_of(x: tuple[int, ...]) -> int:
    return (-1) ** sum(x)


def parity_vector() -> list[Fraction]:
    return [Fraction(parity_of(x)) for x in three_bit_configurations()]


def parity_classes() -> tuple[frozenset[int], frozenset[int]]:
    """Index sets of even-parity (+1) and odd-parity (-1) configurations."""
    confs = three_bit_configurations()
    plus = frozenset(i for i, x in enumerate(confs) if parity_of(x) == 1)
    minus = frozenset(i for i, x in enumerate(confs) if parity_of(x) == -1)
    return plus, minus


def bipartite_edges() -> list[frozenset[int]]:
    """All pairs with opposite parity: the complete bipartite graph on the
    two parity classes (16 edges)."""
    plus, minus = parity_classes()
    return [frozenset({a, b}) for a in sorted(plus) for b in sorted(minus)]


def complement_pair_edges() -> list[frozenset[int]]:
    """The edges joining a configuration to its bitwise complement."""
    confs = three_bit_configurations()
    out = []
    for i, x in enumerate(confs):
        j = confs.index(tuple(1 - b for b in x))
        if i < j:
            out.append(frozenset({i, j}))
    return out
