"""Cone descriptors: dimension, ray test, witnesses, extreme rays."""

from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from groundlattice.config import RunConfig
from groundlattice.cone import analyze_cone, extreme_rays, relative_interior_point
from groundlattice.errors import TrivialConeError, UnsupportedConfigurationError
from groundlattice.linalg import (
    Projection,
    eig_herm,
    frobenius,
    ground_projection,
    hermitian_matrix,
    kernel_projection,
    loewner_leq,
)
from groundlattice.subspace import ENGINE_EXACT, from_spanning_set, project_onto

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)


def block(two_by_two, scalar):
    out = np.zeros((3, 3), dtype=complex)
    out[:2, :2] = two_by_two
    out[2, 2] = scalar
    return out


def rank_one(z):
    return 0.5 * np.array([[1, np.conj(z)], [z, 1]], dtype=complex)


A1 = block(SX, 2.0)
A2 = block(SY, 0.0)
Z_PLUS = -0.5 + 0.5j * np.sqrt(3.0)
Z_MINUS = np.conj(Z_PLUS)
U_PLUS = block(2.0 * rank_one(Z_PLUS), 0.0)
U_MINUS = block(2.0 * rank_one(Z_MINUS), 0.0)
P_PLUS_COLS = np.hstack([block(rank_one(-Z_PLUS), 0.0)[:, :2], np.eye(3, dtype=complex)[:, 2:]])
P_BOTTOM = Projection.from_columns(3, np.eye(3, dtype=complex)[:, 2:])


def m3_subspace():
    return from_spanning_set([np.eye(3, dtype=complex), A1, A2])


def bit_sign(x, i):
    return Fraction(-1) ** x[i]


def three_bit_two_local():
    xs = list(product((0, 1), repeat=3))
    vecs = [[Fraction(1)] * 8]
    for i in range(3):
        vecs.append([bit_sign(x, i) for x in xs])
    for i in range(3):
        for j in range(i + 1, 3):
            vecs.append([bit_sign(x, i) * bit_sign(x, j) for x in xs])
    return xs, from_spanning_set(vecs, engine=ENGINE_EXACT, config_dims=(2, 2, 2))


def parity(x):
    return (-1) ** sum(x)


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return hermitian_matrix(g)


class TestAnalyzeConeFloat:
    def test_m3_bottom_block_has_dim_two(self):
        u = m3_subspace()
        desc = analyze_cone(P_BOTTOM, u)
        assert desc.dim_K == 2
        assert not desc.is_ray

    def test_m3_coatom_cone_is_ray_spanned_by_u_plus(self):
        u = m3_subspace()
        p_plus = Projection.from_columns(3, P_PLUS_COLS)
        assert p_plus.rank == 2
        desc = analyze_cone(p_plus, u)
        assert desc.dim_K == 1
        assert desc.is_ray
        w = relative_interior_point(desc)
        # witness is a positive multiple of u_+
        w_unit = w / np.trace(w).real
        assert frobenius(w_unit - U_PLUS / np.trace(U_PLUS).real) <= 1e-7

    def test_identity_gives_trivial_cone_and_error(self):
        u = m3_subspace()
        desc = analyze_cone(Projection.identity(3), u)
        assert desc.dim_K == 0
        with pytest.raises(TrivialConeError):
            relative_interior_point(desc)

    def test_bottom_witness_is_rank_two_with_kernel_e3(self):
        u = m3_subspace()
        desc = analyze_cone(P_BOTTOM, u)
        w = relative_interior_point(desc)
        dec = eig_herm(hermitian_matrix(w))
        assert np.sum(dec.eigenvalues > 1e-8) == 2
        ker = kernel_projection(w)
        assert ker.same_image(P_BOTTOM, tol=1e-7)
        # the derived example witness u_+ + u_- passes the same checks
        s = U_PLUS + U_MINUS
        assert np.allclose(np.linalg.eigvalsh(s), [0.0, 1.0, 3.0], atol=1e-12)
        assert kernel_projection(s).same_image(P_BOTTOM, tol=1e-10)

    def test_witness_lies_in_cone(self):
        rng = np.random.default_rng(21)
        u = m3_subspace()
        for _ in range(10):
            a = sum(float(c) * b for c, b in zip(rng.normal(size=3), u.basis))
            p = ground_projection(hermitian_matrix(a))
            desc = analyze_cone(p, u)
            if desc.dim_K == 0:
                continue
            w = relative_interior_point(desc)
            assert float(np.linalg.eigvalsh(w)[0]) >= -1e-8
            assert frobenius(p.matrix() @ w) <= 1e-8
            assert frobenius(project_onto(w, u) - w) <= 1e-8

    def test_witness_rank_stable_across_seeds(self):
        u = m3_subspace()
        ranks = []
        for seed in (0, 1, 2):
            desc = analyze_cone(P_BOTTOM, u, RunConfig(seed=seed))
            w = relative_interior_point(desc)
            ranks.append(int(np.sum(np.linalg.eigvalsh(w) > 1e-8)))
        assert len(set(ranks)) == 1

    def test_ground_energy_zero_on_witnesses(self):
        # with id in U and p != 0, nonzero cone elements have ground energy 0
        # and ground projection equal to the kernel projection
        u = m3_subspace()
        for p in (P_BOTTOM, Projection.from_columns(3, P_PLUS_COLS)):
            desc = analyze_cone(p, u)
            w = relative_interior_point(desc)
            dec = eig_herm(hermitian_matrix(w))
            assert abs(dec.ground_energy) <= 1e-8
            assert ground_projection(hermitian_matrix(w)).same_image(
                kernel_projection(w), tol=1e-6)

    def test_antitone_in_p(self):
        rng = np.random.default_rng(22)
        for trial in range(8):
            n = 4
            u = from_spanning_set(
                [np.eye(n, dtype=complex)] + [random_hermitian(rng, n) for _ in range(3)])
            cols = rng.normal(size=(n, 2)) + 1j * rng.normal(size=(n, 2))
            p = Projection.from_columns(n, cols[:, :1])
            q = Projection.from_columns(n, cols)
            assert loewner_leq(p, q)
            dp = analyze_cone(p, u)
            dq = analyze_cone(q, u)
            assert dq.dim_K <= dp.dim_K
            if dq.dim_K >= 1:
                w = relative_interior_point(dq)
                # w must lie in K(p) too
                assert frobenius(p.matrix() @ w) <= 1e-7
                assert float(np.linalg.eigvalsh(w)[0]) >= -1e-8


class TestAnalyzeConeExact:
    def test_rank_seven_support_has_trivial_cone(self):
        xs, u = three_bit_two_local()
        p = Projection.from_support(8, set(range(8)) - {3})
        desc = analyze_cone(p, u)
        assert desc.dim_K == 0

    def test_cross_pair_cone_is_ray(self):
        xs, u = three_bit_two_local()
        # complement {000, 111}: parity differs
        p = Projection.from_support(8, set(range(8)) - {0, 7})
        desc = analyze_cone(p, u)
        assert desc.dim_K == 1 and desc.is_ray
        w = relative_interior_point(desc)
        assert w[0] == w[7] == Fraction(1, 2)
        assert all(w[i] == 0 for i in range(8) if i not in (0, 7))

    def test_equal_parity_pair_cone_is_trivial(self):
        xs, u = three_bit_two_local()
        # {000, 011} have equal parity
        p = Projection.from_support(8, set(range(8)) - {0, 3})
        desc = analyze_cone(p, u)
        assert desc.dim_K == 0

    def test_exact_dim_matches_float_dim_on_diagonal_embedding(self):
        xs, u = three_bit_two_local()
        for support in ({0, 7}, {0, 3}, {0, 1, 2, 7}):
            p_exact = Projection.from_support(8, set(range(8)) - support)
            d_exact = analyze_cone(p_exact, u)
            u_float = from_spanning_set(
                [np.diag([float(v) for v in b]).astype(complex) for b in u.basis])
            cols = np.eye(8, dtype=complex)[:, sorted(set(range(8)) - support)]
            p_float = Projection.from_columns(8, cols)
            d_float = analyze_cone(p_float, u_float)
            assert d_exact.dim_K == d_float.dim_K

    def test_antitone_exact(self):
        xs, u = three_bit_two_local()
        small = Projection.from_support(8, {1})
        large = Projection.from_support(8, {1, 2, 4})
        d_small = analyze_cone(small, u)
        d_large = analyze_cone(large, u)
        assert d_large.dim_K <= d_small.dim_K
        w = relative_interior_point(d_large)
        # the witness of the larger projection lies in the smaller cone
        assert w[1] == 0 and all(v >= 0 for v in w)


class TestExtremeRays:
    def test_m3_bottom_rays_are_u_plus_and_u_minus(self):
        u = m3_subspace()
        desc = analyze_cone(P_BOTTOM, u)
        rays = extreme_rays(desc, subspace=u)
        assert len(rays) == 2
        targets = [U_PLUS / np.trace(U_PLUS).real, U_MINUS / np.trace(U_MINUS).real]
        for t in targets:
            assert min(frobenius(r - t) for r in rays) <= 1e-6
        # ray generators share the witness laws: ground energy 0, ground
        # projection equal to the kernel projection
        for r in rays:
            dec = eig_herm(hermitian_matrix(r))
            assert abs(dec.ground_energy) <= 1e-8
            assert ground_projection(hermitian_matrix(r)).same_image(
                kernel_projection(r), tol=1e-6)

    def test_ray_cone_returns_single_generator(self):
        u = m3_subspace()
        p_plus = Projection.from_columns(3, P_PLUS_COLS)
        desc = analyze_cone(p_plus, u)
        rays = extreme_rays(desc, subspace=u)
        assert len(rays) == 1
        assert frobenius(rays[0] - U_PLUS / np.trace(U_PLUS).real) <= 1e-7

    def test_max_ray_dim_guard(self):
        u = m3_subspace()
        desc = analyze_cone(Projection.zero(3), u)
        assert desc.dim_K == 3
        with pytest.raises(UnsupportedConfigurationError):
            extreme_rays(desc, RunConfig(max_ray_dim=2), subspace=u)

    def test_three_bit_two_edge_cone_rays_match_bipartite_edges(self):
        xs, u = three_bit_two_local()
        # complement {000, 111, 011, 100}: two + and two - parities
        comp = {0, 7, 3, 4}
        p = Projection.from_support(8, set(range(8)) - comp)
        desc = analyze_cone(p, u)
        assert desc.dim_K == 3
        rays = extreme_rays(desc)
        # brute-force oracle: cross-parity pairs inside the complement
        expected = []
        for a in sorted(comp):
            for b in sorted(comp):
                if a < b and parity(xs[a]) != parity(xs[b]):
                    g = [Fraction(0)] * 8
                    g[a] = g[b] = Fraction(1, 2)
                    expected.append(tuple(g))
        assert sorted(tuple(r) for r in rays) == sorted(expected)
        assert len(rays) == 4
        # exactly dim_K of them are linearly independent
        from groundlattice import exactla as ela
        assert ela.rank([list(r) for r in rays]) == 3

    def test_float_dim_three_cone_via_diagonal_embedding(self):
        # same instance as above, pushed through the float engine
        xs, u = three_bit_two_local()
        u_float = from_spanning_set(
            [np.diag([float(v) for v in b]).astype(complex) for b in u.basis])
        comp = {0, 7, 3, 4}
        cols = np.eye(8, dtype=complex)[:, sorted(set(range(8)) - comp)]
        p = Projection.from_columns(8, cols)
        desc = analyze_cone(p, u_float)
        assert desc.dim_K == 3
        rays = extreme_rays(desc, subspace=u_float)
        assert len(rays) >= 3
        expected = []
        for a in sorted(comp):
            for b in sorted(comp):
                if a < b and parity(xs[a]) != parity(xs[b]):
                    g = np.zeros(8)
                    g[a] = g[b] = 0.5
                    expected.append(np.diag(g).astype(complex))
        for r in rays:
            assert min(frobenius(r - e) for e in expected) <= 1e-6
