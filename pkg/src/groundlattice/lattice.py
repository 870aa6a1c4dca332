"""The lattice of ground projections of an operator subspace.

Membership is decided by the greatest-projection characterization: the
projections q with K(q) = K(p) have a greatest element q_max(p), computed
as the kernel of a relative-interior witness of K(p), and p belongs to the
lattice exactly when p = q_max(p).  Coatoms are the members whose cone is
a ray, and the whole lattice is generated from the coatoms by closing
under image intersection.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import exactla as ela
from .cone import ConeDescriptor, analyze_cone, extreme_rays
from .config import RunConfig
from .errors import IncompleteRaysError, NodeBudgetError, PreconditionError
from .linalg import Projection, ground_projection, image_intersection, kernel_projection, loewner_leq
from .subspace import OperatorSubspace

#: principal-angle tolerance for canonical projection equality (float engine)
CANON_TOL = 1e-7


def _require_identity(u: OperatorSubspace):
    if not u.contains_identity:
        raise PreconditionError("the subspace must contain the identity matrix")


def _kernel_of(witness, u: OperatorSubspace, cfg: RunConfig) -> Projection:
    if u.is_exact:
        support = frozenset(i for i, v in enumerate(witness) if v == 0)
        return Projection.from_support(u.ambient_n, support)
    return kernel_projection(witness, cfg.tol_rank)


def q_max_from_descriptor(desc: ConeDescriptor, u: OperatorSubspace,
                          cfg: RunConfig) -> Projection:
    if desc.dim_K == 0:
        return u.identity_projection()
    return _kernel_of(desc.interior_witness, u, cfg)


def q_max(p: Projection, u: OperatorSubspace, cfg: RunConfig | None = None) -> Projection:
    """Greatest projection with the same cone as p.

    The kernel of a maximal-rank witness of K(p); the identity when the
    cone is trivial, and the zero projection when the witness is positive
    definite.  Requires the identity inside U.
    """
    cfg = cfg or RunConfig()
    _require_identity(u)
    desc = analyze_cone(p, u, cfg)
    return q_max_from_descriptor(desc, u, cfg)


def is_ground_projection(p: Projection, u: OperatorSubspace,
                         cfg: RunConfig | None = None) -> bool:
    """Membership in the ground-projection lattice: p equals q_max(p)."""
    cfg = cfg or RunConfig()
    return q_max(p, u, cfg).same_image(p, tol=CANON_TOL)


def is_coatom(p: Projection, u: OperatorSubspace, cfg: RunConfig | None = None) -> bool:
    """Maximal proper lattice element test: member with a ray cone."""
    cfg = cfg or RunConfig()
    _require_identity(u)
    desc = analyze_cone(p, u, cfg)
    if desc.dim_K != 1:
        return False
    return q_max_from_descriptor(desc, u, cfg).same_image(p, tol=CANON_TOL)


def coatom_decomposition(p: Projection, u: OperatorSubspace,
                         cfg: RunConfig | None = None) -> list[Projection]:
    """Coatoms q_1 .. q_d (d = dim K(p)) whose intersection is p.

    The q_i are kernels of linearly independent extreme-ray generators of
    K(p), chosen greedily to cover new kernel directions first.  Returns
    [] for p = id (the empty infimum).
    """
    cfg = cfg or RunConfig()
    _require_identity(u)
    if p.rank == 0:
        raise PreconditionError("the zero projection has no finite coatom decomposition")
    desc = analyze_cone(p, u, cfg)
    member = q_max_from_descriptor(desc, u, cfg).same_image(p, tol=CANON_TOL)
    if not member:
        raise PreconditionError("p is not a ground projection of U")
    if desc.dim_K == 0:
        return []  # p = id: the infimum of no coatoms
    rays = extreme_rays(desc, cfg, subspace=None if u.is_exact else u)
    chosen = _select_covering_rays(rays, desc.dim_K, u)
    coatoms = [_kernel_of(v, u, cfg) for v in chosen]
    meet = coatoms[0]
    for q in coatoms[1:]:
        meet = image_intersection(meet, q, cfg.tol_rank)
    if not meet.same_image(p, tol=CANON_TOL):
        raise IncompleteRaysError(
            "extreme-ray kernels failed to intersect back to p", partial=coatoms)
    return coatoms


def _select_covering_rays(rays: list, d: int, u: OperatorSubspace) -> list:
    """Pick d linearly independent generators, preferring those that shrink
    the common kernel fastest (new support first in the exact engine)."""
    if u.is_exact:
        chosen: list = []
        covered: set[int] = set()
        pool = list(rays)
        while pool and len(chosen) < d:
            def gain(g):
                return len({i for i, v in enumerate(g) if v != 0} - covered)
            pool.sort(key=lambda g: (-gain(g), tuple(g)))
            candidate = pool.pop(0)
            if ela.rank([list(c) for c in chosen + [candidate]]) > len(chosen):
                chosen.append(candidate)
                covered |= {i for i, v in enumerate(candidate) if v != 0}
        return chosen
    chosen = []
    stack: list[np.ndarray] = []
    for g in rays:
        trial = stack + [np.asarray(g).reshape(-1).view(float)]
        m = np.stack(trial)
        sv = np.linalg.svd(m, compute_uv=False)
        if int(np.sum(sv > 1e-9 * max(1.0, sv[0]))) > len(stack):
            chosen.append(g)
            stack = trial
        if len(chosen) == d:
            break
    return chosen


def enumerate_coatoms(u: OperatorSubspace,
                      cfg: RunConfig | None = None) -> tuple[list[Projection], str]:
    """All coatoms (exact engine) or a sampled, deduplicated subset (float).

    Exact: iterate every support subset with the exact ray-plus-membership
    test; the list is complete.  Float: draw cfg.samples random elements of
    U with unit Gaussian coefficients, collect their ground projections,
    keep the ray cones, and always test the zero projection as well.
    Returns (coatoms, completeness flag).
    """
    cfg = cfg or RunConfig()
    _require_identity(u)
    n = u.ambient_n
    if u.is_exact:
        found = []
        for mask in range(2 ** n):
            support = frozenset(i for i in range(n) if mask >> i & 1)
            if len(support) == n:
                continue  # the identity is never a coatom
            p = Projection.from_support(n, support)
            desc = analyze_cone(p, u, cfg)
            if desc.dim_K != 1:
                continue
            if q_max_from_descriptor(desc, u, cfg).same_image(p):
                found.append(p)
        found.sort(key=lambda p: p.sort_key())
        return found, "exact"

    candidates: list[Projection] = [u.zero_projection()]
    rng = cfg.rng_for(3)
    for _ in range(cfg.samples):
        coeffs = rng.normal(size=u.dim)
        a = u.element_from(coeffs)
        candidates.append(ground_projection(a, cfg.tol_spec))
    found = []
    for p in candidates:
        desc = analyze_cone(p, u, cfg)
        if desc.dim_K == 1:
            found.append(p)
    return _dedupe(found), "sampled"


def _dedupe(projections: list[Projection]) -> list[Projection]:
    buckets: dict[tuple, list[Projection]] = {}
    out = []
    for p in projections:
        key = (p.rank, tuple(np.round(np.diag(p.matrix()).real, 4))) \
            if not p.is_commutative else (p.rank, tuple(sorted(p.classical_support)))
        bucket = buckets.setdefault(key, [])
        if any(p.same_image(q, tol=CANON_TOL) for q in bucket):
            continue
        bucket.append(p)
        out.append(p)
    out.sort(key=lambda p: p.sort_key())
    return out


@dataclass
class GroundLattice:
    """Canonicalized node set with Hasse edges and the coatom subset."""

    subspace: OperatorSubspace | None
    nodes: list[Projection]
    hasse_edges: list[tuple[int, int]]   # (child index, parent index) covers
    coatoms: list[int]
    completeness_flag: str

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    def index_of(self, p: Projection) -> int | None:
        for i, q in enumerate(self.nodes):
            if q.same_image(p, tol=CANON_TOL):
                return i
        return None

    def contains(self, p: Projection) -> bool:
        return self.index_of(p) is not None

    def dual_supports(self) -> set[frozenset[int]]:
        """Complements of the node supports (commutative engine only)."""
        out = set()
        for p in self.nodes:
            if not p.is_commutative:
                raise PreconditionError("dual supports need the commutative engine")
            out.add(frozenset(range(p.n)) - p.classical_support)
        return out


def lattice_from_nodes(u: OperatorSubspace | None, nodes: list[Projection],
                       flag: str, tol: float = CANON_TOL) -> GroundLattice:
    """Order a node set, compute Hasse covers, and mark the coatoms.

    Covers come from transitive reduction of the inclusion digraph; only
    nodes of strictly intermediate rank can witness non-covering.
    """
    nodes = sorted(nodes, key=lambda p: p.sort_key())
    n_nodes = len(nodes)
    below: list[list[int]] = [[] for _ in range(n_nodes)]  # i -> strict successors
    for i, a in enumerate(nodes):
        for j, b in enumerate(nodes):
            if i != j and a.rank <= b.rank and loewner_leq(a, b, tol):
                below[i].append(j)
    succ_sets = [set(s) for s in below]
    edges = []
    for i in range(n_nodes):
        for j in below[i]:
            ri, rj = nodes[i].rank, nodes[j].rank
            covered = any(ri < nodes[k].rank < rj and j in succ_sets[k]
                          for k in below[i])
            if not covered:
                edges.append((i, j))
    top = max(range(n_nodes), key=lambda i: nodes[i].rank) if n_nodes else None
    coatoms = [i for (i, j) in edges if j == top]
    return GroundLattice(subspace=u, nodes=nodes, hasse_edges=edges,
                         coatoms=sorted(coatoms), completeness_flag=flag)


def build_lattice(u: OperatorSubspace, cfg: RunConfig | None = None) -> GroundLattice:
    """Close {id} and the coatoms under pairwise image intersection.

    Adds the zero projection, computes Hasse covers over the image order,
    and inherits the completeness flag of the coatom enumeration.  Raises
    :class:`NodeBudgetError` carrying the partial lattice if the closure
    exceeds cfg.max_nodes.
    """
    cfg = cfg or RunConfig()
    _require_identity(u)
    coatoms, flag = enumerate_coatoms(u, cfg)
    return close_to_lattice(u, coatoms, flag, cfg)


def close_to_lattice(u: OperatorSubspace, coatoms: list[Projection], flag: str,
                     cfg: RunConfig | None = None) -> GroundLattice:
    """Intersection closure of {id} ∪ coatoms, plus the zero projection."""
    cfg = cfg or RunConfig()
    n = u.ambient_n
    if u.is_exact:
        supports = {frozenset(range(n)), frozenset()}
        supports |= {p.classical_support for p in coatoms}
        frontier = set(supports)
        while frontier:
            fresh = set()
            for a in frontier:
                for b in supports:
                    meet = a & b
                    if meet not in supports:
                        fresh.add(meet)
            supports |= fresh
            if len(supports) > cfg.max_nodes:
                partial = lattice_from_nodes(
                    u, [Projection.from_support(n, s) for s in list(supports)[: cfg.max_nodes]], flag)
                raise NodeBudgetError(
                    f"intersection closure exceeded {cfg.max_nodes} nodes", partial=partial)
            frontier = fresh
        nodes = [Projection.from_support(n, s) for s in supports]
        return lattice_from_nodes(u, nodes, flag)

    nodes = _dedupe([u.identity_projection(), u.zero_projection()] + list(coatoms))
    frontier = list(nodes)
    while frontier:
        fresh: list[Projection] = []
        for a in frontier:
            for b in nodes:
                meet = image_intersection(a, b, cfg.tol_rank)
                if not any(meet.same_image(q, tol=CANON_TOL) for q in nodes) and \
                        not any(meet.same_image(q, tol=CANON_TOL) for q in fresh):
                    fresh.append(meet)
        nodes.extend(fresh)
        if len(nodes) > cfg.max_nodes:
            partial = lattice_from_nodes(u, nodes[: cfg.max_nodes], flag)
            raise NodeBudgetError(
                f"intersection closure exceeded {cfg.max_nodes} nodes", partial=partial)
        frontier = fresh
    return lattice_from_nodes(u, nodes, flag)
