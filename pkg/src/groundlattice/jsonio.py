"""Documented JSON schemas and DOT export.

Matrix:      {"n": int, "entries": [[re, im], ...]} row-major, n*n pairs.
Projection:  {"support": [ints]} (commutative) or
             {"image_basis": [column, ...]} with column = [[re, im], ...].
Subspace:    {"engine": ..., "ambient_n": int, "basis": [matrix, ...]} or
             {"engine": ..., "config_dims": [ints], "vectors": [["p/q", ...], ...]}.
Cone:        {"dim_K": int, "is_ray": bool, "witness": matrix|null,
              "extreme_rays": [matrix, ...]|null}.
Lattice:     {"completeness": ..., "nodes": [{"id", "rank", "projection"}],
              "hasse": [[child, parent], ...], "coatoms": [ids]}.
Marginals:   [{"nu": [ints], "matrix": matrix}, ...].
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .cone import ConeDescriptor
from .errors import InputError
from .lattice import GroundLattice
from .linalg import Projection, hermitian_matrix
from .manybody import MarginalTuple
from .subspace import ENGINE_EXACT, ENGINE_FLOAT, OperatorSubspace, from_spanning_set


def matrix_to_json(a) -> dict:
    if isinstance(a, list):  # exact engine vector: embed as a diagonal matrix
        a = np.diag([float(x) for x in a]).astype(complex)
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    entries = [[float(x.real), float(x.imag)] for x in a.reshape(-1)]
    return {"n": n, "entries": entries}


def matrix_from_json(obj) -> np.ndarray:
    try:
        n = int(obj["n"])
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"matrix object needs 'n' and 'entries': {exc}", field="matrix")
    if len(entries) != n * n:
        raise InputError(f"expected {n * n} entries, got {len(entries)}", field="entries")
    flat = np.array([complex(re, im) for re, im in entries])
    return hermitian_matrix(flat.reshape(n, n))


def projection_to_json(p: Projection) -> dict:
    if p.is_commutative:
        return {"support": sorted(p.classical_support)}
    cols = [[[float(x.real), float(x.imag)] for x in p.image_basis[:, j]]
            for j in range(p.rank)]
    return {"image_basis": cols}


def projection_from_json(obj, n: int) -> Projection:
    if "support" in obj:
        return Projection.from_support(n, obj["support"])
    if "image_basis" in obj:
        cols = obj["image_basis"]
        if not cols:
            return Projection.zero(n)
        mat = np.array([[complex(re, im) for re, im in col] for col in cols]).T
        if mat.shape[0] != n:
            raise InputError(f"image basis columns have length {mat.shape[0]}, expected {n}",
                             field="image_basis")
        gram = mat.conj().T @ mat
        if np.linalg.norm(gram - np.eye(mat.shape[1])) <= 1e-12:
            # already orthonormal: keep verbatim so parse/serialize round-trips
            return Projection(n=n, image_basis=mat)
        return Projection.from_columns(n, mat)
    raise InputError("projection object needs 'support' or 'image_basis'",
                     field="projection")


def subspace_to_json(u: OperatorSubspace) -> dict:
    if u.is_exact:
        dims = list(u.site_structure[1]) if u.site_structure else [u.ambient_n]
        return {"engine": u.engine,
                "config_dims": dims,
                "vectors": [[str(x) for x in v] for v in u.basis]}
    return {"engine": u.engine,
            "ambient_n": u.ambient_n,
            "basis": [matrix_to_json(b) for b in u.basis]}


def subspace_from_json(obj) -> OperatorSubspace:
    engine = obj.get("engine", ENGINE_FLOAT)
    if engine == ENGINE_EXACT or "vectors" in obj or "config_dims" in obj:
        try:
            dims = tuple(int(d) for d in obj["config_dims"])
            vectors = [[Fraction(x) for x in v] for v in obj["vectors"]]
        except (KeyError, ValueError, TypeError) as exc:
            raise InputError(f"bad exact subspace object: {exc}", field="vectors")
        return from_spanning_set(vectors, engine=ENGINE_EXACT, config_dims=dims)
    try:
        mats = [matrix_from_json(m) for m in obj["basis"]]
    except KeyError as exc:
        raise InputError(f"float subspace object needs 'basis': {exc}", field="basis")
    return from_spanning_set(mats, engine=ENGINE_FLOAT)


def cone_to_json(desc: ConeDescriptor) -> dict:
    witness = None
    if desc.interior_witness is not None:
        witness = matrix_to_json(desc.interior_witness)
    rays = None
    if desc.extreme_ray_generators is not None:
        rays = [matrix_to_json(r) for r in desc.extreme_ray_generators]
    return {"dim_K": desc.dim_K, "is_ray": desc.is_ray,
            "witness": witness, "extreme_rays": rays}


def lattice_to_json(lat: GroundLattice) -> dict:
    return {
        "completeness": lat.completeness_flag,
        "nodes": [{"id": i, "rank": p.rank, "projection": projection_to_json(p)}
                  for i, p in enumerate(lat.nodes)],
        "hasse": [[child, parent] for child, parent in lat.hasse_edges],
        "coatoms": list(lat.coatoms),
    }


def lattice_to_dot(lat: GroundLattice) -> str:
    lines = ["digraph ground_lattice {", "  rankdir=BT;"]
    for i, p in enumerate(lat.nodes):
        if p.is_commutative:
            label = "{" + ",".join(str(x) for x in sorted(p.classical_support)) + "}"
        else:
            label = f"rank {p.rank}"
        shape = ', shape=box' if i in lat.coatoms else ''
        lines.append(f'  n{i} [label="{label}"{shape}];')
    for child, parent in lat.hasse_edges:
        lines.append(f"  n{child} -> n{parent};")
    lines.append("}")
    return "\n".join(lines)


def marginal_tuple_to_json(tup: MarginalTuple) -> list:
    return [{"nu": list(nu), "matrix": matrix_to_json(tup.entries[nu])}
            for nu in tup.subsets()]
