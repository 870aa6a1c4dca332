"""Exact linear algebra over the rationals: row echelon, null spaces, simplex.

Everything here works on lists of :class:`fractions.Fraction` and never
rounds.  Matrices are lists of rows.  Sizes stay small (a few dozen rows),
so plain Gaussian elimination and a dense two-phase simplex are adequate.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Vec = list[Fraction]
Mat = list[Vec]


def frac(x) -> Fraction:
    """Coerce ints, strings like '2/3', and Fractions; reject floats."""
    if isinstance(x, float):
        raise TypeError("exact arithmetic does not accept floats")
    return Fraction(x)


def fvec(xs: Iterable) -> Vec:
    return [frac(x) for x in xs]


def zeros(n: int) -> Vec:
    return [Fraction(0)] * n


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def mat_vec(m: Mat, v: Sequence[Fraction]) -> Vec:
    return [dot(row, v) for row in m]


def scale(v: Sequence[Fraction], c: Fraction) -> Vec:
    return [c * x for x in v]


def add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Vec:
    return [x + y for x, y in zip(a, b)]


def rref(m: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form; returns (rref matrix, pivot column list)."""
    m = [list(row) for row in m]
    if not m:
        return m, []
    rows, cols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = Fraction(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(m: Mat) -> int:
    return len(rref(m)[1])


def null_space(m: Mat, ncols: int | None = None) -> Mat:
    """Basis (list of vectors) of {x : m @ x = 0}, exact.

    ``ncols`` must be given when ``m`` has no rows.
    """
    if not m:
        if ncols is None:
            raise ValueError("ncols required for an empty constraint matrix")
        return [[Fraction(i == j) for j in range(ncols)] for i in range(ncols)]
    cols = len(m[0])
    red, pivots = rref(m)
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = zeros(cols)
        v[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][fc]
        basis.append(v)
    return basis


def solve(m: Mat, b: Vec) -> Vec | None:
    """One solution of m @ x = b, or None if inconsistent."""
    if not m:
        return None
    cols = len(m[0])
    aug = [list(row) + [bi] for row, bi in zip(m, b)]
    red, pivots = rref(aug)
    for r in range(len(red)):
        if all(red[r][c] == 0 for c in range(cols)) and red[r][cols] != 0:
            return None
    x = zeros(cols)
    for r, pc in enumerate(pivots):
        if pc == cols:
            return None
        x[pc] = red[r][cols]
    return x


def in_span(basis: Mat, v: Vec) -> bool:
    """Whether v lies in the row span of ``basis``."""
    if not basis:
        return all(x == 0 for x in v)
    return solve([list(col) for col in zip(*basis)], v) is not None


def orthogonalize(vectors: Mat) -> Mat:
    """Gram-Schmidt without normalization: exact pairwise-orthogonal basis.

    Dependent inputs are dropped.  Norms stay rational only as squares, so
    the output is orthogonal, not orthonormal.
    """
    basis: Mat = []
    for v in vectors:
        w = list(v)
        for b in basis:
            nb = dot(b, b)
            if nb != 0:
                w = [x - dot(b, w) / nb * y for x, y in zip(w, b)]
        if any(x != 0 for x in w):
            basis.append(w)
    return basis


class SimplexStatus:
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


def simplex_max(c: Vec, a_eq: Mat, b_eq: Vec) -> tuple[str, Fraction | None, Vec | None]:
    """Maximize c.x subject to a_eq @ x = b_eq, x >= 0, exactly.

    Two-phase primal simplex with Bland's rule.  Returns
    (status, optimal value, optimizer).
    """
    m = len(a_eq)
    n = len(c)
    rows = []
    rhs = []
    for i in range(m):
        row = list(a_eq[i])
        r = b_eq[i]
        if r < 0:
            row = [-x for x in row]
            r = -r
        rows.append(row)
        rhs.append(r)

    # Phase 1 tableau: minimize sum of artificials.
    total = n + m
    tab = [rows[i] + [Fraction(int(i == j)) for j in range(m)] + [rhs[i]] for i in range(m)]
    basis = [n + i for i in range(m)]

    def pivot(tab, basis, pr, pc):
        piv = tab[pr][pc]
        tab[pr] = [x / piv for x in tab[pr]]
        for i in range(len(tab)):
            if i != pr and tab[i][pc] != 0:
                f = tab[i][pc]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[pr])]
        basis[pr] = pc

    def run(tab, basis, obj, allowed):
        # obj: objective row over `allowed` columns (maximization reduced costs)
        while True:
            # reduced costs: obj_j - sum over basic rows
            red = []
            for j in allowed:
                if j in basis:
                    red.append((j, Fraction(0)))
                    continue
                z = sum(obj[basis[i]] * tab[i][j] for i in range(len(tab)))
                red.append((j, obj[j] - z))
            enter = next((j for j, rc in red if rc > 0), None)  # Bland: lowest index
            if enter is None:
                return SimplexStatus.OPTIMAL
            ratios = []
            for i in range(len(tab)):
                if tab[i][enter] > 0:
                    ratios.append((tab[i][-1] / tab[i][enter], basis[i], i))
            if not ratios:
                return SimplexStatus.UNBOUNDED
            ratios.sort(key=lambda t: (t[0], t[1]))  # Bland tie-break on basic var
            pivot(tab, basis, ratios[0][2], enter)

    phase1_obj = [Fraction(0)] * n + [Fraction(-1)] * m
    status = run(tab, basis, phase1_obj, list(range(total)))
    value1 = sum(phase1_obj[basis[i]] * tab[i][-1] for i in range(m))
    if status != SimplexStatus.OPTIMAL or value1 != 0:
        return SimplexStatus.INFEASIBLE, None, None

    # Drive artificials out of the basis where possible.
    for i in range(m):
        if basis[i] >= n:
            pc = next((j for j in range(n) if tab[i][j] != 0), None)
            if pc is not None:
                pivot(tab, basis, i, pc)
    keep = [i for i in range(m) if basis[i] < n]
    tab = [tab[i][: n] + [tab[i][-1]] for i in keep]
    basis = [basis[i] for i in keep]

    phase2_obj = list(c)
    status = run(tab, basis, phase2_obj, list(range(n)))
    if status == SimplexStatus.UNBOUNDED:
        return status, None, None
    x = zeros(n)
    for i, bv in enumerate(basis):
        x[bv] = tab[i][-1]
    return SimplexStatus.OPTIMAL, dot(c, x), x
