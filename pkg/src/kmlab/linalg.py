"""Small exact linear algebra over the integers, the rationals and F_p.

Matrices are tuples/lists of rows holding Python ``int`` or ``Fraction``.
Nothing here is fast; the sizes kmlab works with are desk scale and exactness
matters more than speed.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> list[list]:
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def matvec(m: Matrix, v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def freeze(m) -> tuple[tuple, ...]:
    return tuple(tuple(row) for row in m)


def det(m: Matrix) -> int:
    """Determinant of a square integer matrix by Bareiss elimination."""
    a = [list(row) for row in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def inverse(m: Matrix) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over the rationals; raises ValueError if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [row[n:] for row in a]


def integer_inverse(m: Matrix) -> list[list[int]]:
    inv = inverse(m)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("inverse is not integral")
    return [[int(x) for x in row] for row in inv]


def rank(vectors: Sequence[Sequence], p: int | None = None) -> int:
    """Rank of a list of vectors over Q, or over F_p when ``p`` is given."""
    return len(echelon(vectors, p))


def echelon(vectors: Sequence[Sequence], p: int | None = None) -> list[list]:
    """Reduced row echelon rows spanning the same space (over Q or F_p)."""
    if p is None:
        rows = [[Fraction(x) for x in v] for v in vectors]
    else:
        rows = [[x % p for x in v] for v in vectors]
    out: list[list] = []
    pivots: list[int] = []
    for row in rows:
        for pr, pc in zip(out, pivots):
            f = row[pc]
            if f:
                row = [x - f * y for x, y in zip(row, pr)]
                if p is not None:
                    row = [x % p for x in row]
        pc = next((j for j, x in enumerate(row) if x), None)
        if pc is None:
            continue
        inv = (1 / row[pc]) if p is None else pow(row[pc], -1, p)
        row = [x * inv for x in row]
        if p is not None:
            row = [x % p for x in row]
        for k, r in enumerate(out):
            f = r[pc]
            if f:
                out[k] = [x - f * y for x, y in zip(r, row)]
                if p is not None:
                    out[k] = [x % p for x in out[k]]
        out.append(row)
        pivots.append(pc)
    order = sorted(range(len(out)), key=lambda k: pivots[k])
    return [out[k] for k in order]


def left_nullspace(m: Sequence[Sequence], nrows: int) -> list[list[Fraction]]:
    """Basis of {c : c . m = 0} for an ``nrows`` x ncols rational matrix."""
    if nrows == 0:
        return []
    ncols = len(m[0]) if m else 0
    if ncols == 0:
        return [[Fraction(int(i == j)) for j in range(nrows)] for i in range(nrows)]
    # nullspace of the transpose
    t = [[Fraction(m[i][j]) for i in range(nrows)] for j in range(ncols)]
    red = echelon(t)
    pivots = [next(j for j, x in enumerate(r) if x) for r in red]
    free = [j for j in range(nrows) if j not in pivots]
    basis = []
    for fcol in free:
        v = [Fraction(0)] * nrows
        v[fcol] = Fraction(1)
        for r, pc in zip(red, pivots):
            v[pc] = -r[fcol]
        basis.append(v)
    return basis


def solve_combination(vectors: Sequence[Sequence], target: Sequence) -> list[Fraction] | None:
    """Coefficients c with sum c_k vectors[k] = target, or None if impossible.

    ``vectors`` must be linearly independent.
    """
    k = len(vectors)
    n = len(target)
    aug = [[Fraction(vectors[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    piv_cols = []
    r = 0
    for c in range(k):
        piv = next((i for i in range(r, n) if aug[i][c] != 0), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(n):
            if i != r and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        piv_cols.append(c)
        r += 1
    if any(aug[i][k] != 0 for i in range(r, n)):
        return None
    if len(piv_cols) != k:
        raise ValueError("vectors are linearly dependent")
    sol = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        sol[c] = aug[i][k]
    return sol


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form: an echelon basis of the row lattice.

    Pivots are positive and entries above each pivot lie in [0, pivot).
    """
    work = [list(r) for r in rows if any(r)]
    if not work:
        return []
    ncols = len(work[0])
    out: list[list[int]] = []
    for col in range(ncols):
        while True:
            nz = [r for r in work if r[col] != 0]
            if not nz:
                break
            piv = min(nz, key=lambda r: abs(r[col]))
            others = [r for r in work if r is not piv]
            done = True
            new = []
            for r in others:
                if r[col] != 0:
                    q = r[col] // piv[col]
                    r = [x - q * y for x, y in zip(r, piv)]
                    if r[col] != 0:
                        done = False
                if any(r):
                    new.append(r)
            work = new + [piv]
            if done:
                work.remove(piv)
                if piv[col] < 0:
                    piv = [-x for x in piv]
                for k, r in enumerate(out):
                    q = r[col] // piv[col]
                    if q:
                        out[k] = [x - q * y for x, y in zip(r, piv)]
                out.append(piv)
                break
        if not work:
            break
    return out


def rational_lattice_basis(vectors: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    """Hermite basis of the Z-span of rational vectors."""
    vecs = [[Fraction(x) for x in v] for v in vectors]
    vecs = [v for v in vecs if any(v)]
    if not vecs:
        return []
    d = 1
    for v in vecs:
        for x in v:
            d = lcm(d, x.denominator)
    ints = [[int(x * d) for x in v] for v in vecs]
    return [[Fraction(x, d) for x in r] for r in hermite_rows(ints)]


def echelon_coordinates(basis: Sequence[Sequence], v: Sequence) -> list[Fraction] | None:
    """Coordinates of ``v`` in an echelon ``basis`` (e.g. Hermite rows).

    Returns None when ``v`` is not in the rational span.
    """
    coeffs: list[Fraction] = []
    rest = [Fraction(x) for x in v]
    for row in basis:
        pc = next(j for j, x in enumerate(row) if x)
        c = rest[pc] / row[pc]
        coeffs.append(c)
        if c:
            rest = [x - c * y for x, y in zip(rest, row)]
    if any(rest):
        return None
    return coeffs
