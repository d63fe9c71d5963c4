"""Exact integer/rational linear algebra on small matrices (lists of rows)."""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence

Rows = List[List[int]]


def rank(rows: Sequence[Sequence]) -> int:
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            f = a[i][col] / a[r][col]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def det(rows: Sequence[Sequence]) -> Fraction:
    """Determinant by fraction-exact elimination; det of the empty matrix is 1."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    result = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            result = -result
        result *= a[col][col]
        for i in range(col + 1, n):
            f = a[i][col] / a[col][col]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return result


def gram(rows: Sequence[Sequence[int]]) -> Rows:
    return [[sum(x * y for x, y in zip(r, s)) for s in rows] for r in rows]


def _echelon(a: Rows, ncols: int) -> int:
    """In-place unimodular row reduction of the first ``ncols`` columns.

    Returns the number of pivot rows. Only integer row swaps and
    integer multiples of one row added to another are used.
    """
    p = 0
    for col in range(ncols):
        while True:
            nz = [i for i in range(p, len(a)) if a[i][col] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(a[i][col]))
            a[p], a[best] = a[best], a[p]
            done = True
            for i in range(p + 1, len(a)):
                if a[i][col]:
                    q = a[i][col] // a[p][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[p])]
                    if a[i][col]:
                        done = False
            if done:
                p += 1
                break
        if p == len(a):
            break
    return p


def hermite_rows(rows: Sequence[Sequence[int]]) -> Rows:
    """Row-style Hermite normal form of a full-row-rank integer matrix.

    Pivots are positive and entries above each pivot lie in [0, pivot).
    Zero rows are dropped.
    """
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    ncols = len(a[0])
    npiv = _echelon(a, ncols)
    a = a[:npiv]
    col = 0
    for i, row in enumerate(a):
        while row[col] == 0:
            col += 1
        if row[col] < 0:
            a[i] = row = [-x for x in row]
        for k in range(i):
            q = a[k][col] // row[col]
            if q:
                a[k] = [x - q * y for x, y in zip(a[k], row)]
        col += 1
    return a


def integer_kernel(m: Sequence[Sequence[int]]) -> Rows:
    """Basis of the saturated lattice {v in Z^N : m v = 0}, in Hermite form."""
    n = len(m)
    N = len(m[0])
    # rows of [m^T | I]; unimodular row ops keep the right block a lattice basis
    aug = [[m[a][j] for a in range(n)] + [int(i == j) for i in range(N)] for j in range(N)]
    npiv = _echelon(aug, n)
    kernel = [row[n:] for row in aug[npiv:]]
    return [primitive(r) for r in hermite_rows(kernel)]


def primitive(v: Sequence[int]) -> List[int]:
    g = 0
    for x in v:
        g = gcd(g, x)
    return [x // g for x in v] if g > 1 else list(v)


def null_vector(rows: Sequence[Sequence[int]], dim: int) -> List[int]:
    """Generalised cross product: integer vector orthogonal to ``dim - 1`` rows."""
    out = []
    for i in range(dim):
        minor = [[r[k] for k in range(dim) if k != i] for r in rows]
        out.append((-1) ** i * int(det(minor)))
    return out


def solve(a: Sequence[Sequence], b: Sequence) -> List[Fraction]:
    """Solve a square nonsingular system exactly; raises ZeroDivisionError if singular."""
    n = len(a)
    aug = [[Fraction(x) for x in a[i]] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((i for i in range(col, n) if aug[i][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular system")
        aug[col], aug[piv] = aug[piv], aug[col]
        for i in range(n):
            if i != col and aug[i][col]:
                f = aug[i][col] / aug[col][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [aug[i][n] / aug[i][i] for i in range(n)]
