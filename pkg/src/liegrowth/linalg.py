"""Exact linear algebra over the rationals.

Rank and determinant go through fraction-free (Bareiss) elimination on
denominator-cleared integer rows; solving, nullspaces and inverses use plain
Gauss-Jordan on ``Fraction`` entries.  No tolerances anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _clear_row(row) -> list[int]:
    denom = 1
    vals = [Fraction(x) for x in row]
    for x in vals:
        denom = _lcm(denom, x.denominator)
    return [int(x * denom) for x in vals]


def rank(rows) -> int:
    """Rank of a matrix given as an iterable of rows of rationals."""
    mat = [_clear_row(r) for r in rows]
    if not mat or not mat[0]:
        return 0
    ncols = len(mat[0])
    prev = 1
    piv = 0
    for col in range(ncols):
        if piv == len(mat):
            break
        sel = None
        for r in range(piv, len(mat)):
            if mat[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        mat[piv], mat[sel] = mat[sel], mat[piv]
        pivot = mat[piv][col]
        for r in range(piv + 1, len(mat)):
            factor = mat[r][col]
            for c in range(col, ncols):
                mat[r][c] = (mat[r][c] * pivot - factor * mat[piv][c]) // prev
        prev = pivot
        piv += 1
    return piv


def det(rows) -> Fraction:
    """Determinant of a square rational matrix (Bareiss, exact)."""
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("matrix is not square")
    scale = Fraction(1)
    mat = []
    for r in rows:
        vals = [Fraction(x) for x in r]
        denom = 1
        for x in vals:
            denom = _lcm(denom, x.denominator)
        scale *= denom
        mat.append([int(x * denom) for x in vals])
    sign = 1
    prev = 1
    for col in range(n - 1):
        sel = None
        for r in range(col, n):
            if mat[r][col] != 0:
                sel = r
                break
        if sel is None:
            return Fraction(0)
        if sel != col:
            mat[col], mat[sel] = mat[sel], mat[col]
            sign = -sign
        pivot = mat[col][col]
        for r in range(col + 1, n):
            factor = mat[r][col]
            for c in range(col, n):
                mat[r][c] = (mat[r][c] * pivot - factor * mat[col][c]) // prev
        prev = pivot
    return Fraction(sign * mat[n - 1][n - 1], 1) / scale


def _rref(mat: list[list[Fraction]]):
    """In-place reduced row echelon form; returns pivot column indices."""
    nrows = len(mat)
    ncols = len(mat[0]) if mat else 0
    pivots = []
    row = 0
    for col in range(ncols):
        if row == nrows:
            break
        sel = None
        for r in range(row, nrows):
            if mat[r][col] != 0:
                sel = r
                break
        if sel is None:
            continue
        mat[row], mat[sel] = mat[sel], mat[row]
        inv = 1 / mat[row][col]
        mat[row] = [x * inv for x in mat[row]]
        for r in range(nrows):
            if r != row and mat[r][col] != 0:
                factor = mat[r][col]
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[row])]
        pivots.append(col)
        row += 1
    return pivots


def solve(a, b):
    """Unique solution of ``a x = b`` or None (singular/incompatible)."""
    n = len(a)
    if n == 0:
        return []
    aug = [[Fraction(x) for x in row] + [Fraction(bv)] for row, bv in zip(a, b)]
    pivots = _rref(aug)
    ncols = len(a[0])
    if ncols in pivots:
        return None
    if len(pivots) != ncols:
        return None
    for r in range(len(pivots), n):
        if aug[r][ncols] != 0:
            return None
    return [aug[i][ncols] for i in range(ncols)]


def nullspace(rows):
    """Basis of the right nullspace as a list of Fraction vectors."""
    if not rows:
        return []
    mat = [[Fraction(x) for x in r] for r in rows]
    ncols = len(mat[0])
    pivots = _rref(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -mat[r][f]
        basis.append(vec)
    return basis


def inverse(rows):
    """Inverse of a square rational matrix, or None if singular."""
    n = len(rows)
    aug = []
    for i, r in enumerate(rows):
        if len(r) != n:
            raise ValueError("matrix is not square")
        line = [Fraction(x) for x in r]
        line += [Fraction(1) if j == i else Fraction(0) for j in range(n)]
        aug.append(line)
    pivots = _rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in aug]


def dot(u, v) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))
