"""Exact Gaussian elimination over the rationals.

Matrices are lists of rows of Fractions (ints are accepted and promoted).
"""

from __future__ import annotations

from fractions import Fraction


def _copy(M) -> list:
    return [[Fraction(x) for x in row] for row in M]


def rref(M, ncols: int | None = None):
    """Reduced row echelon form and the list of pivot columns."""
    A = _copy(M)
    if not A:
        return A, []
    ncols = len(A[0]) if ncols is None else ncols
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def rank(M) -> int:
    if not M or not M[0]:
        return 0
    return len(rref(M)[1])


def nullspace(M, ncols: int) -> list:
    """Basis of {x : M x = 0} as a list of vectors."""
    if not M:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    R, pivots = rref(M, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(R, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def solve(M, b, ncols: int):
    """One solution of M x = b, or None if inconsistent."""
    aug = [list(row) + [rhs] for row, rhs in zip(M, b)]
    R, pivots = rref(aug, ncols)
    for row in R[len(pivots):]:
        if row[ncols] != 0:
            return None
    x = [Fraction(0)] * ncols
    for row, pc in zip(R, pivots):
        x[pc] = row[ncols]
    return x


def det(M) -> Fraction:
    A = _copy(M)
    n = len(A)
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            sign = -sign
        out *= A[c][c]
        inv = 1 / A[c][c]
        for i in range(c + 1, n):
            if A[i][c] != 0:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return out * sign


def matmul(A, B) -> list:
    if not A:
        return []
    cols = list(zip(*B)) if B else []
    return [[sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols] for row in A]
