"""Exact feasibility for small rational linear systems.

Two-phase primal simplex on a dense tableau of gmpy2 rationals with Bland's rule, so it
always terminates and the returned witness satisfies every constraint exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Collection, Mapping, Sequence

from gmpy2 import mpq

EQ, GE, LE = "==", ">=", "<="


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[int, Fraction]
    sense: str
    rhs: Fraction = Fraction(0)

    def value(self, x: Sequence) -> Fraction:
        return sum((Fraction(c) * x[i] for i, c in self.coeffs.items()), Fraction(0))

    def holds(self, x: Sequence) -> bool:
        v = self.value(x)
        if self.sense == EQ:
            return v == self.rhs
        if self.sense == GE:
            return v >= self.rhs
        return v <= self.rhs


def eq(coeffs, rhs=0) -> Constraint:
    return Constraint(_clean(coeffs), EQ, Fraction(rhs))


def ge(coeffs, rhs=0) -> Constraint:
    return Constraint(_clean(coeffs), GE, Fraction(rhs))


def le(coeffs, rhs=0) -> Constraint:
    return Constraint(_clean(coeffs), LE, Fraction(rhs))


def _clean(coeffs) -> dict:
    out: dict = {}
    for i, c in dict(coeffs).items():
        c = Fraction(c)
        if c:
            out[i] = out.get(i, 0) + c
    return {i: c for i, c in out.items() if c}


def lp_feasible(constraints: Sequence[Constraint], nvars: int | None = None,
                nonneg: Collection[int] = ()):
    """A rational point satisfying every constraint, or ``None`` if there is none.

    Variables are free unless listed in ``nonneg``.
    """
    if nvars is None:
        nvars = 1 + max((i for c in constraints for i in c.coeffs), default=-1)
    if not constraints:
        return [Fraction(0)] * nvars

    # columns: x+ (nvars), x- (free variables only), slacks, artificials
    nonneg = set(nonneg)
    neg_col = {}
    for i in range(nvars):
        if i not in nonneg:
            neg_col[i] = nvars + len(neg_col)
    nx = nvars + len(neg_col)
    m = len(constraints)
    nslack = sum(1 for c in constraints if c.sense != EQ)
    ncols = nx + nslack + m
    art0 = nx + nslack
    zero = mpq(0)
    T = []
    basis = []
    s = 0
    for r, con in enumerate(constraints):
        row = [zero] * (ncols + 1)
        for i, c in con.coeffs.items():
            c = mpq(c.numerator, c.denominator)
            row[i] = c
            if i in neg_col:
                row[neg_col[i]] = -c
        if con.sense == GE:
            row[nx + s] = mpq(-1)
            s += 1
        elif con.sense == LE:
            row[nx + s] = mpq(1)
            s += 1
        row[ncols] = mpq(con.rhs.numerator, con.rhs.denominator)
        if row[ncols] < 0:
            row = [-x for x in row]
        row[art0 + r] = mpq(1)
        T.append(row)
        basis.append(art0 + r)

    # phase 1 objective: minimise the sum of artificials; reduced costs row
    cost = [zero] * (ncols + 1)
    for row in T:
        for j in range(ncols + 1):
            if j < art0 or j == ncols:
                cost[j] -= row[j]

    while True:
        enter = next((j for j in range(art0) if cost[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[ncols] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # unbounded descent cannot happen for a sum of nonnegative artificials
            break
        _pivot(T, cost, leave, enter)
        basis[leave] = enter

    if -cost[ncols] != 0:
        return None
    x = [zero] * nx
    for i, b in enumerate(basis):
        if b < nx:
            x[b] = T[i][ncols]
    sol = [Fraction(int(v.numerator), int(v.denominator))
           for v in (x[i] - (x[neg_col[i]] if i in neg_col else 0) for i in range(nvars))]
    assert all(c.holds(sol) for c in constraints)
    return sol


def _pivot(T, cost, r, c):
    prow = T[r]
    inv = 1 / prow[c]
    prow[:] = [v * inv for v in prow]
    nz = [j for j, v in enumerate(prow) if v != 0]
    for i, row in enumerate(T):
        if i != r and row[c] != 0:
            f = row[c]
            for j in nz:
                row[j] -= f * prow[j]
    if cost[c] != 0:
        f = cost[c]
        for j in nz:
            cost[j] -= f * prow[j]
