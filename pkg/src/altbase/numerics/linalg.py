"""Certified left-eigenvector enclosures via interval Gaussian elimination."""

from __future__ import annotations

from typing import Sequence

from ..errors import DivisionByEnclosedZero, SingularAfterRefinement
from .intervals import Dyadic, IntervalReal
from .polynomials import IsolatedRoot

Matrix = Sequence[Sequence[int]]


def _mignitude(x: IntervalReal) -> Dyadic:
    if x.contains_zero():
        return Dyadic(0)
    a = x.lo if x.lo.sign() > 0 else -x.hi
    return a


def _interval_ge(rows: list[list[IntervalReal]], rhs: list[IntervalReal], prec: int) -> list[IntervalReal] | None:
    """Solve a square interval system; None when a pivot encloses zero."""
    n = len(rhs)
    a = [row[:] for row in rows]
    b = rhs[:]
    order = list(range(n))
    for col in range(n):
        piv_row, piv_mig = -1, Dyadic(0)
        for r in range(col, n):
            mig = _mignitude(a[r][col])
            if mig > piv_mig:
                piv_row, piv_mig = r, mig
        if piv_row < 0:
            return None
        a[col], a[piv_row] = a[piv_row], a[col]
        b[col], b[piv_row] = b[piv_row], b[col]
        order[col], order[piv_row] = order[piv_row], order[col]
        for r in range(col + 1, n):
            if a[r][col].lo.m == 0 and a[r][col].hi.m == 0:
                continue
            factor = a[r][col].div(a[col][col], prec)
            for c in range(col, n):
                a[r][c] = a[r][c].sub(factor.mul(a[col][c], prec), prec)
            b[r] = b[r].sub(factor.mul(b[col], prec), prec)
    x: list[IntervalReal] = [IntervalReal.exact(0)] * n
    for r in range(n - 1, -1, -1):
        acc = b[r]
        for c in range(r + 1, n):
            acc = acc.sub(a[r][c].mul(x[c], prec), prec)
        try:
            x[r] = acc.div(a[r][r], prec)
        except DivisionByEnclosedZero:
            return None
    return x


def _attempt(m: Matrix, lam: IntervalReal, prec: int) -> list[IntervalReal] | None:
    k = len(m)
    one = IntervalReal.exact(1)

    def coeff(j: int, i: int) -> IntervalReal:
        base = IntervalReal.exact(m[i][j])
        if i == j:
            return base.sub(lam)
        return base

    for drop in range(k):
        eqs = [j for j in range(k) if j != drop]
        rows = [[coeff(j, c + 1) for c in range(k - 1)] for j in eqs]
        rhs = []
        for j in eqs:
            v = IntervalReal.exact(-m[0][j])
            if j == 0:
                v = v.add(lam)
            rhs.append(v)
        x = _interval_ge(rows, rhs, prec)
        if x is None:
            continue
        # the dropped equation must be consistent with the enclosure
        acc = IntervalReal.exact(m[0][drop])
        if drop == 0:
            acc = acc.sub(lam)
        for c in range(k - 1):
            acc = acc.add(coeff(drop, c + 1).mul(x[c], prec), prec)
        if not acc.contains_zero():
            continue
        return [one] + x
    return None


def linear_solve_enclosure(
    m: Matrix,
    eigenvalue: IntervalReal,
    root: IsolatedRoot | None = None,
    prec: int = 64,
    max_bits: int = 1 << 14,
) -> list[IntervalReal]:
    """Left-eigenvector enclosure of an integer matrix, first entry exactly 1.

    The eigenvalue must be simple; the enclosure is refined (via `root`,
    when given) until every entry has width <= 2**-prec and a certified
    non-negative lower bound.  Raises SingularAfterRefinement when the
    direction cannot be separated, e.g. for a repeated eigenvalue.
    """
    target = Dyadic(1, -prec)
    bits = max(prec + 32, 96)
    lam = eigenvalue
    while True:
        f = _attempt(m, lam, bits)
        if f is not None:
            ok = all(v.width() <= target for v in f) and all(
                v.lo.sign() >= 0 for v in f
            )
            if ok:
                return f
        if root is None or root.is_exact() or bits >= max_bits:
            raise SingularAfterRefinement(
                "eigenvector direction not separable at the precision cap"
            )
        bits *= 2
        lam = root.refine(bits)
