"""Exact integer polynomials, characteristic polynomials and root isolation.

Coefficients are stored in ascending order.  Root work is done with exact
sign evaluations at dyadic points plus Sturm-sequence counting, so every
returned enclosure is certified.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from ..errors import NoSignChange
from .intervals import Dyadic, IntervalReal


def _trim(coeffs: Sequence[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPoly:
    """Integer polynomial, ascending coefficients, trailing zeros stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        self.coeffs = _trim(list(coeffs))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        if self.is_zero():
            return "IntPoly(0)"
        parts = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            if i == 0:
                parts.append(f"{c:+d}")
            elif i == 1:
                parts.append(f"{c:+d}*x")
            else:
                parts.append(f"{c:+d}*x^{i}")
        return "IntPoly(" + " ".join(parts) + ")"

    def eval_fraction(self, x: Fraction | int) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def eval_dyadic_sign(self, x: Dyadic) -> int:
        v = self.eval_fraction(x.as_fraction())
        return (v > 0) - (v < 0)

    def eval_interval(self, x: IntervalReal, prec: int | None = None) -> IntervalReal:
        acc = IntervalReal.exact(0)
        for c in reversed(self.coeffs):
            acc = acc.mul(x, prec).add(IntervalReal.exact(c), prec)
        return acc

    def derivative(self) -> "IntPoly":
        return IntPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift_out_zero_roots(self) -> tuple["IntPoly", int]:
        """Return (p / x^v, v) where v is the multiplicity of the root 0."""
        v = 0
        c = list(self.coeffs)
        while c and c[0] == 0:
            c.pop(0)
            v += 1
        return IntPoly(c), v


# -- matrix characteristic polynomial and adjugate --------------------------

Matrix = Sequence[Sequence[int]]


def _mat_mul(a: list[list[int]], b: list[list[int]]) -> list[list[int]]:
    n = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def faddeev_leverrier(m: Matrix) -> tuple[IntPoly, list[list[list[int]]]]:
    """Characteristic polynomial plus adjugate of (xI - m), both exact.

    Returns (chi, adj) where chi = det(xI - m) and adj is a matrix of
    ascending coefficient lists with adj(x) = adjugate(xI - m).  All the
    interior integer divisions are exact; this is asserted.
    """
    n = len(m)
    a = [[int(v) for v in row] for row in m]
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = [row[:] for row in ident]
    # adjugate(xI - m) = sum_k M_{k+1} x^(n-1-k)
    adj_terms = [mk]
    for k in range(1, n + 1):
        am = _mat_mul(a, mk)
        tr = sum(am[i][i] for i in range(n))
        q, r = divmod(-tr, k)
        assert r == 0, "Faddeev-LeVerrier division must be exact"
        coeffs[n - k] = q
        if k < n:
            mk = [[am[i][j] + (q if i == j else 0) for j in range(n)] for i in range(n)]
            adj_terms.append(mk)
    adj = [
        [[adj_terms[n - 1 - d][i][j] for d in range(n)] for j in range(n)]
        for i in range(n)
    ]
    return IntPoly(coeffs), adj


def charpoly(m: Matrix) -> IntPoly:
    """det(xI - m) with exact integer coefficients."""
    return faddeev_leverrier(m)[0]


# -- gcd machinery -----------------------------------------------------------


def _content(c: Sequence[int]) -> int:
    g = 0
    for v in c:
        g = gcd(g, abs(v))
    return g


def _primitive(c: Sequence[int]) -> tuple[int, ...]:
    c = _trim(c)
    if not c:
        return c
    g = _content(c)
    sign = 1 if c[-1] > 0 else -1
    g *= sign
    return tuple(v // g for v in c)


def _pseudo_rem(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Pseudo-remainder of a by b (b non-zero), integer arithmetic only."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and any(a):
        da = len(a) - 1
        if a[-1] == 0:
            a.pop()
            continue
        la = a[-1]
        a = [v * lb for v in a]
        shift = da - db
        for i, bv in enumerate(b):
            a[shift + i] -= la * bv
        a = list(_trim(a))
        if not a:
            break
    return _trim(a)


def int_poly_gcd(p: IntPoly, q: IntPoly) -> IntPoly:
    """Primitive gcd of two integer polynomials (positive leading coeff)."""
    a, b = _primitive(p.coeffs), _primitive(q.coeffs)
    if not a:
        return IntPoly(b)
    if not b:
        return IntPoly(a)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _pseudo_rem(a, b)
        a, b = b, _primitive(r)
    return IntPoly(a)


def exact_div(p: IntPoly, d: IntPoly) -> IntPoly:
    """Quotient p / d, asserting the division is exact over Q."""
    num = [Fraction(c) for c in p.coeffs]
    den = [Fraction(c) for c in d.coeffs]
    out = [Fraction(0)] * (len(num) - len(den) + 1)
    while len(num) >= len(den) and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) < len(den):
            break
        k = len(num) - len(den)
        q = num[-1] / den[-1]
        out[k] = q
        for i, dv in enumerate(den):
            num[k + i] -= q * dv
        num.pop()
    assert all(v == 0 for v in num), "division was not exact"
    ints = []
    for v in out:
        assert v.denominator == 1, "quotient not integral"
        ints.append(v.numerator)
    return IntPoly(ints)


def squarefree_part(p: IntPoly) -> IntPoly:
    g = int_poly_gcd(p, p.derivative())
    if g.degree <= 0:
        return IntPoly(_primitive(p.coeffs))
    return IntPoly(_primitive(exact_div(IntPoly(_primitive(p.coeffs)), g).coeffs))


# -- Sturm sequences ---------------------------------------------------------


def sturm_chain(p: IntPoly) -> list[IntPoly]:
    """Sturm chain of the squarefree part of p (so counts are of distinct roots)."""
    sf = squarefree_part(p)
    chain = [sf, sf.derivative()]
    while not chain[-1].is_zero() and chain[-1].degree > 0:
        rem = _poly_rem_fraction(chain[-2], chain[-1])
        if not rem:
            break
        neg = [-v for v in rem]
        # clear denominators and content, preserving sign
        den = 1
        for v in neg:
            den = den * v.denominator // gcd(den, v.denominator)
        ints = [int(v * den) for v in neg]
        g = _content(ints)
        chain.append(IntPoly([v // g for v in ints]))
    return [c for c in chain if not c.is_zero()]


def _poly_rem_fraction(a: IntPoly, b: IntPoly) -> list[Fraction]:
    num = [Fraction(c) for c in a.coeffs]
    den = [Fraction(c) for c in b.coeffs]
    while len(num) >= len(den) and any(num):
        while num and num[-1] == 0:
            num.pop()
        if len(num) < len(den):
            break
        k = len(num) - len(den)
        q = num[-1] / den[-1]
        for i, dv in enumerate(den):
            num[k + i] -= q * dv
        num.pop()
    while num and num[-1] == 0:
        num.pop()
    return num


def _variations(chain: Sequence[IntPoly], x: Fraction) -> int:
    signs = []
    for poly in chain:
        v = poly.eval_fraction(x)
        s = (v > 0) - (v < 0)
        if s != 0:
            signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def sturm_count(chain: Sequence[IntPoly], a: Fraction, b: Fraction) -> int:
    """Number of distinct real roots in (a, b]."""
    if a >= b:
        return 0
    return _variations(chain, a) - _variations(chain, b)


# -- dominant-root isolation and bisection -----------------------------------


def _nonroot_near(p: IntPoly, x: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    """A point near x inside [lo, hi] where p does not vanish."""
    if p.eval_fraction(x) != 0:
        return x
    span = hi - lo
    k = 4
    while True:
        for delta in (span / 2**k, -span / 2**k):
            cand = x + delta
            if lo <= cand <= hi and p.eval_fraction(cand) != 0:
                return cand
        k += 1
        if k > 512:
            raise AssertionError("could not step off a root cluster")


def isolate_largest_root(p: IntPoly, upper: int) -> tuple[Fraction, Fraction]:
    """Interval (a, b] holding exactly the largest real root of p in (0, upper].

    Requires p to have at least one real root in (0, upper] and none above.
    Endpoints are non-roots of p.
    """
    stripped, _ = p.shift_out_zero_roots()
    chain = sturm_chain(stripped)
    a, b = Fraction(0), Fraction(upper)
    while stripped.eval_fraction(b) == 0:
        b += 1
    total = sturm_count(chain, a, b)
    if total < 1:
        raise NoSignChange("no real root in the search range")
    while sturm_count(chain, a, b) > 1:
        mid = _nonroot_near(stripped, (a + b) / 2, a, b)
        if sturm_count(chain, mid, b) >= 1:
            a = mid
        else:
            b = mid
    a = _nonroot_near(stripped, a, a, b)
    return a, b


def integer_roots_in(p: IntPoly, a: Fraction, b: Fraction) -> list[int]:
    """Integer roots of p lying in (a, b]."""
    import math

    lo = math.floor(a) + 1
    hi = math.floor(b)
    return [n for n in range(lo, hi + 1) if p.eval_fraction(n) == 0]


def refine_root_bisect(p: IntPoly, lo: Dyadic, hi: Dyadic, prec: int) -> IntervalReal:
    """Shrink a sign-changing bracket [lo, hi] to width <= 2**-prec.

    If a dyadic midpoint is an exact root, the exact point interval is
    returned.  Raises NoSignChange when the bracket does not bracket.
    """
    slo = p.eval_dyadic_sign(lo)
    shi = p.eval_dyadic_sign(hi)
    if slo == 0:
        return IntervalReal(lo, lo)
    if shi == 0:
        return IntervalReal(hi, hi)
    if slo == shi:
        raise NoSignChange(f"no sign change on [{lo.decimal()}, {hi.decimal()}]")
    target = Dyadic(1, -prec)
    while (hi - lo) > target:
        mid = Dyadic((lo + hi).m, (lo + hi).e - 1)
        smid = p.eval_dyadic_sign(mid)
        if smid == 0:
            return IntervalReal(mid, mid)
        if smid == slo:
            lo = mid
        else:
            hi = mid
    return IntervalReal(lo, hi)


def perron_root(p: IntPoly, search: tuple[Dyadic, Dyadic], prec: int = 64) -> IntervalReal:
    """Certified enclosure of the unique simple real root dominating `search`.

    The caller guarantees that the search interval brackets exactly one
    simple root; the bisection then refines to width <= 2**-prec.
    """
    lo, hi = search
    return refine_root_bisect(p, lo, hi, prec)


class IsolatedRoot:
    """A single simple real root held by a sign-changing dyadic bracket.

    refine() bisects in place, so successive enclosures are nested; exact
    dyadic hits collapse the bracket to a point.
    """

    __slots__ = ("poly", "lo", "hi")

    def __init__(self, poly: IntPoly, lo: Dyadic, hi: Dyadic):
        self.poly = poly
        self.lo = lo
        self.hi = hi

    def enclosure(self) -> IntervalReal:
        return IntervalReal(self.lo, self.hi)

    def is_exact(self) -> bool:
        return self.lo == self.hi

    def refine(self, prec: int) -> IntervalReal:
        if self.is_exact():
            return self.enclosure()
        got = refine_root_bisect(self.poly, self.lo, self.hi, prec)
        self.lo, self.hi = got.lo, got.hi
        return got


def isolate_dominant(p: IntPoly, upper: int, prec: int = 64) -> IsolatedRoot:
    """Isolate the largest real root of p in (0, upper] and refine it.

    The dominant root must be simple.  Integer roots are detected exactly
    (charpolys are monic, so every rational root is an integer).
    """
    a, b = isolate_largest_root(p, upper)
    stripped, _ = p.shift_out_zero_roots()
    for n in integer_roots_in(stripped, a, b):
        d = Dyadic(n)
        return IsolatedRoot(stripped, d, d)
    sf = squarefree_part(stripped)
    chain = sturm_chain(sf)
    prec0 = 16
    while True:
        dlo = Dyadic.from_fraction_floor(a, prec0)
        dhi = Dyadic.from_fraction_ceil(b, prec0)
        if (
            sf.eval_dyadic_sign(dlo) != 0
            and sf.eval_dyadic_sign(dhi) != 0
            and sturm_count(chain, dlo.as_fraction(), dhi.as_fraction()) == 1
        ):
            break
        prec0 *= 2
        if prec0 > 4096:
            raise AssertionError("failed to form a dyadic isolation bracket")
    root = IsolatedRoot(sf, dlo, dhi)
    root.refine(prec)
    return root


def alpha_root(p: int, prec: int = 64) -> IntervalReal:
    """Root in [1, 2) of x^p - x^(p-1) - ... - x - 1; exactly 1 when p = 1."""
    if p < 1:
        raise ValueError("p must be >= 1")
    if p == 1:
        one = Dyadic(1)
        return IntervalReal(one, one)
    coeffs = [-1] * p + [1]
    poly = IntPoly(coeffs)
    return refine_root_bisect(poly, Dyadic(1), Dyadic(2), prec)
