"""Exact arithmetic with one real algebraic number.

Elements live in Q[x]/(modulus) and are evaluated at a single isolated
real root.  The modulus need not be irreducible: zero tests go through
gcd computations plus Sturm counting inside the isolating bracket, and
inversions shrink the modulus on the fly when a nontrivial factor shows
up (the factor not vanishing at the root is divided out).  Signs of
non-zero elements are decided by refining the root bracket, which always
terminates because exact zeros are recognised first.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd
from typing import Sequence

from .intervals import Dyadic, IntervalReal
from .polynomials import (
    IntPoly,
    IsolatedRoot,
    _content,
    exact_div,
    int_poly_gcd,
    squarefree_part,
    sturm_chain,
    sturm_count,
)

Elem = tuple[Fraction, ...]


def _clear_denominators(coeffs: Sequence[Fraction]) -> IntPoly:
    den = 1
    for c in coeffs:
        den = den * c.denominator // int_gcd(den, c.denominator)
    return IntPoly([int(c * den) for c in coeffs])


def _fraction_rem(num: list[Fraction], den: Sequence[Fraction]) -> list[Fraction]:
    num = list(num)
    while num and num[-1] == 0:
        num.pop()
    d = len(den) - 1
    while len(num) - 1 >= d:
        q = num[-1] / den[-1]
        k = len(num) - 1 - d
        for i, dv in enumerate(den):
            num[k + i] -= q * dv
        num.pop()
        while num and num[-1] == 0:
            num.pop()
    return num


def _fraction_xgcd(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Return (g, s) with s*a = g modulo b and g = gcd(a, b), monic."""

    def poly_divmod(x: list[Fraction], y: list[Fraction]):
        q = [Fraction(0)] * max(1, len(x) - len(y) + 1)
        r = list(x)
        while r and r[-1] == 0:
            r.pop()
        dy = len(y) - 1
        while len(r) - 1 >= dy and r:
            c = r[-1] / y[-1]
            k = len(r) - 1 - dy
            q[k] = c
            for i, yv in enumerate(y):
                r[k + i] -= c * yv
            r.pop()
            while r and r[-1] == 0:
                r.pop()
        return q, r

    def poly_mul(x, y):
        out = [Fraction(0)] * (len(x) + len(y) - 1) if x and y else []
        for i, xv in enumerate(x):
            if xv == 0:
                continue
            for j, yv in enumerate(y):
                out[i + j] += xv * yv
        while out and out[-1] == 0:
            out.pop()
        return out

    def poly_sub(x, y):
        out = [Fraction(0)] * max(len(x), len(y))
        for i, v in enumerate(x):
            out[i] += v
        for i, v in enumerate(y):
            out[i] -= v
        while out and out[-1] == 0:
            out.pop()
        return out

    r0, r1 = list(a), list(b)
    s0, s1 = [Fraction(1)], []
    while r1:
        q, r = poly_divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, poly_sub(s0, poly_mul(q, s1))
    if not r0:
        return [], []
    lead = r0[-1]
    return [c / lead for c in r0], [c / lead for c in s0]


class RealAlgebraicField:
    """Q[x]/(modulus) evaluated at an isolated simple real root."""

    def __init__(self, root: IsolatedRoot):
        if root.is_exact():
            # rational (dyadic) root: use the exact linear modulus
            v = root.lo
            if v.e >= 0:
                self.modulus = IntPoly([-(v.m << v.e), 1])
            else:
                self.modulus = IntPoly([-v.m, 1 << -v.e])
        else:
            self.modulus = squarefree_part(root.poly)
        self.root = IsolatedRoot(self.modulus, root.lo, root.hi)
        self._chain_cache: dict[tuple[int, ...], list[IntPoly]] = {}

    # -- element constructors -------------------------------------------

    @property
    def degree(self) -> int:
        return self.modulus.degree

    def from_fraction(self, q: Fraction | int) -> Elem:
        return (Fraction(q),)

    def generator(self) -> Elem:
        return self.reduce([Fraction(0), Fraction(1)])

    def reduce(self, coeffs: Sequence[Fraction]) -> Elem:
        den = [Fraction(c) for c in self.modulus.coeffs]
        rem = _fraction_rem([Fraction(c) for c in coeffs], den)
        return tuple(rem) if rem else (Fraction(0),)

    # -- ring operations ---------------------------------------------------

    def add(self, a: Elem, b: Elem) -> Elem:
        n = max(len(a), len(b))
        out = [Fraction(0)] * n
        for i, v in enumerate(a):
            out[i] += v
        for i, v in enumerate(b):
            out[i] += v
        return self.reduce(out)

    def sub(self, a: Elem, b: Elem) -> Elem:
        n = max(len(a), len(b))
        out = [Fraction(0)] * n
        for i, v in enumerate(a):
            out[i] += v
        for i, v in enumerate(b):
            out[i] -= v
        return self.reduce(out)

    def mul(self, a: Elem, b: Elem) -> Elem:
        out = [Fraction(0)] * (len(a) + len(b) - 1)
        for i, av in enumerate(a):
            if av == 0:
                continue
            for j, bv in enumerate(b):
                out[i + j] += av * bv
        return self.reduce(out)

    def scalar_mul(self, q: Fraction | int, a: Elem) -> Elem:
        q = Fraction(q)
        return self.reduce([q * v for v in a])

    def is_zero(self, a: Elem) -> bool:
        a = self.reduce(a)
        if all(v == 0 for v in a):
            return True
        g = int_poly_gcd(_clear_denominators(a), self.modulus)
        if g.degree < 1:
            return False
        return self._has_root_in_bracket(g)

    def _has_root_in_bracket(self, g: IntPoly) -> bool:
        chain = self._chain_cache.get(g.coeffs)
        if chain is None:
            chain = sturm_chain(g)
            self._chain_cache[g.coeffs] = chain
        lo, hi = self.root.lo.as_fraction(), self.root.hi.as_fraction()
        if lo == hi:
            return g.eval_fraction(lo) == 0
        return sturm_count(chain, lo, hi) >= 1

    def sign(self, a: Elem) -> int:
        if self.is_zero(a):
            return 0
        prec = 32
        while True:
            enc = self.enclosure(a, prec, refine_until=False)
            s = enc.sign()
            if s != 0:
                return s
            prec *= 2
            self.root.refine(prec)
            if prec > 1 << 16:
                raise AssertionError("sign refinement failed on a non-zero element")

    def inv(self, a: Elem) -> Elem:
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero element")
        while True:
            a = self.reduce(a)
            mod = [Fraction(c) for c in self.modulus.coeffs]
            g, s = _fraction_xgcd(list(a), mod)
            if len(g) == 1:
                return self.reduce([v / g[0] for v in s])
            # nontrivial common factor; it cannot vanish at the root since
            # the element does not, so divide it out of the modulus.
            g_int = _clear_denominators(g)
            g_int = IntPoly([v // _content(g_int.coeffs) for v in g_int.coeffs])
            assert not self._has_root_in_bracket(g_int), "factor vanishes at root"
            self._shrink_modulus(exact_div(self.modulus, g_int))

    def div(self, a: Elem, b: Elem) -> Elem:
        return self.mul(a, self.inv(b))

    def _shrink_modulus(self, new_modulus: IntPoly) -> None:
        prim = _content(new_modulus.coeffs)
        if new_modulus.coeffs[-1] < 0:
            prim = -prim
        new_modulus = IntPoly([v // prim for v in new_modulus.coeffs])
        self.modulus = new_modulus
        self.root = IsolatedRoot(new_modulus, self.root.lo, self.root.hi)
        self._chain_cache = {}

    # -- enclosures ---------------------------------------------------------

    def enclosure(self, a: Elem, prec: int = 64, refine_until: bool = True) -> IntervalReal:
        """Interval around the element's value, width <= 2**-prec if refining."""
        a = self.reduce(a)
        target = Dyadic(1, -prec)
        bits = max(prec + 16, 48)
        while True:
            x = self.root.enclosure()
            acc = IntervalReal.exact(0)
            for c in reversed(a):
                acc = acc.mul(x, bits).add(IntervalReal.from_fraction(c, bits), bits)
            if not refine_until or acc.width() <= target:
                return acc
            bits *= 2
            self.root.refine(bits)
            if bits > 1 << 20:
                raise AssertionError("element enclosure refinement stalled")

    def compare_int(self, a: Elem, n: int) -> int:
        """Exact trichotomy of the element against an integer."""
        return self.sign(self.sub(a, self.from_fraction(n)))
