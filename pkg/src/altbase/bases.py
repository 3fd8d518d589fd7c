"""Periodic alternate bases and the value backends they compute in.

A periodic alternate base of period p is written in display order as a
tuple (beta_{p-1}, ..., beta_0) with every beta > 1; index
arithmetic is mod p, so beta_{n+p} = beta_n for all integers n.  The value
of a fractional digit word a_1 a_2 ... read at shift i is

    sum_{n >= 1} a_n / (beta_{i-1} beta_{i-2} ... beta_{i-n}),

with the base indices descending.  Integer digits a_{N-1} ... a_0 carry the
weights 1, beta_0, beta_1 beta_0, and so on.

Digit extraction needs floors, ceilings, and comparisons against 1 that are
actually correct, so a base can carry an exact backend: rational arithmetic
when every beta is a fraction, or arithmetic in a real algebraic number
field when the betas come from a Perron eigenvector.  Without a backend the
base still works through outward-rounded intervals, but any decision the
intervals cannot settle raises instead of guessing.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import CeilUndecidable, FloorUndecidable, Undecidable
from .numerics import Dyadic, IntervalReal
from .numerics.algebraic import Elem, RealAlgebraicField
from .words import UPWord

Rational = Union[int, Fraction]

DEFAULT_PREC = 64
ONE = Dyadic(1)


class RationalOps:
    """Exact arithmetic for bases whose betas are all rational."""

    exact = True

    def __init__(self, betas: Sequence[Rational]):
        # betas[i] = beta_i, ascending index
        self.betas = tuple(Fraction(b) for b in betas)

    @property
    def p(self) -> int:
        return len(self.betas)

    def lift(self, q: Rational) -> Fraction:
        return Fraction(q)

    def beta(self, i: int) -> Fraction:
        return self.betas[i % self.p]

    def delta(self) -> Fraction:
        return math.prod(self.betas)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def div(self, a, b):
        return a / b

    def sign(self, a) -> int:
        return (a > 0) - (a < 0)

    def is_zero(self, a) -> bool:
        return a == 0

    def floor(self, a) -> int:
        return math.floor(a)

    def ceil(self, a) -> int:
        return math.ceil(a)

    def enclosure(self, a, prec: int = DEFAULT_PREC) -> IntervalReal:
        return IntervalReal.from_fraction(a, prec)

    def beta_enclosures(self, prec: int) -> tuple[IntervalReal, ...]:
        return tuple(IntervalReal.from_fraction(b, prec) for b in self.betas)

    def shifted(self, i: int) -> "RationalOps":
        p = self.p
        return RationalOps(tuple(self.betas[(j + i) % p] for j in range(p)))


class FieldOps:
    """Exact arithmetic in a real algebraic field containing the betas."""

    exact = True

    def __init__(self, field: RealAlgebraicField, beta_elems: Sequence[Elem]):
        self.field = field
        self.beta_elems = tuple(beta_elems)

    @property
    def p(self) -> int:
        return len(self.beta_elems)

    def lift(self, q: Rational) -> Elem:
        return self.field.from_fraction(Fraction(q))

    def beta(self, i: int) -> Elem:
        return self.beta_elems[i % self.p]

    def delta(self) -> Elem:
        out = self.lift(1)
        for b in self.beta_elems:
            out = self.field.mul(out, b)
        return out

    def add(self, a, b):
        return self.field.add(a, b)

    def sub(self, a, b):
        return self.field.sub(a, b)

    def mul(self, a, b):
        return self.field.mul(a, b)

    def div(self, a, b):
        return self.field.div(a, b)

    def sign(self, a) -> int:
        return self.field.sign(a)

    def is_zero(self, a) -> bool:
        return self.field.is_zero(a)

    def floor(self, a) -> int:
        enc = self.field.enclosure(a, 32)
        m = math.floor(enc.lo.as_fraction())
        # enc.lo <= a, so m <= a; push up until m+1 exceeds the element
        while self.field.compare_int(a, m + 1) >= 0:
            m += 1
        return m

    def ceil(self, a) -> int:
        m = self.floor(a)
        return m if self.field.compare_int(a, m) == 0 else m + 1

    def enclosure(self, a, prec: int = DEFAULT_PREC) -> IntervalReal:
        return self.field.enclosure(a, prec)

    def beta_enclosures(self, prec: int) -> tuple[IntervalReal, ...]:
        return tuple(self.field.enclosure(b, prec) for b in self.beta_elems)

    def shifted(self, i: int) -> "FieldOps":
        p = self.p
        elems = tuple(self.beta_elems[(j + i) % p] for j in range(p))
        return FieldOps(self.field, elems)


class IntervalOps:
    """Outward-rounded interval arithmetic; decisions can be undecidable."""

    exact = False

    def __init__(self, betas: Sequence[IntervalReal], prec: int = DEFAULT_PREC):
        self.betas = tuple(betas)
        self.prec = prec

    @property
    def p(self) -> int:
        return len(self.betas)

    def lift(self, q) -> IntervalReal:
        if isinstance(q, IntervalReal):
            return q
        return IntervalReal.from_fraction(Fraction(q), self.prec)

    def beta(self, i: int) -> IntervalReal:
        return self.betas[i % self.p]

    def delta(self) -> IntervalReal:
        out = IntervalReal.exact(1)
        for b in self.betas:
            out = out.mul(b, self.prec)
        return out

    def add(self, a, b):
        return a.add(b, self.prec)

    def sub(self, a, b):
        return a.sub(b, self.prec)

    def mul(self, a, b):
        return a.mul(b, self.prec)

    def div(self, a, b):
        return a.div(b, self.prec)

    def sign(self, a: IntervalReal) -> int:
        if a.is_point() and a.lo.sign() == 0:
            return 0
        s = a.sign()
        if s == 0:
            raise Undecidable(f"sign of {a} straddles zero")
        return s

    def is_zero(self, a: IntervalReal) -> bool:
        return a.is_point() and a.lo.sign() == 0

    def floor(self, a: IntervalReal) -> int:
        lo = math.floor(a.lo.as_fraction())
        hi = math.floor(a.hi.as_fraction())
        if lo != hi:
            raise FloorUndecidable(f"floor of {a} spans {lo}..{hi}")
        return lo

    def ceil(self, a: IntervalReal) -> int:
        lo = math.ceil(a.lo.as_fraction())
        hi = math.ceil(a.hi.as_fraction())
        if lo != hi:
            raise CeilUndecidable(f"ceiling of {a} spans {lo}..{hi}")
        return lo

    def enclosure(self, a: IntervalReal, prec: int = DEFAULT_PREC) -> IntervalReal:
        return a

    def beta_enclosures(self, prec: int) -> tuple[IntervalReal, ...]:
        return self.betas

    def shifted(self, i: int) -> "IntervalOps":
        p = self.p
        return IntervalOps(tuple(self.betas[(j + i) % p] for j in range(p)), self.prec)


def _as_interval(b, prec: int) -> IntervalReal:
    if isinstance(b, IntervalReal):
        return b
    return IntervalReal.from_fraction(Fraction(b), prec)


class AlternateBase:
    """A periodic alternate base, written (beta_{p-1}, ..., beta_0)."""

    def __init__(
        self,
        betas,
        *,
        ops=None,
        qg_words: Optional[Sequence[UPWord]] = None,
        prec: int = DEFAULT_PREC,
    ):
        display = tuple(_as_interval(b, prec) for b in betas)
        if not display:
            raise ValueError("need at least one beta")
        for b in display:
            if not b.lo > ONE:
                raise ValueError(f"every beta must be certified > 1, got {b}")
        self.betas = display
        self._asc = tuple(reversed(display))
        self.ops = ops
        self.prec = prec
        if qg_words is not None:
            qg_words = tuple(qg_words)
            if len(qg_words) != len(display):
                raise ValueError("need one quasi-greedy word per shift")
        self.qg_words = qg_words

    @classmethod
    def from_rationals(
        cls, betas: Sequence[Rational], prec: int = DEFAULT_PREC
    ) -> "AlternateBase":
        """Base from rational betas given in display order (beta_{p-1},...,beta_0)."""
        display = [Fraction(b) for b in betas]
        asc = tuple(reversed(display))
        return cls(display, ops=RationalOps(asc), prec=prec)

    @classmethod
    def from_fixed_point(
        cls,
        fp,
        qg_words: Optional[Sequence[UPWord]] = None,
        prec: int = DEFAULT_PREC,
    ) -> "AlternateBase":
        """Base (beta_i)_{i} with beta_i = gamma_{(-i) mod q} of a Perron fixed point."""
        q = len(fp.gammas)
        asc_elems = tuple(fp.spectral.gamma_elems[(-i) % q] for i in range(q))
        asc_enc = tuple(fp.gammas[(-i) % q] for i in range(q))
        ops = FieldOps(fp.spectral.field, asc_elems)
        return cls(tuple(reversed(asc_enc)), ops=ops, qg_words=qg_words, prec=prec)

    @property
    def p(self) -> int:
        return len(self.betas)

    def beta(self, n: int) -> IntervalReal:
        """Enclosure of beta_n, indices taken mod p."""
        return self._asc[n % self.p]

    def delta(self) -> IntervalReal:
        """Enclosure of the period product beta_{p-1} ... beta_0."""
        out = IntervalReal.exact(1)
        for b in self._asc:
            out = out.mul(b, self.prec)
        return out

    def value_ops(self):
        """Backend for word values: the exact one when present, else intervals."""
        if self.ops is not None:
            return self.ops
        return IntervalOps(self._asc, self.prec)

    def qg_word(self, i: int) -> UPWord:
        if self.qg_words is None:
            raise ValueError("base carries no quasi-greedy expansion data")
        return self.qg_words[i % self.p]

    def shifted(self, i: int) -> "AlternateBase":
        """The base S^i(B) with beta'_n = beta_{n+i}."""
        p = self.p
        asc = tuple(self._asc[(j + i) % p] for j in range(p))
        ops = self.ops.shifted(i) if self.ops is not None else None
        qg = None
        if self.qg_words is not None:
            qg = tuple(self.qg_words[(j + i) % p] for j in range(p))
        return AlternateBase(tuple(reversed(asc)), ops=ops, qg_words=qg, prec=self.prec)

    def refine(self, prec: int) -> "AlternateBase":
        """Re-enclose the betas to width <= 2^-prec; needs an exact backend."""
        if self.ops is None:
            return self
        asc = self.ops.beta_enclosures(prec)
        return AlternateBase(
            tuple(reversed(asc)), ops=self.ops, qg_words=self.qg_words, prec=prec
        )

    def __repr__(self) -> str:
        inner = ", ".join(repr(b) for b in self.betas)
        return f"AlternateBase({inner})"
