"""Greedy and quasi-greedy expansions in periodic alternate bases.

Value convention: a fractional word a_1 a_2 ... read at shift i of the base
is worth sum_{n>=1} a_n / (beta_{i-1} beta_{i-2} ... beta_{i-n}); integer
digits a_{N-1} ... a_0 are worth a_0 + a_1 beta_0 + a_2 beta_1 beta_0 + ...

The greedy digits of x >= 1 start from the least N with
x < beta_{N-1} ... beta_0; then r_{N-1} = x / (beta_{N-1} ... beta_0) and
a_n = floor(beta_n r_n), r_{n-1} = beta_n r_n - a_n for n < N.  The
quasi-greedy expansion of 1 at shift i keeps its remainder in (0, 1] by
taking ceilings minus one instead of floors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Union

from .bases import AlternateBase, IntervalOps
from .errors import PeriodNotMultipleOfP, Undecidable
from .numerics import IntervalReal
from .words import UPWord, shift_suffix


def _val_word(ops, shift: int, w: UPWord):
    """Backend value of the fractional word w read at the given shift."""
    ell = len(w.preperiod)
    m = len(w.period)
    mm = lcm(m, ops.p)
    if mm % ops.p:
        raise PeriodNotMultipleOfP(f"aligned period {mm} not a multiple of {ops.p}")
    # value of the periodic tail, seen at shift s = shift - ell
    s = shift - ell
    acc = ops.lift(0)
    for j in range(mm, 0, -1):
        acc = ops.div(ops.add(acc, ops.lift(w.digit(ell + j))), ops.beta(s - j))
    d = ops.lift(1)
    for _ in range(mm // ops.p):
        d = ops.mul(d, ops.delta())
    tail = ops.div(ops.mul(acc, d), ops.sub(d, ops.lift(1)))
    # fold the preperiod around it, innermost digit first
    val = tail
    for n in range(ell, 0, -1):
        val = ops.div(ops.add(val, ops.lift(w.digit(n))), ops.beta(shift - n))
    return val


def val_up(
    base: AlternateBase, shift: int, w: UPWord, prec: Optional[int] = None
) -> IntervalReal:
    """Enclosure of val at the given shift of the base; exact backends give points.

    With a rational or field backend the value is computed in closed form
    (the periodic tail is a geometric factor delta^(period/p) / (that - 1)),
    so dyadic rational answers come back as exact point intervals and
    everything else is outward-rounded at the requested precision only at
    the very end.
    """
    prec = base.prec if prec is None else prec
    ops = base.value_ops()
    if not ops.exact:
        ops = IntervalOps(ops.beta_enclosures(prec), prec)
    return ops.enclosure(_val_word(ops, shift, w), prec)


@dataclass(frozen=True)
class GreedyExpansion:
    """Greedy digits of x: integer part a_{N-1}..a_0, then a_{-1}..a_{-count}."""

    int_digits: tuple[int, ...]
    frac_digits: tuple[int, ...]
    terminated: bool  # remainder certified exactly zero

    @property
    def n(self) -> int:
        return len(self.int_digits)


def _expansion_ops(base: AlternateBase, x):
    """Choose the value backend and lift x into it."""
    ops = base.value_ops()
    if isinstance(x, IntervalReal):
        if x.is_point() and ops.exact:
            return ops, ops.lift(x.lo.as_fraction())
        iops = IntervalOps(base.value_ops().beta_enclosures(base.prec), base.prec)
        return iops, x
    return ops, ops.lift(Fraction(x))


def greedy_expand(
    base: AlternateBase, x: Union[int, Fraction, IntervalReal], count: int
) -> GreedyExpansion:
    """Greedy expansion of x >= 0: all integer digits plus count fractional ones.

    Raises FloorUndecidable (or Undecidable) when the base is held only as
    intervals too wide to pin a digit down; exact backends always decide.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    ops, v = _expansion_ops(base, x)
    if ops.sign(v) < 0:
        raise ValueError("greedy expansion needs x >= 0")
    # least N with x < beta_{N-1} ... beta_0
    n_int = 0
    prod = ops.lift(1)
    while ops.sign(ops.sub(prod, v)) <= 0:
        prod = ops.mul(prod, ops.beta(n_int))
        n_int += 1
    int_digits: list[int] = []
    if n_int > 0:
        r = ops.div(v, prod)
        for n in range(n_int - 1, -1, -1):
            t = ops.mul(ops.beta(n), r)
            a = ops.floor(t)
            int_digits.append(a)
            r = ops.sub(t, ops.lift(a))
    else:
        r = v
    frac_digits: list[int] = []
    for n in range(1, count + 1):
        t = ops.mul(ops.beta(-n), r)
        a = ops.floor(t)
        frac_digits.append(a)
        r = ops.sub(t, ops.lift(a))
    return GreedyExpansion(tuple(int_digits), tuple(frac_digits), ops.is_zero(r))


def quasi_greedy_expand_one(
    base: AlternateBase, shift: int, count: int
) -> tuple[int, ...]:
    """First count digits of the quasi-greedy expansion of 1 at the given shift.

    The remainder starts at 1 and stays in (0, 1]: each digit is
    ceil(beta_{shift-n} * r) - 1.  Raises CeilUndecidable when an
    interval-only base cannot certify a ceiling.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    ops = base.value_ops()
    r = ops.lift(1)
    digits: list[int] = []
    for n in range(1, count + 1):
        t = ops.mul(ops.beta(shift - n), r)
        d = ops.ceil(t) - 1
        digits.append(d)
        r = ops.sub(t, ops.lift(d))
    return tuple(digits)


@dataclass(frozen=True)
class GreedyVerdict:
    ok: bool
    violation_k: Optional[int] = None  # least k with a suffix value >= 1

    def __bool__(self) -> bool:
        return self.ok


def is_greedy(base: AlternateBase, w: UPWord, prec: Optional[int] = None) -> GreedyVerdict:
    """Decide whether the fractional word w is a greedy expansion in the base.

    w is greedy exactly when, for every k >= 1, the suffix a_k a_{k+1} ...
    read at shift 1-k has value strictly below 1.  Suffix/shift pairs repeat
    after the preperiod with period lcm(|period|, p), so finitely many
    checks settle it.  Raises Undecidable when an interval-only base leaves
    some suffix value straddling 1.
    """
    prec = base.prec if prec is None else prec
    ops = base.value_ops()
    kmax = len(w.preperiod) + lcm(len(w.period), base.p)
    for k in range(1, kmax + 1):
        suffix = shift_suffix(w, k - 1)
        if ops.exact:
            if ops.sign(ops.sub(_val_word(ops, 1 - k, suffix), ops.lift(1))) >= 0:
                return GreedyVerdict(False, k)
        else:
            enc = val_up(base, 1 - k, suffix, prec)
            if enc.lo.as_fraction() >= 1:
                return GreedyVerdict(False, k)
            if not enc.hi.as_fraction() < 1:
                raise Undecidable(
                    f"suffix value at k={k} straddles 1: {enc}; refine the base"
                )
    return GreedyVerdict(True)
