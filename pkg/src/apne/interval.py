"""Certified rational enclosures for ln, exp, roots and powers.

Every quantity is a closed interval ``[lo, hi]`` of Fractions that provably
contains the real value. Intermediate results are rounded outward onto the
dyadic grid ``2**-bits`` so that numerators stay small.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

BITS = 96


def round_down(x: Fraction, bits: int = BITS) -> Fraction:
    scale = 1 << bits
    return Fraction(math.floor(x * scale), scale)


def round_up(x: Fraction, bits: int = BITS) -> Fraction:
    scale = 1 << bits
    return Fraction(math.ceil(x * scale), scale)


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x) -> Interval:
        x = Fraction(x)
        return cls(x, x)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= x <= self.hi

    def widen(self, bits: int = BITS) -> Interval:
        return Interval(round_down(self.lo, bits), round_up(self.hi, bits))

    def __add__(self, other) -> Interval:
        other = _coerce(other)
        return Interval(self.lo + other.lo, self.hi + other.hi).widen()

    __radd__ = __add__

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __sub__(self, other) -> Interval:
        return self + (-_coerce(other))

    def __rsub__(self, other) -> Interval:
        return _coerce(other) - self

    def __mul__(self, other) -> Interval:
        other = _coerce(other)
        products = (
            self.lo * other.lo,
            self.lo * other.hi,
            self.hi * other.lo,
            self.hi * other.hi,
        )
        return Interval(min(products), max(products)).widen()

    __rmul__ = __mul__

    def reciprocal(self) -> Interval:
        if self.lo <= 0 <= self.hi:
            raise ZeroDivisionError("interval contains zero")
        return Interval(1 / self.hi, 1 / self.lo).widen()

    def __truediv__(self, other) -> Interval:
        return self * _coerce(other).reciprocal()

    def __rtruediv__(self, other) -> Interval:
        return _coerce(other) * self.reciprocal()

    def __pow__(self, n: int) -> Interval:
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers")
        if self.lo < 0:
            raise ValueError("integer powers implemented for nonnegative intervals")
        result = Interval.point(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __lt__(self, other) -> bool:
        """Certainly less: every point of self is below every point of other."""
        return self.hi < _coerce(other).lo

    def __gt__(self, other) -> bool:
        return self.lo > _coerce(other).hi

    def __float__(self) -> float:
        return float(self.mid)


def _coerce(x) -> Interval:
    return x if isinstance(x, Interval) else Interval.point(x)


def _exp_small(y: Fraction, bits: int) -> Interval:
    # Taylor series for |y| <= 1/2; tail bounded by twice the first omitted term.
    assert abs(y) <= Fraction(1, 2)
    target = Fraction(1, 1 << (bits + 8))
    total = Fraction(0)
    term = Fraction(1)
    j = 0
    while abs(term) * 2 >= target:
        total += term
        j += 1
        term = term * y / j
    tail = 2 * abs(term)
    return Interval(round_down(total - tail, bits + 4), round_up(total + tail, bits + 4))


def exp_of(x: Fraction, bits: int = BITS) -> Interval:
    x = Fraction(x)
    s = 0
    while abs(x) / (1 << s) > Fraction(1, 2):
        s += 1
    work = bits + s + 8
    r = _exp_small(x / (1 << s), work)
    for _ in range(s):
        r = Interval(round_down(r.lo * r.lo, work), round_up(r.hi * r.hi, work))
    return r.widen(bits)


def exp(x: Interval | Fraction, bits: int = BITS) -> Interval:
    x = _coerce(x)
    return Interval(exp_of(x.lo, bits).lo, exp_of(x.hi, bits).hi)


def _atanh(z: Fraction, bits: int) -> Interval:
    # z in [0, 1/2]; tail after N terms <= z^(2N+1) / ((2N+1)(1-z^2)).
    assert 0 <= z <= Fraction(1, 2)
    work = bits + 16
    target = Fraction(1, 1 << (bits + 8))
    lo = hi = Fraction(0)
    power = z
    z2 = z * z
    j = 0
    while True:
        term = power / (2 * j + 1)
        lo += round_down(term, work)
        hi += round_up(term, work)
        j += 1
        power = round_up(power * z2, work)
        tail = power / ((2 * j + 1) * (1 - z2))
        if tail < target:
            break
    return Interval(round_down(lo, bits + 4), round_up(hi + tail, bits + 4))


def ln2(bits: int = BITS) -> Interval:
    a = _atanh(Fraction(1, 3), bits + 4)
    return Interval(2 * a.lo, 2 * a.hi).widen(bits)


def log_of(x: Fraction, bits: int = BITS) -> Interval:
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log of nonpositive number")
    e = x.numerator.bit_length() - x.denominator.bit_length()
    y = x / Fraction(2) ** e
    while y >= 2:
        y /= 2
        e += 1
    while y < 1:
        y *= 2
        e -= 1
    work = bits + max(abs(e), 1).bit_length() + 8
    z = (y - 1) / (y + 1)
    a = _atanh(z, work)
    lny = Interval(2 * a.lo, 2 * a.hi)
    l2 = ln2(work)
    if e >= 0:
        scaled = Interval(e * l2.lo, e * l2.hi)
    else:
        scaled = Interval(e * l2.hi, e * l2.lo)
    return Interval(lny.lo + scaled.lo, lny.hi + scaled.hi).widen(bits)


def log(x: Interval | Fraction, bits: int = BITS) -> Interval:
    x = _coerce(x)
    return Interval(log_of(x.lo, bits).lo, log_of(x.hi, bits).hi)


def sqrt_of(x: Fraction, bits: int = BITS) -> Interval:
    x = Fraction(x)
    if x < 0:
        raise ValueError("sqrt of negative number")
    scale = 1 << (2 * bits)
    r = math.isqrt(math.floor(x * scale))
    lo = Fraction(r, 1 << bits)
    hi = Fraction(r + 1, 1 << bits)
    return Interval(lo, hi)


def sqrt(x: Interval | Fraction, bits: int = BITS) -> Interval:
    x = _coerce(x)
    return Interval(sqrt_of(x.lo, bits).lo, sqrt_of(x.hi, bits).hi)


def power(base: Interval | Fraction, exponent: Interval | Fraction, bits: int = BITS) -> Interval:
    """base**exponent for positive base and real exponent."""
    base = _coerce(base)
    if base.lo <= 0:
        raise ValueError("power needs a positive base")
    return exp(log(base, bits) * _coerce(exponent), bits)


def certified_floor(x: Interval) -> int:
    lo, hi = math.floor(x.lo), math.floor(x.hi)
    if lo != hi:
        raise ArithmeticError(f"enclosure {float(x.lo)}..{float(x.hi)} straddles an integer")
    return lo


def certified_ceil(x: Interval) -> int:
    lo, hi = math.ceil(x.lo), math.ceil(x.hi)
    if lo != hi:
        raise ArithmeticError(f"enclosure {float(x.lo)}..{float(x.hi)} straddles an integer")
    return lo


def three_pow_half(d: int, bits: int = 140) -> Interval:
    """Enclosure of 3**(d/2); exact for even d."""
    if d % 2 == 0:
        return Interval.point(3 ** (d // 2))
    root = sqrt_of(Fraction(3), bits)
    c = 3 ** ((d - 1) // 2)
    return Interval(c * root.lo, c * root.hi)
