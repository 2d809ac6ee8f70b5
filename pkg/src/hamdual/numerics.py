"""Fixed-point and rational arithmetic.

Rationals are :class:`fractions.Fraction`. Fixed-point values are integer
mantissas scaled by ``2**-p``; add/sub are exact, mul/div round to nearest
(ties to even mantissa), square root floors.
"""
from __future__ import annotations

import math
from fractions import Fraction

Rational = Fraction


class PrecisionMismatch(TypeError):
    """Operands carry different fractional bit counts."""


def round_div(num: int, den: int) -> int:
    """Nearest integer to ``num / den``, ties to even."""
    if den == 0:
        raise ZeroDivisionError("fixed-point division by zero")
    if den < 0:
        num, den = -num, -den
    q, r = divmod(num, den)
    twice = 2 * r
    if twice > den or (twice == den and q & 1):
        q += 1
    return q


class FixedPoint:
    __slots__ = ("mantissa", "p")

    def __init__(self, mantissa: int, p: int):
        if p < 0:
            raise ValueError("fractional bits must be non-negative")
        self.mantissa = int(mantissa)
        self.p = int(p)

    @classmethod
    def from_rational(cls, x, p: int) -> FixedPoint:
        """Round ``x`` to the nearest multiple of ``2**-p``."""
        x = Fraction(x)
        return cls(round_div(x.numerator << p, x.denominator), p)

    @classmethod
    def from_int(cls, k: int, p: int) -> FixedPoint:
        return cls(int(k) << p, p)

    def to_rational(self) -> Fraction:
        return Fraction(self.mantissa, 1 << self.p)

    def _check(self, other: FixedPoint) -> None:
        if not isinstance(other, FixedPoint):
            raise TypeError(f"expected FixedPoint, got {type(other).__name__}")
        if other.p != self.p:
            raise PrecisionMismatch(f"mixed precision: p={self.p} vs p={other.p}")

    def __add__(self, other: FixedPoint) -> FixedPoint:
        self._check(other)
        return FixedPoint(self.mantissa + other.mantissa, self.p)

    def __sub__(self, other: FixedPoint) -> FixedPoint:
        self._check(other)
        return FixedPoint(self.mantissa - other.mantissa, self.p)

    def __neg__(self) -> FixedPoint:
        return FixedPoint(-self.mantissa, self.p)

    def __mul__(self, other: FixedPoint) -> FixedPoint:
        self._check(other)
        return FixedPoint(round_div(self.mantissa * other.mantissa, 1 << self.p), self.p)

    def __truediv__(self, other: FixedPoint) -> FixedPoint:
        self._check(other)
        if other.mantissa == 0:
            raise ZeroDivisionError("fixed-point division by zero")
        return FixedPoint(round_div(self.mantissa << self.p, other.mantissa), self.p)

    def mul_int(self, k: int) -> FixedPoint:
        return FixedPoint(self.mantissa * k, self.p)

    def div_int(self, k: int) -> FixedPoint:
        return FixedPoint(round_div(self.mantissa, k), self.p)

    def sqrt(self) -> FixedPoint:
        if self.mantissa < 0:
            raise ValueError("square root of a negative fixed-point value")
        return FixedPoint(math.isqrt(self.mantissa << self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, FixedPoint):
            return self.p == other.p and self.mantissa == other.mantissa
        return NotImplemented

    def __hash__(self):
        return hash((self.mantissa, self.p))

    def __lt__(self, other: FixedPoint) -> bool:
        self._check(other)
        return self.mantissa < other.mantissa

    def __le__(self, other: FixedPoint) -> bool:
        self._check(other)
        return self.mantissa <= other.mantissa

    def __repr__(self):
        return f"FixedPoint({self.mantissa}, p={self.p})"

    def __str__(self):
        return render_fixed(self)


_OPS = {
    "add": FixedPoint.__add__,
    "sub": FixedPoint.__sub__,
    "mul": FixedPoint.__mul__,
    "div": FixedPoint.__truediv__,
}


def fp_arith(a: FixedPoint, b: FixedPoint, op: str) -> FixedPoint:
    try:
        fn = _OPS[op]
    except KeyError:
        raise ValueError(f"unknown op {op!r}") from None
    return fn(a, b)


def fp_isqrt(a: FixedPoint) -> FixedPoint:
    return a.sqrt()


def factorial_thresholds(n: int) -> tuple[Fraction, Fraction, Fraction]:
    """(epsilon, delta, tau) = (1/(3 n!), 1/(3 n n!), 2/(3 n!))."""
    if n < 3:
        raise ValueError(f"n must be >= 3, got {n}")
    f = math.factorial(n)
    return Fraction(1, 3 * f), Fraction(1, 3 * n * f), Fraction(2, 3 * f)


def render_rational(x) -> str:
    return str(Fraction(x))


def render_fixed(x: FixedPoint) -> str:
    """Exact decimal expansion (dyadic values terminate) tagged with p."""
    sign = "-" if x.mantissa < 0 else ""
    m = abs(x.mantissa)
    whole, frac = divmod(m, 1 << x.p)
    if frac == 0:
        return f"{sign}{whole} [p={x.p}]"
    # frac / 2^p == frac * 5^p / 10^p
    digits = str(frac * 5**x.p).rjust(x.p, "0").rstrip("0")
    return f"{sign}{whole}.{digits} [p={x.p}]"
