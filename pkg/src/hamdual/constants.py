"""Closed-form per-instance constants for the dual ellipsoid solver.

The multiplier simplex is S = {lambda >= 0, sum(lambda) <= M} with
M = (4 n^2 - 4 |E|) / n. It sits inside the ball of radius R = M / sqrt(n)
around (M/n, ..., M/n) and contains the ball of radius r = M / (n + sqrt(n)).
The dual is Lipschitz with L = (n + 1) sqrt(n). Quantities involving sqrt(n)
are kept as squares or symbolic strings; only the iteration budget needs a
numeric log, which is bracketed with interval arithmetic.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from fractions import Fraction

import mpmath
from mpmath import iv

from .graph import Graph
from .numerics import factorial_thresholds

FAITHFUL = "faithful"
PRACTICAL = "practical"
DEFAULT_PRECISION_BITS = 256

_iv_lock = threading.Lock()


@dataclass(frozen=True)
class InstanceConstants:
    n: int
    m: int
    M: Fraction
    R2: Fraction  # R^2 = M^2 / n
    L2: Fraction  # L^2 = n (n + 1)^2
    epsilon: Fraction
    delta: Fraction
    tau: Fraction
    N: int
    p: int
    mode: str

    @property
    def lambda0(self) -> tuple[Fraction, ...]:
        return (self.M / self.n,) * self.n

    @property
    def r_form(self) -> str:
        return f"({self.M})/({self.n}+sqrt({self.n}))"

    @property
    def L_form(self) -> str:
        return f"{self.n + 1}*sqrt({self.n})"

    @property
    def lambda_hat_form(self) -> str:
        # every coordinate equals r
        return self.r_form

    def r2_upper(self) -> Fraction:
        """Rational upper bound on r^2 (uses floor(sqrt(n)) <= sqrt(n))."""
        return self.M**2 / (self.n + math.isqrt(self.n)) ** 2


def _interval_ceil(build, start_prec: int = 128, max_prec: int = 1 << 16) -> int:
    """Exact ceiling of the real number whose enclosure ``build()`` returns."""
    prec = start_prec
    with _iv_lock:
        saved = iv.prec
        try:
            while prec <= max_prec:
                iv.prec = prec
                x = build()
                lo, hi = int(mpmath.ceil(x.a)), int(mpmath.ceil(x.b))
                if lo == hi:
                    return lo
                prec *= 2
        finally:
            iv.prec = saved
    raise ArithmeticError("could not separate value from an integer boundary")


def _budget_multiplier(n: int, m: int) -> int:
    """ceil(ln(L R^2 / (r eps))) for the given instance size."""
    M = Fraction(4 * n * n - 4 * m, n)
    eps = Fraction(1, 3 * math.factorial(n))

    def build():
        sq = iv.sqrt(iv.mpf(n))
        L = (n + 1) * sq
        R2 = iv.mpf(M.numerator**2) / (M.denominator**2 * n)
        r = iv.mpf(M.numerator) / (M.denominator * (n + sq))
        return iv.log(L * R2 / (r * (iv.mpf(eps.numerator) / eps.denominator)))

    return _interval_ceil(build)


def iteration_budget_for(n: int, m: int) -> int:
    """N = 2 (n+1)^2 ceil(ln(L R^2 / (r eps)))."""
    return 2 * (n + 1) ** 2 * _budget_multiplier(n, m)


def paper_iteration_bound(n: int) -> int:
    """Closed upper bound 2 (n+1)^2 ceil(2.5 + 5 log2 n + 1.43 n log2 n), stated for n >= 10."""

    def build():
        lg = iv.log(iv.mpf(n)) / iv.log(iv.mpf(2))
        return iv.mpf(5) / 2 + 5 * lg + (iv.mpf(143) / 100) * n * lg

    return 2 * (n + 1) ** 2 * _interval_ceil(build)


def instance_constants(g: Graph, mode: str = PRACTICAL, p_override: int | None = None) -> InstanceConstants:
    n, m = g.n, g.m
    if n < 3:
        raise ValueError(f"solver needs n >= 3, got {n}")
    if mode not in (FAITHFUL, PRACTICAL):
        raise ValueError(f"unknown mode {mode!r}")
    M = Fraction(4 * n * n - 4 * m, n)
    assert M > 0, "M must be positive for a simple graph"
    eps, delta, tau = factorial_thresholds(n)
    N = iteration_budget_for(n, m)
    if mode == FAITHFUL:
        if p_override is not None:
            raise ValueError("faithful mode fixes p = 5N; precision override is not allowed")
        p = 5 * N
    else:
        p = DEFAULT_PRECISION_BITS if p_override is None else int(p_override)
        if p < 1:
            raise ValueError("precision bits must be positive")
    return InstanceConstants(
        n=n,
        m=m,
        M=M,
        R2=M * M / n,
        L2=Fraction(n * (n + 1) ** 2),
        epsilon=eps,
        delta=delta,
        tau=tau,
        N=N,
        p=p,
        mode=mode,
    )
