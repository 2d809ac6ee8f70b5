"""Reference computations used only by tests, built on different routes than the package."""
from __future__ import annotations

import itertools
import math
from decimal import ROUND_CEILING, Decimal, localcontext
from fractions import Fraction


def decimal_budget(n: int, m: int, digits: int = 80) -> int:
    """N via the simplified closed form ln(3 n! (n+1) M (1 + sqrt n)) in Decimal."""
    M = Fraction(4 * n * n - 4 * m, n)
    with localcontext() as ctx:
        ctx.prec = digits
        arg = Decimal(3 * math.factorial(n) * (n + 1) * M.numerator) / Decimal(M.denominator)
        arg *= 1 + Decimal(n).sqrt()
        log = arg.ln()
        ceil = int(log.to_integral_value(rounding=ROUND_CEILING))
        assert abs(log - ceil) > Decimal(10) ** (-digits // 2), "too close to call"
    return 2 * (n + 1) ** 2 * ceil


def decimal_paper_bound(n: int, digits: int = 60) -> int:
    with localcontext() as ctx:
        ctx.prec = digits
        lg = Decimal(n).ln() / Decimal(2).ln()
        val = Decimal("2.5") + 5 * lg + Decimal("1.43") * n * lg
        return 2 * (n + 1) ** 2 * int(val.to_integral_value(rounding=ROUND_CEILING))


def fraction_det(rows) -> Fraction:
    """Determinant by Gaussian elimination over Fractions."""
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            det = -det
        det *= a[col][col]
        for r in range(col + 1, n):
            f = a[r][col] / a[col][col]
            if f:
                for c in range(col, n):
                    a[r][c] -= f * a[col][c]
    return det


def permutation_hamiltonian(g) -> bool:
    n = g.n
    if n < 3:
        return False
    for rest in itertools.permutations(range(1, n)):
        cyc = (0,) + rest
        if all(g.has_edge(cyc[i], cyc[(i + 1) % n]) for i in range(n)):
            return True
    return False


def permutation_cycle_count(g) -> int:
    n = g.n
    count = 0
    for rest in itertools.permutations(range(1, n)):
        cyc = (0,) + rest
        if all(g.has_edge(cyc[i], cyc[(i + 1) % n]) for i in range(n)):
            count += 1
    return count // 2
