"""Exact evaluation of the Lagrangian dual function.

The inner problem assigns one vertex to each of the n cycle positions (the
position constraints stay hard) and pays ``-lambda[v]`` per occupied
position plus 1 for every consecutive pair that is not an edge, wrapping
around. The dual value adds back ``sum(lambda)``. Minimising over such
walks is a shortest path through a layered (vertex, position) digraph.
"""
from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .decider import verify_certificate
from .graph import Graph, nonedge_penalty, penalty_matrix
from .numerics import FixedPoint

PAPER_FIXED = "paper_fixed"
ALL_STARTS = "all_starts"
UNRESTRICTED = "unrestricted"
START_MODES = (PAPER_FIXED, ALL_STARTS, UNRESTRICTED)

BRUTE_MAX_N = 7


@dataclass(frozen=True)
class Walk:
    vertices: tuple[int, ...]
    start_mode: str = PAPER_FIXED

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def multiplicity(self, n: int) -> list[int]:
        counts = [0] * n
        for v in self.vertices:
            counts[v] += 1
        return counts


@dataclass(frozen=True)
class DualResult:
    value: Fraction
    walk: Walk
    supergradient: tuple[int, ...]
    work: int  # digraph arcs relaxed


def as_lambda(values: Iterable) -> tuple[Fraction, ...]:
    """Coerce ints, Fractions, FixedPoints or numeric strings to exact Fractions."""
    out = []
    for x in values:
        if isinstance(x, FixedPoint):
            out.append(x.to_rational())
        elif isinstance(x, float):
            raise TypeError("floats are not accepted as multipliers; use Fraction or a string")
        else:
            out.append(Fraction(x))
    return tuple(out)


def _scale(lam: Sequence[Fraction]) -> tuple[list[int], int]:
    den = 1
    for x in lam:
        den = math.lcm(den, x.denominator)
    return [x.numerator * (den // x.denominator) for x in lam], den


def inner_cost(g: Graph, walk: Sequence[int], lam: Sequence) -> Fraction:
    lam = as_lambda(lam)
    n = len(walk)
    return sum(
        (nonedge_penalty(g, walk[i], walk[(i + 1) % n]) - lam[walk[i]] for i in range(n)),
        Fraction(0),
    )


def supergradient_of(walk: Sequence[int], n: int) -> tuple[int, ...]:
    counts = [0] * n
    for v in walk:
        counts[v] += 1
    return tuple(1 - c for c in counts)


class DualEvaluator:
    """Reusable evaluator for one graph and start mode."""

    def __init__(self, g: Graph, start_mode: str = PAPER_FIXED):
        if start_mode not in START_MODES:
            raise ValueError(f"unknown start mode {start_mode!r}")
        if g.n < 3:
            raise ValueError(f"dual evaluation needs n >= 3, got {g.n}")
        self.g = g
        self.start_mode = start_mode
        self.pen = penalty_matrix(g)
        n = g.n
        if start_mode == PAPER_FIXED:
            self.starts = [(0, [v for v in range(n) if v != 0])]
        elif start_mode == ALL_STARTS:
            self.starts = [(s, [v for v in range(n) if v != s]) for s in range(n)]
        else:
            self.starts = [(s, list(range(n))) for s in range(n)]

    def _solve_start(self, w: list[int], den: int, v0: int, inner: list[int]):
        n = len(w)
        pen = self.pen
        k = len(inner)
        arc = [[den * pen[u][v] for v in inner] for u in inner]
        # togo[i][a]: cheapest completion from node (inner[a], i) to the sink, node weight included
        togo: list[list[int]] = [[]] * n
        togo[n - 1] = [den * pen[u][v0] - w[u] for u in inner]
        work = k
        for i in range(n - 2, 0, -1):
            nxt = togo[i + 1]
            togo[i] = [min(map(int.__add__, arc[a], nxt)) - w[inner[a]] for a in range(k)]
            work += k * k
        first = [den * pen[v0][v] + togo[1][b] for b, v in enumerate(inner)]
        work += k
        total = min(first) - w[v0]

        # forward pass: smallest feasible index at each position gives the lexicographically least walk
        b = first.index(min(first))
        walk = [v0, inner[b]]
        for i in range(1, n - 1):
            target = togo[i][b] + w[inner[b]]
            row = arc[b]
            nxt = togo[i + 1]
            b = next(c for c in range(k) if row[c] + nxt[c] == target)
            walk.append(inner[b])
        return total, tuple(walk), work

    def __call__(self, lam) -> DualResult:
        lam = as_lambda(lam)
        if len(lam) != self.g.n:
            raise ValueError(f"multiplier vector has length {len(lam)}, expected {self.g.n}")
        return self.eval_scaled(*_scale(lam))

    def eval_scaled(self, w: list[int], den: int) -> DualResult:
        """Evaluate at lambda = w / den for integer numerators ``w``."""
        n = self.g.n
        best = None
        work = 0
        for v0, inner in self.starts:
            total, walk, arcs = self._solve_start(w, den, v0, inner)
            work += arcs
            if best is None or total < best[0]:
                best = (total, walk)
        total, walk = best
        value = Fraction(total + sum(w), den)
        return DualResult(value, Walk(walk, self.start_mode), supergradient_of(walk, n), work)


def eval_dual(g: Graph, lam, start_mode: str = PAPER_FIXED) -> DualResult:
    return DualEvaluator(g, start_mode)(lam)


def expected_work(n: int, start_mode: str = PAPER_FIXED) -> int:
    """Arc relaxations performed by one evaluation."""
    k = n - 1 if start_mode != UNRESTRICTED else n
    per_start = (n - 2) * k * k + 2 * k
    return per_start if start_mode == PAPER_FIXED else n * per_start


# --- exhaustive reference ---------------------------------------------------


@functools.lru_cache(maxsize=8)
def _walk_table(n: int, start_mode: str) -> np.ndarray:
    verts = range(n)
    if start_mode == PAPER_FIXED:
        rows = ((0,) + t for t in itertools.product(range(1, n), repeat=n - 1))
    elif start_mode == ALL_STARTS:
        rows = (
            (s,) + t
            for s in verts
            for t in itertools.product([v for v in verts if v != s], repeat=n - 1)
        )
    else:
        rows = itertools.product(verts, repeat=n)
    return np.array(list(rows), dtype=np.int64)


@functools.lru_cache(maxsize=8)
def _occupancy(n: int, start_mode: str) -> np.ndarray:
    walks = _walk_table(n, start_mode)
    occ = np.zeros((len(walks), n), dtype=np.int64)
    for i in range(n):
        np.add.at(occ, (np.arange(len(walks)), walks[:, i]), 1)
    return occ


@functools.lru_cache(maxsize=256)
def _penalty_totals(g: Graph, start_mode: str) -> np.ndarray:
    walks = _walk_table(g.n, start_mode)
    nonadj = 1 - np.array(g.adjacency, dtype=np.int64)
    n = g.n
    return sum(nonadj[walks[:, i], walks[:, (i + 1) % n]] for i in range(n))


def brute_dual(g: Graph, lam, start_mode: str = PAPER_FIXED) -> Fraction:
    """Dual value by enumerating every admissible position-to-vertex walk."""
    n = g.n
    if n > BRUTE_MAX_N:
        raise ValueError(f"brute force limited to n <= {BRUTE_MAX_N} (enumerates up to n^n walks), got n={n}")
    if n < 3:
        raise ValueError(f"dual evaluation needs n >= 3, got {n}")
    if start_mode not in START_MODES:
        raise ValueError(f"unknown start mode {start_mode!r}")
    lam = as_lambda(lam)
    if len(lam) != n:
        raise ValueError(f"multiplier vector has length {len(lam)}, expected {n}")
    lam_sum = sum(lam, Fraction(0))
    w, den = _scale(lam)
    limit = 1 << 60
    if den * n < limit and all(abs(x) * n < limit for x in w):
        costs = den * _penalty_totals(g, start_mode) - _occupancy(n, start_mode) @ np.array(w, dtype=np.int64)
        return Fraction(int(costs.min()), den) + lam_sum
    # big denominators: plain exact loop
    best = None
    for walk in _walk_table(n, start_mode).tolist():
        c = sum(
            (nonedge_penalty(g, walk[i], walk[(i + 1) % n]) - lam[walk[i]] for i in range(n)),
            Fraction(0),
        )
        if best is None or c < best:
            best = c
    return best + lam_sum


# --- primal side ------------------------------------------------------------


def _as_sequence(x) -> list[int]:
    return list(x.vertices) if isinstance(x, Walk) else [int(v) for v in x]


def primal_value(g: Graph, x) -> int:
    """Number of non-edges traversed by the closed tour the permutation describes."""
    perm = _as_sequence(x)
    n = g.n
    if len(perm) != n or sorted(perm) != list(range(n)):
        raise ValueError("assignment is not a bijection between positions and vertices")
    return sum(nonedge_penalty(g, perm[i], perm[(i + 1) % n]) for i in range(n))


def walk_to_matrix(walk, n: int | None = None) -> list[list[int]]:
    seq = _as_sequence(walk)
    n = len(seq) if n is None else n
    mat = [[0] * n for _ in range(n)]
    for i, v in enumerate(seq):
        mat[i][v] = 1
    return mat


def check_feasible(x, which: str = "D") -> bool:
    """Membership of a position-by-vertex 0/1 assignment in D1, D2 or D = D1 & D2.

    ``x`` is either an n x n matrix (rows = positions) or a walk/vertex sequence.
    """
    if isinstance(x, Walk) or (len(x) and not hasattr(x[0], "__len__")):
        mat = walk_to_matrix(x)
    else:
        mat = [list(row) for row in x]
    n = len(mat)
    if n == 0 or any(len(row) != n for row in mat):
        raise ValueError("assignment must be a non-empty square matrix")
    if any(e not in (0, 1) for row in mat for e in row):
        raise ValueError("assignment entries must be 0 or 1")
    d1 = all(sum(row) == 1 for row in mat)
    d2 = all(sum(mat[i][v] for i in range(n)) == 1 for v in range(n))
    if which == "D1":
        return d1
    if which == "D2":
        return d2
    if which == "D":
        return d1 and d2
    raise ValueError(f"unknown constraint set {which!r}")


def decode_certificate(g: Graph, w) -> tuple[int, ...] | None:
    seq = tuple(_as_sequence(w))
    return seq if verify_certificate(g, seq) else None
