"""Simple undirected graphs, DIMACS edge-format I/O and corpus generators."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np


class DimacsError(ValueError):
    """Malformed DIMACS input; ``lineno`` is 1-based (0 when not tied to a line)."""

    def __init__(self, message: str, lineno: int = 0):
        self.lineno = lineno
        prefix = f"line {lineno}: " if lineno else ""
        super().__init__(prefix + message)


@dataclass(frozen=True)
class Graph:
    n: int
    edges: frozenset[tuple[int, int]]
    # planted Hamiltonian cycle, if the generator embedded one
    planted: tuple[int, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("vertex count must be non-negative")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={self.n}")
            norm.add((u, v) if u < v else (v, u))
        object.__setattr__(self, "edges", frozenset(norm))
        adj = [[False] * self.n for _ in range(self.n)]
        for u, v in norm:
            adj[u][v] = adj[v][u] = True
        object.__setattr__(self, "_adj", tuple(tuple(row) for row in adj))

    @classmethod
    def from_edges(cls, n: int, edges, planted=None) -> Graph:
        return cls(n, frozenset((int(u), int(v)) for u, v in edges), planted)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def adjacency(self) -> tuple[tuple[bool, ...], ...]:
        return self._adj

    def has_edge(self, u: int, v: int) -> bool:
        return self._adj[u][v]

    def neighbors(self, v: int) -> list[int]:
        return [u for u in range(self.n) if self._adj[v][u]]

    def degree(self, v: int) -> int:
        return sum(self._adj[v])

    def degrees(self) -> list[int]:
        return [sum(row) for row in self._adj]

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        seen = {0}
        stack = [0]
        while stack:
            v = stack.pop()
            for u in self.neighbors(v):
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        return len(seen) == self.n

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)


def nonedge_penalty(g: Graph, u: int, v: int) -> int:
    """1 if the ordered pair (u, v) lies outside E(G), else 0.

    The diagonal counts as a non-edge, so repeating a vertex costs 1.
    """
    if not (0 <= u < g.n and 0 <= v < g.n):
        raise IndexError(f"vertex pair ({u}, {v}) out of range for n={g.n}")
    return 0 if g.adjacency[u][v] else 1


def penalty_matrix(g: Graph) -> list[list[int]]:
    return [[0 if g.adjacency[u][v] else 1 for v in range(g.n)] for u in range(g.n)]


# --- DIMACS ---------------------------------------------------------------


def parse_dimacs(text: str | bytes) -> Graph:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    n = None
    declared_m = 0
    edges: set[tuple[int, int]] = set()
    edge_lines = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line[0] == "c":
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "p":
            if n is not None:
                raise DimacsError("duplicate 'p' line", lineno)
            if len(parts) != 4 or parts[1] != "edge":
                raise DimacsError("expected 'p edge <n> <m>'", lineno)
            try:
                n, declared_m = int(parts[2]), int(parts[3])
            except ValueError:
                raise DimacsError("non-integer in 'p' line", lineno) from None
            if n < 0 or declared_m < 0:
                raise DimacsError("negative count in 'p' line", lineno)
        elif tag == "e":
            if n is None:
                raise DimacsError("edge line before 'p' line", lineno)
            if len(parts) != 3:
                raise DimacsError("expected 'e <u> <v>'", lineno)
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsError("non-integer vertex index", lineno) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsError("vertex out of range", lineno)
            if u == v:
                raise DimacsError(f"self-loop at vertex {u}", lineno)
            edge_lines += 1
            edges.add((min(u, v) - 1, max(u, v) - 1))
        else:
            raise DimacsError(f"unknown line type {tag!r}", lineno)
    if n is None:
        raise DimacsError("missing 'p' line")
    if edge_lines != declared_m:
        raise DimacsError(f"'p' line declares {declared_m} edges, found {edge_lines}")
    return Graph(n, frozenset(edges))


def emit_dimacs(g: Graph) -> bytes:
    lines = [f"p edge {g.n} {g.m}"]
    lines.extend(f"e {u + 1} {v + 1}" for u, v in g.sorted_edges())
    return ("\n".join(lines) + "\n").encode("ascii")


def read_dimacs(path) -> Graph:
    with open(path, "rb") as fh:
        return parse_dimacs(fh.read())


# --- generators -----------------------------------------------------------


def _check_n(n: int, lo: int = 3) -> None:
    if n < lo:
        raise ValueError(f"n must be >= {lo}, got {n}")


def _as_prob(p) -> Fraction:
    p = Fraction(p)
    if not 0 <= p <= 1:
        raise ValueError(f"edge probability must lie in [0, 1], got {p}")
    return p


def _bernoulli(rng: random.Random, p: Fraction) -> bool:
    # exact rational coin: no float comparison
    return rng.randrange(p.denominator) < p.numerator


def cycle_graph(n: int) -> Graph:
    _check_n(n)
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], planted=tuple(range(n)))


def complete_graph(n: int) -> Graph:
    _check_n(n)
    return Graph.from_edges(n, itertools.combinations(range(n), 2), planted=tuple(range(n)))


def path_graph(n: int) -> Graph:
    _check_n(n)
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph.from_edges(10, outer + spokes + inner)


def complete_bipartite_graph(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ValueError("both sides need at least one vertex")
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def gnp_graph(n: int, p, seed: int) -> Graph:
    _check_n(n, lo=1)
    p = _as_prob(p)
    rng = random.Random(seed)
    return Graph.from_edges(n, [e for e in itertools.combinations(range(n), 2) if _bernoulli(rng, p)])


def planted_hamiltonian_graph(n: int, p, seed: int) -> Graph:
    _check_n(n)
    p = _as_prob(p)
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    cyc = {tuple(sorted((order[i], order[(i + 1) % n]))) for i in range(n)}
    extra = [e for e in itertools.combinations(range(n), 2) if e not in cyc and _bernoulli(rng, p)]
    return Graph.from_edges(n, list(cyc) + extra, planted=tuple(order))


GENERATORS = {
    "cycle": lambda params, seed: cycle_graph(int(params["n"])),
    "complete": lambda params, seed: complete_graph(int(params["n"])),
    "path": lambda params, seed: path_graph(int(params["n"])),
    "petersen": lambda params, seed: petersen_graph(),
    "complete_bipartite": lambda params, seed: complete_bipartite_graph(int(params["a"]), int(params["b"])),
    "gnp": lambda params, seed: gnp_graph(int(params["n"]), params["p"], seed),
    "planted_hamiltonian": lambda params, seed: planted_hamiltonian_graph(int(params["n"]), params["p"], seed),
}


def generate(kind: str, params: dict | None = None, seed: int = 0) -> Graph:
    """Build a graph deterministically from ``(kind, params, seed)``.

    ``p`` for the random kinds may be anything :class:`fractions.Fraction`
    accepts ("1/3", "0.25", 1).
    """
    try:
        build = GENERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown generator {kind!r}; choose from {sorted(GENERATORS)}") from None
    try:
        return build(params or {}, seed)
    except KeyError as exc:
        raise ValueError(f"generator {kind!r} requires parameter {exc.args[0]!r}") from None


# --- exhaustive enumeration -------------------------------------------------


def all_graphs(n: int, connected: bool = True) -> list[Graph]:
    """One representative per isomorphism class of graphs on ``n`` vertices.

    Canonical form is the minimum edge bitmask over all vertex relabelings,
    computed for every mask at once; practical up to n = 6.
    """
    if n > 6:
        raise ValueError("exhaustive enumeration is limited to n <= 6")
    pairs = list(itertools.combinations(range(n), 2))
    index = {e: k for k, e in enumerate(pairs)}
    masks = np.arange(1 << len(pairs), dtype=np.int64)
    bits = [(masks >> k) & 1 for k in range(len(pairs))]
    canon = masks.copy()
    for perm in itertools.permutations(range(n)):
        image = np.zeros_like(masks)
        for k, (u, v) in enumerate(pairs):
            a, b = perm[u], perm[v]
            image |= bits[k] << index[(a, b) if a < b else (b, a)]
        np.minimum(canon, image, out=canon)
    out = []
    for rep in np.unique(canon).tolist():
        g = Graph.from_edges(n, [e for k, e in enumerate(pairs) if rep >> k & 1])
        if not connected or g.is_connected():
            out.append(g)
    return out
