"""Ground-truth Hamiltonicity: Held-Karp bitmask DP and pruned backtracking."""
from __future__ import annotations

from dataclasses import dataclass

from .decider import verify_certificate
from .graph import Graph

HELD_KARP_MAX_N = 24
COUNT_MAX_N = 12
DEFAULT_NODE_BUDGET = 10**8


class OracleUnresolved(RuntimeError):
    """Backtracking exhausted its node budget without an answer."""

    def __init__(self, expanded: int):
        self.expanded = expanded
        super().__init__(f"unresolved: node budget exhausted after {expanded} expansions")


@dataclass(frozen=True)
class OracleResult:
    is_hamiltonian: bool
    cycle: tuple[int, ...] | None
    method: str
    work: int

    def to_json(self) -> dict:
        return {
            "is_hamiltonian": self.is_hamiltonian,
            "cycle": list(self.cycle) if self.cycle is not None else None,
            "method": self.method,
            "work": self.work,
        }


def _nbr_masks(g: Graph) -> list[int]:
    return [sum(1 << u for u in g.neighbors(v)) for v in range(g.n)]


def held_karp(g: Graph) -> OracleResult:
    n = g.n
    if n > HELD_KARP_MAX_N:
        raise ValueError(f"Held-Karp limited to n <= {HELD_KARP_MAX_N}, got {n}")
    if n < 3:
        return OracleResult(False, None, "held_karp", 0)
    nbr = _nbr_masks(g)
    # reach[S]: bitmask of endpoints v such that some path from 0 covers exactly S (0 in S) and ends at v
    full = (1 << n) - 1
    reach = [0] * (1 << n)
    reach[1] = 1
    work = 1
    for S in range(1, full + 1, 2):
        ends = reach[S]
        if not ends:
            continue
        e = ends
        while e:
            low = e & -e
            v = low.bit_length() - 1
            e ^= low
            ext = nbr[v] & ~S
            while ext:
                lb = ext & -ext
                u = lb.bit_length() - 1
                ext ^= lb
                T = S | lb
                if not reach[T] >> u & 1:
                    reach[T] |= lb
                    work += 1
    closing = reach[full] & nbr[0]
    if not closing:
        return OracleResult(False, None, "held_karp", work)
    # walk back through the table
    v = (closing & -closing).bit_length() - 1
    S = full
    path = [v]
    while S != 1:
        prev_S = S & ~(1 << v)
        cands = reach[prev_S] & nbr[v]
        v = (cands & -cands).bit_length() - 1
        path.append(v)
        S = prev_S
    cycle = tuple(reversed(path))
    assert cycle[0] == 0 and verify_certificate(g, cycle)
    return OracleResult(True, cycle, "held_karp", work)


def backtracking(g: Graph, node_budget: int = DEFAULT_NODE_BUDGET) -> OracleResult:
    n = g.n
    if n < 3 or any(d < 2 for d in g.degrees()):
        return OracleResult(False, None, "backtracking", 0)
    if not g.is_connected():
        return OracleResult(False, None, "backtracking", 0)
    deg = g.degrees()
    # try low-degree neighbours first: they are the most constrained
    order = [sorted(g.neighbors(v), key=lambda u: (deg[u], u)) for v in range(n)]
    path = [0]
    used = [False] * n
    used[0] = True
    expanded = 0

    def extend(v: int) -> bool:
        nonlocal expanded
        expanded += 1
        if expanded > node_budget:
            raise OracleUnresolved(expanded)
        if len(path) == n:
            return g.has_edge(v, 0)
        for u in order[v]:
            if used[u]:
                continue
            used[u] = True
            path.append(u)
            if extend(u):
                return True
            path.pop()
            used[u] = False
        return False

    if extend(0):
        cycle = tuple(path)
        assert verify_certificate(g, cycle)
        return OracleResult(True, cycle, "backtracking", expanded)
    return OracleResult(False, None, "backtracking", expanded)


def is_hamiltonian_exact(g: Graph, method: str = "auto", node_budget: int = DEFAULT_NODE_BUDGET) -> OracleResult:
    if method == "auto":
        method = "held_karp" if g.n <= 20 else "backtracking"
    if method == "held_karp":
        return held_karp(g)
    if method == "backtracking":
        return backtracking(g, node_budget)
    raise ValueError(f"unknown oracle method {method!r}")


def count_hamiltonian_cycles(g: Graph) -> int:
    """Distinct Hamiltonian cycles, identifying rotations and reflections."""
    n = g.n
    if n > COUNT_MAX_N:
        raise ValueError(f"cycle counting limited to n <= {COUNT_MAX_N}, got {n}")
    if n < 3:
        return 0
    nbr = _nbr_masks(g)
    full = (1 << n) - 1
    # paths[S][v]: number of paths from 0 covering S, ending at v
    paths = [dict() for _ in range(1 << n)]
    paths[1][0] = 1
    for S in range(1, full + 1, 2):
        for v, cnt in paths[S].items():
            ext = nbr[v] & ~S
            while ext:
                lb = ext & -ext
                u = lb.bit_length() - 1
                ext ^= lb
                row = paths[S | lb]
                row[u] = row.get(u, 0) + cnt
    directed = sum(cnt for v, cnt in paths[full].items() if nbr[0] >> v & 1)
    return directed // 2
