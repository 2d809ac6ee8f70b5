"""Turn a dual estimate into a Hamiltonicity verdict."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .graph import Graph
from .numerics import factorial_thresholds

HAMILTONIAN = "Hamiltonian"
NON_HAMILTONIAN = "NonHamiltonian"


@dataclass(frozen=True)
class Decision:
    verdict: str
    basis: str  # certificate | threshold | stationary_zero
    estimate: Fraction
    threshold: Fraction
    certificate: tuple[int, ...] | None = None

    @property
    def is_hamiltonian(self) -> bool:
        return self.verdict == HAMILTONIAN


def verify_certificate(g: Graph, cycle: Sequence[int]) -> bool:
    cycle = list(cycle)
    n = g.n
    if n < 3 or len(cycle) != n or len(set(cycle)) != n:
        return False
    if any(not (0 <= v < n) for v in cycle):
        return False
    return all(g.has_edge(cycle[i], cycle[(i + 1) % n]) for i in range(n))


def decide(
    estimate,
    n: int,
    certificate: Sequence[int] | None = None,
    g: Graph | None = None,
    stationary: bool = False,
) -> Decision:
    """Apply the cutoff tau = 2/(3 n!) to the best dual value found.

    A certificate wins outright; pass ``g`` to have it re-verified. When the
    run stopped at an exact dual maximizer (``stationary``) with value 0, the
    verdict is Hamiltonian on that basis.
    """
    estimate = Fraction(estimate)
    _, _, tau = factorial_thresholds(n)
    if certificate is not None:
        cert = tuple(certificate)
        if g is not None and not verify_certificate(g, cert):
            raise ValueError("certificate does not verify against the graph")
        return Decision(HAMILTONIAN, "certificate", estimate, tau, cert)
    if stationary and estimate == 0:
        return Decision(HAMILTONIAN, "stationary_zero", estimate, tau)
    verdict = NON_HAMILTONIAN if estimate >= tau else HAMILTONIAN
    return Decision(verdict, "threshold", estimate, tau)
