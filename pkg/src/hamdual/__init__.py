"""Lagrangian-dual ellipsoid decision procedure for Hamiltonian circuits, with an exact referee."""
from .constants import InstanceConstants, instance_constants
from .decider import Decision, decide, verify_certificate
from .dual import DualResult, Walk, brute_dual, check_feasible, decode_certificate, eval_dual, primal_value
from .ellipsoid import RunResult, SolverConfig, run_solver
from .graph import Graph, emit_dimacs, generate, nonedge_penalty, parse_dimacs
from .numerics import FixedPoint, factorial_thresholds, fp_arith, fp_isqrt
from .oracle import OracleResult, count_hamiltonian_cycles, is_hamiltonian_exact

__version__ = "0.1.0"
