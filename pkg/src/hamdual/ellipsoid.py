"""Central-cut ellipsoid maximisation of the dual over the multiplier simplex.

State lives in fixed point with a single precision ``p``: the centre and the
shape matrix are integer mantissas scaled by 2**-p. Dual values at feasible
centres are computed exactly from those dyadic mantissas.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Sequence

from .constants import FAITHFUL, PRACTICAL, InstanceConstants, instance_constants
from .decider import Decision, decide
from .dual import PAPER_FIXED, DualEvaluator, decode_certificate
from .graph import Graph
from .numerics import FixedPoint, round_div

GRADIENT = "gradient"
NEGATIVITY = "negativity"
BUDGET = "budget"

ASCENT = "ascent"
DESCENT = "descent"  # literal sign of the textbook update; kept for comparison runs

PRACTICAL_MAX_ITERS = 10**6

# trace spellings
CUT_LABELS = {GRADIENT: "grad", NEGATIVITY: "neg", BUDGET: "budget"}


class EllipsoidCollapsed(ArithmeticError):
    def __init__(self, k: int):
        self.k = k
        super().__init__(f"ellipsoid collapsed at iteration {k}: <Hg, g> <= 0")


@dataclass(frozen=True)
class CutVector:
    g: tuple[int, ...]
    kind: str

    def __post_init__(self):
        if not any(self.g):
            raise ValueError("cut vector must be non-zero")


@dataclass(frozen=True)
class EllipsoidState:
    lam_m: tuple[int, ...]  # centre mantissas
    H_m: tuple[tuple[int, ...], ...]  # shape matrix mantissas, symmetric
    p: int
    k: int = 0
    best_lambda: tuple[Fraction, ...] | None = None
    best_value: Fraction | None = None

    @property
    def n(self) -> int:
        return len(self.lam_m)

    @property
    def lam(self) -> tuple[FixedPoint, ...]:
        return tuple(FixedPoint(m, self.p) for m in self.lam_m)

    @property
    def H(self) -> tuple[tuple[FixedPoint, ...], ...]:
        return tuple(tuple(FixedPoint(h, self.p) for h in row) for row in self.H_m)

    def lambda_rational(self) -> tuple[Fraction, ...]:
        den = 1 << self.p
        return tuple(Fraction(m, den) for m in self.lam_m)

    def H_rational(self) -> list[list[Fraction]]:
        den = 1 << self.p
        return [[Fraction(h, den) for h in row] for row in self.H_m]


def init_state(c: InstanceConstants) -> EllipsoidState:
    # centre rounds down so sum(lambda0) <= M keeps it inside S; H0 rounds up so the ball stays enclosed
    p = c.p
    M_over_n = c.M / c.n
    centre = (M_over_n.numerator << p) // M_over_n.denominator
    diag = -((-c.R2.numerator << p) // c.R2.denominator)
    H = tuple(tuple(diag if i == j else 0 for j in range(c.n)) for i in range(c.n))
    return EllipsoidState((centre,) * c.n, H, p)


def separation_oracle(lam: Sequence, c: InstanceConstants) -> CutVector | None:
    """None when ``lam`` lies in S, otherwise a cut whose kept side contains S.

    The kept half-space is {mu : <g, mu - lam> >= 0} for every kind.
    """
    vals = [x.to_rational() if isinstance(x, FixedPoint) else Fraction(x) for x in lam]
    if any(x < 0 for x in vals):
        return CutVector(tuple(1 if x < 0 else 0 for x in vals), NEGATIVITY)
    if sum(vals) > c.M:
        return CutVector((-1,) * len(vals), BUDGET)
    return None


def _separate_mantissas(lam_m: Sequence[int], p: int, M: Fraction) -> CutVector | None:
    if any(m < 0 for m in lam_m):
        return CutVector(tuple(1 if m < 0 else 0 for m in lam_m), NEGATIVITY)
    if sum(lam_m) * M.denominator > M.numerator << p:
        return CutVector((-1,) * len(lam_m), BUDGET)
    return None


def step(s: EllipsoidState, cut: CutVector, orientation: str = ASCENT) -> EllipsoidState:
    """One central-cut update keeping {mu : <g, mu - lam> >= 0}.

    d = H g, centre += d / ((n+1) sqrt(<d, g>)),
    H <- n^2/(n^2-1) (H - 2/(n+1) d d^T / <d, g>).
    Each output entry is rounded once to p bits; d and <d, g> are exact
    because cut vectors are integral.
    """
    if orientation not in (ASCENT, DESCENT):
        raise ValueError(f"unknown orientation {orientation!r}")
    g = cut.g
    n, p = s.n, s.p
    H = s.H_m
    d = [sum(H[i][j] * g[j] for j in range(n) if g[j]) for i in range(n)]
    q = sum(d[i] * g[i] for i in range(n) if g[i])
    if q <= 0:
        raise EllipsoidCollapsed(s.k)
    root = math.isqrt(q << p)
    if root == 0:
        raise EllipsoidCollapsed(s.k)
    sign = 1 if orientation == ASCENT else -1
    shift_den = (n + 1) * root
    lam = tuple(m + sign * round_div(d[i] << p, shift_den) for i, m in enumerate(s.lam_m))

    scale_num = n * n
    den = (n * n - 1) * (n + 1) * q
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            num = scale_num * (H[i][j] * (n + 1) * q - 2 * d[i] * d[j])
            rows[i][j] = rows[j][i] = round_div(num, den)
    return replace(s, lam_m=lam, H_m=tuple(tuple(r) for r in rows), k=s.k + 1)


def shadow_step(lam: Sequence[Fraction], H: Sequence[Sequence[Fraction]], g: Sequence[int]):
    """Exact-rational version of :func:`step`.

    Returns ``(lam', H')``; ``lam'`` is None unless <Hg, g> is the square of
    a rational (the shape update itself never needs a root).
    """
    n = len(g)
    d = [sum((H[i][j] * g[j] for j in range(n)), Fraction(0)) for i in range(n)]
    q = sum((d[i] * g[i] for i in range(n)), Fraction(0))
    if q <= 0:
        raise EllipsoidCollapsed(-1)
    factor = Fraction(n * n, n * n - 1)
    H2 = [[factor * (H[i][j] - Fraction(2, n + 1) * d[i] * d[j] / q) for j in range(n)] for i in range(n)]
    rn, rd = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if rn * rn == q.numerator and rd * rd == q.denominator:
        root = Fraction(rn, rd)
        lam2 = [lam[i] + d[i] / ((n + 1) * root) for i in range(n)]
    else:
        lam2 = None
    return lam2, H2


def iteration_budget(c: InstanceConstants) -> int:
    return c.N


# --- driver -----------------------------------------------------------------


@dataclass(frozen=True)
class SolverConfig:
    mode: str = PRACTICAL
    start_mode: str = PAPER_FIXED
    p_override: int | None = None
    max_iters_override: int | None = None
    early_exit: bool = True
    seed: int = 0
    orientation: str = ASCENT

    def effective_iterations(self, c: InstanceConstants) -> int:
        if self.max_iters_override is not None:
            return min(c.N, int(self.max_iters_override))
        if self.mode == FAITHFUL:
            return c.N
        return min(c.N, PRACTICAL_MAX_ITERS)


@dataclass(frozen=True)
class TraceRow:
    k: int
    feasible: bool
    cut_kind: str
    dual_value: Fraction | None
    best_value: Fraction | None
    walk: tuple[int, ...] | None


@dataclass(frozen=True)
class RunResult:
    constants: InstanceConstants
    config: SolverConfig
    best_value: Fraction
    best_lambda: tuple[Fraction, ...]
    decision: Decision
    certificate: tuple[int, ...] | None
    iterations_run: int
    termination: str  # budget | early_certificate | collapsed | stationary
    trace: list[TraceRow] = field(repr=False)


def run_solver(g: Graph, cfg: SolverConfig | None = None, observer=None) -> RunResult:
    """Run the ellipsoid loop and decide.

    ``observer(state, cut, dual)`` is called once per iteration before the
    step; ``cut`` is None when the run stops at that iteration and ``dual``
    is None at infeasible centres.
    """
    cfg = cfg or SolverConfig()
    c = instance_constants(g, cfg.mode, cfg.p_override)
    evaluate = DualEvaluator(g, cfg.start_mode)
    state = init_state(c)
    p = c.p
    den = 1 << p
    limit = cfg.effective_iterations(c)

    trace: list[TraceRow] = []
    certificate = None
    termination = "budget"

    for k in range(limit):
        res = None
        cut = _separate_mantissas(state.lam_m, p, c.M)
        if cut is not None:
            trace.append(TraceRow(k, False, CUT_LABELS[cut.kind], None, state.best_value, None))
        else:
            res = evaluate.eval_scaled(list(state.lam_m), den)
            if state.best_value is None or res.value > state.best_value:
                state = replace(state, best_value=res.value, best_lambda=state.lambda_rational())
            cert = decode_certificate(g, res.walk)
            if cert is not None and certificate is None:
                certificate = cert
            stationary = not any(res.supergradient)
            label = "stationary" if stationary else CUT_LABELS[GRADIENT]
            trace.append(TraceRow(k, True, label, res.value, state.best_value, res.walk.vertices))
            if cert is not None and cfg.early_exit:
                termination = "early_certificate"
            elif stationary:
                termination = "stationary"
            else:
                cut = CutVector(res.supergradient, GRADIENT)
        if observer is not None:
            observer(state, cut, res)
        if cut is None:
            break
        try:
            state = step(state, cut, cfg.orientation)
        except EllipsoidCollapsed:
            termination = "collapsed"
            break

    assert state.best_value is not None, "the initial centre is always feasible"
    decision = decide(state.best_value, g.n, certificate, g, stationary=termination == "stationary")
    return RunResult(
        constants=c,
        config=cfg,
        best_value=state.best_value,
        best_lambda=state.best_lambda,
        decision=decision,
        certificate=certificate,
        iterations_run=len(trace),
        termination=termination,
        trace=trace,
    )
