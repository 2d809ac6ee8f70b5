import random
from fractions import Fraction

import pytest

from hamdual.constants import instance_constants
from hamdual.dual import ALL_STARTS, eval_dual
from hamdual.ellipsoid import (
    BUDGET,
    DESCENT,
    GRADIENT,
    NEGATIVITY,
    CutVector,
    EllipsoidCollapsed,
    EllipsoidState,
    SolverConfig,
    init_state,
    run_solver,
    separation_oracle,
    shadow_step,
    step,
)
from hamdual.graph import complete_graph, cycle_graph, generate, path_graph, petersen_graph

from oracles import fraction_det


def _identity_state(n, p):
    return EllipsoidState((0,) * n, tuple(tuple((1 << p) if i == j else 0 for j in range(n)) for i in range(n)), p)


def test_separation_examples():
    c = instance_constants(complete_graph(3))
    assert c.M == 8
    assert separation_oracle([1, -1, 1], c) == CutVector((0, 1, 0), NEGATIVITY)
    assert separation_oracle([4, 4, 4], c) == CutVector((-1, -1, -1), BUDGET)
    assert separation_oracle([1, 1, 1], c) is None
    assert separation_oracle([0, 0, 8], c) is None


def test_zero_cut_rejected():
    with pytest.raises(ValueError):
        CutVector((0, 0), GRADIENT)


def test_two_dimensional_step_exact():
    lam, H = shadow_step([Fraction(0)] * 2, [[1, 0], [0, 1]], (1, 0))
    assert lam == [Fraction(1, 3), 0]
    assert H == [[Fraction(4, 9), 0], [0, Fraction(4, 3)]]


@pytest.mark.parametrize("p", [16, 64, 256])
def test_two_dimensional_step_fixed_point(p):
    s = step(_identity_state(2, p), CutVector((1, 0), GRADIENT))
    tol = Fraction(1, 1 << (p - 2))
    assert abs(s.lambda_rational()[0] - Fraction(1, 3)) <= tol and s.lam_m[1] == 0
    H = s.H_rational()
    assert abs(H[0][0] - Fraction(4, 9)) <= tol and abs(H[1][1] - Fraction(4, 3)) <= tol
    assert H[0][1] == H[1][0] == 0 and s.k == 1


def test_descent_moves_the_other_way():
    s = step(_identity_state(2, 32), CutVector((1, 0), GRADIENT), DESCENT)
    assert s.lambda_rational()[0] < 0
    with pytest.raises(ValueError):
        step(_identity_state(2, 32), CutVector((1, 0), GRADIENT), "sideways")


def test_scale_invariance_of_cut():
    rng = random.Random(4)
    H = [[Fraction(rng.randint(1, 5)) if i == j else Fraction(0) for j in range(4)] for i in range(4)]
    lam = [Fraction(rng.randint(0, 9), 7) for _ in range(4)]
    g = (1, -1, 0, 1)
    for c in (2, 3, 7):
        a, b = shadow_step(lam, H, g)[1], shadow_step(lam, H, tuple(c * x for x in g))[1]
        assert a == b
    s = _identity_state(4, 64)
    assert step(s, CutVector(g, GRADIENT)) == step(s, CutVector(tuple(5 * x for x in g), GRADIENT))


@pytest.mark.parametrize("n", range(2, 11))
def test_determinant_ratio(n):
    rng = random.Random(n)
    # a random SPD start: A A^T + I
    A = [[Fraction(rng.randint(-3, 3)) for _ in range(n)] for _ in range(n)]
    H = [[sum(A[i][k] * A[j][k] for k in range(n)) + (i == j) for j in range(n)] for i in range(n)]
    g = tuple(rng.choice((-1, 0, 1)) or 1 for _ in range(n))
    _, H2 = shadow_step([Fraction(0)] * n, H, g)
    ratio = Fraction(n * n, n * n - 1) ** n * Fraction(n - 1, n + 1)
    assert fraction_det(H2) == ratio * fraction_det(H)
    if n == 2:
        assert ratio == Fraction(16, 27)


def test_step_tracks_shadow():
    rng = random.Random(8)
    s = _identity_state(5, 128)
    for _ in range(10):
        g = tuple(rng.choice((-1, 0, 1, 2)) for _ in range(5))
        if not any(g):
            continue
        _, exact = shadow_step(list(s.lambda_rational()), s.H_rational(), g)
        s = step(s, CutVector(g, GRADIENT))
        got = s.H_rational()
        assert max(abs(a - b) for ra, rb in zip(exact, got) for a, b in zip(ra, rb)) <= Fraction(1, 1 << 128)


def test_collapse_raises():
    s = EllipsoidState((0, 0), ((0, 0), (0, 0)), 8)
    with pytest.raises(EllipsoidCollapsed):
        step(s, CutVector((1, 0), GRADIENT))


def test_initial_state_petersen():
    c = instance_constants(petersen_graph())
    s = init_state(c)
    assert s.p == 256
    for x in s.lambda_rational():
        assert 0 <= Fraction(17, 5) - x < Fraction(1, 1 << 256)
    H = s.H_rational()
    assert all(0 <= H[i][i] - Fraction(578, 5) < Fraction(1, 1 << 256) for i in range(10))
    assert all(H[i][j] == 0 for i in range(10) for j in range(10) if i != j)
    assert separation_oracle(s.lam, c) is None


def test_initial_state_triangle_exact():
    c = instance_constants(complete_graph(3))
    s = init_state(c)
    assert c.M == 8
    assert s.lambda_rational()[0] <= Fraction(8, 3)
    assert s.H_rational()[0][0] >= Fraction(64, 3)


def _check_best_monotone(run):
    best = [row.best_value for row in run.trace if row.best_value is not None]
    assert best == sorted(best)
    assert run.best_value == best[-1]


def test_cycle4_run():
    run = run_solver(cycle_graph(4))
    assert run.best_value == 0
    assert run.decision.is_hamiltonian
    assert run.termination in ("budget", "collapsed", "early_certificate", "stationary")
    assert run.iterations_run == len(run.trace) <= run.constants.N
    _check_best_monotone(run)


def test_path3_run_is_non_hamiltonian():
    run = run_solver(path_graph(3))
    assert run.best_value >= 1
    assert not run.decision.is_hamiltonian
    assert run.termination == "stationary"


def test_cycle5_gets_certificate():
    run = run_solver(cycle_graph(5))
    assert run.certificate is not None and run.decision.basis == "certificate"
    assert run.termination == "early_certificate"


def test_no_early_exit_still_stops_when_stationary():
    cfg = SolverConfig(early_exit=False, max_iters_override=40)
    run = run_solver(cycle_graph(5), cfg)
    # the certificate walk has a zero supergradient, so the loop still stops there
    assert run.certificate is not None and run.termination == "stationary"
    assert run.decision.basis == "certificate"


@pytest.mark.slow
def test_petersen_run():
    run = run_solver(petersen_graph())
    assert run.iterations_run <= run.constants.N <= 16214
    assert run.best_value >= 0
    _check_best_monotone(run)


def test_replay_is_deterministic():
    g = generate("gnp", {"n": 7, "p": "1/2"}, 17)
    cfg = SolverConfig(max_iters_override=150, start_mode=ALL_STARTS)
    a, b = run_solver(g, cfg), run_solver(g, cfg)
    assert a.trace == b.trace and a.best_lambda == b.best_lambda


def test_observer_sees_every_iteration_and_valid_cuts():
    g = generate("gnp", {"n": 6, "p": "1/2"}, 2)
    c = instance_constants(g)
    seen = []

    def watch(state, cut, dual):
        lam = state.lambda_rational()
        if dual is not None:
            assert dual.value == eval_dual(g, lam).value
        if cut is not None and cut.kind != GRADIENT:
            # every point of S lies on the kept side
            for v in range(g.n):
                vert = [c.M if i == v else 0 for i in range(g.n)]
                assert sum(gi * (mu - l) for gi, mu, l in zip(cut.g, vert, lam)) >= 0
        seen.append(state.k)

    run = run_solver(g, SolverConfig(max_iters_override=200), watch)
    assert seen == list(range(run.iterations_run))


def test_best_lambda_reproduces_best_value():
    g = generate("gnp", {"n": 6, "p": "2/3"}, 5)
    run = run_solver(g, SolverConfig(max_iters_override=300))
    assert eval_dual(g, run.best_lambda).value == run.best_value
