"""Command-line entry point: gen, dual-eval, oracle, solve, corpus, manifest."""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .constants import FAITHFUL, PRACTICAL
from .dual import START_MODES, eval_dual
from .ellipsoid import SolverConfig
from .graph import DimacsError, emit_dimacs, generate, read_dimacs
from .harness import (
    CorpusError,
    Instance,
    build_concordance_corpus,
    report_bytes,
    run_corpus,
    run_instance,
    trace_csv,
    write_outputs,
)
from .numerics import render_rational
from .oracle import DEFAULT_NODE_BUDGET, OracleUnresolved, is_hamiltonian_exact

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_INTERNAL = 3


def _solver_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--mode", choices=[FAITHFUL, PRACTICAL], default=PRACTICAL)
    p.add_argument("--start-mode", choices=START_MODES, default="paper_fixed")
    p.add_argument("--precision-bits", type=int, default=None, help="fractional bits (practical mode; default 256)")
    p.add_argument("--max-iters", type=int, default=None)
    p.add_argument("--no-early-exit", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-dir", type=Path, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--oracle-method", choices=["auto", "held_karp", "backtracking"], default="auto")
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    return p


def _config(args) -> SolverConfig:
    return SolverConfig(
        mode=args.mode,
        start_mode=args.start_mode,
        p_override=args.precision_bits,
        max_iters_override=args.max_iters,
        early_exit=not args.no_early_exit,
        seed=args.seed,
    )


def _emit(obj) -> None:
    sys.stdout.write(report_bytes(obj).decode("ascii"))


def cmd_gen(args) -> int:
    params = {}
    for key in ("n", "p", "a", "b"):
        val = getattr(args, key)
        if val is not None:
            params[key] = val
    g = generate(args.kind, params, args.seed)
    data = emit_dimacs(g)
    if args.output:
        args.output.write_bytes(data)
    else:
        sys.stdout.write(data.decode("ascii"))
    return EXIT_OK


def _read_lambda(spec: str) -> list[str]:
    text = Path(spec[1:]).read_text(encoding="utf-8") if spec.startswith("@") else spec
    values = json.loads(text)
    if not isinstance(values, list):
        raise ValueError("lambda must be a JSON array")
    return [str(v) if isinstance(v, int) else v for v in values]


def cmd_dual_eval(args) -> int:
    g = read_dimacs(args.graph)
    lam = _read_lambda(args.lam)
    if any(isinstance(v, float) for v in lam):
        raise ValueError("give multipliers as strings (\"3/4\", \"0.25\"), not JSON floats")
    res = eval_dual(g, lam, args.start_mode)
    _emit({
        "value": render_rational(res.value),
        "walk": list(res.walk.vertices),
        "supergradient": list(res.supergradient),
        "start_mode": args.start_mode,
    })
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = read_dimacs(args.graph)
    try:
        res = is_hamiltonian_exact(g, args.method, args.node_budget)
    except OracleUnresolved as exc:
        _emit({"is_hamiltonian": None, "cycle": None, "method": args.method, "work": exc.expanded, "status": "unresolved"})
        return EXIT_OK
    _emit(res.to_json())
    return EXIT_OK


def cmd_solve(args) -> int:
    g = read_dimacs(args.graph)
    if g.n < 3:
        raise ValueError(f"solver needs n >= 3, got {g.n}")
    inst = Instance(Path(args.graph).stem, g)
    report, trace = run_instance(inst, _config(args), args.oracle_method, args.node_budget)
    if args.out_dir is not None:
        write_outputs(report, args.out_dir, inst.name, trace)
    if args.trace is not None:
        args.trace.write_text(trace_csv(trace), encoding="ascii")
    _emit(report)
    return EXIT_OK


def cmd_corpus(args) -> int:
    out_dir = args.out_dir if args.out_dir is not None else Path("corpus_out")
    summary, _ = run_corpus(args.manifest, _config(args), args.jobs, out_dir, args.oracle_method, args.node_budget)
    _emit(summary)
    return EXIT_OK


def cmd_manifest(args) -> int:
    path = build_concordance_corpus(args.out_dir, args.gnp_count, args.seed)
    print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hamdual", description="Lagrangian-dual ellipsoid Hamiltonicity solver and exact referee")
    sub = parser.add_subparsers(dest="command", required=True)
    solver = _solver_flags()

    p = sub.add_parser("gen", help="write a generated graph as DIMACS")
    p.add_argument("kind")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=str, help="edge probability, e.g. 1/3")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", type=Path)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("dual-eval", help="evaluate the dual function at one multiplier vector")
    p.add_argument("graph", type=Path)
    p.add_argument("lam", help="JSON array of rational strings, or @file")
    p.add_argument("--start-mode", choices=START_MODES, default="paper_fixed")
    p.set_defaults(func=cmd_dual_eval)

    p = sub.add_parser("oracle", help="exact Hamiltonicity check")
    p.add_argument("graph", type=Path)
    p.add_argument("--method", choices=["auto", "held_karp", "backtracking"], default="auto")
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("solve", parents=[solver], help="run the dual solver on one graph")
    p.add_argument("graph", type=Path)
    p.add_argument("--trace", type=Path, default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("corpus", parents=[solver], help="run every instance of a manifest")
    p.add_argument("manifest", type=Path)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("manifest", help="write the standard concordance corpus")
    p.add_argument("--out-dir", type=Path, required=True)
    p.add_argument("--gnp-count", type=int, default=50)
    p.add_argument("--seed", type=int, default=20240601)
    p.set_defaults(func=cmd_manifest)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (DimacsError, CorpusError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (AssertionError, ArithmeticError) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
