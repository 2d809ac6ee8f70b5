"""Per-instance reports and corpus runs comparing the dual solver with the exact oracle.

Every persisted number is an integer or an exact rational string.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .constants import paper_iteration_bound
from .ellipsoid import RunResult, SolverConfig, TraceRow, run_solver
from .graph import Graph, all_graphs, emit_dimacs, generate, petersen_graph, read_dimacs, complete_bipartite_graph
from .numerics import render_rational
from .oracle import DEFAULT_NODE_BUDGET, OracleResult, OracleUnresolved, is_hamiltonian_exact

AGREE = "agree"
DISAGREE = "disagree"
ORACLE_UNRESOLVED = "oracle_unresolved"

TRACE_HEADER = ["k", "feasible", "cut_kind", "dual_value", "best_value", "walk"]
SCHEMA_PATH = Path(__file__).with_name("schemas") / "run_report.schema.json"


class CorpusError(ValueError):
    """A manifest entry could not be loaded."""


@dataclass(frozen=True)
class Instance:
    name: str
    graph: Graph


def _rat(x) -> str | None:
    return None if x is None else render_rational(x)


def content_hash(g: Graph) -> str:
    return "sha256:" + hashlib.sha256(emit_dimacs(g)).hexdigest()


def trace_csv(rows: list[TraceRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_HEADER)
    for r in rows:
        writer.writerow([
            r.k,
            int(r.feasible),
            r.cut_kind,
            _rat(r.dual_value) or "",
            _rat(r.best_value) or "",
            ";".join(map(str, r.walk)) if r.walk is not None else "",
        ])
    return buf.getvalue()


def _oracle(g: Graph, method: str, node_budget: int) -> OracleResult | None:
    try:
        return is_hamiltonian_exact(g, method, node_budget)
    except OracleUnresolved:
        return None


def build_report(inst: Instance, run: RunResult, oracle: OracleResult | None, oracle_method: str) -> dict:
    c = run.constants
    cfg = run.config
    g = inst.graph
    decision = run.decision
    if oracle is None:
        concordance = ORACLE_UNRESOLVED
    else:
        concordance = AGREE if decision.is_hamiltonian == oracle.is_hamiltonian else DISAGREE
    return {
        "instance": {"name": inst.name, "n": g.n, "m": g.m, "content_hash": content_hash(g)},
        "constants": {
            "M": _rat(c.M),
            "R2": _rat(c.R2),
            "r_form": c.r_form,
            "L_form": c.L_form,
            "L2": _rat(c.L2),
            "epsilon": _rat(c.epsilon),
            "delta": _rat(c.delta),
            "tau": _rat(c.tau),
            "N": str(c.N),
            "p": str(c.p),
            "paper_bound": str(paper_iteration_bound(c.n)) if c.n >= 10 else None,
        },
        "config": {
            "mode": cfg.mode,
            "start_mode": cfg.start_mode,
            "precision_bits": c.p,
            "max_iters": cfg.effective_iterations(c),
            "early_exit": cfg.early_exit,
            "seed": cfg.seed,
        },
        "result": {
            "best_dual": _rat(run.best_value),
            "decision": decision.verdict,
            "basis": decision.basis,
            "certificate": list(run.certificate) if run.certificate is not None else None,
            "iterations_run": run.iterations_run,
            "termination": run.termination,
        },
        "oracle": {
            "status": "unresolved" if oracle is None else "resolved",
            "is_hamiltonian": None if oracle is None else oracle.is_hamiltonian,
            "cycle": list(oracle.cycle) if oracle is not None and oracle.cycle is not None else None,
            "method": oracle.method if oracle is not None else oracle_method,
        },
        "concordance": concordance,
    }


def run_instance(
    inst: Instance | str | Path,
    cfg: SolverConfig | None = None,
    oracle_method: str = "auto",
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[dict, list[TraceRow]]:
    """Solve one instance, consult the oracle and assemble the report."""
    if not isinstance(inst, Instance):
        path = Path(inst)
        inst = Instance(path.stem, read_dimacs(path))
    cfg = cfg or SolverConfig()
    run = run_solver(inst.graph, cfg)
    oracle = _oracle(inst.graph, oracle_method, node_budget)
    return build_report(inst, run, oracle, oracle_method), run.trace


def report_bytes(obj: dict) -> bytes:
    return (json.dumps(obj, indent=2, ensure_ascii=True) + "\n").encode("ascii")


def write_outputs(report: dict, out_dir: Path, stem: str, trace: list[TraceRow] | None = None) -> list[Path]:
    out_dir = Path(out_dir)
    written = []
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / f"{stem}.json"
        path.write_bytes(report_bytes(report))
        written.append(path)
        if trace is not None:
            tpath = out_dir / f"{stem}.trace.csv"
            tpath.write_text(trace_csv(trace), encoding="ascii")
            written.append(tpath)
    except OSError as exc:
        raise OSError(f"cannot write outputs under {out_dir}: {exc}") from exc
    return written


# --- corpus -------------------------------------------------------------------


def _entry_name(entry: dict, idx: int) -> str:
    if "name" in entry:
        return str(entry["name"])
    if "path" in entry:
        return Path(entry["path"]).stem
    params = "_".join(f"{k}{v}" for k, v in sorted(entry.get("params", {}).items()))
    base = entry["generator"] + (f"_{params}" if params else "")
    return base.replace("/", "-") + f"_s{entry.get('seed', 0)}"


def load_manifest(manifest_path) -> list[Instance]:
    manifest_path = Path(manifest_path)
    try:
        entries = json.loads(manifest_path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorpusError(f"{manifest_path}: {exc}") from exc
    if not isinstance(entries, list):
        raise CorpusError(f"{manifest_path}: manifest must be a JSON list")
    base = manifest_path.parent
    out = []
    for idx, entry in enumerate(entries):
        if "path" in entry:
            path = base / entry["path"]
            try:
                g = read_dimacs(path)
            except (OSError, ValueError) as exc:
                raise CorpusError(f"{path}: {exc}") from exc
        elif "generator" in entry:
            try:
                g = generate(entry["generator"], entry.get("params", {}), int(entry.get("seed", 0)))
            except ValueError as exc:
                raise CorpusError(f"manifest entry {idx}: {exc}") from exc
        else:
            raise CorpusError(f"manifest entry {idx}: needs 'path' or 'generator'")
        if g.n < 3:
            raise CorpusError(f"manifest entry {idx}: solver needs n >= 3")
        out.append(Instance(_entry_name(entry, idx), g))
    return out


def _run_one(args) -> tuple[dict, str]:
    inst, cfg, oracle_method, node_budget = args
    report, trace = run_instance(inst, cfg, oracle_method, node_budget)
    return report, trace_csv(trace)


def summarize(reports: list[dict], cfg: SolverConfig) -> dict:
    counts = {AGREE: 0, DISAGREE: 0, ORACLE_UNRESOLVED: 0}
    by_class = {
        "hamiltonian": {AGREE: 0, DISAGREE: 0},
        "non_hamiltonian": {AGREE: 0, DISAGREE: 0},
        "unresolved": 0,
    }
    terminations: dict[str, int] = {}
    nonham, iters, rows = [], [], []
    ham_total = ham_cert = weak_violations = 0
    for rep in reports:
        inst, res, orc = rep["instance"], rep["result"], rep["oracle"]
        conc = rep["concordance"]
        counts[conc] += 1
        terminations[res["termination"]] = terminations.get(res["termination"], 0) + 1
        n = inst["n"]
        best = Fraction(res["best_dual"])
        if orc["is_hamiltonian"] is None:
            by_class["unresolved"] += 1
        elif orc["is_hamiltonian"]:
            by_class["hamiltonian"][conc] += 1
            ham_total += 1
            ham_cert += res["certificate"] is not None
            weak_violations += best > 0
        else:
            by_class["non_hamiltonian"][conc] += 1
            bound = Fraction(1, math.factorial(n))
            nonham.append({
                "name": inst["name"],
                "n": n,
                "best_dual": res["best_dual"],
                "bound": render_rational(bound),
                "meets_bound": best >= bound,
            })
        iters.append({
            "name": inst["name"],
            "n": n,
            "iterations_run": res["iterations_run"],
            "N": rep["constants"]["N"],
            "paper_bound": rep["constants"]["paper_bound"],
            "termination": res["termination"],
        })
        rows.append({
            "name": inst["name"],
            "n": n,
            "m": inst["m"],
            "decision": res["decision"],
            "basis": res["basis"],
            "oracle_is_hamiltonian": orc["is_hamiltonian"],
            "best_dual": res["best_dual"],
            "concordance": conc,
        })
    return {
        "instances": len(reports),
        "config": {
            "mode": cfg.mode,
            "start_mode": cfg.start_mode,
            "precision_bits_override": cfg.p_override,
            "max_iters_override": cfg.max_iters_override,
            "early_exit": cfg.early_exit,
            "seed": cfg.seed,
        },
        "concordance": counts,
        "by_oracle_class": by_class,
        "certificates": {"hamiltonian_instances": ham_total, "with_certificate": ham_cert},
        "weak_duality_violations": weak_violations,
        "nonhamiltonian_best_dual": {
            "bound": "1/n!",
            "meets_bound": sum(r["meets_bound"] for r in nonham),
            "below_bound": sum(not r["meets_bound"] for r in nonham),
            "instances": nonham,
        },
        "iterations": {
            "total": sum(r["iterations_run"] for r in iters),
            "terminations": dict(sorted(terminations.items())),
            "instances": iters,
        },
        "table": rows,
    }


def run_corpus(
    manifest_path,
    cfg: SolverConfig | None = None,
    jobs: int = 1,
    out_dir=None,
    oracle_method: str = "auto",
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> tuple[dict, list[dict]]:
    """Run every manifest instance; reports come back in manifest order.

    With ``out_dir`` set, writes ``reports/NNN_name.json``,
    ``reports/NNN_name.trace.csv`` and ``summary.json``.
    """
    cfg = cfg or SolverConfig()
    instances = load_manifest(manifest_path)
    tasks = [(inst, cfg, oracle_method, node_budget) for inst in instances]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    reports = [rep for rep, _ in results]
    summary = summarize(reports, cfg)
    if out_dir is not None:
        out_dir = Path(out_dir)
        rep_dir = out_dir / "reports"
        rep_dir.mkdir(parents=True, exist_ok=True)
        width = max(3, len(str(len(results))))
        for idx, (rep, csv_text) in enumerate(results):
            stem = f"{idx:0{width}d}_{rep['instance']['name']}"
            (rep_dir / f"{stem}.json").write_bytes(report_bytes(rep))
            (rep_dir / f"{stem}.trace.csv").write_text(csv_text, encoding="ascii")
        (out_dir / "summary.json").write_bytes(report_bytes(summary))
    return summary, reports


def build_concordance_corpus(out_dir, gnp_count: int = 50, seed: int = 20240601) -> Path:
    """Write the standard concordance corpus (DIMACS files plus manifest.json).

    Contents: Petersen, K_{3,4}, every connected non-Hamiltonian graph on six
    vertices, and ``gnp_count`` G(n, p) instances with 6 <= n <= 10.
    """
    import random

    out_dir = Path(out_dir)
    gdir = out_dir / "graphs"
    gdir.mkdir(parents=True, exist_ok=True)
    entries = []

    def add(name: str, g: Graph):
        (gdir / f"{name}.col").write_bytes(emit_dimacs(g))
        entries.append({"path": f"graphs/{name}.col", "name": name})

    add("petersen", petersen_graph())
    add("k3_4", complete_bipartite_graph(3, 4))
    idx = 0
    for g in all_graphs(6, connected=True):
        if not is_hamiltonian_exact(g).is_hamiltonian:
            add(f"conn6_nonham_{idx:03d}", g)
            idx += 1
    rng = random.Random(seed)
    for k in range(gnp_count):
        n = rng.randint(6, 10)
        p = Fraction(rng.randint(2, 6), 8)
        entries.append({
            "generator": "gnp",
            "params": {"n": n, "p": str(p)},
            "seed": rng.getrandbits(63),
            "name": f"gnp_{k:02d}_n{n}",
        })
    manifest = out_dir / "manifest.json"
    manifest.write_text(json.dumps(entries, indent=2) + "\n", encoding="utf-8")
    return manifest
