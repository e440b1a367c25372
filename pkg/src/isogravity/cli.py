"""``isogravity`` command line.

Every subcommand prints one JSON RunReport (see ``report.py``) to stdout or
to ``--out``.  Exit status is 0 for any completed run, whatever the
verdict; 1 for unreadable or malformed inputs; 2 for usage errors.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .dimacs import (DimacsError, emit_dimacs_cnf, emit_dimacs_graph, parse_dimacs_cnf,
                     parse_dimacs_graph, parse_partition)
from .graphs import (Graph, complete_graph, cycle_graph, erdos_renyi, path_graph,
                     random_graph_pair, random_regular, rook_graph, shrikhande_graph)
from .gravity import GravityParams, gravity_clique
from .oracle import brute_force_isomorphism, exhaustive_sat, max_clique_exact
from .refine import RefineConfig, iso_test
from .report import RunReport, file_digest
from .sat import CnfFormula, balanced_cnf, bipartite_glue, random_cnf, sat_solve

SEED_ENV = "ISOGRAVITY_SEED"
TRAJECTORY_HEADER = ["round", "step", "vertex", "x0", "x1", "x2", "min_edge_distance"]


class InputError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{SEED_ENV}={raw!r} is not an integer") from None


def _read(path: str, report: RunReport) -> str:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror or e}") from None
    report.inputs.append(file_digest(path))
    return text


def _load_graph(path: str, report: RunReport) -> Graph:
    try:
        return parse_dimacs_graph(_read(path, report))
    except DimacsError as e:
        raise InputError(f"{path}: {e}") from None


def _load_cnf(path: str, report: RunReport) -> CnfFormula:
    try:
        return parse_dimacs_cnf(_read(path, report))
    except (DimacsError, ValueError) as e:
        raise InputError(f"{path}: {e}") from None


def _graph_summary(g: Graph) -> dict:
    return {"vertices": g.n, "edges": g.m, "degrees": sorted(set(g.degrees()))}


def _steps_arg(text: str) -> Optional[int]:
    if text == "auto":
        return None
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError("expected a positive integer or 'auto'") from None
    if v < 1:
        raise argparse.ArgumentTypeError("steps must be >= 1")
    return v


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _steps_list(text: str) -> list[Optional[int]]:
    return [_steps_arg(t) for t in text.split(",") if t]


def _gravity_params(args) -> GravityParams:
    try:
        return GravityParams(g=args.g, g1=args.g1, s=args.s, s1=args.s1, eps=args.eps,
                             steps=args.steps, d_min=args.d_min)
    except ValueError as e:
        raise InputError(str(e)) from None


# ---------------------------------------------------------------- subcommands

def cmd_iso(args, report: RunReport):
    g1, g2 = _load_graph(args.first, report), _load_graph(args.second, report)
    partition = None
    if args.partition:
        try:
            partition = parse_partition(_read(args.partition, report), g1.n)
        except DimacsError as e:
            raise InputError(f"{args.partition}: {e}") from None
    mode = "metapolynomial" if args.mode == "meta" or partition else "polynomial"
    try:
        cfg = RefineConfig(mode=mode, max_steps=args.max_steps, meta_terms=args.meta_terms,
                           meta_factor_bound=args.meta_factor_bound, partition=partition,
                           seed=report.seed, product=args.product)
    except ValueError as e:
        raise InputError(str(e)) from None
    report.params = {"mode": cfg.mode, "product": cfg.product, "max_steps": cfg.steps_for(g1.n),
                     "meta_terms": cfg.meta_terms, "meta_factor_bound": cfg.meta_factor_bound,
                     "partition": [list(b) for b in partition] if partition else None}
    v = iso_test(g1, g2, cfg)
    report.log = [{"step": i, "spectrum_size": s} for i, s in enumerate(v.trajectory)]
    if v.isomorphic:
        report.result = {"verdict": "Isomorphic", "steps": v.steps,
                         "budget_exhausted": v.budget_exhausted, "checks": v.checks,
                         "splitting": [v.first.to_json(), v.second.to_json()]}
    else:
        report.result = {"verdict": "NonIsomorphic", "step": v.step, "reason": v.reason,
                         "flagged": v.flagged, "checks": v.checks}
        if v.bases:
            report.result["splitting"] = [b.to_json() for b in v.bases]
    report.result["first"], report.result["second"] = _graph_summary(g1), _graph_summary(g2)


def _write_trajectory(path: str, rows: list):
    try:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(TRAJECTORY_HEADER)
            w.writerows(["" if x is None else x for x in r] for r in rows)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e.strerror or e}") from None


def cmd_clique(args, report: RunReport):
    g = _load_graph(args.graph, report)
    p = _gravity_params(args)
    report.params = p.as_dict()
    rounds: list = []
    traj: Optional[list] = [] if args.dump_trajectory else None
    clique = gravity_clique(g, p, rounds=rounds, trajectory=traj)
    if traj is not None:
        _write_trajectory(args.dump_trajectory, traj)
    report.log = rounds
    report.result = {"clique": clique, "size": len(clique), "graph": _graph_summary(g)}


def cmd_sat(args, report: RunReport):
    f = _load_cnf(args.cnf, report)
    p = _gravity_params(args)
    report.params = p.as_dict()
    rounds: list = []
    res = sat_solve(f, p, rounds=rounds)
    report.log = rounds
    report.result = {
        "verdict": "Sat" if res.status == "sat" else "Unknown",
        "assignment": list(res.assignment) if res.assignment else None,
        "clique_size": len(res.clique),
        "clauses": len(f.clauses),
        "variables": f.num_vars,
    }


def cmd_glue(args, report: RunReport):
    g = _load_graph(args.graph, report)
    if args.second and args.random_regular:
        raise InputError("give either a second graph or --random-regular N K, not both")
    if args.second:
        g1 = _load_graph(args.second, report)
        glued = bipartite_glue(g, g1)
        report.params = {}
        report.result = {"graph": _graph_summary(glued), "dimacs": emit_dimacs_graph(glued)}
        if args.write:
            Path(args.write).write_text(emit_dimacs_graph(glued))
        return
    if not args.random_regular:
        raise InputError("glue needs a second graph or --random-regular N K")
    n1, k1 = args.random_regular
    p = _gravity_params(args)
    report.params = {"random_regular": [n1, k1], **p.as_dict()}
    try:
        g1 = random_regular(n1, k1, np.random.default_rng(report.seed))
    except (ValueError, RuntimeError) as e:
        raise InputError(str(e)) from None
    glued = bipartite_glue(g, g1)
    omega1 = len(max_clique_exact(g1))
    rounds: list = []
    clique = gravity_clique(glued, p, rounds=rounds)
    report.log = rounds
    in_g = [v for v in clique if v < g.n]
    report.result = {
        "glued": _graph_summary(glued),
        "glued_clique_size": len(clique),
        "omega_g1": omega1,
        "estimate": len(clique) - omega1,
        "clique_in_g": in_g,
    }


def _gen_graph(args, rng: np.random.Generator) -> list[Graph]:
    kind, n = args.kind, args.n
    if kind == "pair":
        g1, g2, _ = random_graph_pair(n, args.density, int(rng.integers(2**31)))
        return [g1, g2]
    if kind == "cycle":
        return [cycle_graph(n)]
    if kind == "path":
        return [path_graph(n)]
    if kind == "complete":
        return [complete_graph(n)]
    if kind == "shrikhande":
        return [shrikhande_graph()]
    if kind == "rook4":
        return [rook_graph(4)]
    if kind == "random":
        return [erdos_renyi(n, args.density, rng)]
    if kind == "regular":
        return [random_regular(n, args.k, rng)]
    raise AssertionError(kind)


def cmd_gen(args, report: RunReport):
    rng = np.random.default_rng(report.seed)
    report.params = {k: getattr(args, k) for k in
                     ("kind", "n", "density", "k", "clauses", "max_len", "min_len", "max_occurrences",
                      "half_occurrences")}
    try:
        if args.kind in ("cnf", "balanced-cnf"):
            if args.kind == "cnf":
                f = random_cnf(args.n, args.clauses, rng, max_len=args.max_len,
                               max_occurrences=args.max_occurrences, min_len=args.min_len)
            else:
                f = balanced_cnf(args.n, args.max_len, args.half_occurrences, rng)
            texts = [emit_dimacs_cnf(f)]
            report.result = {"variables": f.num_vars, "clauses": len(f.clauses)}
        else:
            graphs = _gen_graph(args, rng)
            texts = [emit_dimacs_graph(g) for g in graphs]
            report.result = {"graphs": [_graph_summary(g) for g in graphs]}
    except (ValueError, RuntimeError) as e:
        raise InputError(str(e)) from None
    if args.write:
        if len(args.write) != len(texts):
            raise InputError(f"'{args.kind}' produces {len(texts)} file(s), got {len(args.write)} --write paths")
        for path, text in zip(args.write, texts):
            Path(path).write_text(text)
    report.result["dimacs"] = texts


def cmd_oracle(args, report: RunReport):
    if args.problem == "iso":
        if len(args.files) != 2:
            raise InputError("oracle iso needs two graph files")
        g1, g2 = (_load_graph(f, report) for f in args.files)
        w = brute_force_isomorphism(g1, g2)
        report.result = {"verdict": "Isomorphic" if w.found else "NonIsomorphic",
                         "permutation": list(w.permutation) if w.found else None}
    elif args.problem == "clique":
        if len(args.files) != 1:
            raise InputError("oracle clique needs one graph file")
        c = max_clique_exact(_load_graph(args.files[0], report))
        report.result = {"clique": c, "size": len(c)}
    else:
        if len(args.files) != 1:
            raise InputError("oracle sat needs one CNF file")
        f = _load_cnf(args.files[0], report)
        try:
            a = exhaustive_sat(f)
        except ValueError as e:
            raise InputError(str(e)) from None
        report.result = {"verdict": "Sat" if a else "Unsat", "assignment": list(a) if a else None}


def _sweep_instances(count: int, n_min: int, n_max: int, densities: list[float], seed: int) -> list[Graph]:
    rng = np.random.default_rng(seed)
    return [erdos_renyi(int(rng.integers(n_min, n_max + 1)), densities[i % len(densities)], rng)
            for i in range(count)]


def _clique_size(task: tuple[Graph, GravityParams]) -> int:
    g, p = task
    return len(gravity_clique(g, p))


def _success_rate(graphs: list[Graph], exact: list[int], p: GravityParams, jobs: int) -> float:
    tasks = [(g, p) for g in graphs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            sizes = list(pool.map(_clique_size, tasks))
    else:
        sizes = [_clique_size(t) for t in tasks]
    return sum(s == e for s, e in zip(sizes, exact)) / len(graphs)


def cmd_sweep(args, report: RunReport):
    if args.n_min < 2 or args.n_max < args.n_min:
        raise InputError("need 2 <= --n-min <= --n-max")
    base = _gravity_params(args)
    grid = {"eps": args.eps_grid, "steps": args.steps_grid, "g1": args.g1_grid}
    graphs = _sweep_instances(args.instances, args.n_min, args.n_max, args.densities, report.seed)
    exact = [len(max_clique_exact(g)) for g in graphs]
    report.params = {"base": base.as_dict(), "grid": grid, "instances": args.instances,
                     "n_range": [args.n_min, args.n_max], "densities": args.densities}
    best, best_rate = base, _success_rate(graphs, exact, base, args.jobs)
    table = [{"params": base.as_dict(), "success_rate": best_rate}]
    # Greedy coordinate scan: each axis is swept with the others at their best so far.
    for name, values in grid.items():
        for value in values:
            try:
                cand = replace(best, **{name: value})
            except ValueError as e:
                raise InputError(f"{name}={value}: {e}") from None
            if cand == best:
                continue
            rate = _success_rate(graphs, exact, cand, args.jobs)
            table.append({"params": cand.as_dict(), "success_rate": rate})
            if rate > best_rate:
                best, best_rate = cand, rate
    report.log = table
    report.result = {"best": best.as_dict(), "best_success_rate": best_rate,
                     "evaluated": len(table)}


# ---------------------------------------------------------------- parser

def _add_gravity_flags(p: argparse.ArgumentParser):
    d = GravityParams()
    p.add_argument("--g", type=float, default=d.g, help="attraction coefficient")
    p.add_argument("--g1", type=float, default=d.g1, help="repulsion coefficient for non-edges")
    p.add_argument("--s", type=float, default=d.s, help="attraction distance exponent")
    p.add_argument("--s1", type=float, default=d.s1, help="repulsion distance exponent")
    p.add_argument("--eps", type=float, default=d.eps, help="Euler step size")
    p.add_argument("--steps", type=_steps_arg, default=d.steps,
                   help="Euler steps per round, or 'auto' for 20 x (vertices in the round)")
    p.add_argument("--d-min", type=float, default=d.d_min, help="distance floor")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isogravity", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help=f"random seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("iso", parents=[common], help="spectrum-refinement isomorphism test")
    p.add_argument("first")
    p.add_argument("second")
    p.add_argument("--mode", choices=["poly", "meta"], default="poly")
    p.add_argument("--product", choices=["symmetric", "standard"], default="symmetric")
    p.add_argument("--partition", help="vertex partition file (implies --mode meta)")
    p.add_argument("--max-steps", type=int, default=None, help="refinement budget (default n^2)")
    p.add_argument("--meta-terms", type=int, default=3)
    p.add_argument("--meta-factor-bound", type=int, default=3)
    p.set_defaults(func=cmd_iso)

    p = sub.add_parser("clique", parents=[common], help="gravitational clique search")
    p.add_argument("graph")
    _add_gravity_flags(p)
    p.add_argument("--dump-trajectory", metavar="CSV", help="write per-step point coordinates")
    p.set_defaults(func=cmd_clique)

    p = sub.add_parser("sat", parents=[common], help="CNF satisfiability via the clique reduction")
    p.add_argument("cnf")
    _add_gravity_flags(p)
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("glue", parents=[common],
                       help="complete bipartite gluing; with --random-regular, the clique-number recipe")
    p.add_argument("graph")
    p.add_argument("second", nargs="?")
    p.add_argument("--random-regular", nargs=2, type=int, metavar=("N", "K"))
    p.add_argument("--write", help="also write the glued graph as DIMACS")
    _add_gravity_flags(p)
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("gen", parents=[common], help="generate instances")
    p.add_argument("kind", choices=["pair", "cycle", "path", "complete", "shrikhande", "rook4",
                                    "random", "regular", "cnf", "balanced-cnf"])
    p.add_argument("--n", type=int, default=8, help="vertices (graphs) or variables (CNFs)")
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--k", type=int, default=3, help="degree for 'regular'")
    p.add_argument("--clauses", type=int, default=10)
    p.add_argument("--max-len", type=int, default=3, help="max clause size (exact size for balanced-cnf)")
    p.add_argument("--min-len", type=int, default=1)
    p.add_argument("--max-occurrences", type=int, default=3)
    p.add_argument("--half-occurrences", type=int, default=1,
                   help="balanced-cnf: positive (and negative) occurrences per variable")
    p.add_argument("--write", action="append", metavar="PATH",
                   help="write each generated instance (repeat for 'pair')")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("oracle", parents=[common], help="exact brute-force solvers")
    p.add_argument("problem", choices=["iso", "clique", "sat"])
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", parents=[common], help="greedy scan of gravity parameters")
    _add_gravity_flags(p)
    p.add_argument("--instances", type=int, default=30)
    p.add_argument("--n-min", type=int, default=6)
    p.add_argument("--n-max", type=int, default=16)
    p.add_argument("--densities", type=_float_list, default=[0.3, 0.5, 0.7])
    p.add_argument("--eps-grid", type=_float_list, default=[0.0005, 0.001, 0.005, 0.05])
    p.add_argument("--steps-grid", type=_steps_list, default=[10, 20, 50, None])
    p.add_argument("--g1-grid", type=_float_list, default=[0.0, 0.1])
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    try:
        seed = args.seed if args.seed is not None else _default_seed()
        report = RunReport(command=args.command, seed=seed)
        args.func(args, report)
    except InputError as e:
        print(f"isogravity {args.command}: {e}", file=sys.stderr)
        return 1
    report.wall_time_s = round(time.perf_counter() - t0, 6)
    text = report.to_json()
    if args.out:
        try:
            Path(args.out).write_text(text)
        except OSError as e:
            print(f"isogravity: cannot write {args.out}: {e.strerror or e}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
