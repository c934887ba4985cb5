"""Command-line interface: ``tspkit {solve,lp,sparsify,tjoin,bench}``.

Exit codes: 0 success, 1 infeasible input, 2 internal check failure,
64 usage or format error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .errors import CheckFailure, InfeasibleError, IngestionError, PreconditionError
from .graph import mst, odd_vertices
from .io import FORMATS, dumps_report, format_edge_instance, read_instance, write_atomic
from .lp import SolverParams, solve_2ecss_lp
from .pipeline import ALGORITHMS, DEFAULT_EPSILON, DEFAULT_SEED, run_algorithm
from .sparsify import SparsifyParams, sparsify_solution
from .tjoin import min_cost_tjoin

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_CHECK = 2
EXIT_USAGE = 64

log = logging.getLogger("tspkit")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def default_seed() -> int:
    raw = os.environ.get("TSPKIT_SEED")
    if raw is None:
        return DEFAULT_SEED
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"TSPKIT_SEED must be an integer, got {raw!r}") from None


def _add_instance_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="instance file")
    p.add_argument("--format", choices=FORMATS, help="instance format (default: from the 'p' line)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tspkit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"tspkit {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    solve = sub.add_parser("solve", help="build a tour and write a JSON report")
    _add_instance_args(solve)
    solve.add_argument("--algorithm", choices=ALGORITHMS, default="sparsified-christofides")
    solve.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    solve.add_argument("--seed", type=int)
    solve.add_argument("--d", type=float, default=8.0, help="sparsifier oversampling constant")
    solve.add_argument("--report", help="JSON report path (default: stdout)")
    solve.add_argument("--debug-verify", action="store_true",
                       help="verify the LP point before sparsifying")
    solve.add_argument("--keep-multiplicities", action="store_true",
                       help="do not cancel doubled edges in the T-join")
    solve.add_argument("--no-shortcut", action="store_true",
                       help="report the Euler walk instead of a Hamiltonian tour")
    solve.add_argument("--emit-tour", action="store_true", help="include tour and walk in the report")
    solve.add_argument("--emit-multigraph", action="store_true",
                       help="include the Eulerian multigraph as [edge id, multiplicity] pairs")

    lp = sub.add_parser("lp", help="solve the 2ECSS LP only")
    _add_instance_args(lp)
    lp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    lp.add_argument("--max-iterations", type=int)

    sp = sub.add_parser("sparsify", help="solve the LP and sparsify its solution")
    _add_instance_args(sp)
    sp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    sp.add_argument("--seed", type=int)
    sp.add_argument("--d", type=float, default=8.0)
    sp.add_argument("--debug-verify", action="store_true")
    sp.add_argument("--report", help="JSON output path (default: stdout)")

    tj = sub.add_parser("tjoin", help="minimum-cost T-join")
    _add_instance_args(tj)
    tj.add_argument("--terminals",
                    help="comma-separated vertex ids (default: odd vertices of the spanning tree)")

    bench = sub.add_parser("bench", help="run algorithms over many instances")
    src = bench.add_mutually_exclusive_group(required=True)
    src.add_argument("--instances", help="directory of instance files")
    src.add_argument("--random", type=int, metavar="COUNT", help="number of random instances")
    bench.add_argument("--n", type=int, default=12)
    bench.add_argument("--m", type=int, default=24)
    bench.add_argument("--format", choices=FORMATS)
    bench.add_argument("--algorithm", action="append", choices=ALGORITHMS)
    bench.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    bench.add_argument("--seed", type=int)
    bench.add_argument("--workers", type=int, default=1)
    bench.add_argument("--report-dir", help="write one JSON report per run here")
    bench.add_argument("--oracle", action="store_true",
                       help="compare against the exact optimum (n <= 14)")
    return parser


def _emit(text: str, path: str | None) -> None:
    if path:
        write_atomic(path, text)
    else:
        sys.stdout.write(text)


def cmd_solve(args) -> int:
    g = read_instance(args.input, args.format)
    seed = args.seed if args.seed is not None else default_seed()
    res = run_algorithm(g, args.algorithm, args.epsilon, seed, d=args.d,
                        debug_verify=args.debug_verify, shortcut=not args.no_shortcut,
                        keep_multiplicities=args.keep_multiplicities)
    report = res.report.to_dict()
    if args.emit_tour:
        report["tour"] = list(res.tour.vertices)
        report["walk"] = list(res.walk)
    if args.emit_multigraph:
        report["multigraph"] = [[e, k] for e, k in sorted(res.multigraph.items())]
    _emit(dumps_report(report), args.report)
    return EXIT_OK


def cmd_lp(args) -> int:
    g = read_instance(args.input, args.format)
    res = solve_2ecss_lp(g, SolverParams(args.epsilon, args.max_iterations))
    print(f"lp_objective {res.x.objective:.17g}")
    print(f"lp_lower_bound {res.lower_bound:.17g}")
    print(f"gap {res.gap:.17g}")
    return EXIT_OK


def cmd_sparsify(args) -> int:
    g = read_instance(args.input, args.format)
    seed = args.seed if args.seed is not None else default_seed()
    lp = solve_2ecss_lp(g, SolverParams(args.epsilon))
    sp = sparsify_solution(g, lp.x, SparsifyParams(args.epsilon, args.d, seed),
                           debug_verify=args.debug_verify)
    out = {
        "n": g.n, "m": g.m, "seed": seed, "epsilon": args.epsilon,
        "lp_objective": lp.x.objective, "lp_support_size": len(lp.x.support()),
        "y_cost": sp.y.objective, "support_size": len(sp.y.support()),
        "support_bound": sp.support_bound, "attempts": sp.attempts,
        "single_shot_success": sp.single_shot_success,
        "y": [[e, float(sp.y.values[e])] for e in sp.y.support()],
    }
    _emit(dumps_report(out), args.report)
    return EXIT_OK


def cmd_tjoin(args) -> int:
    g = read_instance(args.input, args.format)
    if args.terminals:
        try:
            terminals = [int(t) for t in args.terminals.split(",") if t.strip()]
        except ValueError:
            raise UsageError(f"--terminals must be comma-separated integers, got {args.terminals!r}")
    else:
        terminals = odd_vertices(g, mst(g))
    res = min_cost_tjoin(g, terminals)
    print(f"cost {res.cost:.17g}")
    print("edges " + " ".join(str(e) for e in sorted(res.edges)))
    return EXIT_OK


def _bench_instances(args):
    if args.instances:
        paths = sorted(p for p in Path(args.instances).iterdir() if p.is_file())
        return [(p.stem, read_instance(p, args.format)) for p in paths]
    from .generators import random_connected_graph
    base = args.seed if args.seed is not None else default_seed()
    return [(f"random-{i:04d}", random_connected_graph(args.n, args.m, base + i))
            for i in range(args.random)]


def cmd_bench(args) -> int:
    from .oracles import MAX_HELD_KARP_N, held_karp_opt

    seed = args.seed if args.seed is not None else default_seed()
    algorithms = args.algorithm or list(ALGORITHMS)
    instances = _bench_instances(args)
    if args.report_dir and args.random:
        for name, g in instances:
            write_atomic(Path(args.report_dir) / f"{name}.edges", format_edge_instance(g))

    def run(job):
        name, g, algo = job
        res = run_algorithm(g, algo, args.epsilon, seed)
        report = res.report.to_dict()
        report["instance"] = name
        if args.oracle and g.n <= MAX_HELD_KARP_N:
            opt = held_karp_opt(g)
            report["optimum"] = opt
            report["ratio_to_optimum"] = res.tour.cost / opt if opt > 0 else 1.0
        if args.report_dir:
            write_atomic(Path(args.report_dir) / f"{name}.{algo}.json", dumps_report(report))
        return report

    jobs = [(name, g, algo) for name, g in instances for algo in algorithms]
    with ThreadPoolExecutor(max_workers=max(1, args.workers)) as pool:
        reports = list(pool.map(run, jobs))
    print(f"{'instance':<16} {'algorithm':<24} {'n':>4} {'m':>5} {'tour':>12} "
          f"{'ratio_lb':>9} {'ratio_opt':>9} {'seconds':>8}")
    for r in reports:
        ratio_lb = r["ratio_to_lower_bound"]
        ratio_opt = r.get("ratio_to_optimum")
        print(f"{r['instance']:<16} {r['algorithm']:<24} {r['n']:>4} {r['m']:>5} "
              f"{r['shortcut_tour_cost']:>12.6g} "
              f"{'-' if ratio_lb is None else format(ratio_lb, '.4f'):>9} "
              f"{'-' if ratio_opt is None else format(ratio_opt, '.4f'):>9} "
              f"{sum(r['stage_times'].values()):>8.3f}")
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "lp": cmd_lp, "sparsify": cmd_sparsify,
            "tjoin": cmd_tjoin, "bench": cmd_bench}


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        return COMMANDS[args.command](args)
    except (UsageError, IngestionError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except CheckFailure as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


def main() -> None:
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
