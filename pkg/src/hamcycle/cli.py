"""Command-line entry point: ``hamcycle {phase,solve,oracle,gen,run,report}``.

Results go to stdout as JSON lines or CSV; diagnostics go to stderr.
Exit codes: 0 success, 1 usage error, 2 I/O or runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench, oracle, phase
from .graph import GraphError, read_graph
from .solver import CHECKS, PRESET_NAMES, PRUNINGS, AlgorithmConfig, Budget, preset, solve

log = logging.getLogger("hamcycle")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _limit(text: str) -> int | None:
    """Positive integer budget; 0 or 'inf' means unlimited."""
    if text.lower() in ("inf", "none", "unlimited"):
        return None
    try:
        n = int(float(text))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid budget {text!r}") from None
    if n < 0:
        raise argparse.ArgumentTypeError("budget must be >= 0")
    return n or None


def _csv_list(choices):
    def parse(text: str) -> list[str]:
        items = [t.strip() for t in text.split(",") if t.strip()]
        bad = [t for t in items if t not in choices]
        if bad:
            raise argparse.ArgumentTypeError(f"unknown item(s) {bad}; choose from {list(choices)}")
        return items
    return parse


def _budget_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--max-recursions", type=_limit, default=10**5, metavar="N",
                   help="recursion budget (0 or inf = unlimited; default 1e5)")
    p.add_argument("--max-time-ns", type=_limit, default=10**8, metavar="N",
                   help="wall-time budget in ns (0 or inf = unlimited; default 1e8)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hamcycle", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("phase", help="limit-model probability of Hamiltonicity")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--e", type=float, required=True)

    p = sub.add_parser("solve", help="decide one graph")
    p.add_argument("--graph", required=True, help="graph file (JSON or edge list)")
    p.add_argument("--algo", default="custom", choices=(*PRESET_NAMES, "custom"))
    p.add_argument("--heuristic", choices=("none", "high", "low"))
    p.add_argument("--prune", type=_csv_list(PRUNINGS), metavar="LIST",
                   help=f"comma list from {','.join(PRUNINGS)}")
    p.add_argument("--check", type=_csv_list(CHECKS), metavar="LIST",
                   help=f"comma list from {','.join(CHECKS)}")
    _budget_args(p)

    p = sub.add_parser("oracle", help="brute-force decision and cycle count (v <= 12)")
    p.add_argument("--graph", required=True)

    p = sub.add_parser("gen", help="generate a random-graph ensemble")
    p.add_argument("--v", type=int, required=True)
    p.add_argument("--per-edge", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("run", help="run algorithms over an ensemble manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--algos", default="all", help="'all' or comma list of presets")
    p.add_argument("--metric", choices=bench.METRICS, default="recursions")
    _budget_args(p)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--parallel-timing", action="store_true",
                   help="allow parallel workers for the time metric (skews timings)")
    p.add_argument("--out", help="results CSV (default: stdout)")

    p = sub.add_parser("report", help="aggregate a results CSV and emit figure data")
    p.add_argument("--in", dest="inp", required=True)
    p.add_argument("--out", required=True, help="figure output directory")
    _budget_args(p)
    return parser


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj, separators=(",", ":")) + "\n")


def _cmd_phase(args) -> None:
    pt = phase.phase_point(args.v, args.e)
    _emit({"v": pt.v, "e": pt.e, "c": pt.c, "p_hamiltonian": pt.p_hamiltonian,
           "threshold_degree": phase.threshold_degree(args.v)})


def _config(args) -> AlgorithmConfig:
    custom = args.heuristic is not None or args.prune or args.check
    if args.algo != "custom":
        if custom:
            raise UsageError("--heuristic/--prune/--check only apply with --algo custom")
        return preset(args.algo)
    return AlgorithmConfig.custom(args.heuristic or "none", args.prune or (), args.check or ())


def _cmd_solve(args) -> None:
    cfg = _config(args)
    g = read_graph(args.graph)
    out = solve(g, cfg, Budget(args.max_recursions, args.max_time_ns))
    _emit({"algorithm": cfg.name, **out.to_dict()})


def _cmd_oracle(args) -> None:
    g = read_graph(args.graph)
    _emit({"hamiltonian": oracle.is_hamiltonian_bruteforce(g),
           "count": oracle.count_hamiltonian_cycles(g)})


def _cmd_gen(args) -> None:
    spec = bench.EnsembleSpec(args.v, args.per_edge, args.seed)
    m = bench.generate_ensemble(spec, args.out)
    _emit({"manifest": str(Path(args.out) / "manifest.json"), "instances": len(m["instances"])})


def _cmd_run(args) -> None:
    algos = PRESET_NAMES if args.algos == "all" else _csv_list(PRESET_NAMES)(args.algos)
    budget = Budget(args.max_recursions, args.max_time_ns)
    records = bench.run_experiment(args.manifest, algos, budget, args.metric,
                                   args.workers, args.parallel_timing)
    if args.out:
        n = bench.write_records(records, args.out)
        log.info("wrote %d records to %s", n, args.out)
    else:
        bench.write_records(records, sys.stdout)


def _cmd_report(args) -> None:
    records = bench.read_records(args.inp)
    for row in bench.aggregate(records):
        _emit(row.to_dict())
    files = bench.emit_figure_data(records, args.out, Budget(args.max_recursions, args.max_time_ns))
    log.info("wrote %d figure files to %s", len(files), args.out)


_COMMANDS = {
    "phase": _cmd_phase, "solve": _cmd_solve, "oracle": _cmd_oracle,
    "gen": _cmd_gen, "run": _cmd_run, "report": _cmd_report,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # --help exits 0, usage errors 1
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
    try:
        _COMMANDS[args.command](args)
    except (UsageError, argparse.ArgumentTypeError) as exc:
        print(f"hamcycle: error: {exc}", file=sys.stderr)
        return 1
    except (OSError, GraphError, oracle.OracleError, ValueError) as exc:
        print(f"hamcycle: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
