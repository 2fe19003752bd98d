"""Random-ensemble experiments: generation, two-metric runs, aggregation, figure data."""

from __future__ import annotations

import csv
import json
import logging
import statistics
import warnings
from collections import defaultdict
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from os import PathLike
from pathlib import Path

import numpy as np

from .graph import Graph, GraphError, random_graph, read_graph, write_graph
from .solver import PRESET_NAMES, Budget, Cutoff, Decision, preset, solve

__all__ = [
    "EnsembleSpec",
    "RunRecord",
    "AggregateRow",
    "derive_seed",
    "iter_ensemble",
    "generate_ensemble",
    "load_manifest",
    "run_experiment",
    "run_instances",
    "aggregate",
    "write_records",
    "read_records",
    "emit_figure_data",
    "bin_by_degree",
    "CSV_HEADER",
]

log = logging.getLogger(__name__)

CSV_HEADER = ["algorithm", "v", "e", "instance_id", "seed", "metric",
              "decision", "recursions", "elapsed_ns", "cutoff"]
METRICS = ("recursions", "time")
ERROR = "error"


@dataclass(frozen=True)
class EnsembleSpec:
    v: int
    per_edge_count: int = 20
    master_seed: int = 0
    edge_range: tuple[int, int] | None = None  # inclusive; default 1..v(v-1)/2

    def __post_init__(self):
        if self.v < 2:
            raise ValueError(f"ensemble needs v >= 2, got {self.v}")
        if self.per_edge_count < 1:
            raise ValueError("per_edge_count must be >= 1")
        lo, hi = self.edges
        if not 0 <= lo <= hi <= self.max_edges:
            raise ValueError(f"edge range {self.edge_range} outside [0, {self.max_edges}]")

    @property
    def max_edges(self) -> int:
        return self.v * (self.v - 1) // 2

    @property
    def edges(self) -> tuple[int, int]:
        return self.edge_range if self.edge_range is not None else (1, self.max_edges)

    @property
    def size(self) -> int:
        lo, hi = self.edges
        return (hi - lo + 1) * self.per_edge_count


def derive_seed(master_seed: int, v: int, e: int, i: int) -> int:
    """Per-instance seed, a pure function of (master_seed, v, e, i)."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(v, e, i))
    return int(ss.generate_state(1, np.uint64)[0])


def iter_ensemble(spec: EnsembleSpec) -> Iterator[tuple[dict, Graph]]:
    """Yield ``(instance, graph)`` in (e, instance_id) order without touching disk."""
    lo, hi = spec.edges
    for e in range(lo, hi + 1):
        for i in range(spec.per_edge_count):
            seed = derive_seed(spec.master_seed, spec.v, e, i)
            inst = {"v": spec.v, "e": e, "instance_id": i, "seed": seed}
            yield inst, random_graph(spec.v, e, seed)


def generate_ensemble(spec: EnsembleSpec, out: str | PathLike) -> dict:
    """Write every instance as canonical JSON plus ``manifest.json``; returns the manifest."""
    out = Path(out)
    (out / "graphs").mkdir(parents=True, exist_ok=True)
    instances = []
    for inst, g in iter_ensemble(spec):
        rel = f"graphs/v{spec.v}_e{inst['e']:05d}_i{inst['instance_id']:03d}.json"
        write_graph(g, out / rel)
        instances.append({**inst, "file": rel})
    manifest = {
        "v": spec.v,
        "per_edge_count": spec.per_edge_count,
        "master_seed": spec.master_seed,
        "edge_range": list(spec.edges),
        "instances": instances,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=1) + "\n")
    return manifest


def load_manifest(path: str | PathLike) -> dict:
    path = Path(path)
    manifest = json.loads(path.read_text())
    manifest.setdefault("base_dir", str(path.parent))
    return manifest


@dataclass(frozen=True)
class RunRecord:
    algorithm: str
    v: int
    e: int
    instance_id: int
    seed: int
    metric: str
    decision: str
    recursions: int
    elapsed_ns: int
    cutoff: str

    @property
    def solved(self) -> bool:
        return self.decision in (Decision.HAMILTONIAN.value, Decision.NON_HAMILTONIAN.value)

    @property
    def mean_degree(self) -> float:
        return 2.0 * self.e / self.v

    def row(self) -> list:
        return [getattr(self, f.name) for f in fields(self)]


def _budget_for(metric: str, budget: Budget) -> Budget:
    # the recursion run must be deterministic, so it never meters wall time
    if metric == "recursions":
        return Budget(budget.max_recursions, None)
    return Budget(None, budget.max_time_ns)


def _solve_one(inst: dict, g: Graph | None, algorithm: str, budget: Budget, metric: str) -> RunRecord:
    base = dict(algorithm=algorithm, v=inst["v"], e=inst["e"],
                instance_id=inst["instance_id"], seed=inst["seed"], metric=metric)
    if g is None:
        return RunRecord(**base, decision=ERROR, recursions=0, elapsed_ns=0, cutoff=Cutoff.NONE.value)
    out = solve(g, preset(algorithm), _budget_for(metric, budget))
    return RunRecord(**base, decision=out.decision.value, recursions=out.recursions,
                     elapsed_ns=out.elapsed_ns, cutoff=out.cutoff.value)


def _load(inst: dict, base_dir: Path) -> Graph | None:
    try:
        return read_graph(base_dir / inst["file"])
    except (OSError, GraphError, ValueError) as exc:
        log.error("cannot load %s: %s", inst.get("file"), exc)
        return None


def _worker(args) -> list[RunRecord]:
    items, algorithm, budget, metric = args
    return [_solve_one(inst, g, algorithm, budget, metric) for inst, g in items]


def run_instances(
    instances: Iterable[tuple[dict, Graph | None]],
    algorithms: Sequence[str],
    budget: Budget | None = None,
    metric: str = "recursions",
    workers: int = 1,
    parallel_timing: bool = False,
) -> Iterator[RunRecord]:
    """Solve every (instance, algorithm) pair; records ordered by (algorithm, e, instance_id)."""
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    budget = budget or Budget()
    for a in algorithms:
        preset(a)  # validate early
    if not algorithms:
        return
    items = sorted(instances, key=lambda p: (p[0]["e"], p[0]["instance_id"]))
    if metric == "time" and workers > 1 and not parallel_timing:
        workers = 1
    elif metric == "time" and workers > 1:
        warnings.warn("parallel timing runs contend for the CPU; elapsed times are skewed",
                      RuntimeWarning, stacklevel=2)
    if workers <= 1:
        for a in algorithms:
            for inst, g in items:
                yield _solve_one(inst, g, a, budget, metric)
        return
    size = max(1, len(items) // (workers * 8))
    chunks = [items[k:k + size] for k in range(0, len(items), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for a in algorithms:
            for batch in pool.map(_worker, [(c, a, budget, metric) for c in chunks]):
                yield from batch


def run_experiment(
    manifest: dict | str | PathLike,
    algorithms: Sequence[str] = PRESET_NAMES,
    budget: Budget | None = None,
    metric: str = "recursions",
    workers: int = 1,
    parallel_timing: bool = False,
) -> Iterator[RunRecord]:
    """Run ``algorithms`` over every manifest instance; graph files are loaded once."""
    if not isinstance(manifest, dict):
        manifest = load_manifest(manifest)
    base_dir = Path(manifest.get("base_dir", "."))
    pairs = [(inst, _load(inst, base_dir)) for inst in manifest["instances"]]
    yield from run_instances(pairs, algorithms, budget, metric, workers, parallel_timing)


# ------------------------------------------------------------------ CSV I/O


def write_records(records: Iterable[RunRecord], path_or_file) -> int:
    own = isinstance(path_or_file, (str, PathLike))
    fh = open(path_or_file, "w", newline="") if own else path_or_file
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        n = 0
        for r in records:
            w.writerow(r.row())
            n += 1
        return n
    finally:
        if own:
            fh.close()


def read_records(path: str | PathLike) -> list[RunRecord]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected results header {reader.fieldnames}")
        out = []
        for row in reader:
            out.append(RunRecord(
                algorithm=row["algorithm"], v=int(row["v"]), e=int(row["e"]),
                instance_id=int(row["instance_id"]), seed=int(row["seed"]),
                metric=row["metric"], decision=row["decision"],
                recursions=int(row["recursions"]), elapsed_ns=int(row["elapsed_ns"]),
                cutoff=row["cutoff"],
            ))
        return out


# -------------------------------------------------------------- aggregation


@dataclass(frozen=True)
class AggregateRow:
    algorithm: str
    total: int
    unsolved: int
    unsolved_fraction: float
    mean_recursions_solved: float
    mean_time_solved_ns: float
    rank_recursions: int
    rank_time: int

    def to_dict(self) -> dict:
        return asdict(self)


def _rank(keys: dict[str, tuple]) -> dict[str, int]:
    order = sorted(keys, key=lambda a: keys[a])
    return {a: i + 1 for i, a in enumerate(order)}


def aggregate(records: Iterable[RunRecord]) -> list[AggregateRow]:
    """Per-algorithm unsolved fraction and solved-instance means, with rankings.

    Ranking: fewest unsolved first; ties go to the lower mean cost over solved
    instances (recursions for ``rank_recursions``, wall time for ``rank_time``).
    """
    by_algo: dict[str, list[RunRecord]] = defaultdict(list)
    for r in records:
        if r.decision != ERROR:
            by_algo[r.algorithm].append(r)
    if not by_algo:
        raise ValueError("aggregate needs at least one record")
    stats = {}
    for a, rs in by_algo.items():
        solved = [r for r in rs if r.solved]
        unsolved = len(rs) - len(solved)
        mean_rec = statistics.fmean(r.recursions for r in solved) if solved else float("nan")
        mean_ns = statistics.fmean(r.elapsed_ns for r in solved) if solved else float("nan")
        stats[a] = (len(rs), unsolved, mean_rec, mean_ns)

    def key(a, idx):
        total, unsolved, *means = stats[a]
        m = means[idx]
        return (unsolved / total, float("inf") if m != m else m, a)

    rank_rec = _rank({a: key(a, 0) for a in stats})
    rank_time = _rank({a: key(a, 1) for a in stats})
    rows = [
        AggregateRow(a, total, unsolved, unsolved / total, mean_rec, mean_ns,
                     rank_rec[a], rank_time[a])
        for a, (total, unsolved, mean_rec, mean_ns) in stats.items()
    ]
    rows.sort(key=lambda r: r.rank_recursions)
    return rows


def bin_by_degree(records: Iterable[RunRecord], width: float | None = None,
                  origin: float = 0.0) -> dict[int, list[RunRecord]]:
    """Group records into mean-degree bins ``[origin + k*width, origin + (k+1)*width)``.

    ``width=None`` means one bin per edge count (width 2/v), keyed by e.
    """
    bins: dict[int, list[RunRecord]] = defaultdict(list)
    for r in records:
        if width is None:
            bins[r.e].append(r)
        else:
            bins[int(np.floor((r.mean_degree - origin) / width + 1e-12))].append(r)
    return dict(sorted(bins.items()))


# ------------------------------------------------------------- figure data

_COLOURS = {"hamiltonian": "#2ca02c", "non_hamiltonian": "#d62728", "cutoff": "#1f1f1f"}


def _point_class(r: RunRecord) -> str:
    return "cutoff" if r.decision == Decision.UNDECIDED.value else r.decision


def _cost(r: RunRecord, budget: Budget) -> int:
    if r.metric == "recursions":
        if r.cutoff == Cutoff.RECURSIONS.value and budget.max_recursions is not None:
            return budget.max_recursions
        return r.recursions
    if r.cutoff == Cutoff.TIME.value and budget.max_time_ns is not None:
        return budget.max_time_ns
    return r.elapsed_ns


def emit_figure_data(records: Iterable[RunRecord], out: str | PathLike,
                     budget: Budget | None = None) -> list[Path]:
    """Write per-algorithm scatter CSV + SVG and a per-edge-count summary CSV.

    Cutoff points are placed at the budget value.
    """
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    budget = budget or Budget()
    out = Path(out)
    out.mkdir(parents=True, exist_ok=True)
    by_algo: dict[str, list[RunRecord]] = defaultdict(list)
    for r in records:
        if r.decision != ERROR:
            by_algo[r.algorithm].append(r)
    written: list[Path] = []
    summary_rows = []
    for algo, rs in by_algo.items():
        metric = rs[0].metric
        path = out / f"scatter_{algo}.csv"
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["mean_degree", "cost", "decision"])
            for r in rs:
                w.writerow([f"{r.mean_degree:.6f}", _cost(r, budget), _point_class(r)])
        written.append(path)

        fig, ax = plt.subplots(figsize=(6, 4))
        for cls, colour in _COLOURS.items():
            pts = [(r.mean_degree, _cost(r, budget)) for r in rs if _point_class(r) == cls]
            if pts:
                xs, ys = zip(*pts)
                ax.scatter(xs, [max(y, 1) for y in ys], s=2, c=colour, label=cls, linewidths=0)
        ax.set_yscale("log")
        ax.set_xlabel("mean degree")
        ax.set_ylabel("recursions" if metric == "recursions" else "elapsed (ns)")
        ax.set_title(algo)
        ax.legend(loc="upper right", fontsize=7, markerscale=4)
        fig.tight_layout()
        svg = out / f"scatter_{algo}.svg"
        fig.savefig(svg, format="svg")
        plt.close(fig)
        written.append(svg)

        for e, group in bin_by_degree(rs).items():
            costs = [_cost(r, budget) for r in group]
            ham = sum(r.decision == Decision.HAMILTONIAN.value for r in group)
            unsolved = sum(not r.solved for r in group)
            summary_rows.append([algo, group[0].v, e, f"{2 * e / group[0].v:.6f}", len(group),
                                 statistics.median(costs), f"{ham / len(group):.6f}", unsolved])
    path = out / "summary.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["algorithm", "v", "e", "mean_degree", "count", "median_cost",
                    "hamiltonian_fraction", "unsolved"])
        w.writerows(summary_rows)
    written.append(path)
    return written

