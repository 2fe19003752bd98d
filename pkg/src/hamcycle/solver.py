"""Generalized backtracking solver and the six historical algorithm presets.

One recursion is one entry into the extend-path step; placing the start
vertex is the first. Per recursion the solver runs, in order: solution
pruning, the neighbour/path pruning fixpoint, the enabled checks (degree,
premature closure, disconnectedness, one-connectedness), then branches over
the unvisited live neighbours of the path head. Configurations with any
pruning or check also run the fixpoint and checks once on the whole graph
before the first recursion; that phase costs no recursions.

The search itself is an explicit-stack loop compiled with numba. It runs in
chunks so the Python driver can meter wall time between chunks.
"""

from __future__ import annotations

import enum
import time
from collections import namedtuple
from collections.abc import Iterable
from dataclasses import dataclass, replace

import numpy as np
from ._jit import kernel

from .checks import (
    articulation_kernel,
    degree_kernel,
    disconnected_kernel,
    new_scratch,
    premature_closure_kernel,
)
from .graph import Graph
from .pruning import (
    JournalArrays,
    fixpoint_kernel,
    require_logged,
    solution_prune_kernel,
    undo_to,
)

__all__ = [
    "Heuristic",
    "Decision",
    "Cutoff",
    "AlgorithmConfig",
    "Budget",
    "SolveOutcome",
    "PRESETS",
    "preset",
    "solve",
    "next_candidates",
    "start_vertex",
    "verify_witness",
    "Search",
]

UNLIMITED = None
TIME_CHECK_INTERVAL = 256  # recursions between wall-clock checks
_NO_LIMIT = np.int64(2**62)


class Heuristic(str, enum.Enum):
    NONE = "none"
    HIGH = "high"
    LOW = "low"


class Decision(str, enum.Enum):
    HAMILTONIAN = "hamiltonian"
    NON_HAMILTONIAN = "non_hamiltonian"
    UNDECIDED = "undecided"


class Cutoff(str, enum.Enum):
    NONE = "none"
    RECURSIONS = "recursions"
    TIME = "time"


PRUNINGS = ("neighbour", "path", "solution")
CHECKS = ("degree", "premature_closure", "disconnected", "one_connected")


@dataclass(frozen=True)
class AlgorithmConfig:
    name: str = "custom"
    heuristic: Heuristic = Heuristic.NONE
    prune_neighbour: bool = False
    prune_path: bool = False
    prune_solution: bool = False
    check_degree: bool = False
    check_premature_closure: bool = False
    check_disconnected: bool = False
    check_one_connected: bool = False

    def __post_init__(self):
        object.__setattr__(self, "heuristic", Heuristic(self.heuristic))

    @classmethod
    def custom(
        cls,
        heuristic: str | Heuristic = Heuristic.NONE,
        prune: Iterable[str] = (),
        check: Iterable[str] = (),
        name: str = "custom",
    ) -> AlgorithmConfig:
        prune, check = set(prune), set(check)
        if bad := prune - set(PRUNINGS):
            raise ValueError(f"unknown pruning routine(s): {sorted(bad)}")
        if bad := check - set(CHECKS):
            raise ValueError(f"unknown check(s): {sorted(bad)}")
        return cls(
            name=name,
            heuristic=Heuristic(heuristic),
            **{f"prune_{p}": True for p in prune},
            **{f"check_{c}": True for c in check},
        )

    @property
    def any_pruning(self) -> bool:
        return self.prune_neighbour or self.prune_path or self.prune_solution

    @property
    def any_check(self) -> bool:
        return (self.check_degree or self.check_premature_closure
                or self.check_disconnected or self.check_one_connected)

    def flags(self) -> np.ndarray:
        return np.array(
            [
                _HEURISTIC_CODE[self.heuristic],
                self.prune_neighbour, self.prune_path, self.prune_solution,
                self.check_degree, self.check_premature_closure,
                self.check_disconnected, self.check_one_connected,
            ],
            dtype=np.int64,
        )


_HEURISTIC_CODE = {Heuristic.NONE: 0, Heuristic.HIGH: 1, Heuristic.LOW: 2}

PRESETS: dict[str, AlgorithmConfig] = {
    "depth_first": AlgorithmConfig("depth_first"),
    "cetal": AlgorithmConfig("cetal", Heuristic.HIGH),
    "van_horn": AlgorithmConfig("van_horn", Heuristic.LOW),
    "martello": AlgorithmConfig(
        "martello", Heuristic.LOW, prune_path=True, prune_solution=True,
        check_degree=True,
    ),
    "rubin": AlgorithmConfig(
        "rubin", Heuristic.NONE,
        prune_neighbour=True, prune_path=True, prune_solution=True,
        check_degree=True, check_premature_closure=True,
        check_disconnected=True, check_one_connected=True,
    ),
    "vacul": AlgorithmConfig(
        "vacul", Heuristic.HIGH,
        prune_neighbour=True, prune_path=True, prune_solution=True,
        check_degree=True, check_disconnected=True, check_one_connected=True,
    ),
}
PRESET_NAMES = tuple(PRESETS)


def preset(name: str, **overrides) -> AlgorithmConfig:
    """Named configuration; keyword overrides (e.g. ``heuristic="high"``) tweak a copy."""
    try:
        cfg = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; choose from {', '.join(PRESETS)}") from None
    return replace(cfg, **overrides) if overrides else cfg


@dataclass(frozen=True)
class Budget:
    """Per-solve limits; ``None`` means unlimited."""

    max_recursions: int | None = 10**5
    max_time_ns: int | None = 10**8

    def __post_init__(self):
        for name in ("max_recursions", "max_time_ns"):
            val = getattr(self, name)
            if val is not None and val <= 0:
                raise ValueError(f"{name} must be positive or None, got {val}")

    @classmethod
    def unlimited(cls) -> Budget:
        return cls(None, None)


@dataclass(frozen=True)
class SolveOutcome:
    decision: Decision
    witness: tuple[int, ...] | None = None
    recursions: int = 0
    elapsed_ns: int = 0
    cutoff: Cutoff = Cutoff.NONE

    @property
    def decided(self) -> bool:
        return self.decision is not Decision.UNDECIDED

    def to_dict(self) -> dict:
        return {
            "decision": self.decision.value,
            "witness": list(self.witness) if self.witness is not None else None,
            "recursions": self.recursions,
            "elapsed_ns": self.elapsed_ns,
            "cutoff": self.cutoff.value,
        }


# ------------------------------------------------------------ search kernel

# counters in Search.ctr
_REC, _PLEN, _PHASE, _STATUS = range(4)
# phases
_FRESH, _RUNNING, _DONE = range(3)
# kernel return codes
YIELD, FOUND, EXHAUSTED, CUT = range(4)

SearchArrays = namedtuple(
    "SearchArrays",
    "path in_path consumed cand cand_e cand_n cand_i frame orig_alive seen ctr",
)


@kernel
def _start_vertex(ga, heuristic):
    best = 0
    for x in range(1, ga.v):
        if heuristic == 1 and ga.deg[x] > ga.deg[best]:
            best = x
        elif heuristic == 2 and ga.deg[x] < ga.deg[best]:
            best = x
    return best


@kernel
def _fill_candidates(ga, sa, d, heuristic):
    """Unvisited live neighbours of path[d], ordered by the branching heuristic."""
    x = sa.path[d]
    n = 0
    for k in range(ga.adj_ptr[x], ga.adj_ptr[x + 1]):
        i = ga.adj_eid[k]
        y = ga.adj_nbr[k]
        if ga.alive[i] and not sa.in_path[y]:
            sa.cand[d, n] = y
            sa.cand_e[d, n] = i
            n += 1
    if heuristic != 0:
        # stable insertion sort on live degree; ascending-id order breaks ties
        for a in range(1, n):
            y = sa.cand[d, a]
            i = sa.cand_e[d, a]
            key = ga.deg[y]
            b = a - 1
            while b >= 0:
                kb = ga.deg[sa.cand[d, b]]
                if (heuristic == 1 and kb < key) or (heuristic == 2 and kb > key):
                    sa.cand[d, b + 1] = sa.cand[d, b]
                    sa.cand_e[d, b + 1] = sa.cand_e[d, b]
                    b -= 1
                else:
                    break
            sa.cand[d, b + 1] = y
            sa.cand_e[d, b + 1] = i
    sa.cand_n[d] = n
    sa.cand_i[d] = 0


@kernel
def _run_checks(ga, cfg, consumed, vs, vh, root, sc):
    """True if an enabled check decides the (residual) graph is non-Hamiltonian."""
    if cfg[4] and degree_kernel(ga, consumed, vs, vh):
        return True
    if cfg[5] and premature_closure_kernel(ga, sc):
        return True
    if cfg[6] and disconnected_kernel(ga, consumed, vs, vh, root, sc):
        return True
    if cfg[7] and articulation_kernel(ga, consumed, vs, vh, sc, sc.flag[:0]):
        return True
    return False


@kernel
def _closes(ga, sa, x, y):
    """Edge x-y present in the input graph (before any pruning)."""
    for k in range(ga.adj_ptr[x], ga.adj_ptr[x + 1]):
        if ga.adj_nbr[k] == y:
            return sa.orig_alive[ga.adj_eid[k]]
    return False


@kernel
def _enter(ga, jr, sa, sc, cfg, x, eid):
    """One recursion: place ``x`` (reached over edge ``eid``) at the path head."""
    ctr = sa.ctr
    ctr[_REC] += 1
    d = ctr[_PLEN]
    sa.path[d] = x
    sa.in_path[x] = True
    plen = d + 1
    ctr[_PLEN] = plen
    sa.frame[d + 1] = jr.ctr[0]
    sa.cand_n[d] = 0
    sa.cand_i[d] = 0
    if plen >= 3:
        sa.consumed[sa.path[plen - 2]] = True
    v = ga.v
    marks = cfg[1] or cfg[2] or cfg[3] or cfg[5]
    if marks and eid >= 0 and not ga.req[eid]:
        if require_logged(ga, jr, eid):
            return False
    if plen == v:
        return _closes(ga, sa, x, sa.path[0])
    if cfg[3] and plen >= 3:
        _, bad = solution_prune_kernel(ga, jr, sa.path, plen)
        if bad:
            return False
    if cfg[1] or cfg[2]:
        _, _, bad, _ = fixpoint_kernel(ga, jr, cfg[1] != 0, cfg[2] != 0, sa.seen)
        if bad:
            return False
    vs = sa.path[0]
    vh = x if plen >= 2 else -1
    if _run_checks(ga, cfg, sa.consumed, vs, vh, vs, sc):
        return False
    _fill_candidates(ga, sa, d, cfg[0])
    return False


@kernel
def _pop(ga, jr, sa):
    ctr = sa.ctr
    d = ctr[_PLEN] - 1
    undo_to(ga, jr, sa.frame[d + 1])
    sa.in_path[sa.path[d]] = False
    ctr[_PLEN] = d
    if d >= 2:
        sa.consumed[sa.path[d - 1]] = False


@kernel
def search_kernel(ga, jr, sa, sc, cfg, max_rec, chunk):
    """Advance the search by at most ``chunk`` recursions.

    Returns YIELD (resumable), FOUND, EXHAUSTED or CUT (recursion budget).
    On any terminal code the graph is restored to its input state.
    """
    ctr = sa.ctr
    steps = 0
    if ctr[_PHASE] == _FRESH:
        ctr[_PHASE] = _RUNNING
        sa.frame[0] = jr.ctr[0]
        if ga.v <= 2:
            ctr[_PHASE] = _DONE
            return EXHAUSTED
        if cfg[1] or cfg[2] or cfg[3] or cfg[4] or cfg[5] or cfg[6] or cfg[7]:
            bad = False
            if cfg[1] or cfg[2]:
                _, _, bad, _ = fixpoint_kernel(ga, jr, cfg[1] != 0, cfg[2] != 0, sa.seen)
            if not bad:
                bad = _run_checks(ga, cfg, sa.consumed, -1, -1, 0, sc)
            if bad:
                undo_to(ga, jr, sa.frame[0])
                ctr[_PHASE] = _DONE
                return EXHAUSTED
        if max_rec < 1:
            undo_to(ga, jr, sa.frame[0])
            ctr[_PHASE] = _DONE
            return CUT
        steps += 1
        if _enter(ga, jr, sa, sc, cfg, _start_vertex(ga, cfg[0]), -1):
            undo_to(ga, jr, sa.frame[0])
            ctr[_PHASE] = _DONE
            return FOUND
    while True:
        d = ctr[_PLEN] - 1
        if sa.cand_i[d] < sa.cand_n[d]:
            if ctr[_REC] >= max_rec:
                undo_to(ga, jr, sa.frame[0])
                ctr[_PHASE] = _DONE
                return CUT
            if steps >= chunk:
                return YIELD
            k = sa.cand_i[d]
            sa.cand_i[d] = k + 1
            steps += 1
            if _enter(ga, jr, sa, sc, cfg, sa.cand[d, k], sa.cand_e[d, k]):
                undo_to(ga, jr, sa.frame[0])
                ctr[_PHASE] = _DONE
                return FOUND
        else:
            _pop(ga, jr, sa)
            if ctr[_PLEN] == 0:
                undo_to(ga, jr, sa.frame[0])
                ctr[_PHASE] = _DONE
                return EXHAUSTED


# ------------------------------------------------------------ Python driver


class Search:
    """Resumable search over ``g`` under ``cfg``.

    :meth:`advance` runs up to ``chunk`` recursions; between calls the graph
    holds the live search state (path edges required, pruned edges removed)
    and :attr:`journal_arrays` records every change since the solve began.
    """

    def __init__(self, g: Graph, cfg: AlgorithmConfig):
        v = g.v
        self.graph = g
        self.config = cfg
        self._cfg = cfg.flags()
        cap = 2 * g.m + 2
        self.journal_arrays = JournalArrays(
            np.zeros(cap, np.int64), np.zeros(cap, np.int64), np.zeros(1, np.int64)
        )
        self.arrays = SearchArrays(
            path=np.zeros(v, np.int64),
            in_path=np.zeros(v, np.bool_),
            consumed=np.zeros(v, np.bool_),
            cand=np.zeros((v, v), np.int64),
            cand_e=np.zeros((v, v), np.int64),
            cand_n=np.zeros(v, np.int64),
            cand_i=np.zeros(v, np.int64),
            frame=np.zeros(v + 1, np.int64),
            orig_alive=g.alive.copy(),
            seen=np.zeros(v, np.bool_),
            ctr=np.zeros(4, np.int64),
        )
        self._scratch = new_scratch(v)
        self.status: int | None = None

    @property
    def recursions(self) -> int:
        return int(self.arrays.ctr[_REC])

    @property
    def path(self) -> list[int]:
        n = int(self.arrays.ctr[_PLEN])
        return [int(x) for x in self.arrays.path[:n]]

    @property
    def done(self) -> bool:
        return self.arrays.ctr[_PHASE] == _DONE

    def frame_start(self, depth: int) -> int:
        """Journal position where the frame of path position ``depth`` begins (-1: preprocessing)."""
        return int(self.arrays.frame[depth + 1])

    def advance(self, max_recursions: int | None, chunk: int) -> int:
        limit = _NO_LIMIT if max_recursions is None else np.int64(max_recursions)
        self.status = int(search_kernel(
            self.graph.arrays, self.journal_arrays, self.arrays, self._scratch,
            self._cfg, limit, np.int64(chunk),
        ))
        return self.status

    def abort(self) -> None:
        """Stop early and restore the graph."""
        undo_to(self.graph.arrays, self.journal_arrays, 0)
        self.arrays.ctr[_PHASE] = _DONE

    def witness(self) -> tuple[int, ...]:
        return tuple(int(x) for x in self.arrays.path)


def verify_witness(g: Graph, witness, alive: np.ndarray | None = None) -> bool:
    """Independent check that ``witness`` is a Hamiltonian cycle of ``g``.

    ``alive`` overrides the graph's current alive flags (e.g. a snapshot of the input).
    """
    if alive is None:
        alive = g.alive
    w = list(witness)
    if len(w) != g.v or sorted(w) != list(range(g.v)) or g.v < 3:
        return False
    for a, b in zip(w, w[1:] + w[:1]):
        i = g._index.get((a, b) if a < b else (b, a))
        if i is None or not alive[i]:
            return False
    return True


def solve(g: Graph, cfg: AlgorithmConfig | str, budget: Budget | None = None) -> SolveOutcome:
    """Decide whether ``g`` has a Hamiltonian cycle.

    The graph is mutated during the search and restored before returning.
    A cutoff (recursion or wall-time budget) yields ``Decision.UNDECIDED``.
    """
    if isinstance(cfg, str):
        cfg = preset(cfg)
    if budget is None:
        budget = Budget()
    search = Search(g, cfg)
    max_time = budget.max_time_ns
    chunk = TIME_CHECK_INTERVAL if max_time is not None else int(_NO_LIMIT)
    cutoff = Cutoff.NONE
    t0 = time.perf_counter_ns()
    while True:
        status = search.advance(budget.max_recursions, chunk)
        if status != YIELD:
            break
        if time.perf_counter_ns() - t0 >= max_time:
            search.abort()
            cutoff = Cutoff.TIME
            break
    elapsed = time.perf_counter_ns() - t0

    if cutoff is Cutoff.TIME:
        decision = Decision.UNDECIDED
    elif status == CUT:
        decision, cutoff = Decision.UNDECIDED, Cutoff.RECURSIONS
    elif status == FOUND:
        decision = Decision.HAMILTONIAN
    else:
        decision = Decision.NON_HAMILTONIAN

    witness = None
    if decision is Decision.HAMILTONIAN:
        witness = search.witness()
        if not verify_witness(g, witness, search.arrays.orig_alive):
            raise AssertionError(f"solver produced an invalid witness {witness}")
    return SolveOutcome(decision, witness, search.recursions, elapsed, cutoff)


# ---------------------------------------------------------- exposed helpers


def start_vertex(g: Graph, heuristic: Heuristic | str) -> int:
    return int(_start_vertex(g.arrays, _HEURISTIC_CODE[Heuristic(heuristic)]))


def next_candidates(g: Graph, path, heuristic: Heuristic | str) -> list[int]:
    """Branching order from the head of ``path`` under ``heuristic``."""
    path = [int(x) for x in path]
    if not path:
        raise ValueError("path must be non-empty")
    v = g.v
    sa = SearchArrays(
        path=np.zeros(v, np.int64),
        in_path=np.zeros(v, np.bool_),
        consumed=np.zeros(v, np.bool_),
        cand=np.zeros((v, v), np.int64),
        cand_e=np.zeros((v, v), np.int64),
        cand_n=np.zeros(v, np.int64),
        cand_i=np.zeros(v, np.int64),
        frame=np.zeros(v + 1, np.int64),
        orig_alive=g.alive,
        seen=np.zeros(v, np.bool_),
        ctr=np.zeros(4, np.int64),
    )
    d = len(path) - 1
    sa.path[: d + 1] = path
    sa.in_path[path] = True
    _fill_candidates(g.arrays, sa, d, _HEURISTIC_CODE[Heuristic(heuristic)])
    return [int(y) for y in sa.cand[d, : sa.cand_n[d]]]
