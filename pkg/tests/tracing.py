"""Step-by-step tracing of a solve, checking every pruned edge against the oracle."""

from __future__ import annotations

import numpy as np

from hamcycle.graph import Graph
from hamcycle.oracle import has_hamiltonian_cycle_through
from hamcycle.pruning import REMOVED, UndoJournal, prune_to_fixpoint
from hamcycle.solver import AlgorithmConfig, Search


def _frame_removals(g: Graph, search: Search, start: int, stop: int) -> list[int]:
    jr = search.journal_arrays
    return [int(jr.edge[t]) for t in range(start, stop) if jr.act[t] == REMOVED]


def _check_frame(g: Graph, path: list[int], removed: list[int]) -> list[tuple]:
    if not removed:
        return []
    pre = g.alive.copy()
    pre[removed] = True
    alive = [(int(g.eu[i]), int(g.ew[i])) for i in np.flatnonzero(pre)]
    through = list(zip(path, path[1:]))
    bad = []
    for i in removed:
        e = (int(g.eu[i]), int(g.ew[i]))
        if has_hamiltonian_cycle_through(g, [*through, e], alive=alive):
            bad.append((tuple(path), e))
    return bad


def preprocessing_violations(g: Graph, cfg: AlgorithmConfig) -> tuple[list[tuple], int]:
    """Whole-graph fixpoint as run before the first recursion, checked on a copy."""
    which = {n for n, on in (("neighbour", cfg.prune_neighbour), ("path", cfg.prune_path)) if on}
    if not which:
        return [], 0
    h = g.copy()
    journal = UndoJournal(h)
    prune_to_fixpoint(h, which, journal)
    removed = [int(h.index(e)) for kind, e in journal.entries() if kind == "removed"]
    journal.rollback()
    return _check_frame(h, [], removed), len(removed)


def pruning_violations(g: Graph, cfg: AlgorithmConfig) -> tuple[list[tuple], int]:
    """Run ``cfg`` on ``g`` one recursion at a time.

    After each step the newest journal frame holds exactly the removals made
    while entering the current head. Each removed edge must lie on no
    Hamiltonian cycle of the frame's starting graph that extends the current
    path. Preprocessing is checked separately. Returns (violations, removals
    checked); the graph is restored.
    """
    bad, checked = preprocessing_violations(g, cfg)
    search = Search(g, cfg)
    while not search.done:
        search.advance(None, 1)
        path = search.path
        if search.done or not path:
            break
        start = search.frame_start(len(path) - 1)
        removed = _frame_removals(g, search, start, int(search.journal_arrays.ctr[0]))
        bad += _check_frame(g, path, removed)
        checked += len(removed)
    return bad, checked
