"""Edge pruning: required-edge derivation, neighbour/path/solution pruning, and the undo journal.

Every removal and every required mark goes through the journal, so a frame
pushed before pruning can be popped to restore the graph exactly.
"""

from __future__ import annotations

from collections import namedtuple
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from ._jit import kernel

from .graph import Graph, GraphError

__all__ = [
    "PruneReport",
    "UndoJournal",
    "derive_required",
    "neighbour_prune",
    "path_prune",
    "solution_prune",
    "prune_to_fixpoint",
]

REMOVED = 0
MARKED = 1

JournalArrays = namedtuple("JournalArrays", "act edge ctr")


@dataclass(frozen=True)
class PruneReport:
    edges_removed: int = 0
    edges_required_added: int = 0
    contradiction: bool = False
    iterations: int = 0


class UndoJournal:
    """Stack of frames recording edge removals and required marks.

    Entries made while no frame is open belong to the base level and are
    undone by :meth:`rollback`.
    """

    def __init__(self, g: Graph):
        self.graph = g
        cap = 2 * g.m + 2
        self.arrays = JournalArrays(
            np.zeros(cap, np.int64), np.zeros(cap, np.int64), np.zeros(1, np.int64)
        )
        self._frames: list[int] = []

    @property
    def top(self) -> int:
        return int(self.arrays.ctr[0])

    @property
    def depth(self) -> int:
        return len(self._frames)

    def __len__(self) -> int:
        return self.top

    def push(self) -> None:
        self._frames.append(self.top)

    def pop(self) -> None:
        if not self._frames:
            raise IndexError("pop from a journal with no open frame")
        undo_to(self.graph.arrays, self.arrays, self._frames.pop())

    def rollback(self) -> None:
        """Undo everything, closing all frames."""
        self._frames.clear()
        undo_to(self.graph.arrays, self.arrays, 0)

    def entries(self, start: int = 0) -> list[tuple[str, tuple[int, int]]]:
        g = self.graph
        out = []
        for t in range(start, self.top):
            i = self.arrays.edge[t]
            kind = "removed" if self.arrays.act[t] == REMOVED else "required"
            out.append((kind, (int(g.eu[i]), int(g.ew[i]))))
        return out

    def frame_entries(self) -> list[tuple[str, tuple[int, int]]]:
        """Entries of the innermost open frame."""
        return self.entries(self._frames[-1] if self._frames else 0)


# --------------------------------------------------------------------- kernels


@kernel
def remove_logged(ga, jr, i):
    """Remove edge ``i``; True if an endpoint fell below degree 2."""
    ga.alive[i] = False
    a = ga.eu[i]
    b = ga.ew[i]
    ga.deg[a] -= 1
    ga.deg[b] -= 1
    t = jr.ctr[0]
    jr.act[t] = REMOVED
    jr.edge[t] = i
    jr.ctr[0] = t + 1
    return ga.deg[a] < 2 or ga.deg[b] < 2


@kernel
def require_logged(ga, jr, i):
    """Mark edge ``i`` required; True if an endpoint now has more than two."""
    ga.req[i] = True
    a = ga.eu[i]
    b = ga.ew[i]
    ga.rdeg[a] += 1
    ga.rdeg[b] += 1
    t = jr.ctr[0]
    jr.act[t] = MARKED
    jr.edge[t] = i
    jr.ctr[0] = t + 1
    return ga.rdeg[a] > 2 or ga.rdeg[b] > 2


@kernel
def undo_to(ga, jr, top):
    t = jr.ctr[0]
    while t > top:
        t -= 1
        i = jr.edge[t]
        a = ga.eu[i]
        b = ga.ew[i]
        if jr.act[t] == REMOVED:
            ga.alive[i] = True
            ga.deg[a] += 1
            ga.deg[b] += 1
        else:
            ga.req[i] = False
            ga.rdeg[a] -= 1
            ga.rdeg[b] -= 1
    jr.ctr[0] = t


@kernel
def derive_required_kernel(ga, jr):
    """Require every alive edge at a degree-2 vertex. Returns (marked, contradiction)."""
    marked = 0
    for x in range(ga.v):
        if ga.deg[x] != 2:
            continue
        for k in range(ga.adj_ptr[x], ga.adj_ptr[x + 1]):
            i = ga.adj_eid[k]
            if ga.alive[i] and not ga.req[i]:
                marked += 1
                if require_logged(ga, jr, i):
                    return marked, True
    return marked, False


@kernel
def neighbour_prune_kernel(ga, jr):
    """At each vertex with two required edges drop all its other edges."""
    removed = 0
    low = ga.v >= 3
    for x in range(ga.v):
        r = ga.rdeg[x]
        if r > 2:
            return removed, True
        if r < 2 or ga.deg[x] == 2:
            continue
        for k in range(ga.adj_ptr[x], ga.adj_ptr[x + 1]):
            i = ga.adj_eid[k]
            if ga.alive[i] and not ga.req[i]:
                removed += 1
                if remove_logged(ga, jr, i) and low:
                    return removed, True
    return removed, False


@kernel
def _required_step(ga, x, skip):
    """Other endpoint and edge of a required edge at ``x`` other than ``skip``."""
    for k in range(ga.adj_ptr[x], ga.adj_ptr[x + 1]):
        i = ga.adj_eid[k]
        if i != skip and ga.req[i]:
            return ga.adj_nbr[k], i
    return -1, -1


@kernel
def path_prune_kernel(ga, jr, seen):
    """Remove the closing edge of every required chain spanning fewer than v vertices."""
    v = ga.v
    removed = 0
    for x in range(v):
        if ga.rdeg[x] > 2:
            return removed, True
        seen[x] = False
    for u in range(v):
        if ga.rdeg[u] != 1 or seen[u]:
            continue
        seen[u] = True
        x = u
        last = -1
        k = 1
        while True:
            y, i = _required_step(ga, x, last)
            if y < 0:
                break
            x = y
            last = i
            k += 1
            seen[x] = True
        if k >= v:
            continue
        for s in range(ga.adj_ptr[u], ga.adj_ptr[u + 1]):
            if ga.adj_nbr[s] == x:
                i = ga.adj_eid[s]
                if ga.alive[i] and not ga.req[i]:
                    removed += 1
                    if remove_logged(ga, jr, i) and v >= 3:
                        return removed, True
                break
    return removed, False


@kernel
def solution_prune_kernel(ga, jr, path, plen):
    """Strip the second-last path vertex down to its two path edges."""
    removed = 0
    if plen < 3:
        return removed, False
    x = path[plen - 2]
    a = path[plen - 3]
    b = path[plen - 1]
    for k in range(ga.adj_ptr[x], ga.adj_ptr[x + 1]):
        y = ga.adj_nbr[k]
        i = ga.adj_eid[k]
        if y == a or y == b or not ga.alive[i]:
            continue
        if ga.req[i]:
            return removed, True
        removed += 1
        if remove_logged(ga, jr, i):
            return removed, True
    return removed, False


@kernel
def fixpoint_kernel(ga, jr, use_neighbour, use_path, seen):
    """Alternate derivation, neighbour and path pruning until nothing changes.

    Returns (removed, marked, contradiction, iterations).
    """
    removed = 0
    marked = 0
    it = 0
    while True:
        it += 1
        n, bad = derive_required_kernel(ga, jr)
        marked += n
        if bad:
            return removed, marked, True, it
        r = 0
        if use_neighbour:
            r1, bad = neighbour_prune_kernel(ga, jr)
            r += r1
            if bad:
                return removed + r, marked, True, it
        if use_path:
            r2, bad = path_prune_kernel(ga, jr, seen)
            r += r2
            if bad:
                return removed + r, marked, True, it
        removed += r
        if n == 0 and r == 0:
            return removed, marked, False, it


# ---------------------------------------------------------------- public API


def _check_journal(g: Graph, journal: UndoJournal) -> None:
    if journal.graph is not g:
        raise GraphError("journal belongs to a different graph")


def derive_required(g: Graph, journal: UndoJournal) -> PruneReport:
    _check_journal(g, journal)
    n, bad = derive_required_kernel(g.arrays, journal.arrays)
    return PruneReport(edges_required_added=int(n), contradiction=bool(bad), iterations=1)


def neighbour_prune(g: Graph, journal: UndoJournal) -> PruneReport:
    _check_journal(g, journal)
    r, bad = neighbour_prune_kernel(g.arrays, journal.arrays)
    return PruneReport(edges_removed=int(r), contradiction=bool(bad), iterations=1)


def path_prune(g: Graph, journal: UndoJournal) -> PruneReport:
    _check_journal(g, journal)
    r, bad = path_prune_kernel(g.arrays, journal.arrays, np.zeros(g.v, np.bool_))
    return PruneReport(edges_removed=int(r), contradiction=bool(bad), iterations=1)


def solution_prune(g: Graph, path: Sequence[int], journal: UndoJournal) -> PruneReport:
    """Remove every non-path edge of the second-last vertex of ``path``.

    Only an interior vertex is stripped: with a two-vertex path the second-last
    vertex is the start, whose closing edge is still open, so nothing happens.
    """
    _check_journal(g, journal)
    arr = np.asarray(list(path), dtype=np.int64)
    r, bad = solution_prune_kernel(g.arrays, journal.arrays, arr, len(arr))
    return PruneReport(edges_removed=int(r), contradiction=bool(bad), iterations=1)


def prune_to_fixpoint(
    g: Graph, which: Iterable[str], journal: UndoJournal
) -> PruneReport:
    _check_journal(g, journal)
    which = set(which)
    unknown = which - {"neighbour", "path"}
    if unknown:
        raise ValueError(f"unknown pruning routine(s): {sorted(unknown)}")
    r, n, bad, it = fixpoint_kernel(
        g.arrays, journal.arrays, "neighbour" in which, "path" in which, np.zeros(g.v, np.bool_)
    )
    return PruneReport(int(r), int(n), bool(bad), int(it))
