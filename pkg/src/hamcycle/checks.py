"""Non-Hamiltonicity checks.

Every check answers either "surely non-Hamiltonian" (``decided``) or
"undecided"; none can certify a Hamiltonian cycle.

The kernels work on a *residual* graph so that the solver can run them in the
middle of a search: interior vertices of the partial path are ``consumed``
and dropped, and the path itself is contracted into a single virtual edge
between its two endpoints ``(vs, vh)``. A Hamiltonian cycle extending the
path exists only if the residual graph is Hamiltonian, so each check stays
sound. With nothing consumed and no virtual edge the residual graph is the
whole graph.
"""

from __future__ import annotations

import enum
from collections import namedtuple
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from ._jit import kernel

from .graph import Graph

__all__ = [
    "CheckReason",
    "CheckVerdict",
    "degree_check",
    "premature_closure_check",
    "disconnectedness_check",
    "one_connectedness_check",
    "articulation_points",
]


class CheckReason(str, enum.Enum):
    DEGREE = "degree"
    PREMATURE_CLOSURE = "premature_closure"
    DISCONNECTED = "disconnected"
    ONE_CONNECTED = "one_connected"


@dataclass(frozen=True)
class CheckVerdict:
    decided: bool
    reason: CheckReason | None = None

    def __post_init__(self):
        if not self.decided and self.reason is not None:
            raise ValueError("an undecided verdict carries no reason")

    def __bool__(self) -> bool:
        return self.decided


UNDECIDED = CheckVerdict(False)

CheckScratch = namedtuple("CheckScratch", "queue flag disc low parent pos uf_parent uf_size uf_edges")


def new_scratch(v: int) -> CheckScratch:
    return CheckScratch(
        queue=np.zeros(v, np.int64),
        flag=np.zeros(v, np.bool_),
        disc=np.zeros(v, np.int64),
        low=np.zeros(v, np.int64),
        parent=np.zeros(v, np.int64),
        pos=np.zeros(v, np.int64),
        uf_parent=np.zeros(v, np.int64),
        uf_size=np.zeros(v, np.int64),
        uf_edges=np.zeros(v, np.int64),
    )


# --------------------------------------------------------------------- kernels


@kernel
def _res_degree(ga, consumed, vs, vh, x):
    """Degree of ``x`` in the residual graph."""
    d = 0
    for k in range(ga.adj_ptr[x], ga.adj_ptr[x + 1]):
        y = ga.adj_nbr[k]
        if not ga.alive[ga.adj_eid[k]] or consumed[y]:
            continue
        if vh >= 0 and ((x == vs and y == vh) or (x == vh and y == vs)):
            continue
        d += 1
    if vh >= 0 and (x == vs or x == vh):
        d += 1
    return d


@kernel
def degree_kernel(ga, consumed, vs, vh):
    n = 0
    for x in range(ga.v):
        if not consumed[x]:
            n += 1
    if n <= 2:
        return True
    for x in range(ga.v):
        if not consumed[x] and _res_degree(ga, consumed, vs, vh, x) <= 1:
            return True
    return False


@kernel
def _uf_find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


@kernel
def premature_closure_kernel(ga, sc):
    """True iff the required edges contain a cycle shorter than v."""
    v = ga.v
    parent, size, nedges = sc.uf_parent, sc.uf_size, sc.uf_edges
    for x in range(v):
        parent[x] = x
        size[x] = 1
        nedges[x] = 0
    cyclic = False
    for i in range(len(ga.eu)):
        if not ga.req[i]:
            continue
        ra = _uf_find(parent, ga.eu[i])
        rb = _uf_find(parent, ga.ew[i])
        if ra == rb:
            nedges[ra] += 1
            cyclic = True
        else:
            if size[ra] < size[rb]:
                ra, rb = rb, ra
            parent[rb] = ra
            size[ra] += size[rb]
            nedges[ra] += nedges[rb] + 1
    if not cyclic:
        return False
    for x in range(v):
        if parent[x] != x or nedges[x] < size[x]:
            continue
        if size[x] < v:
            return True
        # spanning and cyclic: its only cycle has length v iff it is a plain v-cycle
        if nedges[x] != v:
            return True
        for y in range(v):
            if ga.rdeg[y] != 2:
                return True
    return False


@kernel
def _res_size(consumed):
    n = 0
    for x in range(len(consumed)):
        if not consumed[x]:
            n += 1
    return n


@kernel
def disconnected_kernel(ga, consumed, vs, vh, root, sc):
    """Worklist sweep from ``root``: grow a list of found vertices, then count it."""
    queue, found = sc.queue, sc.flag
    for x in range(ga.v):
        found[x] = False
    queue[0] = root
    found[root] = True
    tail = 1
    head = 0
    while head < tail:
        x = queue[head]
        head += 1
        for k in range(ga.adj_ptr[x], ga.adj_ptr[x + 1]):
            y = ga.adj_nbr[k]
            if found[y] or consumed[y] or not ga.alive[ga.adj_eid[k]]:
                continue
            found[y] = True
            queue[tail] = y
            tail += 1
        if vh >= 0:
            y = -1
            if x == vs:
                y = vh
            elif x == vh:
                y = vs
            if y >= 0 and not found[y]:
                found[y] = True
                queue[tail] = y
                tail += 1
    return tail < _res_size(consumed)


@kernel
def _res_next(ga, consumed, vs, vh, x, k):
    """Next residual neighbour of ``x`` from adjacency slot ``k`` onward.

    Slot ``adj_ptr[x+1]`` stands for the virtual edge. Returns (neighbour, next slot),
    neighbour -1 when exhausted.
    """
    end = ga.adj_ptr[x + 1]
    while k < end:
        y = ga.adj_nbr[k]
        ok = ga.alive[ga.adj_eid[k]] and not consumed[y]
        if ok and vh >= 0 and ((x == vs and y == vh) or (x == vh and y == vs)):
            ok = False
        k += 1
        if ok:
            return y, k
    if k == end and vh >= 0 and (x == vs or x == vh):
        return (vh if x == vs else vs), k + 1
    return -1, k + 1


@kernel
def articulation_kernel(ga, consumed, vs, vh, sc, out):
    """Iterative low-link DFS over every residual component.

    Flags articulation points in ``out`` (if non-empty) and returns whether any exist.
    """
    disc, low, parent, pos, stack = sc.disc, sc.low, sc.parent, sc.pos, sc.queue
    record = len(out) > 0
    for x in range(ga.v):
        disc[x] = -1
    t = 0
    found = False
    for r in range(ga.v):
        if consumed[r] or disc[r] >= 0:
            continue
        disc[r] = low[r] = t
        t += 1
        parent[r] = -1
        pos[r] = ga.adj_ptr[r]
        stack[0] = r
        sp = 1
        root_children = 0
        while sp > 0:
            x = stack[sp - 1]
            y, nk = _res_next(ga, consumed, vs, vh, x, pos[x])
            pos[x] = nk
            if y >= 0:
                if disc[y] < 0:
                    parent[y] = x
                    disc[y] = low[y] = t
                    t += 1
                    pos[y] = ga.adj_ptr[y]
                    stack[sp] = y
                    sp += 1
                    if x == r:
                        root_children += 1
                elif y != parent[x] and disc[y] < low[x]:
                    low[x] = disc[y]
            else:
                sp -= 1
                p = parent[x]
                if p >= 0:
                    if low[x] < low[p]:
                        low[p] = low[x]
                    if p != r and low[x] >= disc[p]:
                        found = True
                        if record:
                            out[p] = True
        if root_children >= 2:
            found = True
            if record:
                out[r] = True
    return found


# ---------------------------------------------------------------- public API


def _residual(g: Graph, path: Sequence[int] | None):
    consumed = np.zeros(g.v, np.bool_)
    if not path:
        return consumed, -1, -1, 0
    path = [int(x) for x in path]
    if len(path) >= g.v:
        raise ValueError("path covers every vertex; only the closure test applies")
    for x in path[1:-1]:
        consumed[x] = True
    if len(path) >= 2:
        return consumed, path[0], path[-1], path[0]
    return consumed, -1, -1, path[0]


def degree_check(g: Graph, path: Sequence[int] | None = None) -> CheckVerdict:
    """Decided iff some (residual) vertex has live degree <= 1, or fewer than 3 vertices remain."""
    consumed, vs, vh, _ = _residual(g, path)
    if degree_kernel(g.arrays, consumed, vs, vh):
        return CheckVerdict(True, CheckReason.DEGREE)
    return UNDECIDED


def premature_closure_check(g: Graph) -> CheckVerdict:
    """Decided iff the required edges close a loop on fewer than v vertices."""
    if premature_closure_kernel(g.arrays, new_scratch(g.v)):
        return CheckVerdict(True, CheckReason.PREMATURE_CLOSURE)
    return UNDECIDED


def disconnectedness_check(g: Graph, path: Sequence[int] | None = None) -> CheckVerdict:
    consumed, vs, vh, root = _residual(g, path)
    if disconnected_kernel(g.arrays, consumed, vs, vh, root, new_scratch(g.v)):
        return CheckVerdict(True, CheckReason.DISCONNECTED)
    return UNDECIDED


def one_connectedness_check(g: Graph, path: Sequence[int] | None = None) -> CheckVerdict:
    consumed, vs, vh, _ = _residual(g, path)
    if articulation_kernel(g.arrays, consumed, vs, vh, new_scratch(g.v), np.zeros(0, np.bool_)):
        return CheckVerdict(True, CheckReason.ONE_CONNECTED)
    return UNDECIDED


def articulation_points(g: Graph) -> set[int]:
    """All articulation points of the live graph (low-link method)."""
    out = np.zeros(g.v, np.bool_)
    consumed = np.zeros(g.v, np.bool_)
    articulation_kernel(g.arrays, consumed, -1, -1, new_scratch(g.v), out)
    return {int(x) for x in np.flatnonzero(out)}
