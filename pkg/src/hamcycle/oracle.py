"""Brute-force ground truth for small graphs.

Nothing here shares code with the solver, pruning or checks; the routines
work on plain bitmask adjacency built from the graph's alive edge list.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence

from .graph import Graph, edge_id

__all__ = [
    "OracleError",
    "MAX_V",
    "is_hamiltonian_bruteforce",
    "count_hamiltonian_cycles",
    "hamiltonian_cycles",
    "has_hamiltonian_cycle_through",
    "articulation_points_bruteforce",
    "canonical_cycle",
]

MAX_V = 12
MAX_V_ARTICULATION = 1000


class OracleError(ValueError):
    pass


def _masks(v: int, edges: Iterable[tuple[int, int]]) -> list[int]:
    adj = [0] * v
    for a, b in edges:
        adj[a] |= 1 << b
        adj[b] |= 1 << a
    return adj


def _guard(g: Graph) -> None:
    if g.v > MAX_V:
        raise OracleError(f"brute force refused for v={g.v} > {MAX_V}")


def is_hamiltonian_bruteforce(g: Graph) -> bool:
    """Try vertex orders starting at 0, abandoning a prefix as soon as it breaks adjacency.

    Dead (visited-set, end-vertex) states are remembered so each is explored once.
    """
    _guard(g)
    v = g.v
    if v < 3:
        return False
    adj = _masks(v, g.edges())
    full = (1 << v) - 1
    dead: set[tuple[int, int]] = set()

    def extend(mask: int, x: int) -> bool:
        if mask == full:
            return bool(adj[x] & 1)
        if (mask, x) in dead:
            return False
        free = adj[x] & ~mask
        while free:
            bit = free & -free
            free ^= bit
            if extend(mask | bit, bit.bit_length() - 1):
                return True
        dead.add((mask, x))
        return False

    return extend(1, 0)


def canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    """Rotate to start at the minimum vertex; orient so the second vertex is below the last."""
    c = list(cycle)
    k = c.index(min(c))
    c = c[k:] + c[:k]
    if len(c) > 2 and c[1] > c[-1]:
        c = [c[0]] + c[:0:-1]
    return tuple(c)


def _cycles(v: int, adj: list[int], first: tuple[int, int] | None = None,
            required: Sequence[tuple[int, int]] = ()) -> Iterator[list[int]]:
    """Directed Hamiltonian cycles as vertex orders.

    Without ``first`` every cycle is produced starting at 0 in both directions.
    With ``first = (a, b)`` only cycles traversing a -> b first are produced.
    Cycles missing any ``required`` edge are skipped; a prefix is abandoned as
    soon as some required edge between placed vertices was not traversed.
    """
    if v < 3:
        return
    partners: list[list[int]] = [[] for _ in range(v)]
    for a, b in required:
        if not (adj[a] >> b) & 1:
            return
        partners[a].append(b)
        partners[b].append(a)
    if any(len(p) > 2 for p in partners):
        return
    start = first[0] if first else 0
    order = [start]
    full = (1 << v) - 1
    # placement already enforces every required edge, so what can still
    # follow depends only on (visited set, head): a state that produced no
    # cycle once never will
    dead: set[tuple[int, int]] = set()

    def placeable(y: int, prev: int, mask: int, last: bool) -> bool:
        for z in partners[y]:
            if z == prev or not (mask >> z) & 1:
                continue
            if z == start and last:
                continue
            return False
        return True

    def rec(mask: int, x: int) -> Iterator[list[int]]:
        if mask == full:
            if adj[x] & (1 << start):
                yield order
            return
        if (mask, x) in dead:
            return
        hit = False
        free = adj[x] & ~mask
        while free:
            bit = free & -free
            free ^= bit
            y = bit.bit_length() - 1
            nmask = mask | bit
            if not placeable(y, x, nmask, nmask == full):
                continue
            order.append(y)
            for c in rec(nmask, y):
                hit = True
                yield c
            order.pop()
        if not hit:
            dead.add((mask, x))

    if first:
        a, b = first
        if not (adj[a] >> b) & 1:
            return
        if not placeable(b, a, (1 << a) | (1 << b), v == 2):
            return
        order.append(b)
        for c in rec((1 << a) | (1 << b), b):
            if _has_all(c, required):
                yield list(c)
        return
    for c in rec(1 << start, start):
        if _has_all(c, required):
            yield list(c)


def _has_all(cycle: Sequence[int], required: Sequence[tuple[int, int]]) -> bool:
    if not required:
        return True
    on = {edge_id(a, b) for a, b in zip(cycle, list(cycle[1:]) + [cycle[0]])}
    return all(edge_id(a, b) in on for a, b in required)


def hamiltonian_cycles(g: Graph, through: Iterable[Sequence[int]] = ()) -> set[tuple[int, ...]]:
    """All Hamiltonian cycles (canonical form) containing every edge in ``through``."""
    _guard(g)
    req = [edge_id(a, b) for a, b in through]
    adj = _masks(g.v, g.edges())
    return {canonical_cycle(c) for c in _cycles(g.v, adj, required=req)}


def count_hamiltonian_cycles(g: Graph, through: Iterable[Sequence[int]] = ()) -> int:
    """Number of distinct Hamiltonian cycles, counted up to rotation and reflection."""
    _guard(g)
    req = [edge_id(a, b) for a, b in through]
    adj = _masks(g.v, g.edges())
    directed = sum(1 for _ in _cycles(g.v, adj, required=req))
    return directed // 2


def has_hamiltonian_cycle_through(g: Graph, through: Iterable[Sequence[int]],
                                  alive: Iterable[Sequence[int]] | None = None) -> bool:
    """Whether some Hamiltonian cycle uses every edge in ``through``.

    ``alive`` substitutes an explicit edge list for the graph's live edges.
    """
    _guard(g)
    req = [edge_id(a, b) for a, b in through]
    edges = g.edges() if alive is None else [edge_id(a, b) for a, b in alive]
    adj = _masks(g.v, edges)
    if not req:
        return any(True for _ in _cycles(g.v, adj))
    for _ in _cycles(g.v, adj, first=req[0], required=req):
        return True
    return False


def _components(v: int, adj: list[int], skip: int = -1) -> int:
    seen = 0 if skip < 0 else 1 << skip
    comps = 0
    for s in range(v):
        if (seen >> s) & 1:
            continue
        comps += 1
        frontier = 1 << s
        seen |= frontier
        while frontier:
            nxt = 0
            f = frontier
            while f:
                bit = f & -f
                f ^= bit
                nxt |= adj[bit.bit_length() - 1]
            frontier = nxt & ~seen
            seen |= frontier
    return comps


def articulation_points_bruteforce(g: Graph) -> set[int]:
    """Vertices whose deletion increases the number of connected components."""
    if g.v > MAX_V_ARTICULATION:
        raise OracleError(f"articulation oracle refused for v={g.v}")
    v = g.v
    adj = _masks(v, g.edges())
    base = _components(v, adj)
    out = set()
    for x in range(v):
        # an isolated vertex vanishing lowers the count by one; that is not a cut
        trimmed = [a & ~(1 << x) for a in adj]
        if _components(v, trimmed, skip=x) > base - (1 if adj[x] == 0 else 0):
            out.add(x)
    return out
