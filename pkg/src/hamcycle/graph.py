"""Mutable undirected simple graph with edge removal/restoration and required marks.

Edges are stored once under a canonical id ``(min(a, b), max(a, b))``; the
adjacency structure is a static CSR layout sorted by neighbour id, so the
live neighbour order of a vertex is always ascending id no matter in which
order edges were removed and restored.
"""

from __future__ import annotations

import hashlib
import json
from collections import namedtuple
from collections.abc import Iterable, Sequence
from os import PathLike
from pathlib import Path

import numpy as np

__all__ = [
    "Graph",
    "GraphError",
    "edge_id",
    "new_graph",
    "remove_edge",
    "restore_edge",
    "random_graph",
    "mean_degree",
    "read_graph",
    "write_graph",
    "complete_graph",
    "cycle_graph",
    "path_graph",
]

EdgeId = tuple[int, int]

# Flat view handed to the compiled kernels. All members alias the Graph's
# own arrays, so kernel mutations are Graph mutations.
GraphArrays = namedtuple(
    "GraphArrays",
    "v eu ew alive req deg rdeg adj_ptr adj_nbr adj_eid",
)


class GraphError(ValueError):
    """Invalid graph construction or an illegal mutation."""


def edge_id(a: int, b: int) -> EdgeId:
    """Canonical id of the undirected edge {a, b}."""
    a, b = int(a), int(b)
    if a == b:
        raise GraphError(f"self-loop ({a}, {b})")
    return (a, b) if a < b else (b, a)


class Graph:
    """Undirected simple graph on vertices ``0..v-1``.

    Attributes
    ----------
    v : int
        Vertex count.
    eu, ew : ndarray of int64, shape (m,)
        Canonical endpoints of every constructed edge, ``eu < ew``, sorted
        lexicographically.
    alive : ndarray of bool, shape (m,)
        Edge presence flags.
    required : ndarray of bool, shape (m,)
        Marks for edges that must be in any Hamiltonian cycle.
    degree : ndarray of int64, shape (v,)
        Live degree (alive incident edges) per vertex.
    required_degree : ndarray of int64, shape (v,)
        Number of required incident edges per vertex.
    """

    def __init__(self, v: int, edges: Iterable[Sequence[int]] = ()):
        v = int(v)
        if v < 1:
            raise GraphError(f"vertex count must be >= 1, got {v}")
        seen: set[EdgeId] = set()
        for pair in edges:
            if len(pair) != 2:
                raise GraphError(f"edge {tuple(pair)!r} is not a vertex pair")
            a, b = int(pair[0]), int(pair[1])
            if not (0 <= a < v and 0 <= b < v):
                raise GraphError(f"endpoint out of range in edge ({a}, {b}) for v={v}")
            if a == b:
                raise GraphError(f"self-loop ({a}, {b})")
            e = (a, b) if a < b else (b, a)
            if e in seen:
                raise GraphError(f"duplicate edge ({a}, {b})")
            seen.add(e)
        canon = sorted(seen)
        m = len(canon)

        self.v = v
        self.eu = np.array([a for a, _ in canon], dtype=np.int64)
        self.ew = np.array([b for _, b in canon], dtype=np.int64)
        self.alive = np.ones(m, dtype=np.bool_)
        self.required = np.zeros(m, dtype=np.bool_)
        self.degree = np.zeros(v, dtype=np.int64)
        self.required_degree = np.zeros(v, dtype=np.int64)
        self._index = {e: i for i, e in enumerate(canon)}

        # CSR adjacency, neighbours ascending (the canonical data-structure order)
        src = np.concatenate([self.eu, self.ew])
        dst = np.concatenate([self.ew, self.eu])
        eid = np.concatenate([np.arange(m), np.arange(m)]).astype(np.int64)
        order = np.lexsort((dst, src))
        self.adj_nbr = dst[order].astype(np.int64)
        self.adj_eid = eid[order]
        counts = np.bincount(src, minlength=v).astype(np.int64)
        self.adj_ptr = np.zeros(v + 1, dtype=np.int64)
        np.cumsum(counts, out=self.adj_ptr[1:])
        self.degree[:] = counts

        self.arrays = GraphArrays(
            v, self.eu, self.ew, self.alive, self.required, self.degree,
            self.required_degree, self.adj_ptr, self.adj_nbr, self.adj_eid,
        )

    # ------------------------------------------------------------------ queries

    @property
    def m(self) -> int:
        """Number of constructed edges (alive or not)."""
        return len(self.eu)

    @property
    def edge_count(self) -> int:
        """Number of alive edges."""
        return int(self.alive.sum())

    def index(self, e: Sequence[int]) -> int:
        """Internal index of edge ``e``; raises if it was never constructed."""
        key = edge_id(e[0], e[1])
        try:
            return self._index[key]
        except KeyError:
            raise GraphError(f"edge {key} is not part of the constructed graph") from None

    def has_edge(self, a: int, b: int) -> bool:
        i = self._index.get(edge_id(a, b))
        return i is not None and bool(self.alive[i])

    def is_required(self, a: int, b: int) -> bool:
        return bool(self.required[self.index((a, b))])

    def edges(self) -> list[EdgeId]:
        """Alive edges in canonical lexicographic order."""
        idx = np.flatnonzero(self.alive)
        return [(int(self.eu[i]), int(self.ew[i])) for i in idx]

    def required_edges(self) -> list[EdgeId]:
        idx = np.flatnonzero(self.required)
        return [(int(self.eu[i]), int(self.ew[i])) for i in idx]

    def neighbors(self, x: int) -> list[int]:
        """Live neighbours of ``x`` in data-structure (ascending id) order."""
        lo, hi = self.adj_ptr[x], self.adj_ptr[x + 1]
        return [int(y) for y, i in zip(self.adj_nbr[lo:hi], self.adj_eid[lo:hi]) if self.alive[i]]

    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(x) for x in range(self.v)]

    # ---------------------------------------------------------------- mutation

    def remove_edge(self, e: Sequence[int]) -> None:
        i = self.index(e)
        if not self.alive[i]:
            raise GraphError(f"edge {edge_id(*e)} is not alive")
        if self.required[i]:
            raise GraphError(f"cannot remove required edge {edge_id(*e)}")
        self.alive[i] = False
        self.degree[self.eu[i]] -= 1
        self.degree[self.ew[i]] -= 1

    def restore_edge(self, e: Sequence[int]) -> None:
        i = self.index(e)
        if self.alive[i]:
            raise GraphError(f"edge {edge_id(*e)} is already alive")
        self.alive[i] = True
        self.degree[self.eu[i]] += 1
        self.degree[self.ew[i]] += 1

    def require_edge(self, e: Sequence[int]) -> None:
        """Mark an alive edge as required (idempotent)."""
        i = self.index(e)
        if not self.alive[i]:
            raise GraphError(f"cannot require dead edge {edge_id(*e)}")
        if not self.required[i]:
            self.required[i] = True
            self.required_degree[self.eu[i]] += 1
            self.required_degree[self.ew[i]] += 1

    def unrequire_edge(self, e: Sequence[int]) -> None:
        i = self.index(e)
        if self.required[i]:
            self.required[i] = False
            self.required_degree[self.eu[i]] -= 1
            self.required_degree[self.ew[i]] -= 1

    # -------------------------------------------------------------- comparison

    def copy(self) -> Graph:
        g = Graph.__new__(Graph)
        g.v = self.v
        g.eu, g.ew = self.eu, self.ew  # immutable after construction
        g.alive = self.alive.copy()
        g.required = self.required.copy()
        g.degree = self.degree.copy()
        g.required_degree = self.required_degree.copy()
        g._index = self._index
        g.adj_ptr, g.adj_nbr, g.adj_eid = self.adj_ptr, self.adj_nbr, self.adj_eid
        g.arrays = GraphArrays(
            g.v, g.eu, g.ew, g.alive, g.required, g.degree,
            g.required_degree, g.adj_ptr, g.adj_nbr, g.adj_eid,
        )
        return g

    def fingerprint(self) -> str:
        """SHA-256 over every mutable and structural field."""
        h = hashlib.sha256()
        h.update(str(self.v).encode())
        for arr in (self.eu, self.ew, self.alive, self.required, self.degree,
                    self.required_degree, self.adj_ptr, self.adj_nbr, self.adj_eid):
            h.update(np.ascontiguousarray(arr).tobytes())
        return h.hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.v == other.v
            and np.array_equal(self.eu, other.eu)
            and np.array_equal(self.ew, other.ew)
            and np.array_equal(self.alive, other.alive)
            and np.array_equal(self.required, other.required)
            and np.array_equal(self.degree, other.degree)
            and np.array_equal(self.required_degree, other.required_degree)
        )

    __hash__ = None  # mutable

    def __repr__(self) -> str:
        return f"Graph(v={self.v}, e={self.edge_count})"

    # ---------------------------------------------------------------- file I/O

    def to_json(self) -> str:
        return json.dumps({"v": self.v, "edges": [list(e) for e in self.edges()]},
                          separators=(",", ":"))


def new_graph(v: int, edges: Iterable[Sequence[int]]) -> Graph:
    return Graph(v, edges)


def remove_edge(g: Graph, e: Sequence[int]) -> None:
    g.remove_edge(e)


def restore_edge(g: Graph, e: Sequence[int]) -> None:
    g.restore_edge(e)


def mean_degree(g: Graph) -> float:
    return 2.0 * g.edge_count / g.v


def random_graph(v: int, e: int, seed: int | np.random.SeedSequence | None) -> Graph:
    """Uniform random graph with exactly ``e`` edges (G(n, m) model).

    ``e`` positions are drawn without replacement from the lexicographic list
    of all ``v(v-1)/2`` vertex pairs, so every ``e``-edge graph on labelled
    vertices is equally likely.
    """
    npairs = v * (v - 1) // 2
    if not 0 <= e <= npairs:
        raise GraphError(f"edge count {e} out of range [0, {npairs}] for v={v}")
    rng = np.random.default_rng(seed)
    pick = np.sort(rng.choice(npairs, size=e, replace=False))
    iu, iw = np.triu_indices(v, 1)
    return Graph(v, zip(iu[pick].tolist(), iw[pick].tolist()))


def complete_graph(v: int) -> Graph:
    return Graph(v, [(a, b) for a in range(v) for b in range(a + 1, v)])


def cycle_graph(v: int) -> Graph:
    return Graph(v, [(i, (i + 1) % v) for i in range(v)])


def path_graph(v: int) -> Graph:
    return Graph(v, [(i, i + 1) for i in range(v - 1)])


def parse_graph(text: str) -> Graph:
    """Parse canonical JSON or a whitespace edge list ("v e" header, then pairs)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(stripped)
        try:
            return Graph(data["v"], data["edges"])
        except KeyError as exc:
            raise GraphError(f"graph JSON missing key {exc}") from None
    tokens = stripped.split()
    if len(tokens) < 2:
        raise GraphError("edge list needs a 'v e' header line")
    try:
        nums = [int(t) for t in tokens]
    except ValueError as exc:
        raise GraphError(f"non-integer token in edge list: {exc}") from None
    v, e = nums[0], nums[1]
    body = nums[2:]
    if len(body) != 2 * e:
        raise GraphError(f"header declares {e} edges but {len(body) / 2:g} pairs follow")
    return Graph(v, zip(body[0::2], body[1::2]))


def read_graph(path: str | PathLike) -> Graph:
    return parse_graph(Path(path).read_text())


def write_graph(g: Graph, path: str | PathLike) -> None:
    Path(path).write_text(g.to_json() + "\n")
