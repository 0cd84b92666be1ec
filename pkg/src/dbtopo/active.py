"""The S^2 shortest-shortest-path query strategy and the passive baseline.

The query loop alternates a uniform phase (random unqueried vertex) with a
bisection phase that repeatedly queries the midpoint of the shortest path
between oppositely-labeled vertices, removing discovered cut edges from a
working copy of the graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datasets import LabeledPointCloud, LabelOracle
from .errors import InvalidParameterError, ParseError
from .graph import NeighborGraph

__all__ = [
    "QueryLog",
    "mssp",
    "s2_run",
    "passive_run",
    "save_query_csv",
    "load_query_csv",
]


@dataclass(frozen=True)
class QueryLog:
    """Ordered (vertex, label, phase) record plus the cut edges found."""

    entries: tuple[tuple[int, int, str], ...]
    budget: int
    found_cut_edges: tuple[tuple[int, int], ...]

    def vertices(self) -> list[int]:
        return [v for v, _, _ in self.entries]

    def labels(self) -> dict[int, int]:
        return {v: y for v, y, _ in self.entries}


class _GraphWorkspace:
    """Mutable CSR view of a NeighborGraph with per-edge-slot liveness.

    BFS passes are vectorized over frontier layers; edge removal flips the
    alive mask in both directions without touching the caller's graph.
    """

    def __init__(self, graph: NeighborGraph) -> None:
        self.n = graph.vertex_count
        degrees = np.fromiter(
            (len(row) for row in graph.adjacency), dtype=np.int64, count=self.n
        )
        self.indptr = np.zeros(self.n + 1, dtype=np.int64)
        np.cumsum(degrees, out=self.indptr[1:])
        if self.n:
            self.indices = np.concatenate(
                [np.asarray(row, dtype=np.int64) for row in graph.adjacency]
                or [np.empty(0, dtype=np.int64)]
            )
        else:
            self.indices = np.empty(0, dtype=np.int64)
        self.alive = np.ones(self.indices.shape[0], dtype=bool)

    def _slot(self, u: int, v: int) -> int:
        lo, hi = self.indptr[u], self.indptr[u + 1]
        pos = lo + np.searchsorted(self.indices[lo:hi], v)
        return int(pos)

    def remove_edge(self, u: int, v: int) -> None:
        self.alive[self._slot(u, v)] = False
        self.alive[self._slot(v, u)] = False

    def live_neighbors(self, u: int) -> np.ndarray:
        lo, hi = self.indptr[u], self.indptr[u + 1]
        return self.indices[lo:hi][self.alive[lo:hi]]

    def _frontier_slots(self, frontier: np.ndarray) -> np.ndarray:
        starts = self.indptr[frontier]
        counts = self.indptr[frontier + 1] - starts
        total = int(counts.sum())
        if total == 0:
            return np.empty(0, dtype=np.int64)
        offsets = np.repeat(np.cumsum(counts) - counts, counts)
        return np.repeat(starts, counts) + (np.arange(total) - offsets)

    def multi_source_bfs(self, sources: np.ndarray, max_depth: int | None = None) -> np.ndarray:
        """Distances from the source set over live edges; -1 unreachable."""
        dist = np.full(self.n, -1, dtype=np.int64)
        frontier = np.asarray(sources, dtype=np.int64)
        dist[frontier] = 0
        depth = 0
        while frontier.size and (max_depth is None or depth < max_depth):
            slots = self._frontier_slots(frontier)
            slots = slots[self.alive[slots]]
            nbrs = self.indices[slots]
            nbrs = nbrs[dist[nbrs] < 0]
            if nbrs.size == 0:
                break
            frontier = np.unique(nbrs)
            depth += 1
            dist[frontier] = depth
        return dist

    def lexmin_shortest_path(self, src: int, dst: int) -> list[int] | None:
        dist = self.multi_source_bfs(np.asarray([dst], dtype=np.int64))
        if dist[src] < 0:
            return None
        path = [src]
        cur = src
        while cur != dst:
            nbrs = self.live_neighbors(cur)
            cur = int(nbrs[dist[nbrs] == dist[cur] - 1].min())
            path.append(cur)
        return path


def _mssp_pair(
    ws: _GraphWorkspace, labeled: dict[int, int]
) -> tuple[int, int, int] | None:
    """Shortest-path oppositely-labeled pair, ties by smallest (i, j), i < j.

    Returns (i, j, path_length) or None when no opposite pair is connected.
    """
    class0 = np.asarray(sorted(v for v, y in labeled.items() if y == 0), dtype=np.int64)
    class1 = np.asarray(sorted(v for v, y in labeled.items() if y == 1), dtype=np.int64)
    if class0.size == 0 or class1.size == 0:
        return None
    dist0 = ws.multi_source_bfs(class0)
    reach = dist0[class1]
    reach = reach[reach >= 0]
    if reach.size == 0:
        return None
    best = int(reach.min())
    # Endpoints of some best-length pair; the smallest such vertex is the
    # lexicographic pair's first element, its smallest best-length partner
    # the second (any smaller partner would itself be a smaller endpoint).
    dist1 = ws.multi_source_bfs(class1)
    endpoints = [int(v) for v in class0 if dist1[v] == best]
    endpoints += [int(v) for v in class1 if dist0[v] == best]
    a = min(endpoints)
    d_from_a = ws.multi_source_bfs(np.asarray([a], dtype=np.int64), max_depth=best)
    opposite = class1 if labeled[a] == 0 else class0
    partners = opposite[d_from_a[opposite] == best]
    b = int(partners.min())
    return (a, b, best) if a < b else (b, a, best)


def mssp(graph: NeighborGraph, labeled: dict[int, int]) -> int | None:
    """Midpoint of the shortest shortest path between opposite labels.

    Returns the vertex at position floor(L/2) along the lexicographically
    smallest such path, or None when no oppositely-labeled pair is connected
    or the shortest pair is already a cut edge (path length 1).
    """
    ws = _GraphWorkspace(graph)
    return _mssp_workspace(ws, labeled)


def _mssp_workspace(ws: _GraphWorkspace, labeled: dict[int, int]) -> int | None:
    pair = _mssp_pair(ws, labeled)
    if pair is None:
        return None
    a, b, length = pair
    if length <= 1:
        return None
    path = ws.lexmin_shortest_path(a, b)
    assert path is not None and len(path) == length + 1
    return path[length // 2]


def s2_run(
    graph: NeighborGraph, oracle: LabelOracle, budget: int, seed: int
) -> QueryLog:
    """Run the S^2 strategy for exactly `budget` queries (or until exhausted)."""
    n = graph.vertex_count
    if not 0 <= budget <= n:
        raise InvalidParameterError(f"budget must be in [0, {n}], got {budget}")
    gen = np.random.Generator(np.random.Philox(seed))
    ws = _GraphWorkspace(graph)
    labeled: dict[int, int] = {}
    entries: list[tuple[int, int, str]] = []
    found: list[tuple[int, int]] = []

    def query(v: int, phase: str) -> None:
        y = oracle(v)
        labeled[v] = y
        entries.append((v, y, phase))
        for u in ws.live_neighbors(v):
            u = int(u)
            if u in labeled and labeled[u] != y:
                ws.remove_edge(v, u)
                found.append((min(v, u), max(v, u)))

    while len(entries) < budget:
        unqueried = [v for v in range(n) if v not in labeled]
        v = int(unqueried[gen.integers(len(unqueried))])
        query(v, "uniform")
        while len(entries) < budget:
            mid = _mssp_workspace(ws, labeled)
            if mid is None:
                break
            query(mid, "bisect")
    return QueryLog(entries=tuple(entries), budget=budget, found_cut_edges=tuple(found))


def passive_run(
    cloud: LabeledPointCloud, oracle: LabelOracle, budget: int, seed: int
) -> QueryLog:
    """Uniform sample of vertices without replacement, all phase `uniform`."""
    n = len(cloud)
    if not 0 <= budget <= n:
        raise InvalidParameterError(f"budget must be in [0, {n}], got {budget}")
    gen = np.random.Generator(np.random.Philox(seed))
    picks = gen.permutation(n)[:budget]
    entries = tuple((int(v), oracle(int(v)), "uniform") for v in picks)
    return QueryLog(entries=entries, budget=budget, found_cut_edges=())


def save_query_csv(log: QueryLog, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("step,vertex,label,phase\n")
        for step, (v, y, phase) in enumerate(log.entries):
            fh.write(f"{step},{v},{y},{phase}\n")


def load_query_csv(path) -> QueryLog:
    entries: list[tuple[int, int, str]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or (lineno == 1 and line.startswith("step,")):
                continue
            cols = line.split(",")
            if len(cols) != 4:
                raise ParseError(f"row {lineno}: expected 4 columns, found {len(cols)}")
            try:
                entries.append((int(cols[1]), int(cols[2]), cols[3]))
            except ValueError as exc:
                raise ParseError(f"row {lineno}: non-integer field") from exc
    return QueryLog(entries=tuple(entries), budget=len(entries), found_cut_edges=())
