"""Neighbor graphs over point clouds plus cut-set / cut-boundary views."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from .datasets import LabeledPointCloud
from .errors import InvalidParameterError, ParseError

__all__ = [
    "NeighborGraph",
    "CutStructures",
    "build_radius_graph",
    "build_knn_graph",
    "cut_structures",
    "shortest_path",
    "bfs_distances",
    "connected_components",
    "save_edge_csv",
    "load_edge_csv",
]


@dataclass(frozen=True)
class NeighborGraph:
    """Undirected graph over point indices; adjacency rows sorted ascending."""

    vertex_count: int
    adjacency: tuple[tuple[int, ...], ...]
    construction: str

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.vertex_count:
            raise InvalidParameterError("adjacency length must equal vertex_count")

    def edges(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.vertex_count) for j in self.adjacency[i] if i < j]

    @property
    def edge_count(self) -> int:
        return sum(len(row) for row in self.adjacency) // 2


@dataclass(frozen=True)
class CutStructures:
    cut_set: tuple[tuple[int, int], ...]
    cut_boundary: tuple[int, ...]


def _graph_from_pairs(n: int, pairs: np.ndarray, construction: str) -> NeighborGraph:
    adj: list[list[int]] = [[] for _ in range(n)]
    for i, j in pairs:
        adj[int(i)].append(int(j))
        adj[int(j)].append(int(i))
    return NeighborGraph(
        vertex_count=n,
        adjacency=tuple(tuple(sorted(set(row))) for row in adj),
        construction=construction,
    )


def _pairwise_distances(points: np.ndarray) -> np.ndarray:
    diff = points[:, None, :] - points[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def build_radius_graph(cloud: LabeledPointCloud, k: float) -> NeighborGraph:
    """Edges between all pairs at Euclidean distance <= k."""
    if not k > 0:
        raise InvalidParameterError(f"radius must be positive, got {k}")
    n = len(cloud)
    if n == 0:
        return NeighborGraph(vertex_count=0, adjacency=(), construction=f"radius {k:g}")
    dist = _pairwise_distances(cloud.points)
    ii, jj = np.nonzero(np.triu(dist <= k, k=1))
    return _graph_from_pairs(n, np.column_stack((ii, jj)), f"radius {k:g}")


def build_knn_graph(cloud: LabeledPointCloud, k: int) -> NeighborGraph:
    """Union-symmetrized k-nearest-neighbor graph; distance ties break low index."""
    n = len(cloud)
    if not 1 <= k < n:
        raise InvalidParameterError(f"need 1 <= k < {n}, got k={k}")
    dist = _pairwise_distances(cloud.points)
    np.fill_diagonal(dist, np.inf)
    # lexsort: primary key distance, secondary key column index
    order = np.lexsort((np.broadcast_to(np.arange(n), (n, n)), dist), axis=1)
    nearest = order[:, :k]
    ii = np.repeat(np.arange(n), k)
    jj = nearest.ravel()
    lo = np.minimum(ii, jj)
    hi = np.maximum(ii, jj)
    return _graph_from_pairs(n, np.unique(np.column_stack((lo, hi)), axis=0), f"knn {k}")


def cut_structures(graph: NeighborGraph, labels) -> CutStructures:
    """Oppositely-labeled edges and the set of their endpoints."""
    lab = np.asarray(labels, dtype=np.int64)
    if lab.shape != (graph.vertex_count,):
        raise InvalidParameterError(
            f"labels length {lab.shape} does not match {graph.vertex_count} vertices"
        )
    cut = [
        (i, j)
        for i in range(graph.vertex_count)
        for j in graph.adjacency[i]
        if i < j and lab[i] != lab[j]
    ]
    boundary = sorted({v for e in cut for v in e})
    return CutStructures(cut_set=tuple(cut), cut_boundary=tuple(boundary))


def bfs_distances(graph: NeighborGraph, src: int) -> np.ndarray:
    """Unweighted BFS distances from src; -1 where unreachable."""
    dist = np.full(graph.vertex_count, -1, dtype=np.int64)
    dist[src] = 0
    queue = deque([src])
    while queue:
        u = queue.popleft()
        for v in graph.adjacency[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def shortest_path(graph: NeighborGraph, src: int, dst: int) -> list[int] | None:
    """Lexicographically smallest shortest path from src to dst, or None.

    Greedy descent over BFS distances from dst: at every step take the
    smallest-index neighbor one layer closer, which yields the
    lexicographically smallest vertex sequence among shortest paths.
    """
    for v in (src, dst):
        if not 0 <= v < graph.vertex_count:
            raise InvalidParameterError(f"vertex {v} out of range")
    if src == dst:
        return [src]
    dist = bfs_distances(graph, dst)
    if dist[src] < 0:
        return None
    path = [src]
    cur = src
    while cur != dst:
        cur = next(v for v in graph.adjacency[cur] if dist[v] == dist[cur] - 1)
        path.append(cur)
    return path


def connected_components(graph: NeighborGraph) -> tuple[np.ndarray, list[int]]:
    """Union-find labeling; component ids ordered by smallest contained vertex."""
    parent = list(range(graph.vertex_count))

    def find(x: int) -> int:
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for i in range(graph.vertex_count):
        for j in graph.adjacency[i]:
            if i < j:
                ri, rj = find(i), find(j)
                if ri != rj:
                    # keep the smaller vertex as root so ids come out ordered
                    if ri < rj:
                        parent[rj] = ri
                    else:
                        parent[ri] = rj

    ids = np.full(graph.vertex_count, -1, dtype=np.int64)
    sizes: list[int] = []
    for v in range(graph.vertex_count):
        root = find(v)
        if ids[root] < 0:
            ids[root] = len(sizes)
            sizes.append(0)
        ids[v] = ids[root]
        sizes[ids[v]] += 1
    return ids, sizes


def save_edge_csv(graph: NeighborGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for i, j in graph.edges():
            fh.write(f"{i},{j}\n")


def load_edge_csv(path, vertex_count: int) -> NeighborGraph:
    """Read an `i,j` edge list written by save_edge_csv."""
    pairs: list[tuple[int, int]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise ParseError(f"{path}:{lineno}: expected two columns, got {line!r}")
            try:
                i, j = int(parts[0]), int(parts[1])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: non-integer vertex id") from exc
            if not (0 <= i < vertex_count and 0 <= j < vertex_count):
                raise ParseError(f"{path}:{lineno}: vertex id out of range")
            pairs.append((i, j))
    arr = np.array(pairs, dtype=np.int64).reshape(-1, 2)
    return _graph_from_pairs(vertex_count, arr, "loaded")
