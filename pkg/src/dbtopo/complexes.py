"""Locally scaled labeled Vietoris-Rips filtrations and labeled Cech snapshots.

Simplices are capped at dimension 2; that is all the dimension-0/1 homology
computations downstream need.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    InsufficientDataError,
    InvalidFiltrationError,
    InvalidParameterError,
    ParseError,
)

__all__ = [
    "Simplex",
    "FiltrationComplex",
    "LocalScales",
    "local_scales",
    "build_lslvr_filtration",
    "build_lc_complex",
    "betti_window_scan",
    "min_enclosing_ball_radius",
    "save_complex_csv",
    "load_complex_csv",
]


@dataclass(frozen=True, order=True)
class Simplex:
    vertices: tuple[int, ...]
    filtration_value: float

    def __post_init__(self) -> None:
        verts = tuple(int(v) for v in self.vertices)
        object.__setattr__(self, "vertices", verts)
        if not 1 <= len(verts) <= 3:
            raise InvalidParameterError(f"simplex must have 1-3 vertices, got {verts}")
        if any(a >= b for a, b in zip(verts, verts[1:])):
            raise InvalidParameterError(f"simplex vertices must be strictly increasing: {verts}")
        if self.filtration_value < 0:
            raise InvalidParameterError("filtration value must be nonnegative")

    @property
    def dimension(self) -> int:
        return len(self.vertices) - 1


@dataclass(frozen=True)
class FiltrationComplex:
    """Simplices sorted by (filtration_value, dimension, vertices), face-closed."""

    simplices: tuple[Simplex, ...]

    def __post_init__(self) -> None:
        ordered = tuple(
            sorted(self.simplices, key=lambda s: (s.filtration_value, s.dimension, s.vertices))
        )
        object.__setattr__(self, "simplices", ordered)
        values = {s.vertices: s.filtration_value for s in ordered}
        if len(values) != len(ordered):
            raise InvalidFiltrationError("duplicate simplices in filtration")
        for s in ordered:
            if s.dimension == 0:
                continue
            for drop in range(len(s.vertices)):
                face = s.vertices[:drop] + s.vertices[drop + 1 :]
                if face not in values:
                    raise InvalidFiltrationError(
                        f"filtration not face-closed: {s.vertices} lacks face {face}"
                    )
                if values[face] > s.filtration_value:
                    raise InvalidFiltrationError(
                        f"filtration not monotone: face {face} enters after {s.vertices}"
                    )

    def __len__(self) -> int:
        return len(self.simplices)

    def vertex_count(self) -> int:
        return sum(1 for s in self.simplices if s.dimension == 0)


@dataclass(frozen=True)
class LocalScales:
    """Per-vertex distance to the k-th nearest opposite-class point."""

    rho: np.ndarray
    k_opposite: int

    def __post_init__(self) -> None:
        rho = np.asarray(self.rho, dtype=float)
        rho.setflags(write=False)
        object.__setattr__(self, "rho", rho)


def local_scales(points: np.ndarray, labels, k_opposite: int = 1) -> LocalScales:
    pts = np.asarray(points, dtype=float)
    lab = np.asarray(labels, dtype=np.int64)
    if k_opposite < 1:
        raise InvalidParameterError(f"k_opposite must be >= 1, got {k_opposite}")
    n0 = int((lab == 0).sum())
    n1 = int((lab == 1).sum())
    for cls, count in ((0, n0), (1, n1)):
        if count < k_opposite:
            raise InsufficientDataError(
                f"class {cls} has {count} points, need >= {k_opposite}"
            )
    rho = np.empty(len(pts))
    for cls in (0, 1):
        mine = np.nonzero(lab == cls)[0]
        theirs = np.nonzero(lab != cls)[0]
        diff = pts[mine][:, None, :] - pts[theirs][None, :, :]
        d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
        kth = np.partition(d, k_opposite - 1, axis=1)[:, k_opposite - 1]
        rho[mine] = kth
    return LocalScales(rho=rho, k_opposite=k_opposite)


def _cross_edge_table(
    pts: np.ndarray, lab: np.ndarray, scales: LocalScales, kappa_max: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Cross-class edges (i0 indices, i1 indices, kappa values) below the cap."""
    idx0 = np.nonzero(lab == 0)[0]
    idx1 = np.nonzero(lab == 1)[0]
    diff = pts[idx0][:, None, :] - pts[idx1][None, :, :]
    d = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    denom = np.sqrt(np.outer(scales.rho[idx0], scales.rho[idx1]))
    kappa = d / denom
    keep = kappa <= kappa_max
    ii, jj = np.nonzero(keep)
    return idx0[ii], idx1[jj], kappa[ii, jj]


def build_lslvr_filtration(
    points: np.ndarray, labels, scales: LocalScales, kappa_max: float
) -> FiltrationComplex:
    """Locally scaled labeled VR filtration, truncated at kappa_max.

    Cross-class edge (i, j) enters at ||xi-xj|| / sqrt(rho_i rho_j); a
    same-class edge enters at the smallest scale at which its endpoints
    share a cross-class neighbor; triangles close the resulting 1-skeleton
    as a flag complex at dimension 2, entering at their max edge value.
    """
    if not kappa_max > 0:
        raise InvalidParameterError(f"kappa_max must be positive, got {kappa_max}")
    pts = np.asarray(points, dtype=float)
    lab = np.asarray(labels, dtype=np.int64)
    n = len(pts)
    simplices = [Simplex(vertices=(v,), filtration_value=0.0) for v in range(n)]
    if n == 0 or (lab == 0).all() or (lab == 1).all():
        return FiltrationComplex(simplices=tuple(simplices))

    ci, cj, kappa = _cross_edge_table(pts, lab, scales, kappa_max)
    edge_value: dict[tuple[int, int], float] = {}
    for i, j, k in zip(ci, cj, kappa):
        key = (int(min(i, j)), int(max(i, j)))
        edge_value[key] = float(k)

    # Same-class edges: for every witness, all pairs of its cross neighbors
    # receive candidate value max of the two cross-edge values; keep the min.
    witness_nbrs: dict[int, list[tuple[int, float]]] = {}
    for i, j, k in zip(ci, cj, kappa):
        witness_nbrs.setdefault(int(j), []).append((int(i), float(k)))
        witness_nbrs.setdefault(int(i), []).append((int(j), float(k)))
    pair_i: list[np.ndarray] = []
    pair_j: list[np.ndarray] = []
    pair_v: list[np.ndarray] = []
    for nbrs in witness_nbrs.values():
        if len(nbrs) < 2:
            continue
        vs = np.asarray([v for v, _ in nbrs])
        ks = np.asarray([k for _, k in nbrs])
        order = np.argsort(vs)
        vs, ks = vs[order], ks[order]
        a, b = np.triu_indices(len(vs), k=1)
        pair_i.append(vs[a])
        pair_j.append(vs[b])
        pair_v.append(np.maximum(ks[a], ks[b]))
    if pair_i:
        all_i = np.concatenate(pair_i)
        all_j = np.concatenate(pair_j)
        all_v = np.concatenate(pair_v)
        order = np.lexsort((all_v, all_j, all_i))
        all_i, all_j, all_v = all_i[order], all_j[order], all_v[order]
        first = np.ones(len(all_i), dtype=bool)
        first[1:] = (all_i[1:] != all_i[:-1]) | (all_j[1:] != all_j[:-1])
        for i, j, v in zip(all_i[first], all_j[first], all_v[first]):
            key = (int(i), int(j))
            if lab[key[0]] == lab[key[1]]:
                edge_value[key] = float(v)

    simplices.extend(
        Simplex(vertices=key, filtration_value=val) for key, val in edge_value.items()
    )

    # Flag closure at dimension 2 over the full 1-skeleton.
    adjacency: dict[int, set[int]] = {}
    for (i, j) in edge_value:
        adjacency.setdefault(i, set()).add(j)
        adjacency.setdefault(j, set()).add(i)
    for (i, j), vij in edge_value.items():
        common = adjacency[i] & adjacency[j]
        for k in common:
            if k > j:
                value = max(vij, edge_value[(i, k)], edge_value[(j, k)])
                simplices.append(Simplex(vertices=(i, j, k), filtration_value=value))
    return FiltrationComplex(simplices=tuple(simplices))


def min_enclosing_ball_radius(pts: np.ndarray) -> float:
    """Radius of the minimum enclosing ball of 1-3 points in R^d."""
    pts = np.asarray(pts, dtype=float)
    m = len(pts)
    if m == 1:
        return 0.0
    if m == 2:
        return float(np.linalg.norm(pts[0] - pts[1]) / 2.0)
    if m != 3:
        raise InvalidParameterError(f"supported for 1-3 points, got {m}")
    c_len, b_len, a_len = sorted(
        float(np.linalg.norm(pts[a] - pts[b])) for a, b in ((0, 1), (0, 2), (1, 2))
    )
    # obtuse (or degenerate) triangle: longest side is a diameter
    if a_len**2 >= b_len**2 + c_len**2:
        return a_len / 2.0
    # acute: circumradius a*b*c / (4*area)
    area = _triangle_area(pts[0], pts[1], pts[2])
    return float(a_len * b_len * c_len / (4.0 * area))


def _triangle_area(p0, p1, p2) -> float:
    u = p1 - p0
    v = p2 - p0
    gram = np.dot(u, u) * np.dot(v, v) - np.dot(u, v) ** 2
    return float(np.sqrt(max(gram, 0.0)) / 2.0)


def build_lc_complex(
    d0: np.ndarray, d1: np.ndarray, epsilon: float, gamma: float
) -> FiltrationComplex:
    """Snapshot of the labeled Cech complex at scale epsilon.

    Vertices are class-0 points witnessed by a class-1 point within gamma;
    edges need ||xi-xj|| <= 2*epsilon and triangles an enclosing-ball
    radius <= epsilon (the exact triple-intersection condition for balls).
    """
    if not epsilon > 0 or not gamma > 0:
        raise InvalidParameterError("epsilon and gamma must be positive")
    p0 = np.asarray(d0, dtype=float)
    p1 = np.asarray(d1, dtype=float)
    if p0.size == 0:
        return FiltrationComplex(simplices=())
    if p1.size == 0:
        return FiltrationComplex(simplices=())
    diff = p0[:, None, :] - p1[None, :, :]
    to_witness = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff)).min(axis=1)
    witnessed = np.nonzero(to_witness <= gamma)[0]
    simplices = [Simplex(vertices=(int(v),), filtration_value=epsilon) for v in witnessed]
    sub = p0[witnessed]
    m = len(witnessed)
    diff = sub[:, None, :] - sub[None, :, :]
    dist = np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))
    edge_pairs = []
    for a in range(m):
        for b in range(a + 1, m):
            if dist[a, b] <= 2 * epsilon:
                edge_pairs.append((a, b))
                simplices.append(
                    Simplex(
                        vertices=(int(witnessed[a]), int(witnessed[b])),
                        filtration_value=epsilon,
                    )
                )
    edge_set = set(edge_pairs)
    for a, b in edge_pairs:
        for c in range(b + 1, m):
            if (a, c) in edge_set and (b, c) in edge_set:
                if min_enclosing_ball_radius(sub[[a, b, c]]) <= epsilon:
                    simplices.append(
                        Simplex(
                            vertices=(int(witnessed[a]), int(witnessed[b]), int(witnessed[c])),
                            filtration_value=epsilon,
                        )
                    )
    return FiltrationComplex(simplices=tuple(simplices))


def betti_window_scan(
    filtration: FiltrationComplex, dim: int, kappa_grid
) -> list[tuple[float, int]]:
    """Betti number of the sub-complex at each grid scale, ascending grid."""
    from .persistence import betti_at, compute_persistence

    grid = [float(k) for k in kappa_grid]
    if any(a > b for a, b in zip(grid, grid[1:])):
        raise InvalidParameterError("kappa_grid must be sorted ascending")
    diagram = compute_persistence(filtration)
    return [(k, betti_at(diagram, dim, k)) for k in grid]


def save_complex_csv(filtration: FiltrationComplex, path) -> None:
    """Rows `filtration_value,dim,v0[,v1[,v2]]` in stored order."""
    with open(path, "w", encoding="utf-8") as fh:
        for s in filtration.simplices:
            verts = ",".join(str(v) for v in s.vertices)
            fh.write(f"{s.filtration_value:.17g},{s.dimension},{verts}\n")


def load_complex_csv(path) -> FiltrationComplex:
    simplices = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            cols = line.split(",")
            if len(cols) < 3:
                raise ParseError(f"row {lineno}: too few columns")
            try:
                value = float(cols[0])
                dim = int(cols[1])
                verts = tuple(int(c) for c in cols[2:])
            except ValueError as exc:
                raise ParseError(f"row {lineno}: malformed field") from exc
            if len(verts) != dim + 1:
                raise ParseError(f"row {lineno}: dim {dim} with {len(verts)} vertices")
            simplices.append(Simplex(vertices=verts, filtration_value=value))
    return FiltrationComplex(simplices=tuple(simplices))
