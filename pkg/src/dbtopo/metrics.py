"""Bottleneck distance between persistence diagrams."""

from __future__ import annotations

import math

from .errors import InvalidParameterError
from .persistence import PersistenceDiagram

__all__ = ["bottleneck_distance", "select_min_distance"]


def _linf(a: tuple[float, float], b: tuple[float, float]) -> float:
    return max(abs(a[0] - b[0]), abs(a[1] - b[1]))


def _diag_cost(p: tuple[float, float]) -> float:
    return (p[1] - p[0]) / 2.0


def _saturates(forced: list[int], neighbors: list[list[int]], right_size: int) -> bool:
    """Augmenting-path test that some matching covers every `forced` left node."""
    match_right: list[int | None] = [None] * right_size

    def try_augment(i: int, seen: list[bool]) -> bool:
        for j in neighbors[i]:
            if not seen[j]:
                seen[j] = True
                other = match_right[j]
                if other is None or try_augment(other, seen):
                    match_right[j] = i
                    return True
        return False

    return all(try_augment(i, [False] * right_size) for i in forced)


def _matching_feasible(
    a: list[tuple[float, float]], b: list[tuple[float, float]], r: float
) -> bool:
    """Perfect matching with diagonal projections exists at threshold r.

    A point may match an opposite point at L-inf distance <= r or exit to
    the diagonal at cost (death - birth) / 2 <= r; spare diagonal slots pair
    freely. Such an assignment exists iff some cross matching covers every
    point whose diagonal exit is closed, on both sides at once; by
    Mendelsohn-Dulmage it suffices that each side can be covered separately.
    """
    n, m = len(a), len(b)
    allow = [[j for j in range(m) if _linf(a[i], b[j]) <= r] for i in range(n)]
    forced_a = [i for i in range(n) if _diag_cost(a[i]) > r]
    forced_b = [j for j in range(m) if _diag_cost(b[j]) > r]
    if not _saturates(forced_a, allow, m):
        return False
    allow_t = [[i for i in range(n) if _linf(a[i], b[j]) <= r] for j in range(m)]
    return _saturates(forced_b, allow_t, n)


def bottleneck_distance(
    a: PersistenceDiagram, b: PersistenceDiagram, dim: int
) -> float:
    """Exact bottleneck distance restricted to one homology dimension.

    Infinite-death points must match infinite-death points; mismatched counts
    give +inf, matched ones contribute |birth - birth| terms. The finite part
    is solved by binary search over the candidate-distance set with a
    matching feasibility test.
    """
    pa = a.in_dim(dim)
    pb = b.in_dim(dim)
    inf_a = sorted(p.birth for p in pa if math.isinf(p.death))
    inf_b = sorted(p.birth for p in pb if math.isinf(p.death))
    if len(inf_a) != len(inf_b):
        return math.inf
    inf_part = max((abs(x - y) for x, y in zip(inf_a, inf_b)), default=0.0)

    fin_a = [(p.birth, p.death) for p in pa if not math.isinf(p.death)]
    fin_b = [(p.birth, p.death) for p in pb if not math.isinf(p.death)]
    if not fin_a and not fin_b:
        return inf_part
    candidates = {0.0}
    candidates.update(_linf(p, q) for p in fin_a for q in fin_b)
    candidates.update(_diag_cost(p) for p in fin_a)
    candidates.update(_diag_cost(q) for q in fin_b)
    grid = sorted(candidates)
    lo, hi = 0, len(grid) - 1
    if not _matching_feasible(fin_a, fin_b, grid[hi]):
        raise AssertionError("matching must be feasible at the max candidate")
    while lo < hi:
        mid = (lo + hi) // 2
        if _matching_feasible(fin_a, fin_b, grid[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(grid[lo], inf_part)


def select_min_distance(
    query: PersistenceDiagram, bank: list[PersistenceDiagram], dim: int
) -> tuple[int, float]:
    """Index of the bank diagram nearest to the query; ties take lowest index."""
    if not bank:
        raise InvalidParameterError("bank must be nonempty")
    best_idx, best_d = 0, math.inf
    for idx, diagram in enumerate(bank):
        d = bottleneck_distance(query, diagram, dim)
        if d < best_d:
            best_idx, best_d = idx, d
    return best_idx, best_d
