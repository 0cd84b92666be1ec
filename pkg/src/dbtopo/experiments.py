"""End-to-end pipelines: queried-data diagrams and budget/strategy sweeps."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .active import QueryLog, passive_run, s2_run
from .complexes import build_lslvr_filtration, local_scales
from .datasets import LabeledPointCloud, LabelOracle
from .errors import ParseError
from .graph import NeighborGraph
from .metrics import bottleneck_distance
from .persistence import PersistenceDiagram, PersistencePair, compute_persistence

__all__ = [
    "DEFAULT_KAPPA_MAX",
    "DEFAULT_K_OPPOSITE",
    "DEFAULT_RADIUS",
    "SweepRow",
    "censor_essential_deaths",
    "lslvr_diagram",
    "ground_truth_diagram",
    "queried_diagram",
    "run_strategy",
    "sweep",
    "aggregate_sweep",
    "save_sweep_csv",
    "parse_config",
]

DEFAULT_RADIUS = 0.65
DEFAULT_K_OPPOSITE = 4
DEFAULT_KAPPA_MAX = 1.3


def lslvr_diagram(
    points: np.ndarray,
    labels,
    k_opposite: int = DEFAULT_K_OPPOSITE,
    kappa_max: float = DEFAULT_KAPPA_MAX,
) -> PersistenceDiagram:
    """LS-LVR filtration followed by persistence, for any labeled point set."""
    lab = np.asarray(labels, dtype=np.int64)
    if lab.size == 0 or (lab == 0).all() or (lab == 1).all():
        return PersistenceDiagram(pairs=())
    scales = local_scales(points, lab, k_opposite=k_opposite)
    filtration = build_lslvr_filtration(points, lab, scales, kappa_max=kappa_max)
    return compute_persistence(filtration)


def censor_essential_deaths(
    diagram: PersistenceDiagram, cutoff: float = DEFAULT_KAPPA_MAX
) -> PersistenceDiagram:
    """Replace infinite deaths with the filtration cutoff.

    The LS-LVR filtration is truncated at kappa_max, so a class alive at the
    end is only known to survive up to the cutoff; comparisons between
    diagrams built at the same cutoff treat such classes as dying there.
    """
    return PersistenceDiagram(
        pairs=tuple(
            PersistencePair(dim=p.dim, birth=p.birth, death=min(p.death, cutoff))
            for p in diagram.pairs
        )
    )


def ground_truth_diagram(
    cloud: LabeledPointCloud,
    k_opposite: int = DEFAULT_K_OPPOSITE,
    kappa_max: float = DEFAULT_KAPPA_MAX,
) -> PersistenceDiagram:
    return lslvr_diagram(cloud.points, cloud.labels, k_opposite, kappa_max)


def queried_diagram(
    cloud: LabeledPointCloud,
    log: QueryLog,
    k_opposite: int = DEFAULT_K_OPPOSITE,
    kappa_max: float = DEFAULT_KAPPA_MAX,
) -> PersistenceDiagram:
    """Diagram from the queried subset, using the observed labels."""
    vertices = log.vertices()
    labels = log.labels()
    points = cloud.points[vertices]
    observed = np.asarray([labels[v] for v in vertices], dtype=np.int64)
    return lslvr_diagram(points, observed, k_opposite, kappa_max)


def run_strategy(
    strategy: str,
    cloud: LabeledPointCloud,
    graph: NeighborGraph,
    oracle: LabelOracle,
    budget: int,
    seed: int,
) -> QueryLog:
    if strategy == "s2":
        return s2_run(graph, oracle, budget, seed)
    if strategy == "passive":
        return passive_run(cloud, oracle, budget, seed)
    raise ParseError(f"unknown strategy {strategy!r} (expected s2 or passive)")


@dataclass(frozen=True)
class SweepRow:
    strategy: str
    fraction: float
    seed: int
    budget: int
    queries: int
    bottleneck_dim1: float


def sweep(
    cloud: LabeledPointCloud,
    graph: NeighborGraph,
    fractions: list[float],
    seeds: list[int],
    strategies: list[str],
    k_opposite: int = DEFAULT_K_OPPOSITE,
    kappa_max: float = DEFAULT_KAPPA_MAX,
) -> list[SweepRow]:
    """Bottleneck distance to the full-label diagram per (strategy, fraction, seed).

    Cell seeds are derived as base seed + cell index so parallel evaluation
    could never change results; execution here is sequential.
    """
    oracle = LabelOracle.from_cloud(cloud)
    truth = censor_essential_deaths(ground_truth_diagram(cloud, k_opposite, kappa_max), kappa_max)
    rows: list[SweepRow] = []
    cell = 0
    for strategy in strategies:
        for fraction in fractions:
            budget = int(round(fraction * len(cloud)))
            for seed in seeds:
                log = run_strategy(strategy, cloud, graph, oracle, budget, seed + cell)
                estimate = censor_essential_deaths(
                    queried_diagram(cloud, log, k_opposite, kappa_max), kappa_max
                )
                rows.append(
                    SweepRow(
                        strategy=strategy,
                        fraction=fraction,
                        seed=seed + cell,
                        budget=budget,
                        queries=len(log.entries),
                        bottleneck_dim1=bottleneck_distance(truth, estimate, dim=1),
                    )
                )
                cell += 1
    return rows


def aggregate_sweep(rows: list[SweepRow]) -> list[tuple[str, float, float]]:
    """Median bottleneck distance per (strategy, fraction)."""
    groups: dict[tuple[str, float], list[float]] = {}
    for row in rows:
        groups.setdefault((row.strategy, row.fraction), []).append(row.bottleneck_dim1)
    return [
        (strategy, fraction, float(np.median(values)))
        for (strategy, fraction), values in sorted(groups.items())
    ]


def save_sweep_csv(rows: list[SweepRow], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("strategy,fraction,seed,budget,queries,bottleneck_dim1\n")
        for r in rows:
            fh.write(
                f"{r.strategy},{r.fraction:.17g},{r.seed},{r.budget},"
                f"{r.queries},{r.bottleneck_dim1:.17g}\n"
            )


def parse_config(path) -> dict[str, list[str]]:
    """Flat key=value config; repeated keys accumulate into lists."""
    out: dict[str, list[str]] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise ParseError(f"row {lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if not key:
                raise ParseError(f"row {lineno}: empty key")
            out.setdefault(key, []).append(value)
    return out
