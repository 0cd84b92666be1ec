"""Command-line driver: dataset generation through bounds and model selection.

Exit codes: 0 success, 2 invalid arguments or malformed input files,
3 infeasible bound scenario, 1 internal error. Every randomized subcommand
takes --seed and re-running with identical inputs reproduces outputs byte
for byte.
"""

from __future__ import annotations

import functools
import json
import math
import sys

import click
import numpy as np

from . import bounds as bounds_mod
from . import experiments
from .active import load_query_csv, save_query_csv
from .datasets import (
    LabelOracle,
    default_two_circles_geometry,
    generate_annulus_cloud,
    generate_two_circles,
    load_point_csv,
    save_descriptor_json,
    save_point_csv,
)
from .errors import (
    InfeasibleScenarioError,
    InsufficientDataError,
    InvalidGeometryError,
    InvalidParameterError,
    ParseError,
)
from .graph import build_knn_graph, build_radius_graph, load_edge_csv, save_edge_csv
from .metrics import bottleneck_distance, select_min_distance
from .persistence import load_diagram_json, save_diagram_json
from .selection import ClassifierOutputs, boundary_diagram, load_prediction_csv, validation_select

_USAGE_ERRORS = (
    ParseError,
    InvalidParameterError,
    InvalidGeometryError,
    InsufficientDataError,
)


def _exit_codes(fn):
    """Map library errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _USAGE_ERRORS as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)
        except InfeasibleScenarioError as exc:
            click.echo(f"infeasible: {exc}", err=True)
            sys.exit(3)
        except (click.ClickException, click.Abort):
            raise
        except Exception as exc:  # pragma: no cover - defensive
            click.echo(f"internal error: {exc}", err=True)
            sys.exit(1)

    return wrapper


@click.group()
def main() -> None:
    """Decision-boundary topology toolkit."""


@main.command()
@click.argument("kind", type=click.Choice(["two-circles", "annulus"]))
@click.option("--n", required=True, type=int, help="Number of points.")
@click.option("--seed", required=True, type=int, help="RNG seed.")
@click.option("--noise", default=0.0, show_default=True, help="Label noise scale (two-circles).")
@click.option("--tau", type=float, default=None, help="Annulus radius.")
@click.option("--w", type=float, default=None, help="Annulus tube half-width.")
@click.option("--out", required=True, type=click.Path(), help="Output point CSV.")
@click.option("--descriptor-out", type=click.Path(), default=None, help="Ground-truth geometry JSON.")
@_exit_codes
def generate(kind, n, seed, noise, tau, w, out, descriptor_out):
    """Sample a labeled synthetic point cloud."""
    if kind == "two-circles":
        cloud = generate_two_circles(n=n, seed=seed, noise=noise)
        if descriptor_out is not None:
            save_descriptor_json(default_two_circles_geometry(), descriptor_out)
    else:
        if tau is None or w is None:
            raise InvalidParameterError("annulus requires --tau and --w")
        if descriptor_out is not None:
            raise InvalidParameterError("--descriptor-out only applies to two-circles")
        cloud = generate_annulus_cloud(n=n, seed=seed, tau=tau, w=w)
    save_point_csv(cloud, out)


def _build_graph(cloud, radius, knn):
    if (radius is None) == (knn is None):
        raise InvalidParameterError("exactly one of --radius / --knn is required")
    if radius is not None:
        return build_radius_graph(cloud, radius)
    return build_knn_graph(cloud, knn)


@main.command()
@click.option("--points", "points_path", required=True, type=click.Path(exists=True))
@click.option("--radius", type=float, default=None, help="Radius-graph threshold.")
@click.option("--knn", type=int, default=None, help="k for a kNN graph.")
@click.option("--out", required=True, type=click.Path(), help="Output edge CSV.")
@_exit_codes
def graph(points_path, radius, knn, out):
    """Build a neighbor graph over a point CSV."""
    cloud = load_point_csv(points_path)
    save_edge_csv(_build_graph(cloud, radius, knn), out)


@main.command()
@click.option("--points", "points_path", required=True, type=click.Path(exists=True))
@click.option("--edges", "edges_path", type=click.Path(exists=True), default=None)
@click.option("--radius", type=float, default=None)
@click.option("--knn", type=int, default=None)
@click.option("--strategy", type=click.Choice(["s2", "passive"]), required=True)
@click.option("--budget", type=int, default=None, help="Absolute query budget.")
@click.option("--budget-fraction", type=float, default=None, help="Budget as a fraction of n.")
@click.option("--seed", required=True, type=int)
@click.option("--out", required=True, type=click.Path(), help="Output query-log CSV.")
@_exit_codes
def query(points_path, edges_path, radius, knn, strategy, budget, budget_fraction, seed, out):
    """Run an active or passive labeling strategy against the point labels."""
    cloud = load_point_csv(points_path, labeled=True)
    if edges_path is not None:
        if radius is not None or knn is not None:
            raise InvalidParameterError("--edges excludes --radius/--knn")
        g = load_edge_csv(edges_path, len(cloud))
    else:
        g = _build_graph(cloud, radius, knn)
    if (budget is None) == (budget_fraction is None):
        raise InvalidParameterError("exactly one of --budget / --budget-fraction is required")
    if budget is None:
        if not 0.0 <= budget_fraction <= 1.0:
            raise InvalidParameterError("--budget-fraction must lie in [0, 1]")
        budget = int(round(budget_fraction * len(cloud)))
    oracle = LabelOracle.from_cloud(cloud)
    log = experiments.run_strategy(strategy, cloud, g, oracle, budget, seed)
    save_query_csv(log, out)


@main.command()
@click.option("--points", "points_path", required=True, type=click.Path(exists=True))
@click.option("--queries", "queries_path", type=click.Path(exists=True), default=None,
              help="Restrict to the vertices of this query log, using its observed labels.")
@click.option("--k-opposite", default=experiments.DEFAULT_K_OPPOSITE, show_default=True, type=int)
@click.option("--kappa-max", default=experiments.DEFAULT_KAPPA_MAX, show_default=True, type=float)
@click.option("--out", required=True, type=click.Path(), help="Output diagram JSON.")
@click.option("--plot", type=click.Path(), default=None, help="Also render the diagram to this image.")
@_exit_codes
def persistence(points_path, queries_path, k_opposite, kappa_max, out, plot):
    """Labeled-filtration persistence diagram of a (sub)cloud."""
    cloud = load_point_csv(points_path, labeled=True)
    if queries_path is None:
        diagram = experiments.ground_truth_diagram(cloud, k_opposite, kappa_max)
    else:
        log = load_query_csv(queries_path)
        diagram = experiments.queried_diagram(cloud, log, k_opposite, kappa_max)
    save_diagram_json(diagram, out)
    if plot is not None:
        from .plotting import render_diagram_plot

        render_diagram_plot(diagram, plot)


@main.command()
@click.argument("diagram_a", type=click.Path(exists=True))
@click.argument("diagram_b", type=click.Path(exists=True))
@click.option("--dim", default=1, show_default=True, type=click.IntRange(0, 1))
@_exit_codes
def bottleneck(diagram_a, diagram_b, dim):
    """Bottleneck distance between two diagram JSON files (printed to stdout)."""
    a = load_diagram_json(diagram_a)
    b = load_diagram_json(diagram_b)
    click.echo(format(bottleneck_distance(a, b, dim=dim), ".17g"))


def _parse_grid(text: str) -> list[float]:
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidParameterError(f"grid must be lo:hi:count, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError as exc:
        raise InvalidParameterError(f"malformed grid {text!r}") from exc
    if count < 1 or (count == 1 and hi != lo) or hi < lo:
        raise InvalidParameterError(f"grid {text!r} is not a valid range")
    return [float(x) for x in np.linspace(lo, hi, count)]


@main.command()
@click.option("--mode", type=click.Choice(["vary-tau", "vary-w"]), required=True)
@click.option("--delta", default=0.1, show_default=True, type=float)
@click.option("--tau", default=0.1, show_default=True, type=float, help="Fixed tau (vary-w mode).")
@click.option("--w", default=1e-10, show_default=True, type=float, help="Fixed w (vary-tau mode).")
@click.option("--grid", required=True, help="Scan grid as lo:hi:count.")
@click.option("--out", required=True, type=click.Path(), help="Output scan CSV.")
@click.option("--plot", type=click.Path(), default=None, help="Also render the ratio curve.")
@_exit_codes
def bounds(mode, delta, tau, w, grid, out, plot):
    """Active/passive complexity-bound ratio scan over an annulus scenario."""
    values = _parse_grid(grid)
    rows = bounds_mod.complexity_ratio_scan(mode, values, delta=delta, tau=tau, w=w)
    if rows and not any(r.feasible for r in rows):
        raise InfeasibleScenarioError("no grid point admits a feasible tube width")
    bounds_mod.save_scan_csv(rows, out)
    if plot is not None:
        from .plotting import render_ratio_plot

        render_ratio_plot(rows, plot, x_label="tau" if mode == "vary-tau" else "w")


@main.command()
@click.option("--points", "points_path", required=True, type=click.Path(exists=True))
@click.option("--queries", "queries_path", required=True, type=click.Path(exists=True))
@click.option("--bank", "bank_paths", multiple=True, required=True, type=click.Path(exists=True),
              help="Prediction CSV per bank member; repeat per member.")
@click.option("--with-probabilities", is_flag=True, help="Prediction files carry a probability column.")
@click.option("--k-opposite", default=experiments.DEFAULT_K_OPPOSITE, show_default=True, type=int)
@click.option("--kappa-max", default=experiments.DEFAULT_KAPPA_MAX, show_default=True, type=float)
@click.option("--dim", default=1, show_default=True, type=click.IntRange(0, 1))
@click.option("--out", required=True, type=click.Path(), help="Output selection JSON.")
@_exit_codes
def select(points_path, queries_path, bank_paths, with_probabilities,
           k_opposite, kappa_max, dim, out):
    """Pick bank members topologically and by validation error on queried labels."""
    cloud = load_point_csv(points_path, labeled=True)
    log = load_query_csv(queries_path)
    if not log.entries:
        raise InvalidParameterError("query log is empty; nothing to select with")
    bank = [load_prediction_csv(p, with_probabilities) for p in bank_paths]
    for idx, member in enumerate(bank):
        if len(member) != len(cloud) or not np.allclose(member.inputs, cloud.points):
            raise InvalidParameterError(
                f"bank member {idx} inputs do not match the point file"
            )
    reference = experiments.censor_essential_deaths(
        experiments.queried_diagram(cloud, log, k_opposite, kappa_max), kappa_max
    )
    q_vertices = log.vertices()
    observed = log.labels()
    q_labels = [observed[v] for v in q_vertices]
    # Both selection branches see the bank through the queried vertices only,
    # so the topological comparison happens between diagrams built on the
    # same point set as the reference.
    restricted = [
        ClassifierOutputs(
            inputs=m.inputs[q_vertices],
            predicted_labels=m.predicted_labels[q_vertices],
            probabilities=None if m.probabilities is None else m.probabilities[q_vertices],
        )
        for m in bank
    ]
    diagrams = [
        experiments.censor_essential_deaths(
            boundary_diagram(m, k_opposite, kappa_max), kappa_max
        )
        for m in restricted
    ]
    topo_idx, topo_dist = select_min_distance(reference, diagrams, dim=dim)
    val_idx, val_err = validation_select(restricted, q_labels)
    result = {
        "topological": {
            "index": topo_idx,
            "distance": None if math.isinf(topo_dist) else topo_dist,
        },
        "validation": {"index": val_idx, "error": val_err},
    }
    with open(out, "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _config_scalar(cfg: dict[str, list[str]], key: str, default: str | None = None) -> str:
    values = cfg.get(key)
    if values is None:
        if default is None:
            raise ParseError(f"missing config key {key!r}")
        return default
    if len(values) > 1:
        raise ParseError(f"config key {key!r} given {len(values)} times, expected once")
    return values[0]


def _config_floats(cfg: dict[str, list[str]], key: str) -> list[float]:
    try:
        return [float(v) for v in cfg.get(key, [])]
    except ValueError as exc:
        raise ParseError(f"config key {key!r} has a non-numeric value") from exc


@main.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path(), help="Per-cell row CSV.")
@click.option("--summary-out", type=click.Path(), default=None, help="Median-per-cell CSV.")
@click.option("--plot", type=click.Path(), default=None, help="Also render the median curves.")
@_exit_codes
def sweep(config_path, out, summary_out, plot):
    """Budget-fraction sweep: bottleneck distance to the full-label diagram.

    Config keys (repeat for lists): points, fraction, seed, strategy, and
    either radius or knn; optional k_opposite, kappa_max.
    """
    cfg = experiments.parse_config(config_path)
    known = {"points", "fraction", "seed", "strategy", "radius", "knn", "k_opposite", "kappa_max"}
    for key in cfg:
        if key not in known:
            raise ParseError(f"unknown config key {key!r}")
    cloud = load_point_csv(_config_scalar(cfg, "points"), labeled=True)
    fractions = _config_floats(cfg, "fraction")
    try:
        seeds = [int(v) for v in cfg.get("seed", [])]
    except ValueError as exc:
        raise ParseError("config key 'seed' has a non-integer value") from exc
    if not seeds:
        raise ParseError("missing config key 'seed'")
    strategies = cfg.get("strategy", [])
    if not strategies:
        raise ParseError("missing config key 'strategy'")
    for s in strategies:
        if s not in ("s2", "passive"):
            raise ParseError(f"unknown strategy {s!r} in config")
    radius = cfg.get("radius")
    knn = cfg.get("knn")
    g = _build_graph(
        cloud,
        float(_config_scalar(cfg, "radius")) if radius else None,
        int(_config_scalar(cfg, "knn")) if knn else None,
    )
    k_opposite = int(_config_scalar(cfg, "k_opposite", str(experiments.DEFAULT_K_OPPOSITE)))
    kappa_max = float(_config_scalar(cfg, "kappa_max", str(experiments.DEFAULT_KAPPA_MAX)))
    rows = experiments.sweep(cloud, g, fractions, seeds, strategies,
                             k_opposite=k_opposite, kappa_max=kappa_max)
    experiments.save_sweep_csv(rows, out)
    if summary_out is not None:
        medians = experiments.aggregate_sweep(rows)
        with open(summary_out, "w", encoding="utf-8") as fh:
            fh.write("strategy,fraction,median_bottleneck_dim1\n")
            for strategy, fraction, med in medians:
                fh.write(f"{strategy},{fraction:.17g},{med:.17g}\n")
    if plot is not None:
        from .plotting import render_sweep_plot

        render_sweep_plot(rows, plot)


if __name__ == "__main__":
    main()
