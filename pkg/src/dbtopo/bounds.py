"""Closed-form query/sample-complexity bound evaluators.

Covers the active-learning query bound, the passive sample bound, and the
stylized annulus scenario on the 5x5 square: a circular boundary of radius
tau with a width-w overlap tube, uniform class-conditional densities, and
covering numbers / ball measures computed in closed form.

Logarithms are natural except where the bisection term explicitly uses
log base 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InfeasibleScenarioError, InvalidParameterError

__all__ = [
    "FEASIBILITY_SLOPE",
    "GAMMA_MARGIN",
    "BoundsScenario",
    "ScanRow",
    "feasible_gamma",
    "epsilon_interval",
    "covering_number_circle",
    "disk_lens_area",
    "annulus_measures",
    "annulus_scenario",
    "passive_sample_bound",
    "active_query_bound",
    "complexity_ratio_scan",
    "save_scan_csv",
]

FEASIBILITY_SLOPE = 3.0 - 2.0 * math.sqrt(2.0)  # sqrt(9) - sqrt(8)
GAMMA_MARGIN = 1e-5
DOMAIN_AREA = 25.0
DOMAIN_HALF_SIDE = 2.5


@dataclass(frozen=True)
class BoundsScenario:
    """All symbols the bound calculators need.

    Derived quantities (covering numbers, ball measures) may be filled by
    annulus_scenario or supplied directly for calculator-only use.
    """

    tau: float
    w: float
    gamma: float
    delta: float
    beta: float
    p_y1: float
    domain_area: float = DOMAIN_AREA
    n_cover_quarter: int = 0  # gamma/4 balls covering the boundary circle
    n_cover_tube: int = 0  # (w+gamma) balls covering the boundary circle
    h_tube: float = 0.0  # sup marginal measure of a (w+gamma)-ball on the boundary
    rho0_quarter: float = 0.0  # inf class-0 measure of a gamma/4-ball on the boundary
    rho1_quarter: float = 0.0
    feasible: bool = True

    def __post_init__(self) -> None:
        for name, value in (("delta", self.delta), ("beta", self.beta), ("p_y1", self.p_y1)):
            if not 0.0 < value < 1.0:
                raise InvalidParameterError(f"{name} must be in (0, 1), got {value}")

    @property
    def p_y0(self) -> float:
        return 1.0 - self.p_y1

    def epsilon_interval(self) -> tuple[float, float] | None:
        return epsilon_interval(self.tau, self.w, self.gamma)

    def satisfies_gamma_condition(self) -> bool:
        return self.gamma < FEASIBILITY_SLOPE * self.tau - self.w


def feasible_gamma(tau: float, w: float) -> float:
    """The witness-distance scale used throughout the annulus scenario."""
    slack = FEASIBILITY_SLOPE * tau - w
    if not slack > GAMMA_MARGIN:
        raise InfeasibleScenarioError(
            f"(sqrt(9)-sqrt(8))*tau - w = {slack:g} <= {GAMMA_MARGIN:g}: "
            "no admissible gamma (feasibility condition (a))"
        )
    return slack - GAMMA_MARGIN


def epsilon_interval(tau: float, w: float, gamma: float) -> tuple[float, float] | None:
    """Open interval of admissible ball radii, or None when empty."""
    r = w + gamma
    radicand = r * r + tau * tau - 6.0 * tau * r
    if radicand < 0.0:
        return None
    root = math.sqrt(radicand)
    return ((r + tau - root) / 2.0, (r + tau + root) / 2.0)


def covering_number_circle(tau: float, r: float) -> int:
    """Minimum number of radius-r balls centered on a radius-tau circle
    needed to cover the circle."""
    if not tau > 0 or not r > 0:
        raise InvalidParameterError("tau and r must be positive")
    if r >= 2.0 * tau:
        return 1
    half_angle = 2.0 * math.asin(r / (2.0 * tau))
    return math.ceil(math.pi / half_angle)


def disk_lens_area(disk_radius: float, ball_radius: float, center_distance: float) -> float:
    """Area of the intersection of a ball with a disk (circle-circle lens)."""
    r1, r2, d = disk_radius, ball_radius, center_distance
    if r1 <= 0.0 or r2 <= 0.0:
        return 0.0
    if d >= r1 + r2:
        return 0.0
    if d <= abs(r1 - r2):
        small = min(r1, r2)
        return math.pi * small * small
    a1 = math.acos((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1))
    a2 = math.acos((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2))
    kite = 0.5 * math.sqrt(
        max((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2), 0.0)
    )
    return r1 * r1 * a1 + r2 * r2 * a2 - kite


def annulus_measures(scenario: BoundsScenario) -> tuple[float, float, float]:
    """(h_tube, rho0_quarter, rho1_quarter) for a ball centered on the boundary.

    Class 0 occupies the square minus the disk of radius tau - w, class 1 the
    disk of radius tau + w, both with uniform density. By rotational symmetry
    any boundary point realizes the extremes, so the lens-area formula gives
    the measures exactly.
    """
    tau, w, gamma = scenario.tau, scenario.w, scenario.gamma
    if tau + w > DOMAIN_HALF_SIDE:
        raise InfeasibleScenarioError(
            f"disk of radius tau+w={tau + w:g} exceeds the 5x5 square"
        )
    big = w + gamma
    if tau + big > DOMAIN_HALF_SIDE:
        raise InfeasibleScenarioError(
            f"(w+gamma)-ball on the boundary leaves the 5x5 square (tau+w+gamma={tau + big:g})"
        )
    area0 = scenario.domain_area - math.pi * (tau - w) ** 2
    area1 = math.pi * (tau + w) ** 2
    d0 = 1.0 / area0
    d1 = 1.0 / area1
    quarter = gamma / 4.0

    def split(ball_radius: float) -> tuple[float, float]:
        ball_area = math.pi * ball_radius * ball_radius
        in_class1 = disk_lens_area(tau + w, ball_radius, tau)
        in_class0 = ball_area - disk_lens_area(tau - w, ball_radius, tau)
        return in_class0, in_class1

    q0, q1 = split(quarter)
    rho0 = d0 * q0
    rho1 = d1 * q1
    b0, b1 = split(big)
    h = scenario.p_y0 * d0 * b0 + scenario.p_y1 * d1 * b1
    return h, rho0, rho1


def annulus_scenario(tau: float, w: float, delta: float) -> BoundsScenario:
    """Fully assembled annulus scenario with all derived quantities."""
    gamma = feasible_gamma(tau, w)
    p_y1 = math.pi * tau * tau / DOMAIN_AREA
    base = BoundsScenario(
        tau=tau, w=w, gamma=gamma, delta=delta, beta=p_y1, p_y1=p_y1
    )
    h, rho0, rho1 = annulus_measures(base)
    return replace(
        base,
        n_cover_quarter=covering_number_circle(tau, gamma / 4.0),
        n_cover_tube=covering_number_circle(tau, w + gamma),
        h_tube=h,
        rho0_quarter=rho0,
        rho1_quarter=rho1,
        feasible=base.satisfies_gamma_condition() and base.epsilon_interval() is not None,
    )


def passive_sample_bound(scenario: BoundsScenario, confidence_arg: float) -> float:
    """Uniform-sampling size sufficient for boundary-dense classes.

    Pass confidence_arg = delta for the plain passive guarantee or
    1 - sqrt(1 - delta) when feeding the active bound's sample term.
    """
    if not 0.0 < confidence_arg < 1.0:
        raise InvalidParameterError(
            f"confidence_arg must be in (0, 1), got {confidence_arg}"
        )
    log_term = math.log(2.0 * scenario.n_cover_quarter) + math.log(1.0 / confidence_arg)
    return max(
        log_term / (scenario.p_y0 * scenario.rho0_quarter),
        log_term / (scenario.p_y1 * scenario.rho1_quarter),
    )


def active_query_bound(scenario: BoundsScenario, n_unlabeled: float) -> float:
    """Query budget sufficient for the bisection strategy on n unlabeled points."""
    if not n_unlabeled >= 1:
        raise InvalidParameterError(f"n_unlabeled must be >= 1, got {n_unlabeled}")
    beta, delta = scenario.beta, scenario.delta
    confidence = 1.0 - math.sqrt(1.0 - delta)
    first = math.log(1.0 / (beta * confidence)) / math.log(1.0 / (1.0 - beta))
    bisection = math.ceil(math.log2(n_unlabeled)) + 1
    second = n_unlabeled * scenario.n_cover_tube * scenario.h_tube * bisection
    return first + second


@dataclass(frozen=True)
class ScanRow:
    param: float
    gamma: float
    n_cover: int  # (w+gamma)-ball covering number, the active bound's factor
    h: float
    rho0: float
    rho1: float
    active_bound: float
    passive_bound: float
    ratio: float
    feasible: bool


def complexity_ratio_scan(
    mode: str,
    grid,
    delta: float = 0.1,
    tau: float = 0.1,
    w: float = 1e-10,
) -> list[ScanRow]:
    """Active/passive bound ratio over a parameter grid.

    mode "vary-tau" sweeps tau at fixed w; "vary-w" sweeps w at fixed tau.
    The passive bound is evaluated with the split confidence
    1 - sqrt(1 - delta) and feeds the active bound as its unlabeled-pool
    size. Infeasible grid points yield flagged rows instead of aborting.
    """
    if mode not in ("vary-tau", "vary-w"):
        raise InvalidParameterError(f"mode must be vary-tau or vary-w, got {mode!r}")
    rows: list[ScanRow] = []
    for param in grid:
        param = float(param)
        t, om = (param, w) if mode == "vary-tau" else (tau, param)
        try:
            scenario = annulus_scenario(t, om, delta)
            if not scenario.feasible:
                raise InfeasibleScenarioError("epsilon interval empty")
            passive = passive_sample_bound(scenario, 1.0 - math.sqrt(1.0 - delta))
            active = active_query_bound(scenario, passive)
            rows.append(
                ScanRow(
                    param=param,
                    gamma=scenario.gamma,
                    n_cover=scenario.n_cover_tube,
                    h=scenario.h_tube,
                    rho0=scenario.rho0_quarter,
                    rho1=scenario.rho1_quarter,
                    active_bound=active,
                    passive_bound=passive,
                    ratio=active / passive,
                    feasible=True,
                )
            )
        except InfeasibleScenarioError:
            rows.append(
                ScanRow(
                    param=param,
                    gamma=float("nan"),
                    n_cover=0,
                    h=float("nan"),
                    rho0=float("nan"),
                    rho1=float("nan"),
                    active_bound=float("nan"),
                    passive_bound=float("nan"),
                    ratio=float("nan"),
                    feasible=False,
                )
            )
    return rows


def save_scan_csv(rows: list[ScanRow], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("param,gamma,N_cover,h,rho0,rho1,active_bound,passive_bound,ratio,feasible\n")
        for r in rows:
            fh.write(
                f"{r.param:.17g},{r.gamma:.17g},{r.n_cover},{r.h:.17g},"
                f"{r.rho0:.17g},{r.rho1:.17g},{r.active_bound:.17g},"
                f"{r.passive_bound:.17g},{r.ratio:.17g},{int(r.feasible)}\n"
            )
