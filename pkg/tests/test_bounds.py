"""Bound calculators against high-precision and Monte-Carlo oracles."""

import math

import mpmath
import numpy as np
import pytest

from dbtopo.bounds import (
    FEASIBILITY_SLOPE,
    GAMMA_MARGIN,
    BoundsScenario,
    active_query_bound,
    annulus_measures,
    annulus_scenario,
    complexity_ratio_scan,
    covering_number_circle,
    disk_lens_area,
    epsilon_interval,
    feasible_gamma,
    passive_sample_bound,
    save_scan_csv,
)
from dbtopo.errors import InfeasibleScenarioError, InvalidParameterError

from .oracles import circle_cover_feasible

mpmath.mp.dps = 50


# ---------------------------------------------------------------------------
# mpmath re-implementations, written independently of the library code path.


def mp_lens_area(r1, r2, d):
    r1, r2, d = mpmath.mpf(r1), mpmath.mpf(r2), mpmath.mpf(d)
    if r1 <= 0 or r2 <= 0 or d >= r1 + r2:
        return mpmath.mpf(0)
    if d <= abs(r1 - r2):
        return mpmath.pi * min(r1, r2) ** 2
    a1 = mpmath.acos((d**2 + r1**2 - r2**2) / (2 * d * r1))
    a2 = mpmath.acos((d**2 + r2**2 - r1**2) / (2 * d * r2))
    kite = mpmath.sqrt((-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2)) / 2
    return r1**2 * a1 + r2**2 * a2 - kite


def mp_scenario(tau, w, delta):
    """(gamma, n_quarter, n_tube, h, rho0, rho1, p_y1) at 50 digits."""
    tau, w, delta = mpmath.mpf(tau), mpmath.mpf(w), mpmath.mpf(delta)
    gamma = (3 - 2 * mpmath.sqrt(2)) * tau - w - mpmath.mpf("1e-5")
    p_y1 = mpmath.pi * tau**2 / 25
    area0 = 25 - mpmath.pi * (tau - w) ** 2
    area1 = mpmath.pi * (tau + w) ** 2

    def cover(r):
        if r >= 2 * tau:
            return 1
        return int(mpmath.ceil(mpmath.pi / (2 * mpmath.asin(r / (2 * tau)))))

    def split(r):
        in1 = mp_lens_area(tau + w, r, tau)
        in0 = mpmath.pi * r**2 - mp_lens_area(tau - w, r, tau)
        return in0, in1

    q0, q1 = split(gamma / 4)
    b0, b1 = split(w + gamma)
    rho0 = q0 / area0
    rho1 = q1 / area1
    h = (1 - p_y1) * b0 / area0 + p_y1 * b1 / area1
    return gamma, cover(gamma / 4), cover(w + gamma), h, rho0, rho1, p_y1


def mp_passive(tau, w, delta, conf):
    gamma, n_q, _, _, rho0, rho1, p_y1 = mp_scenario(tau, w, delta)
    log_term = mpmath.log(2 * n_q) + mpmath.log(1 / mpmath.mpf(conf))
    return max(log_term / ((1 - p_y1) * rho0), log_term / (p_y1 * rho1))


def mp_active(tau, w, delta, n):
    _, _, n_t, h, _, _, p_y1 = mp_scenario(tau, w, delta)
    beta = p_y1
    delta = mpmath.mpf(delta)
    conf = 1 - mpmath.sqrt(1 - delta)
    first = mpmath.log(1 / (beta * conf)) / mpmath.log(1 / (1 - beta))
    bisection = int(mpmath.ceil(mpmath.log(mpmath.mpf(n), 2))) + 1
    return first + mpmath.mpf(n) * n_t * h * bisection


PINNED = [
    (tau, w, delta)
    for tau in (0.05, 0.1, 0.2, 0.4, 0.8)
    for w, delta in ((1e-10, 0.1), (1e-4, 0.1), (1e-3, 0.05), (2e-3, 0.3))
]
assert len(PINNED) == 20


@pytest.mark.parametrize("tau,w,delta", PINNED)
def test_passive_bound_matches_mpmath(tau, w, delta):
    scenario = annulus_scenario(tau, w, delta)
    got = passive_sample_bound(scenario, delta)
    want = float(mp_passive(tau, w, delta, delta))
    assert got == pytest.approx(want, rel=1e-9)


@pytest.mark.parametrize("tau,w,delta", PINNED)
def test_active_bound_matches_mpmath(tau, w, delta):
    scenario = annulus_scenario(tau, w, delta)
    for n in (100, 5000, 123456.7):
        got = active_query_bound(scenario, n)
        want = float(mp_active(tau, w, delta, n))
        assert got == pytest.approx(want, rel=1e-9)


def test_passive_bound_worked_example():
    # With n_cover_quarter=8, confidence 1/16 => log term = ln(16) + ln(16)
    # is not what we pin; instead pick numbers giving 20 * ln 16.
    # rho0 = rho1 = 0.25, p_y0 = p_y1 = 0.5 => denominator 1/8;
    # ln(2*8) + ln(2) = ln 32; choose conf = 1/2.
    s = BoundsScenario(
        tau=1.0,
        w=0.0,
        gamma=0.1,
        delta=0.1,
        beta=0.5,
        p_y1=0.5,
        n_cover_quarter=8,
        rho0_quarter=0.25,
        rho1_quarter=0.25,
    )
    got = passive_sample_bound(s, 0.5)
    assert got == pytest.approx(8.0 * math.log(32.0), rel=1e-12)


def test_active_bound_worked_example():
    # beta = 1/2, delta = 3/4 => confidence = 1 - sqrt(1/4) = 1/2,
    # first term = ln(1/(1/2 * 1/2)) / ln 2 = ln 4 / ln 2 = 2 exactly.
    # n = 8 => ceil(log2 8) + 1 = 4; second term = 8 * 2 * 0.01 * 4 = 0.64.
    s = BoundsScenario(
        tau=1.0,
        w=0.0,
        gamma=0.1,
        delta=0.75,
        beta=0.5,
        p_y1=0.5,
        n_cover_tube=2,
        h_tube=0.01,
    )
    got = active_query_bound(s, 8)
    assert got == pytest.approx(2.0 + 0.64, rel=1e-12)


def test_confidence_arg_validated():
    s = annulus_scenario(0.1, 1e-10, 0.1)
    with pytest.raises(InvalidParameterError):
        passive_sample_bound(s, 0.0)
    with pytest.raises(InvalidParameterError):
        passive_sample_bound(s, 1.0)
    with pytest.raises(InvalidParameterError):
        active_query_bound(s, 0.5)


# ---------------------------------------------------------------------------
# Geometry oracles.


def test_disk_lens_area_monte_carlo():
    rng = np.random.Generator(np.random.Philox(7))
    cases = [(1.0, 0.5, 0.8), (1.0, 1.0, 0.3), (2.0, 0.7, 1.9), (0.5, 1.5, 0.6)]
    for r1, r2, d in cases:
        n = 400_000
        pts = rng.uniform(-r2, r2, size=(n, 2))
        inside_ball = np.sum(pts * pts, axis=1) <= r2 * r2
        shifted = pts - np.array([d, 0.0])
        inside_disk = np.sum(shifted * shifted, axis=1) <= r1 * r1
        frac = np.mean(inside_ball & inside_disk)
        estimate = frac * (2 * r2) ** 2
        exact = disk_lens_area(r1, r2, d)
        se = math.sqrt(frac * (1 - frac) / n) * (2 * r2) ** 2
        assert abs(estimate - exact) < 5 * se + 1e-6


def test_disk_lens_area_special_cases():
    assert disk_lens_area(1.0, 0.5, 2.0) == 0.0
    assert disk_lens_area(1.0, 0.3, 0.1) == pytest.approx(math.pi * 0.09, rel=1e-12)
    assert disk_lens_area(0.3, 1.0, 0.1) == pytest.approx(math.pi * 0.09, rel=1e-12)
    assert disk_lens_area(0.0, 1.0, 0.5) == 0.0


def test_annulus_measures_monte_carlo():
    tau, w, delta = 0.5, 0.02, 0.1
    scenario = annulus_scenario(tau, w, delta)
    rng = np.random.Generator(np.random.Philox(11))
    n = 500_000
    quarter = scenario.gamma / 4.0
    big = scenario.w + scenario.gamma
    # Sample only inside a bounding box around the boundary-centered ball so
    # the hit counts are large enough for a tight tolerance.
    center = np.array([tau, 0.0])
    pts = center + rng.uniform(-big, big, size=(n, 2))
    box_area = (2.0 * big) ** 2
    r = np.hypot(pts[:, 0], pts[:, 1])
    in_class0 = r >= tau - w  # support of class 0 (square minus inner disk)
    in_class1 = r <= tau + w
    dist = np.hypot(pts[:, 0] - center[0], pts[:, 1] - center[1])

    area0 = 25.0 - math.pi * (tau - w) ** 2
    area1 = math.pi * (tau + w) ** 2
    rho0_mc = np.mean(in_class0 & (dist <= quarter)) * box_area / area0
    rho1_mc = np.mean(in_class1 & (dist <= quarter)) * box_area / area1
    h_mc = (
        scenario.p_y0 * np.mean(in_class0 & (dist <= big)) * box_area / area0
        + scenario.p_y1 * np.mean(in_class1 & (dist <= big)) * box_area / area1
    )
    assert scenario.rho0_quarter == pytest.approx(rho0_mc, rel=0.05)
    assert scenario.rho1_quarter == pytest.approx(rho1_mc, rel=0.05)
    assert scenario.h_tube == pytest.approx(h_mc, rel=0.05)


def test_annulus_measures_infeasible_geometry():
    base = BoundsScenario(tau=2.4, w=0.2, gamma=0.01, delta=0.1, beta=0.5, p_y1=0.5)
    with pytest.raises(InfeasibleScenarioError):
        annulus_measures(base)


# ---------------------------------------------------------------------------
# Covering numbers.


@pytest.mark.parametrize("tau,r", [(1.0, 0.1), (0.5, 0.05), (1.0, 0.7), (0.1, 0.004)])
def test_covering_number_is_minimal(tau, r):
    count = covering_number_circle(tau, r)
    assert circle_cover_feasible(tau, r, count)
    if count > 1:
        assert not circle_cover_feasible(tau, r, count - 1)


def test_covering_number_large_ball():
    assert covering_number_circle(1.0, 2.0) == 1
    assert covering_number_circle(1.0, 5.0) == 1
    with pytest.raises(InvalidParameterError):
        covering_number_circle(0.0, 1.0)
    with pytest.raises(InvalidParameterError):
        covering_number_circle(1.0, -1.0)


# ---------------------------------------------------------------------------
# Feasibility helpers.


def test_feasible_gamma_properties():
    for tau, w in [(0.1, 1e-10), (0.5, 1e-3), (1.0, 0.01)]:
        gamma = feasible_gamma(tau, w)
        assert gamma > 0
        assert gamma + w < FEASIBILITY_SLOPE * tau
        assert gamma == pytest.approx(FEASIBILITY_SLOPE * tau - w - GAMMA_MARGIN)
        lo, hi = epsilon_interval(tau, w, gamma)
        assert 0 < lo < hi


def test_feasible_gamma_rejects_wide_tube():
    with pytest.raises(InfeasibleScenarioError):
        feasible_gamma(0.1, 0.05)


def test_epsilon_interval_empty_when_gamma_too_large():
    # gamma above the feasibility slope makes the radicand negative.
    assert epsilon_interval(0.1, 0.0, 0.1) is None


def test_reference_gamma_value():
    assert feasible_gamma(0.1, 1e-10) == pytest.approx(0.017147287425380971, abs=1e-15)


# ---------------------------------------------------------------------------
# Ratio scans.


def test_scan_deterministic_and_feasible():
    grid = np.linspace(0.05, 0.8, 7)
    rows1 = complexity_ratio_scan("vary-tau", grid, delta=0.1, w=1e-10)
    rows2 = complexity_ratio_scan("vary-tau", grid, delta=0.1, w=1e-10)
    assert rows1 == rows2
    for row in rows1:
        assert row.feasible
        assert row.ratio == pytest.approx(row.active_bound / row.passive_bound)
        assert row.active_bound > 0 and row.passive_bound > 0


def test_scan_matches_mpmath():
    grid = [1e-10, 1e-4, 1e-3, 1.7e-2]
    rows = complexity_ratio_scan("vary-w", grid, delta=0.1, tau=0.1)
    for row, w in zip(rows, grid):
        assert row.feasible
        passive = mp_passive(0.1, w, 0.1, 1 - mpmath.sqrt(1 - mpmath.mpf("0.1")))
        active = mp_active(0.1, w, 0.1, float(passive))
        assert row.passive_bound == pytest.approx(float(passive), rel=1e-9)
        assert row.active_bound == pytest.approx(float(active), rel=1e-9)


def test_scan_flags_infeasible_rows():
    rows = complexity_ratio_scan("vary-w", [1e-3, 0.05], delta=0.1, tau=0.1)
    assert rows[0].feasible and not rows[1].feasible
    assert math.isnan(rows[1].ratio) and math.isnan(rows[1].gamma)


def test_scan_rejects_bad_mode():
    with pytest.raises(InvalidParameterError):
        complexity_ratio_scan("vary-delta", [0.1])


def test_scan_csv_round_trip(tmp_path):
    rows = complexity_ratio_scan("vary-tau", [0.1, 0.2], delta=0.1, w=1e-10)
    path = tmp_path / "scan.csv"
    save_scan_csv(rows, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "param,gamma,N_cover,h,rho0,rho1,active_bound,passive_bound,ratio,feasible"
    fields = lines[1].split(",")
    assert float(fields[0]) == 0.1
    assert float(fields[1]) == rows[0].gamma
    assert int(fields[2]) == rows[0].n_cover
    assert float(fields[8]) == rows[0].ratio
    assert fields[9] == "1"
