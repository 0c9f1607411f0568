"""Brute-force oracle: grid enumeration against the raw inequalities."""

import dataclasses

import numpy as np
import pytest

from conftest import AV_HO, AV_LO, make_example1
from lanechoice import (
    BPRDelay,
    CommuterDemand,
    GridSpec,
    GridTooLarge,
    HeadwayRatio,
    OccupancyProfile,
    Scenario,
    UniformToll,
    brute_force_equilibria,
    brute_force_j_extremes,
    effective_flows,
    solve_equilibrium,
)


def test_grid_spec_validation():
    with pytest.raises(ValueError):
        GridSpec(resolution=0.0)


def test_equilibria_cluster_at_the_balance_flow(ex1a):
    points = brute_force_equilibria(ex1a, GridSpec(resolution=0.05, tolerance=1e-3))
    assert points
    eq = ex1a.effective
    for flow in points:
        phi_1, _ = effective_flows(flow, eq)
        assert abs(phi_1 - 1.5) <= 0.1


def test_equilibria_unique_corner_has_single_point():
    scenario = make_example1(tau=0.8)
    points = brute_force_equilibria(scenario, GridSpec(resolution=0.05, tolerance=1e-3))
    assert len(points) == 1
    assert points[0].lane1_tuple() == pytest.approx((0.0, 0.0, 0.0))


def test_equilibria_zero_decision_demand():
    scenario = Scenario(
        demand=CommuterDemand({AV_HO: 4}),
        occupancy=OccupancyProfile(n_lo=1, n_ho=4),
        headway=HeadwayRatio(mu=0.5),
        delays=(BPRDelay(3, 1, 1, 10), BPRDelay(3, 1, 1, 10)),
        toll=UniformToll(0.5),
    )
    points = brute_force_equilibria(scenario, GridSpec(resolution=0.1))
    assert len(points) == 1
    assert points[0].lane1_tuple() == (0.0, 0.0, 0.0)
    assert points[0].lane2_tuple() == (0.0, 0.0, 0.0)


def test_axis_guard_trips(ex1a):
    with pytest.raises(GridTooLarge):
        brute_force_equilibria(ex1a, GridSpec(resolution=0.001))


def test_equilibria_output_is_lexicographic(ex1a):
    points = brute_force_equilibria(ex1a, GridSpec(resolution=0.05, tolerance=1e-3))
    trios = [p.lane1_tuple() for p in points]
    assert trios == sorted(trios)


def test_j_extremes_reference_window(ex1a):
    j_min, j_max = brute_force_j_extremes(ex1a, 1.5, GridSpec(resolution=0.01))
    assert j_min == pytest.approx(54.4, abs=0.2)
    assert j_max == pytest.approx(55.9, abs=0.2)


def test_j_extremes_variant_minimum_sits_at_autonomy_vertex(ex1b):
    """The grid minimizer loads the low-occupancy autonomous class."""
    eq = ex1b.effective
    res = solve_equilibrium(ex1b)
    j_min, _ = brute_force_j_extremes(ex1b, res.phi_1_star, GridSpec(resolution=0.01))
    assert j_min == pytest.approx(res.j_best, abs=0.05)
    assert res.best.lane1[AV_LO] == pytest.approx(3.0, abs=1e-8)


def test_j_extremes_collapse_without_toll(ex1a):
    scenario = dataclasses.replace(ex1a, toll=UniformToll(0.0))
    res = solve_equilibrium(scenario)
    j_min, j_max = brute_force_j_extremes(scenario, res.phi_1_star, GridSpec(resolution=0.02))
    assert j_max - j_min <= 1e-8


def test_snapped_analytic_vertices_are_accepted(ex1a):
    res = solve_equilibrium(ex1a)
    spec = GridSpec(resolution=0.05, tolerance=1e-3)
    points = brute_force_equilibria(ex1a, spec)
    trios = np.array([p.lane1_tuple() for p in points])
    for flow in (res.best, res.worst):
        target = np.array(flow.lane1_tuple())
        distances = np.max(np.abs(trios - target), axis=1)
        assert distances.min() <= 0.5 * spec.resolution + 1e-9
