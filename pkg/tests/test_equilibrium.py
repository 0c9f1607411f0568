"""Uniform-toll equilibria: thresholds, interior root, vertices, verifier."""

import dataclasses

import numpy as np
import pytest

from conftest import (
    AV_HO,
    AV_LO,
    HV_HO,
    HV_LO,
    make_example1,
    random_interior_scenario,
)
from lanechoice import (
    BPRDelay,
    CommuterDemand,
    EquilibriumKind,
    FlowDistribution,
    HeadwayRatio,
    NoInteriorRoot,
    OccupancyProfile,
    Scenario,
    UniformToll,
    effective_flows,
    equilibrium_is_unique,
    solve_equilibrium,
    solve_phi1_star,
    total_commuter_delay,
    uniqueness_thresholds,
    verify_equilibrium,
)


def test_thresholds_config_a(ex1a):
    tau_high, tau_low = uniqueness_thresholds(ex1a)
    assert tau_high == pytest.approx(0.7, abs=1e-10)
    assert tau_low == pytest.approx(-0.8, abs=1e-10)


def test_thresholds_config_b(ex1b):
    tau_high, _ = uniqueness_thresholds(ex1b)
    assert tau_high == pytest.approx(0.74, abs=1e-10)


def test_unique_for_every_toll_with_single_decision_class():
    base = dict(
        occupancy=OccupancyProfile(n_lo=1, n_ho=4),
        headway=HeadwayRatio(mu=0.5),
        delays=(BPRDelay(3, 1, 1, 10), BPRDelay(3, 1, 1, 10)),
    )
    for tau in (0.0, 0.1, 0.5, 2.0):
        only_av_ho = Scenario(demand=CommuterDemand({AV_HO: 4}), toll=UniformToll(tau), **base)
        assert equilibrium_is_unique(only_av_ho)
        one_decider = Scenario(demand=CommuterDemand({HV_LO: 5, AV_HO: 4}),
                               toll=UniformToll(tau), **base)
        assert equilibrium_is_unique(one_decider)


def test_phi1_star_config_a(ex1a):
    assert solve_phi1_star(ex1a) == pytest.approx(1.5, abs=1e-9)


def test_phi1_star_config_b(ex1b):
    assert solve_phi1_star(ex1b) == pytest.approx(2.0, abs=1e-9)


def test_phi1_star_symmetric_no_toll():
    scenario = Scenario(
        demand=CommuterDemand({HV_LO: 2, HV_HO: 2, AV_LO: 2, AV_HO: 2}),
        occupancy=OccupancyProfile(n_lo=1, n_ho=2),
        headway=HeadwayRatio(mu=0.5),
        delays=(BPRDelay(3, 1, 1, 10), BPRDelay(3, 1, 1, 10)),
        toll=UniformToll(0.0),
    )
    total = scenario.effective.total_delta
    assert solve_phi1_star(scenario) == pytest.approx(total / 2, abs=1e-9)


def test_phi1_star_requires_interior_toll(ex1a):
    with pytest.raises(NoInteriorRoot):
        solve_phi1_star(dataclasses.replace(ex1a, toll=UniformToll(0.8)))


def test_solve_config_a_vertices(ex1a):
    res = solve_equilibrium(ex1a)
    assert res.kind is EquilibriumKind.SIMPLEX
    assert res.best.lane1_tuple() == pytest.approx((0.0, 1.0, 0.0), abs=1e-9)
    assert res.worst.lane1_tuple() == pytest.approx((1.0, 0.0, 0.0), abs=1e-9)
    assert res.j_best == pytest.approx(54.4, abs=1e-8)
    assert res.j_worst == pytest.approx(55.9, abs=1e-8)
    assert res.simplex_budget == pytest.approx(1.0, abs=1e-9)


def test_solve_config_b_vertices(ex1b):
    res = solve_equilibrium(ex1b)
    assert res.best.lane1_tuple() == pytest.approx((0.0, 0.0, 3.0), abs=1e-8)
    assert res.worst.lane1_tuple() == pytest.approx((1.2, 0.0, 0.0), abs=1e-8)


def test_solve_corner_above_threshold():
    res = solve_equilibrium(make_example1(tau=0.8))
    assert res.kind is EquilibriumKind.UNIQUE_ALL_LANE2
    assert res.best.lane1_tuple() == pytest.approx((0.0, 0.0, 0.0))
    assert res.phi_1_star == pytest.approx(0.5)
    assert res.j_best == res.j_worst


def test_solve_all_on_lane1_when_free_lane_is_slow():
    scenario = Scenario(
        demand=CommuterDemand({HV_LO: 2, HV_HO: 2, AV_LO: 2, AV_HO: 2}),
        occupancy=OccupancyProfile(n_lo=1, n_ho=2),
        headway=HeadwayRatio(mu=0.5),
        delays=(BPRDelay(1, 1, 1, 10), BPRDelay(9, 1, 1, 10)),
        toll=UniformToll(0.5),
    )
    res = solve_equilibrium(scenario)
    assert res.kind is EquilibriumKind.UNIQUE_ALL_LANE1
    eq = scenario.effective
    assert res.phi_1_star == pytest.approx(eq.total_delta)
    for p in (HV_LO, HV_HO, AV_LO):
        assert res.best.lane1[p] == pytest.approx(eq.d_v[p])


def test_single_class_split_is_unique():
    scenario = Scenario(
        demand=CommuterDemand({HV_LO: 5, AV_HO: 4}),
        occupancy=OccupancyProfile(n_lo=1, n_ho=4),
        headway=HeadwayRatio(mu=0.5),
        delays=(BPRDelay(3, 1, 1, 10), BPRDelay(3, 1, 1, 10)),
        toll=UniformToll(0.2),
    )
    res = solve_equilibrium(scenario)
    assert res.kind is EquilibriumKind.UNIQUE_SINGLE_CLASS_SPLIT
    assert res.j_best == res.j_worst
    ok, _ = verify_equilibrium(res.best, scenario, tol=1e-8)
    assert ok


def test_no_toll_collapses_delay_spread(ex1a):
    scenario = dataclasses.replace(ex1a, toll=UniformToll(0.0))
    res = solve_equilibrium(scenario)
    assert res.kind is EquilibriumKind.SIMPLEX
    assert abs(res.j_best - res.j_worst) <= 1e-10
    # every simplex point shares J when the lanes cost the same
    eq = scenario.effective
    eta = scenario.honest_delta()
    budget = res.simplex_budget
    for weights in ((1, 1, 1), (5, 1, 2), (0.2, 3, 1)):
        scaled = {p: w * eta[p] for p, w in zip((HV_LO, HV_HO, AV_LO), weights)}
        norm = budget / sum(scaled.values())
        take = {p: min(norm * scaled[p], eta[p]) for p in scaled}
        lane1 = {p: take[p] / eq.vehicle_scale(p) for p in take}
        flow = FlowDistribution.from_lane1(lane1, eq.d_v)
        phi_1, _ = effective_flows(flow, eq)
        if abs(phi_1 - res.phi_1_star) > 1e-9:  # weights pushed a class past its demand
            continue
        assert total_commuter_delay(flow, scenario) == pytest.approx(res.j_best, abs=1e-8)


def test_verify_accepts_paper_equilibrium(ex1a):
    eq = ex1a.effective
    best = FlowDistribution.from_lane1({HV_HO: 1.0}, eq.d_v)
    ok, report = verify_equilibrium(best, ex1a, tol=1e-8)
    assert ok, report


def test_verify_rejects_everyone_on_lane1(ex1a):
    eq = ex1a.effective
    flow = FlowDistribution.from_lane1({HV_LO: 5.0, HV_HO: 1.0, AV_LO: 3.0}, eq.d_v)
    ok, report = verify_equilibrium(flow, ex1a, tol=1e-8)
    assert not ok
    assert any(v1 > 1e-8 for v1, _ in report.values())


def test_verify_vacuous_without_decision_demand():
    scenario = Scenario(
        demand=CommuterDemand({AV_HO: 4}),
        occupancy=OccupancyProfile(n_lo=1, n_ho=4),
        headway=HeadwayRatio(mu=0.5),
        delays=(BPRDelay(3, 1, 1, 10), BPRDelay(3, 1, 1, 10)),
        toll=UniformToll(0.5),
    )
    flow = FlowDistribution.from_lane1({}, scenario.effective.d_v)
    ok, _ = verify_equilibrium(flow, scenario)
    assert ok


def test_interior_root_and_vertices_on_random_scenarios():
    rng = np.random.default_rng(7)
    for _ in range(40):
        scenario = random_interior_scenario(rng)
        res = solve_equilibrium(scenario)
        d1, d2 = scenario.delays
        total = scenario.effective.total_delta
        residual = d1(res.phi_1_star) + scenario.toll.tau - d2(total - res.phi_1_star)
        assert abs(residual) <= 1e-8
        assert res.j_best <= res.j_worst + 1e-12
        for flow in (res.best, res.worst):
            ok, report = verify_equilibrium(flow, scenario, tol=1e-8)
            assert ok, report
            phi_1, _ = effective_flows(flow, scenario.effective)
            assert phi_1 == pytest.approx(res.phi_1_star, abs=1e-8)


def test_exchange_sign_property_on_random_scenarios():
    """Moving effective lane-1 flow toward a higher-mobility class lowers the
    total commuter delay in proportion to the lane-cost gap."""
    rng = np.random.default_rng(11)
    eps = 1e-3
    checked = 0
    for _ in range(25):
        scenario = random_interior_scenario(rng)
        eq = scenario.effective
        res = solve_equilibrium(scenario)
        budget = res.simplex_budget
        eta = scenario.honest_delta()
        share = budget / sum(eta.values())
        take = {p: share * eta[p] for p in eta}
        d1, d2 = scenario.delays
        gap = d1(res.phi_1_star) - d2(eq.total_delta - res.phi_1_star)
        assert gap == pytest.approx(-scenario.toll.tau, abs=1e-8)

        def flow_from(take_map):
            lane1 = {p: take_map[p] / eq.vehicle_scale(p) for p in take_map}
            return FlowDistribution.from_lane1(lane1, eq.d_v)

        j0 = total_commuter_delay(flow_from(take), scenario)
        for p in take:
            for q in take:
                if p is q or take[p] < eps or take[q] + eps > eta[q]:
                    continue
                shifted = dict(take)
                shifted[p] -= eps
                shifted[q] += eps
                delta_j = total_commuter_delay(flow_from(shifted), scenario) - j0
                expected = (eq.nu[q] - eq.nu[p]) * eps * gap
                assert delta_j == pytest.approx(expected, abs=1e-8)
                if eq.nu[q] > eq.nu[p]:
                    assert delta_j < -1e-12
                checked += 1
    assert checked > 50
