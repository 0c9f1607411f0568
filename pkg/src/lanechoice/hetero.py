"""Equilibria under class-differentiated tolls, plus the two-step procedure
that turns an interior uniform toll into a differentiated vector steering the
system to the corresponding best-case equilibrium.

With per-class tolls the equilibrium has a threshold structure: order the
toll levels; classes cheaper than the marginal ("split") level ride lane 1,
costlier ones ride lane 2, and the split level's classes absorb whatever
lane-1 budget remains at the cost-balancing flow.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Mapping, Optional

from .equilibrium import equilibrium_is_unique, solve_phi1_star
from .model import (
    DECISION_CLASSES,
    DECISION_INDEX,
    FlowDistribution,
    Scenario,
    TollVector,
    UniformToll,
    VehicleClass,
    total_commuter_delay,
)
from .numerics import bisect_increasing


class NotApplicable(ValueError):
    """Toll differentiation was requested for a toll that already induces a
    unique equilibrium."""


class LaneUse(Enum):
    LANE1 = "lane1"
    LANE2 = "lane2"
    SPLIT = "split"


@dataclass(frozen=True)
class HeteroEquilibrium:
    """Equilibrium under differentiated tolls (honest flows only).

    When several classes share the split toll level the equilibrium is a
    tie-simplex; `flow` is then the representative that loads tied classes in
    descending mobility degree and `is_unique` is False.
    """

    phi_1: float
    split_class: Optional[VehicleClass]
    lane_assignment: Mapping[VehicleClass, LaneUse]
    flow: FlowDistribution
    is_unique: bool


def _balance_root(scenario: Scenario, tau: float) -> Optional[float]:
    """Flow phi_1 where lane-1 cost at toll tau equals the lane-2 cost, or
    None when the costs never cross on the feasible range."""
    d1, d2 = scenario.delays
    total = scenario.effective.total_delta

    def gap(phi: float) -> float:
        return d1(phi) + tau - d2(total - phi)

    if gap(0.0) > 0 or gap(total) < 0:
        return None
    return bisect_increasing(gap, 0.0, total)


def solve_hetero_equilibrium(scenario: Scenario, tol: float = 1e-9) -> HeteroEquilibrium:
    """Solve the lane-choice equilibrium under per-class tolls, honoring the
    scenario's misbehaving proportions (misbehaving vehicles sit on lane 1
    regardless of cost; honest vehicles choose selfishly)."""
    if isinstance(scenario.toll, UniformToll):
        if scenario.toll.tau <= 0:
            raise ValueError("the differentiated-toll solver requires strictly positive tolls")
        tolls = {p: scenario.toll.tau for p in DECISION_CLASSES}
    else:
        tolls = scenario.tolls_by_class()

    eq = scenario.effective
    eta = scenario.honest_delta()
    honest_d_v = scenario.honest_d_v()
    base = eq.delta[VehicleClass.AV_HO] + scenario.misbehaving_delta()
    total = eq.total_delta

    levels = sorted(set(tolls.values()))
    by_level = {t: [p for p in DECISION_CLASSES if tolls[p] == t] for t in levels}

    for tau_g in levels:
        phi_hat = _balance_root(scenario, tau_g)
        if phi_hat is None:
            continue
        below = base + sum(eta[p] for p in DECISION_CLASSES if tolls[p] < tau_g)
        at_level = sum(eta[p] for p in by_level[tau_g])
        if below - tol <= phi_hat <= below + at_level + tol:
            return _split_solution(scenario, tolls, tau_g, phi_hat, below, eta, honest_d_v, tol)

    return _boundary_solution(scenario, tolls, levels, by_level, base, eta, honest_d_v, tol)


def _split_solution(scenario, tolls, tau_g, phi_hat, below, eta, honest_d_v, tol):
    eq = scenario.effective
    tied = sorted(
        (p for p in DECISION_CLASSES if tolls[p] == tau_g),
        key=lambda p: (-eq.nu[p], DECISION_INDEX[p]),
    )
    at_level = sum(eta[p] for p in tied)
    budget = min(max(phi_hat - below, 0.0), at_level)

    lane1 = {}
    assignment: Dict[VehicleClass, LaneUse] = {}
    for p in DECISION_CLASSES:
        if tolls[p] < tau_g:
            lane1[p] = honest_d_v[p]
            assignment[p] = LaneUse.LANE1
        elif tolls[p] > tau_g:
            lane1[p] = 0.0
            assignment[p] = LaneUse.LANE2

    remaining = budget
    split_class: Optional[VehicleClass] = None
    last_loaded: Optional[VehicleClass] = None
    for p in tied:
        take = min(remaining, eta[p])
        remaining -= take
        vehicles = min(take / eq.vehicle_scale(p), honest_d_v[p])
        lane1[p] = vehicles
        if take > tol:
            last_loaded = p
        if tol < take < eta[p] - tol:
            assignment[p] = LaneUse.SPLIT
            if split_class is None:
                split_class = p
        elif take <= tol:
            assignment[p] = LaneUse.LANE2
        else:
            assignment[p] = LaneUse.LANE1
    if split_class is None:
        # Budget landed exactly on a class boundary; the marginal class is
        # still the cost-indifferent one.
        split_class = last_loaded if last_loaded is not None else tied[0]

    positive_tied = [p for p in tied if eta[p] > tol]
    is_unique = not (len(positive_tied) > 1 and tol < budget < at_level - tol)

    flow = FlowDistribution.from_lane1(lane1, honest_d_v)
    return HeteroEquilibrium(
        phi_1=phi_hat,
        split_class=split_class,
        lane_assignment=assignment,
        flow=flow,
        is_unique=is_unique,
    )


def _boundary_solution(scenario, tolls, levels, by_level, base, eta, honest_d_v, tol):
    """No toll level supports a split: the equilibrium sits at a cut between
    consecutive levels (possibly the all-on-lane-2 or all-on-lane-1 corner),
    every class assignment forced by strict preference."""
    d1, d2 = scenario.delays
    total = scenario.effective.total_delta
    level_eta = [sum(eta[p] for p in by_level[t]) for t in levels]

    n_levels = len(levels)
    for cut in range(n_levels + 1):
        phi = base + sum(level_eta[:cut])
        cost2 = d2(total - phi)
        if cut >= 1 and d1(phi) + levels[cut - 1] > cost2 + tol:
            continue
        if cut < n_levels and d1(phi) + levels[cut] < cost2 - tol:
            continue
        lane1 = {}
        assignment = {}
        for k, t in enumerate(levels):
            for p in by_level[t]:
                on_lane1 = k < cut
                lane1[p] = honest_d_v[p] if on_lane1 else 0.0
                assignment[p] = LaneUse.LANE1 if on_lane1 else LaneUse.LANE2
        flow = FlowDistribution.from_lane1(lane1, honest_d_v)
        return HeteroEquilibrium(
            phi_1=phi,
            split_class=None,
            lane_assignment=assignment,
            flow=flow,
            is_unique=True,
        )
    raise RuntimeError("no lane-choice equilibrium found; this should be impossible")


def differentiate_tolls(
    scenario: Scenario,
    tau_star: float,
    phi_1_star: Optional[float] = None,
    tau_minus: Optional[float] = None,
    tau_plus: Optional[float] = None,
) -> TollVector:
    """Differentiated tolls steering the system to the best-case equilibrium
    of the uniform toll tau_star.

    The class picked to keep tau_star is the one using both lanes at the
    best-case equilibrium; classes with larger mobility degree get the lower
    toll tau_minus, classes with smaller mobility degree the higher toll
    tau_plus. Case selection compares phi_1_star against cumulative effective
    demands of the descending-mobility classes, with ties on the boundary
    going to the lower case.
    """
    if tau_star <= 0:
        raise NotApplicable(f"tau_star must be positive, got {tau_star}")
    uniform = dataclasses.replace(scenario, toll=UniformToll(tau_star), misbehavior={})
    if equilibrium_is_unique(uniform):
        raise NotApplicable(
            f"tau_star = {tau_star} induces a unique equilibrium; there is nothing to differentiate"
        )
    if phi_1_star is None:
        phi_1_star = solve_phi1_star(uniform)
    minus = 0.5 * tau_star if tau_minus is None else float(tau_minus)
    plus = 2.0 * tau_star if tau_plus is None else float(tau_plus)
    if not (0 < minus < tau_star < plus):
        raise ValueError(f"need 0 < tau_minus < tau_star < tau_plus, got {minus}, {tau_star}, {plus}")

    eq = scenario.effective
    delta = eq.delta
    # Case boundaries are inclusive; the slack keeps root-finding noise in
    # phi_1_star from flipping an exact-boundary case.
    eps = 1e-9 * max(1.0, eq.total_delta)
    hv_lo, hv_ho, av_lo, av_ho = (
        VehicleClass.HV_LO,
        VehicleClass.HV_HO,
        VehicleClass.AV_LO,
        VehicleClass.AV_HO,
    )
    if eq.nu[hv_ho] <= eq.nu[av_lo]:
        if phi_1_star <= delta[av_lo] + delta[av_ho] + eps:
            pattern = (plus, plus, tau_star)
        elif phi_1_star <= delta[hv_ho] + delta[av_lo] + delta[av_ho] + eps:
            pattern = (plus, tau_star, minus)
        else:
            pattern = (tau_star, minus, minus)
    else:
        if phi_1_star <= delta[hv_ho] + delta[av_ho] + eps:
            pattern = (plus, tau_star, plus)
        elif phi_1_star <= delta[av_lo] + delta[hv_ho] + delta[av_ho] + eps:
            pattern = (plus, minus, tau_star)
        else:
            pattern = (tau_star, minus, minus)
    return TollVector({hv_lo: pattern[0], hv_ho: pattern[1], av_lo: pattern[2]})


def hetero_total_delay(scenario: Scenario, equilibrium: HeteroEquilibrium) -> float:
    """Total commuter delay at a differentiated-toll equilibrium."""
    return total_commuter_delay(equilibrium.flow, scenario)
