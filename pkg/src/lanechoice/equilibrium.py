"""Selfish lane-choice equilibria under a uniform toll.

Decision vehicles pick the lane with the lower cost (delay plus toll).
Corner cases put everyone on one lane; in between, every equilibrium shares
the same lane loads and the set of equilibria forms a simplex of flow splits.
This module computes the lane loads, the simplex's best- and worst-case
vertices for total commuter delay, and verifies candidate flows against the
per-class equilibrium inequalities.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .model import (
    DECISION_CLASSES,
    DECISION_INDEX,
    FlowDistribution,
    Scenario,
    UniformToll,
    VehicleClass,
    effective_flows,
    lane_costs,
    total_commuter_delay,
)
from .numerics import bisect_increasing


class NoInteriorRoot(ValueError):
    """The toll is outside the range where both lanes share the cost crossing."""


class EquilibriumKind(Enum):
    UNIQUE_ALL_LANE2 = "unique_all_lane2"
    UNIQUE_ALL_LANE1 = "unique_all_lane1"
    UNIQUE_SINGLE_CLASS_SPLIT = "unique_single_class_split"
    SIMPLEX = "simplex"

    @property
    def unique(self) -> bool:
        return self is not EquilibriumKind.SIMPLEX


@dataclass(frozen=True)
class EquilibriumResult:
    """Either a unique equilibrium (best == worst) or the simplex envelope."""

    kind: EquilibriumKind
    phi_1_star: float
    best: FlowDistribution
    worst: FlowDistribution
    j_best: float
    j_worst: float
    simplex_budget: float


def uniqueness_thresholds(scenario: Scenario) -> Tuple[float, float]:
    """Toll levels (tau_high, tau_low) bounding the non-unique regime.

    The equilibrium is unique iff tau >= tau_high (all decision vehicles on
    lane 2), tau <= tau_low (all on lane 1), or at most one decision class
    has positive commuter demand.
    """
    eq = scenario.effective
    d1, d2 = scenario.delays
    total = eq.total_delta
    base = eq.delta[VehicleClass.AV_HO]
    tau_high = d2(total - base) - d1(base)
    tau_low = d2(0.0) - d1(total)
    return tau_high, tau_low


def positive_decision_classes(scenario: Scenario) -> Tuple[VehicleClass, ...]:
    return tuple(p for p in DECISION_CLASSES if scenario.demand[p] > 0)


def equilibrium_is_unique(scenario: Scenario) -> bool:
    """Uniqueness verdict for a uniform-toll scenario."""
    tau = _uniform_tau(scenario)
    tau_high, tau_low = uniqueness_thresholds(scenario)
    if tau >= tau_high or tau <= tau_low:
        return True
    return len(positive_decision_classes(scenario)) <= 1


def _uniform_tau(scenario: Scenario) -> float:
    if not isinstance(scenario.toll, UniformToll):
        raise TypeError("a uniform-toll scenario is required")
    return scenario.toll.tau


def _cost_gap(scenario: Scenario, tau: float):
    d1, d2 = scenario.delays
    total = scenario.effective.total_delta

    def gap(phi_1: float) -> float:
        return d1(phi_1) + tau - d2(total - phi_1)

    return gap


def solve_phi1_star(scenario: Scenario, rtol: float = 1e-12) -> float:
    """Lane-1 effective flow equalizing the two lane costs.

    Bisection on the strictly increasing cost gap; only valid when the toll
    lies strictly between the uniqueness thresholds.
    """
    tau = _uniform_tau(scenario)
    tau_high, tau_low = uniqueness_thresholds(scenario)
    if not (tau_low < tau < tau_high):
        raise NoInteriorRoot(
            f"toll {tau} is outside ({tau_low}, {tau_high}); the equilibrium sits at a corner"
        )
    eq = scenario.effective
    lo = eq.delta[VehicleClass.AV_HO]
    return bisect_increasing(_cost_gap(scenario, tau), lo, eq.total_delta, rtol=rtol)


def greedy_fill(
    budget: float,
    honest_delta: Mapping[VehicleClass, float],
    nu: Mapping[VehicleClass, float],
    descending: bool,
) -> Dict[VehicleClass, float]:
    """Allocate a lane-1 effective-flow budget across classes in mobility
    order (descending for the best case, ascending for the worst), breaking
    nu ties by the fixed class order."""
    sign = -1.0 if descending else 1.0
    order = sorted(honest_delta, key=lambda p: (sign * nu[p], DECISION_INDEX[p]))
    take: Dict[VehicleClass, float] = {}
    remaining = budget
    for p in order:
        t = min(remaining, honest_delta[p])
        t = max(t, 0.0)
        take[p] = t
        remaining -= t
    return take


def _flow_from_take(
    take: Mapping[VehicleClass, float],
    honest_d_v: Mapping[VehicleClass, float],
    eq,
    classes: Iterable[VehicleClass],
    pinned_lane1: Mapping[VehicleClass, float],
) -> FlowDistribution:
    lane1 = dict(pinned_lane1)
    for p in classes:
        vehicles = take.get(p, 0.0) / eq.vehicle_scale(p)
        lane1[p] = min(vehicles, honest_d_v[p])
    lane2 = {p: honest_d_v[p] - lane1.get(p, 0.0) for p in DECISION_CLASSES}
    return FlowDistribution(lane1=lane1, lane2=lane2)


def solve_equilibrium(
    scenario: Scenario,
    pin_to_lane1: Sequence[VehicleClass] = (),
) -> EquilibriumResult:
    """Solve the uniform-toll lane-choice equilibrium.

    `pin_to_lane1` forces whole classes onto lane 1 regardless of cost (used
    by lane-policy comparisons); those classes join AV_HO as untolled lane-1
    base load and the remaining classes keep choosing selfishly.
    """
    tau = _uniform_tau(scenario)
    eq = scenario.effective
    d1, d2 = scenario.delays
    total = eq.total_delta

    honest_delta = scenario.honest_delta()
    honest_d_v = scenario.honest_d_v()
    pinned = tuple(pin_to_lane1)
    deciders = tuple(p for p in DECISION_CLASSES if p not in pinned)

    base = eq.delta[VehicleClass.AV_HO] + scenario.misbehaving_delta()
    base += sum(honest_delta[p] for p in pinned)
    pinned_lane1 = {p: honest_d_v[p] for p in pinned}

    free = sum(honest_delta[p] for p in deciders)
    tau_high = d2(total - base) - d1(base)
    tau_low = d2(0.0) - d1(total)

    if free <= 0 or tau >= tau_high:
        phi_1, budget = base, 0.0
        corner: Optional[EquilibriumKind] = EquilibriumKind.UNIQUE_ALL_LANE2
    elif tau <= tau_low:
        phi_1, budget = total, free
        corner = EquilibriumKind.UNIQUE_ALL_LANE1
    else:
        phi_1 = bisect_increasing(_cost_gap(scenario, tau), base, total)
        budget = phi_1 - base
        corner = None

    decision_delta = {p: honest_delta[p] for p in deciders}
    if corner is EquilibriumKind.UNIQUE_ALL_LANE2:
        best_take = worst_take = {p: 0.0 for p in deciders}
        kind = corner
    elif corner is EquilibriumKind.UNIQUE_ALL_LANE1:
        best_take = worst_take = dict(decision_delta)
        kind = corner
    else:
        best_take = greedy_fill(budget, decision_delta, eq.nu, descending=True)
        worst_take = greedy_fill(budget, decision_delta, eq.nu, descending=False)
        splitters = [p for p in deciders if scenario.demand[p] > 0 and honest_delta[p] > 0]
        kind = (
            EquilibriumKind.SIMPLEX
            if len(splitters) > 1
            else EquilibriumKind.UNIQUE_SINGLE_CLASS_SPLIT
        )

    best = _flow_from_take(best_take, honest_d_v, eq, deciders, pinned_lane1)
    worst = _flow_from_take(worst_take, honest_d_v, eq, deciders, pinned_lane1)
    j_best = total_commuter_delay(best, scenario)
    j_worst = total_commuter_delay(worst, scenario)
    if kind.unique:
        j_worst = j_best
        worst = best
    return EquilibriumResult(
        kind=kind,
        phi_1_star=phi_1,
        best=best,
        worst=worst,
        j_best=j_best,
        j_worst=j_worst,
        simplex_budget=budget,
    )


def verify_equilibrium(
    flow: FlowDistribution,
    scenario: Scenario,
    tol: float = 1e-8,
) -> Tuple[bool, Dict[VehicleClass, Tuple[float, float]]]:
    """Check the per-class equilibrium inequalities at a candidate flow.

    Returns the verdict and, per class, the lane-1 and lane-2 violation
    products f * (own-lane cost minus other-lane cost); both must stay below
    tol for every class.
    """
    eq = scenario.effective
    phi_1, phi_2 = effective_flows(flow, eq, scenario.misbehavior)
    c1, c2 = lane_costs(phi_1, phi_2, scenario.tolls_by_class(), scenario.delays)
    report: Dict[VehicleClass, Tuple[float, float]] = {}
    ok = True
    for p in DECISION_CLASSES:
        v1 = flow.lane1[p] * (c1[p] - c2)
        v2 = flow.lane2[p] * (c2 - c1[p])
        report[p] = (v1, v2)
        if v1 > tol or v2 > tol:
            ok = False
    return ok, report
