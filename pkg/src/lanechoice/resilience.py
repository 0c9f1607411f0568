"""Resilience of lane delays and total commuter delay to toll evasion.

Misbehaving vehicles use the tolled lane without paying. As long as the
class that splits across both lanes at the no-misbehavior equilibrium can
retreat to lane 2, honest self-interest absorbs the extra load and lane
delays do not move. This module computes the misbehaving-proportion regions
where that buffering holds (the primary region anchored at the split class,
and secondary regions anchored at each cheaper-tolled class), classifies how
total commuter delay varies inside a region, and sweeps misbehaving
proportions to tabulate delays empirically.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import Mapping, Optional, Sequence, Tuple

from .hetero import _balance_root, solve_hetero_equilibrium
from .model import (
    DECISION_CLASSES,
    Scenario,
    VehicleClass,
    total_commuter_delay,
)


class NoSplitClass(ValueError):
    """The no-misbehavior equilibrium has no class using both lanes, so the
    analytic buffering argument does not apply."""


class DelayVariation(Enum):
    """How total commuter delay moves with misbehavior inside a resilient
    region. MIXED marks misbehaving classes on both sides of the split
    class's mobility degree; no monotonicity claim is made for it."""

    UNCHANGED = "unchanged"
    INCREASING = "increasing"
    DECREASING = "decreasing"
    MIXED = "mixed"


@dataclass(frozen=True)
class SecondaryRegion:
    """Buffering region anchored at a class tolled below the split class.

    Within the region the anchor class g_minus is the one splitting across
    lanes, at the balance flow phi_tilde. The misbehaving aggregate
    sum(delta[p] * alpha[p]) over classes not tolled below g_minus must stay
    between agg_upper - delta_g_minus * (1 - alpha[g_minus]) and agg_upper.
    """

    g_minus: VehicleClass
    phi_tilde: float
    inner_q_minus: Tuple[VehicleClass, ...]
    agg_upper: float
    delta_g_minus: float

    def alpha_interval(self, cls: VehicleClass, delta_cls: float) -> Optional[Tuple[float, float]]:
        """[lo, hi] for alpha of `cls` when it is the only misbehaving class,
        or None when the region is unreachable that way."""
        if cls in self.inner_q_minus:
            # alpha does not enter the aggregate; the region is alpha-free.
            if self.agg_upper - self.delta_g_minus <= 0.0 <= self.agg_upper:
                return (0.0, 1.0)
            return None
        if cls == self.g_minus:
            if self.agg_upper > self.delta_g_minus or self.agg_upper < 0:
                return None
            hi = self.agg_upper / self.delta_g_minus if self.delta_g_minus > 0 else 0.0
            return (0.0, min(1.0, hi))
        if delta_cls <= 0:
            return None
        lo = (self.agg_upper - self.delta_g_minus) / delta_cls
        hi = self.agg_upper / delta_cls
        lo, hi = max(0.0, lo), min(1.0, hi)
        if lo > hi:
            return None
        return (lo, hi)


@dataclass(frozen=True)
class ResilienceReport:
    """Split-class partition, buffering bounds, and delay classification for
    a differentiated-toll scenario."""

    split_class: VehicleClass
    q_minus: Tuple[VehicleClass, ...]
    q_plus: Tuple[VehicleClass, ...]
    misbehaving: Tuple[VehicleClass, ...]
    phi_1_star: float
    primary_bound: float
    deltas: Mapping[VehicleClass, float]
    secondary: Tuple[SecondaryRegion, ...] = ()
    delay_trend: Optional[DelayVariation] = None

    def alpha_threshold(self, cls: VehicleClass) -> float:
        """Largest alpha keeping lane delays unchanged when `cls` is the only
        misbehaving class."""
        if cls in self.q_minus:
            return 1.0
        delta = self.deltas[cls]
        if delta <= 0:
            return 1.0
        return min(1.0, self.primary_bound / delta)


def primary_resilient_region(scenario: Scenario) -> ResilienceReport:
    """Split class, toll partition, and the primary buffering bound.

    Raises NoSplitClass when the no-misbehavior equilibrium has every class
    fully on one lane.
    """
    baseline = dataclasses.replace(scenario, misbehavior={})
    h = solve_hetero_equilibrium(baseline)
    if h.split_class is None:
        raise NoSplitClass(
            "no vehicle class uses both lanes at the no-misbehavior equilibrium"
        )
    g = h.split_class
    tolls = scenario.tolls_by_class()
    eq = scenario.effective
    q_minus = tuple(p for p in DECISION_CLASSES if 0 < tolls[p] < tolls[g])
    q_plus = tuple(p for p in DECISION_CLASSES if tolls[p] > tolls[g])
    bound = h.phi_1 - eq.delta[VehicleClass.AV_HO] - sum(eq.delta[q] for q in q_minus)
    misbehaving = tuple(p for p in DECISION_CLASSES if scenario.misbehavior[p] > 0)
    return ResilienceReport(
        split_class=g,
        q_minus=q_minus,
        q_plus=q_plus,
        misbehaving=misbehaving,
        phi_1_star=h.phi_1,
        primary_bound=bound,
        deltas=dict(eq.delta),
    )


def secondary_resilient_regions(
    scenario: Scenario, report: Optional[ResilienceReport] = None
) -> Tuple[SecondaryRegion, ...]:
    """One buffering region per class tolled below the split class, in
    descending toll order. Empty when the split class already has the lowest
    positive toll."""
    if report is None:
        report = primary_resilient_region(scenario)
    tolls = scenario.tolls_by_class()
    eq = scenario.effective
    regions = []
    for g_minus in sorted(report.q_minus, key=lambda p: -tolls[p]):
        phi_tilde = _balance_root(scenario, tolls[g_minus])
        if phi_tilde is None:
            continue
        inner = tuple(p for p in DECISION_CLASSES if 0 < tolls[p] < tolls[g_minus])
        agg_upper = (
            phi_tilde
            - eq.delta[VehicleClass.AV_HO]
            - sum(eq.delta[q] for q in inner)
        )
        regions.append(
            SecondaryRegion(
                g_minus=g_minus,
                phi_tilde=phi_tilde,
                inner_q_minus=inner,
                agg_upper=agg_upper,
                delta_g_minus=eq.delta[g_minus],
            )
        )
    return tuple(regions)


def classify_delay_variation(
    report: ResilienceReport,
    scenario: Scenario,
    region: Optional[SecondaryRegion] = None,
    misbehaving: Optional[Sequence[VehicleClass]] = None,
) -> DelayVariation:
    """Direction of total-commuter-delay change inside a resilient region.

    Misbehavior confined to the split class and cheaper-tolled classes leaves
    the total unchanged; misbehaving classes tolled above the split move it
    up or down according to whether their mobility degree falls below or
    above the split class's.
    """
    tolls = scenario.tolls_by_class()
    nu = scenario.effective.nu
    if region is None:
        anchor = report.split_class
        q_plus = report.q_plus
    else:
        anchor = region.g_minus
        q_plus = tuple(p for p in DECISION_CLASSES if tolls[p] > tolls[anchor])
    if misbehaving is None:
        misbehaving = report.misbehaving
    overlap = [p for p in q_plus if p in set(misbehaving)]
    if not overlap:
        return DelayVariation.UNCHANGED
    if all(nu[s] < nu[anchor] for s in overlap):
        return DelayVariation.INCREASING
    if all(nu[s] > nu[anchor] for s in overlap):
        return DelayVariation.DECREASING
    return DelayVariation.MIXED


def build_resilience_report(
    scenario: Scenario, misbehaving: Optional[Sequence[VehicleClass]] = None
) -> ResilienceReport:
    """Full report: primary region, secondary regions, and classification."""
    report = primary_resilient_region(scenario)
    if misbehaving is not None:
        report = dataclasses.replace(report, misbehaving=tuple(misbehaving))
    secondary = secondary_resilient_regions(scenario, report)
    case = classify_delay_variation(report, scenario, misbehaving=report.misbehaving)
    return dataclasses.replace(report, secondary=secondary, delay_trend=case)


def in_primary_region(
    report: ResilienceReport, alpha: Mapping[VehicleClass, float], tol: float = 1e-9
) -> bool:
    load = sum(report.deltas[p] * alpha[p] for p in DECISION_CLASSES if p not in report.q_minus)
    return load <= report.primary_bound + tol


def in_secondary_region(
    region: SecondaryRegion,
    deltas: Mapping[VehicleClass, float],
    alpha: Mapping[VehicleClass, float],
    tol: float = 1e-9,
) -> bool:
    load = sum(deltas[p] * alpha[p] for p in DECISION_CLASSES if p not in region.inner_q_minus)
    lo = region.agg_upper - region.delta_g_minus * (1.0 - alpha[region.g_minus])
    return lo - tol <= load <= region.agg_upper + tol


REGION_PRIMARY = "primary"
REGION_SECONDARY = "secondary"
REGION_UNCHARACTERIZED = "uncharacterized"


@dataclass(frozen=True)
class SweepPoint:
    alpha: float
    d1: float
    d2: float
    j: float
    in_region: bool
    region: str


@dataclass(frozen=True)
class MisbehaviorSweep:
    """Empirical sweep of one class's misbehaving proportion.

    Rows outside every analytic region carry measured values only; the
    buffering analysis makes no claim about them.
    """

    swept_class: VehicleClass
    points: Tuple[SweepPoint, ...]
    report: Optional[ResilienceReport]


def sweep_misbehavior(
    scenario: Scenario,
    swept_class: VehicleClass,
    alpha_grid: Sequence[float],
) -> MisbehaviorSweep:
    """Solve the misbehavior-aware equilibrium at each alpha and label each
    row with its analytic region membership."""
    alphas = [float(a) for a in alpha_grid]
    if any(not (0.0 <= a <= 1.0) for a in alphas):
        raise ValueError("alpha grid values must lie in [0, 1]")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alpha grid must be strictly increasing")

    try:
        report = build_resilience_report(scenario, misbehaving=(swept_class,))
    except NoSplitClass:
        report = None

    d1_fn, d2_fn = scenario.delays
    total = scenario.effective.total_delta
    points = []
    for a in alphas:
        mis = dict(scenario.misbehavior)
        mis[swept_class] = a
        scen_a = dataclasses.replace(scenario, misbehavior=mis)
        h = solve_hetero_equilibrium(scen_a)
        d1 = float(d1_fn(h.phi_1))
        d2 = float(d2_fn(total - h.phi_1))
        j = total_commuter_delay(h.flow, scen_a)
        label = REGION_UNCHARACTERIZED
        if report is not None:
            if in_primary_region(report, mis):
                label = REGION_PRIMARY
            elif any(in_secondary_region(r, report.deltas, mis) for r in report.secondary):
                label = REGION_SECONDARY
        points.append(
            SweepPoint(
                alpha=a,
                d1=d1,
                d2=d2,
                j=j,
                in_region=label != REGION_UNCHARACTERIZED,
                region=label,
            )
        )
    return MisbehaviorSweep(swept_class=swept_class, points=tuple(points), report=report)
