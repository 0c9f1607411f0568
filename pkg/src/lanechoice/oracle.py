"""Brute-force verification machinery for the test suite.

Everything here works by exhaustive grid enumeration against the raw
equilibrium inequalities and the raw delay/cost formulas. No root finding,
no greedy fills, no code shared with the analytic solvers, so the two routes
cannot fail the same way.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .model import (
    DECISION_CLASSES,
    FlowDistribution,
    Scenario,
    VehicleClass,
)

MAX_AXIS_POINTS = 500


class GridTooLarge(ValueError):
    """A flow axis would need more grid points than the enumeration guard allows."""


@dataclass(frozen=True)
class GridSpec:
    """Enumeration grid: step per flow axis (vehicles per unit time) and the
    slack allowed when checking the equilibrium inequalities."""

    resolution: float
    tolerance: float = 1e-9

    def __post_init__(self) -> None:
        if self.resolution <= 0:
            raise ValueError(f"grid resolution must be positive, got {self.resolution}")


def _axis(limit: float, resolution: float) -> np.ndarray:
    if limit <= 0:
        return np.zeros(1)
    # keep the endpoint even when the demand is below one resolution step
    n = max(2, int(round(limit / resolution)) + 1)
    if n > MAX_AXIS_POINTS:
        raise GridTooLarge(
            f"axis with limit {limit} needs {n} points at resolution {resolution} "
            f"(max {MAX_AXIS_POINTS})"
        )
    return np.linspace(0.0, limit, n)


def _delay_on(fn, phi: np.ndarray) -> np.ndarray:
    try:
        out = np.asarray(fn(phi), dtype=float)
        if out.shape != phi.shape:
            raise TypeError
        return out
    except Exception:
        return np.array([float(fn(x)) for x in phi])


def brute_force_equilibria(scenario: Scenario, grid: GridSpec) -> List[FlowDistribution]:
    """All conservation-feasible grid flows satisfying the per-class
    equilibrium inequalities within the grid tolerance, in lexicographic
    order of lane-1 flows."""
    eq = scenario.effective
    mu = eq.mu
    tolls = scenario.tolls_by_class()
    honest_d_v = scenario.honest_d_v()
    hv_lo, hv_ho, av_lo = DECISION_CLASSES
    base = eq.delta[VehicleClass.AV_HO] + sum(
        eq.delta[p] * scenario.misbehavior[p] for p in DECISION_CLASSES
    )

    ax_a = _axis(honest_d_v[hv_lo], grid.resolution)
    ax_b = _axis(honest_d_v[hv_ho], grid.resolution)
    ax_c = _axis(honest_d_v[av_lo], grid.resolution)
    a, b, c = (arr.ravel() for arr in np.meshgrid(ax_a, ax_b, ax_c, indexing="ij"))

    phi_1 = a + b + mu * c + base
    phi_2 = (honest_d_v[hv_lo] - a) + (honest_d_v[hv_ho] - b) + mu * (honest_d_v[av_lo] - c)
    d1 = _delay_on(scenario.delays[0], phi_1)
    d2 = _delay_on(scenario.delays[1], phi_2)

    ok = np.ones(a.shape, dtype=bool)
    for cls, f1 in ((hv_lo, a), (hv_ho, b), (av_lo, c)):
        c1 = d1 + tolls[cls]
        f2 = honest_d_v[cls] - f1
        ok &= (f1 * (c1 - d2) <= grid.tolerance) & (f2 * (d2 - c1) <= grid.tolerance)

    result = []
    for i in np.nonzero(ok)[0]:
        lane1 = {hv_lo: float(a[i]), hv_ho: float(b[i]), av_lo: float(c[i])}
        result.append(FlowDistribution.from_lane1(lane1, honest_d_v))
    return result


def brute_force_j_extremes(
    scenario: Scenario, phi_1_star: float, grid: GridSpec
) -> Tuple[float, float]:
    """Extreme total commuter delays over the grid slice of flow splits that
    all produce lane-1 effective flow phi_1_star (the third class's flow is
    implied by the slice constraint)."""
    eq = scenario.effective
    mu = eq.mu
    alpha = scenario.misbehavior
    honest_d_v = scenario.honest_d_v()
    hv_lo, hv_ho, av_lo = DECISION_CLASSES
    av_ho = VehicleClass.AV_HO
    n_lo, n_ho = scenario.occupancy.n_lo, scenario.occupancy.n_ho
    base = eq.delta[av_ho] + sum(eq.delta[p] * alpha[p] for p in DECISION_CLASSES)
    budget = phi_1_star - base

    ax_a = _axis(min(honest_d_v[hv_lo], max(budget, 0.0)), grid.resolution)
    ax_b = _axis(min(honest_d_v[hv_ho], max(budget, 0.0)), grid.resolution)
    a, b = (arr.ravel() for arr in np.meshgrid(ax_a, ax_b, indexing="ij"))

    c = (budget - a - b) / mu
    feasible = (c >= -1e-9) & (c <= honest_d_v[av_lo] + 1e-9)
    if not np.any(feasible):
        raise ValueError("no feasible grid point on the requested flow slice")
    a, b = a[feasible], b[feasible]
    c = np.clip(c[feasible], 0.0, honest_d_v[av_lo])

    phi_1 = a + b + mu * c + base
    phi_2 = (honest_d_v[hv_lo] - a) + (honest_d_v[hv_ho] - b) + mu * (honest_d_v[av_lo] - c)
    d1 = _delay_on(scenario.delays[0], phi_1)
    d2 = _delay_on(scenario.delays[1], phi_2)

    commuters_1 = n_lo * (
        a + eq.d_v[hv_lo] * alpha[hv_lo] + c + eq.d_v[av_lo] * alpha[av_lo]
    ) + n_ho * (b + eq.d_v[hv_ho] * alpha[hv_ho] + eq.d_v[av_ho])
    commuters_2 = n_lo * ((honest_d_v[hv_lo] - a) + (honest_d_v[av_lo] - c)) + n_ho * (
        honest_d_v[hv_ho] - b
    )
    j = commuters_1 * d1 + commuters_2 * d2
    return float(j.min()), float(j.max())
