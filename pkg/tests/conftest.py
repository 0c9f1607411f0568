"""Shared scenario builders and random-instance generators for the suite."""

from __future__ import annotations

import dataclasses
from pathlib import Path
from typing import Dict, Optional

import numpy as np
import pytest

from lanechoice import (
    BPRDelay,
    CommuterDemand,
    HeadwayRatio,
    OccupancyProfile,
    Scenario,
    TollVector,
    UniformToll,
    VehicleClass,
    effective_quantities,
)

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "fixtures"

HV_LO, HV_HO, AV_LO, AV_HO = (
    VehicleClass.HV_LO,
    VehicleClass.HV_HO,
    VehicleClass.AV_LO,
    VehicleClass.AV_HO,
)


def make_example1(n_ho: float = 4.0, mu: float = 0.5, tau: float = 0.5,
                  misbehavior: Optional[Dict] = None) -> Scenario:
    """The 5/4/3/4-demand scenario with symmetric linear BPR lanes."""
    return Scenario(
        demand=CommuterDemand({HV_LO: 5, HV_HO: 4, AV_LO: 3, AV_HO: 4}),
        occupancy=OccupancyProfile(n_lo=1.0, n_ho=n_ho),
        headway=HeadwayRatio(mu=mu),
        delays=(BPRDelay(3, 1, 1, 10), BPRDelay(3, 1, 1, 10)),
        toll=UniformToll(tau),
        misbehavior=misbehavior or {},
    )


def make_example5(tolls: Optional[Dict] = None, misbehavior: Optional[Dict] = None) -> Scenario:
    """The high-demand differentiated-toll scenario (capacity 100 lanes)."""
    toll = TollVector(tolls or {HV_LO: 0.3, HV_HO: 0.12, AV_LO: 0.05})
    return Scenario(
        demand=CommuterDemand({HV_LO: 36, HV_HO: 48, AV_LO: 30, AV_HO: 20}),
        occupancy=OccupancyProfile(n_lo=1.0, n_ho=2.0),
        headway=HeadwayRatio(mu=0.3),
        delays=(BPRDelay(3, 1, 1, 100), BPRDelay(3, 1, 1, 100)),
        toll=toll,
        misbehavior=misbehavior or {},
    )


def random_interior_scenario(rng: np.random.Generator) -> Scenario:
    """Random small scenario whose uniform toll sits strictly between the
    uniqueness thresholds, with every decision class present (so the
    equilibria form a genuine simplex). Linear lane delays keep the oracle's
    resolution-error bounds exact."""
    while True:
        demand = CommuterDemand({
            HV_LO: rng.uniform(0.5, 5.0),
            HV_HO: rng.uniform(0.5, 5.0),
            AV_LO: rng.uniform(0.5, 5.0),
            AV_HO: rng.uniform(0.0, 4.0),
        })
        n_lo = rng.uniform(0.6, 1.4)
        occupancy = OccupancyProfile(n_lo=n_lo, n_ho=rng.uniform(max(2.0, n_lo + 0.5), 5.0))
        headway = HeadwayRatio(mu=rng.uniform(0.25, 0.85))
        delays = (
            BPRDelay(rng.uniform(1.0, 4.0), rng.uniform(0.5, 2.0), 1.0, rng.uniform(5.0, 20.0)),
            BPRDelay(rng.uniform(1.0, 4.0), rng.uniform(0.5, 2.0), 1.0, rng.uniform(5.0, 20.0)),
        )
        eq = effective_quantities(demand, occupancy, headway)
        total = eq.total_delta
        base = eq.delta[AV_HO]
        tau_high = delays[1](total - base) - delays[0](base)
        tau_low = delays[1](0.0) - delays[0](total)
        floor = max(tau_low, 0.0)
        if tau_high - floor < 0.05:
            continue
        tau = floor + rng.uniform(0.15, 0.85) * (tau_high - floor)
        if tau <= 0:
            continue
        return Scenario(demand=demand, occupancy=occupancy, headway=headway,
                        delays=delays, toll=UniformToll(tau))


def with_toll_spread(scenario: Scenario, rational: bool) -> Scenario:
    """Differentiated tolls around the scenario's uniform toll.

    rational=True assigns lower tolls to higher-mobility classes; False
    inverts the order (useful for exercising the delay-decreasing case).
    """
    tau = scenario.toll.tau
    nu = scenario.effective.nu
    order = sorted((HV_LO, HV_HO, AV_LO), key=lambda p: nu[p])  # ascending mobility
    if not rational:
        order = list(reversed(order))
    levels = (1.5 * tau, tau, 0.5 * tau)  # descending toll onto ascending-priority classes
    tolls = {cls: level for cls, level in zip(order, levels)}
    return dataclasses.replace(scenario, toll=TollVector(tolls))


@pytest.fixture
def ex1a():
    return make_example1()


@pytest.fixture
def ex1b():
    return make_example1(n_ho=2.0, mu=0.4)


@pytest.fixture
def ex5():
    return make_example5()
