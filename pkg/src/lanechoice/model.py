"""Core domain model for a two-lane freeway with one tolled lane.

Four vehicle classes share the segment, split by automation (HV/AV) and
occupancy (LO/HO). High-occupancy autonomous vehicles ride the tolled lane
free; the three remaining classes choose between paying the lane-1 toll and
taking lane 2 untolled.

Unit conventions used throughout the package: delays in minutes, vehicle
flows in vehicles per unit time, commuter demands in commuters per unit
time. Tolls are expressed in delay units (value of time normalized to 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Mapping, Optional, Tuple, Union

import numpy as np


class VehicleClass(Enum):
    """The four vehicle classes sharing the segment."""

    HV_LO = "hv_lo"
    HV_HO = "hv_ho"
    AV_LO = "av_lo"
    AV_HO = "av_ho"

    @property
    def autonomous(self) -> bool:
        return self in (VehicleClass.AV_LO, VehicleClass.AV_HO)

    @property
    def high_occupancy(self) -> bool:
        return self in (VehicleClass.HV_HO, VehicleClass.AV_HO)


ALL_CLASSES: Tuple[VehicleClass, ...] = (
    VehicleClass.HV_LO,
    VehicleClass.HV_HO,
    VehicleClass.AV_LO,
    VehicleClass.AV_HO,
)

# Classes that choose between paying the lane-1 toll and riding lane 2 free.
# AV_HO always travels on lane 1 untolled. This order is fixed and serves as
# the deterministic tie-breaking anchor everywhere in the package.
DECISION_CLASSES: Tuple[VehicleClass, ...] = (
    VehicleClass.HV_LO,
    VehicleClass.HV_HO,
    VehicleClass.AV_LO,
)

DECISION_INDEX: Dict[VehicleClass, int] = {p: i for i, p in enumerate(DECISION_CLASSES)}

#: A lane delay model: continuous, strictly increasing function of the
#: effective vehicle flow on the lane, returning minutes.
DelayFn = Callable[[float], float]


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


@dataclass(frozen=True)
class OccupancyProfile:
    """Average commuters per vehicle for the low- and high-occupancy groups.

    High-occupancy vehicles carry at least two commuters; low-occupancy
    vehicles carry at most one (fractional averages below one are allowed).
    """

    n_lo: float
    n_ho: float

    def __post_init__(self) -> None:
        _require(self.n_lo > 0, f"n_lo must be positive, got {self.n_lo}")
        _require(self.n_ho >= 2, f"n_ho must be at least 2, got {self.n_ho}")
        _require(self.n_ho > self.n_lo, f"n_ho must exceed n_lo, got {self.n_ho} <= {self.n_lo}")

    def occupants(self, cls: VehicleClass) -> float:
        return self.n_ho if cls.high_occupancy else self.n_lo


@dataclass(frozen=True)
class HeadwayRatio:
    """Ratio of average AV headway to average HV headway, in (0, 1).

    One AV contributes mu effective vehicles worth of congestion.
    """

    mu: float

    def __post_init__(self) -> None:
        _require(0 < self.mu < 1, f"mu must lie strictly in (0, 1), got {self.mu}")


@dataclass(frozen=True)
class CommuterDemand:
    """Commuters per unit time for each vehicle class."""

    d: Mapping[VehicleClass, float]

    def __post_init__(self) -> None:
        full = {p: float(self.d.get(p, 0.0)) for p in ALL_CLASSES}
        unknown = set(self.d) - set(ALL_CLASSES)
        _require(not unknown, f"unknown vehicle classes in demand: {unknown}")
        for p, v in full.items():
            _require(v >= 0, f"demand for {p.name} must be nonnegative, got {v}")
        _require(any(v > 0 for v in full.values()), "at least one commuter demand must be positive")
        object.__setattr__(self, "d", full)

    def __getitem__(self, cls: VehicleClass) -> float:
        return self.d[cls]

    @property
    def total(self) -> float:
        return sum(self.d.values())


@dataclass(frozen=True)
class BPRDelay:
    """Volume-delay curve theta + gamma * (phi / capacity) ** beta.

    gamma = 0 (a constant delay) is rejected: the equilibrium solvers rely on
    a strictly monotone cost gap to pin down a unique lane-1 flow.
    """

    theta: float
    gamma: float
    beta: float
    capacity: float

    def __post_init__(self) -> None:
        _require(self.theta >= 0, f"free-flow delay must be nonnegative, got {self.theta}")
        _require(self.gamma > 0, f"gamma must be positive (constant delays are not supported), got {self.gamma}")
        _require(self.beta > 0, f"beta must be positive, got {self.beta}")
        _require(self.capacity > 0, f"capacity must be positive, got {self.capacity}")

    def __call__(self, phi):
        return self.theta + self.gamma * (phi / self.capacity) ** self.beta


@dataclass(frozen=True)
class UniformToll:
    """A single toll charged to every decision class on lane 1.

    tau = 0 is accepted as the no-toll limiting case; it is needed as the
    left endpoint of toll-design sweeps.
    """

    tau: float

    def __post_init__(self) -> None:
        _require(self.tau >= 0, f"uniform toll must be nonnegative, got {self.tau}")

    def by_class(self) -> Dict[VehicleClass, float]:
        return {p: self.tau for p in DECISION_CLASSES}


@dataclass(frozen=True)
class TollVector:
    """Class-differentiated tolls for the decision classes, all strictly positive.

    Duplicate values are permitted: the two-step toll-differentiation
    procedure itself emits vectors with repeated entries.
    """

    tau: Mapping[VehicleClass, float]

    def __post_init__(self) -> None:
        full = {p: float(self.tau.get(p, 0.0)) for p in DECISION_CLASSES}
        unknown = set(self.tau) - set(DECISION_CLASSES)
        _require(not unknown, f"tolls may only target decision classes, got {unknown}")
        for p, v in full.items():
            _require(v > 0, f"differentiated toll for {p.name} must be positive, got {v}")
        object.__setattr__(self, "tau", full)

    def __getitem__(self, cls: VehicleClass) -> float:
        return self.tau[cls]

    def by_class(self) -> Dict[VehicleClass, float]:
        return dict(self.tau)

    def as_tuple(self) -> Tuple[float, float, float]:
        return tuple(self.tau[p] for p in DECISION_CLASSES)


Toll = Union[UniformToll, TollVector]


@dataclass(frozen=True)
class EffectiveQuantities:
    """Per-class vehicle demands, effective demands, and mobility degrees.

    Effective demand rescales AV vehicle demand by the headway ratio so its
    congestion impact matches an equivalent human-driven flow. The mobility
    degree nu = commuters moved per unit of effective demand is reported from
    its closed form, so it stays well defined for zero-demand classes.
    """

    d_v: Mapping[VehicleClass, float]
    delta: Mapping[VehicleClass, float]
    nu: Mapping[VehicleClass, float]
    mu: float

    @property
    def total_delta(self) -> float:
        return sum(self.delta.values())

    def decision_delta(self) -> Dict[VehicleClass, float]:
        return {p: self.delta[p] for p in DECISION_CLASSES}

    def vehicle_scale(self, cls: VehicleClass) -> float:
        """Effective vehicles contributed per physical vehicle of this class."""
        return self.mu if cls.autonomous else 1.0


def effective_quantities(
    demand: CommuterDemand,
    occupancy: OccupancyProfile,
    headway: HeadwayRatio,
) -> EffectiveQuantities:
    """Convert commuter demands into vehicle demands, effective demands, and
    mobility degrees."""
    mu = headway.mu
    d_v = {p: demand[p] / occupancy.occupants(p) for p in ALL_CLASSES}
    delta = {p: (mu if p.autonomous else 1.0) * d_v[p] for p in ALL_CLASSES}
    nu = {
        VehicleClass.HV_LO: occupancy.n_lo,
        VehicleClass.HV_HO: occupancy.n_ho,
        VehicleClass.AV_LO: occupancy.n_lo / mu,
        VehicleClass.AV_HO: occupancy.n_ho / mu,
    }
    return EffectiveQuantities(d_v=d_v, delta=delta, nu=nu, mu=mu)


def normalize_misbehavior(alpha: Optional[Mapping[VehicleClass, float]]) -> Dict[VehicleClass, float]:
    """Fill in zeros for absent classes and validate proportions."""
    alpha = dict(alpha or {})
    unknown = set(alpha) - set(DECISION_CLASSES)
    _require(not unknown, f"misbehavior proportions may only target decision classes, got {unknown}")
    full = {p: float(alpha.get(p, 0.0)) for p in DECISION_CLASSES}
    for p, v in full.items():
        _require(0.0 <= v <= 1.0, f"misbehaving proportion for {p.name} must lie in [0, 1], got {v}")
    return full


@dataclass(frozen=True)
class FlowDistribution:
    """Lane-1/lane-2 vehicle flows of the (honest) decision classes."""

    lane1: Mapping[VehicleClass, float]
    lane2: Mapping[VehicleClass, float]

    def __post_init__(self) -> None:
        for name, lane in (("lane1", self.lane1), ("lane2", self.lane2)):
            full = {p: float(lane.get(p, 0.0)) for p in DECISION_CLASSES}
            unknown = set(lane) - set(DECISION_CLASSES)
            _require(not unknown, f"{name} flows may only cover decision classes, got {unknown}")
            for p, v in full.items():
                _require(v >= 0, f"{name} flow for {p.name} must be nonnegative, got {v}")
            object.__setattr__(self, name, full)

    @classmethod
    def from_lane1(
        cls, lane1: Mapping[VehicleClass, float], honest_d_v: Mapping[VehicleClass, float]
    ) -> "FlowDistribution":
        """Build a conservation-consistent distribution from lane-1 flows."""
        l1 = {p: float(lane1.get(p, 0.0)) for p in DECISION_CLASSES}
        l2 = {p: honest_d_v[p] - l1[p] for p in DECISION_CLASSES}
        return cls(lane1=l1, lane2=l2)

    def lane1_tuple(self) -> Tuple[float, float, float]:
        return tuple(self.lane1[p] for p in DECISION_CLASSES)

    def lane2_tuple(self) -> Tuple[float, float, float]:
        return tuple(self.lane2[p] for p in DECISION_CLASSES)

    def conserves(self, honest_d_v: Mapping[VehicleClass, float], rtol: float = 1e-12) -> bool:
        for p in DECISION_CLASSES:
            total = self.lane1[p] + self.lane2[p]
            if abs(total - honest_d_v[p]) > rtol * max(1.0, abs(honest_d_v[p])):
                return False
        return True


def _sample_increasing(fn: DelayFn, lo: float, hi: float, samples: int = 1000) -> bool:
    # Strict increase is required at the scale of the range; adjacent samples
    # may tie in float (steep curves are flat to machine precision near zero
    # flow), so only decreases and globally constant curves are rejected.
    if hi <= lo:
        hi = lo + 1.0
    xs = np.linspace(lo, hi, samples)
    try:
        ys = np.asarray(fn(xs), dtype=float)
        if ys.shape != xs.shape:
            raise TypeError
    except Exception:
        ys = np.array([float(fn(x)) for x in xs])
    diffs = np.diff(ys)
    return bool(np.all(diffs >= 0)) and ys[-1] > ys[0]


@dataclass(frozen=True)
class Scenario:
    """A full problem instance: demands, occupancies, headway ratio, lane
    delay models, toll (uniform or per-class), and misbehaving proportions."""

    demand: CommuterDemand
    occupancy: OccupancyProfile
    headway: HeadwayRatio
    delays: Tuple[DelayFn, DelayFn]
    toll: Toll
    misbehavior: Mapping[VehicleClass, float] = field(default_factory=dict)

    def __post_init__(self) -> None:
        _require(len(self.delays) == 2, "exactly two lane delay models are required")
        _require(isinstance(self.toll, (UniformToll, TollVector)), "toll must be UniformToll or TollVector")
        object.__setattr__(self, "misbehavior", normalize_misbehavior(self.misbehavior))
        eq = effective_quantities(self.demand, self.occupancy, self.headway)
        object.__setattr__(self, "_effective", eq)
        for i, delay in enumerate(self.delays):
            _require(
                _sample_increasing(delay, 0.0, eq.total_delta),
                f"lane-{i + 1} delay must be strictly increasing over the feasible flow range",
            )

    @property
    def effective(self) -> EffectiveQuantities:
        return self._effective

    def tolls_by_class(self) -> Dict[VehicleClass, float]:
        return self.toll.by_class()

    def alpha(self, cls: VehicleClass) -> float:
        return self.misbehavior[cls]

    def honest_delta(self) -> Dict[VehicleClass, float]:
        """Effective demand of honest vehicles per decision class."""
        eq = self.effective
        return {p: eq.delta[p] * (1.0 - self.misbehavior[p]) for p in DECISION_CLASSES}

    def honest_d_v(self) -> Dict[VehicleClass, float]:
        """Vehicle demand of honest vehicles per decision class."""
        eq = self.effective
        return {p: eq.d_v[p] * (1.0 - self.misbehavior[p]) for p in DECISION_CLASSES}

    def misbehaving_delta(self) -> float:
        """Total effective demand of misbehaving vehicles (pinned on lane 1)."""
        eq = self.effective
        return sum(eq.delta[p] * self.misbehavior[p] for p in DECISION_CLASSES)


def effective_flows(
    flow: FlowDistribution,
    eq: EffectiveQuantities,
    misbehavior: Optional[Mapping[VehicleClass, float]] = None,
) -> Tuple[float, float]:
    """Effective vehicle flow on each lane for a given honest-flow split.

    Lane 1 carries, besides the honest decision flows, the full AV_HO demand
    and every misbehaving vehicle. phi_1 + phi_2 always equals the total
    effective demand.
    """
    alpha = normalize_misbehavior(misbehavior)
    f1, f2 = flow.lane1, flow.lane2
    cheat = sum(eq.delta[p] * alpha[p] for p in DECISION_CLASSES)
    phi_1 = (
        f1[VehicleClass.HV_LO]
        + f1[VehicleClass.HV_HO]
        + eq.mu * f1[VehicleClass.AV_LO]
        + eq.delta[VehicleClass.AV_HO]
        + cheat
    )
    phi_2 = f2[VehicleClass.HV_LO] + f2[VehicleClass.HV_HO] + eq.mu * f2[VehicleClass.AV_LO]
    return phi_1, phi_2


def lane_costs(
    phi_1: float,
    phi_2: float,
    tolls: Union[float, Mapping[VehicleClass, float]],
    delays: Tuple[DelayFn, DelayFn],
) -> Tuple[Dict[VehicleClass, float], float]:
    """Per-class lane-1 travel costs and the common lane-2 cost.

    A scalar toll is broadcast to every decision class.
    """
    if not isinstance(tolls, Mapping):
        tolls = {p: float(tolls) for p in DECISION_CLASSES}
    d1, d2 = delays
    base = d1(phi_1)
    c1 = {p: base + tolls[p] for p in DECISION_CLASSES}
    return c1, d2(phi_2)


def lane_commuters(flow: FlowDistribution, scenario: Scenario) -> Tuple[float, float]:
    """Commuters per unit time riding each lane, counting misbehaving
    vehicles' commuters and the AV_HO class on lane 1."""
    eq = scenario.effective
    alpha = scenario.misbehavior
    n_lo, n_ho = scenario.occupancy.n_lo, scenario.occupancy.n_ho
    f1, f2 = flow.lane1, flow.lane2
    hv_lo, hv_ho, av_lo, av_ho = ALL_CLASSES
    lane1 = n_lo * (
        f1[hv_lo] + eq.d_v[hv_lo] * alpha[hv_lo] + f1[av_lo] + eq.d_v[av_lo] * alpha[av_lo]
    ) + n_ho * (f1[hv_ho] + eq.d_v[hv_ho] * alpha[hv_ho] + eq.d_v[av_ho])
    lane2 = n_lo * (f2[hv_lo] + f2[av_lo]) + n_ho * f2[hv_ho]
    return lane1, lane2


def total_commuter_delay(flow: FlowDistribution, scenario: Scenario) -> float:
    """Total delay experienced by all commuters, in commuter-minutes per unit
    time, at the given honest-flow split."""
    phi_1, phi_2 = effective_flows(flow, scenario.effective, scenario.misbehavior)
    commuters_1, commuters_2 = lane_commuters(flow, scenario)
    d1, d2 = scenario.delays
    return commuters_1 * d1(phi_1) + commuters_2 * d2(phi_2)
