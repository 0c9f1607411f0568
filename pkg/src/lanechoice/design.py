"""Design searches built on the equilibrium solver: optimal uniform toll,
optimal occupancy threshold under a pluggable carpool-demand model, and
comparison of dedicated-lane policies (high-occupancy vs. autonomy)."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from .equilibrium import EquilibriumResult, solve_equilibrium, uniqueness_thresholds
from .numerics import golden_section_min
from .model import (
    CommuterDemand,
    OccupancyProfile,
    Scenario,
    UniformToll,
    VehicleClass,
)


class EmptyGrid(ValueError):
    """A design sweep was invoked with no grid points."""


class InvalidCarpoolModel(ValueError):
    """The carpool probability leaves [0, 1] or increases on the grid."""


class DesignObjective(Enum):
    BEST_CASE = "best"
    WORST_CASE = "worst"

    def value_of(self, result: EquilibriumResult) -> float:
        return result.j_best if self is DesignObjective.BEST_CASE else result.j_worst


class LanePolicy(Enum):
    """Lane-1 access policies compared by `compare_policies`.

    TOLL_FRAMEWORK is the default model (only AV_HO rides free); HOVL
    additionally grants all high-occupancy vehicles free lane-1 access; DLA
    grants it to all autonomous vehicles instead.
    """

    TOLL_FRAMEWORK = "toll_framework"
    HOVL = "hovl"
    DLA = "dla"

    @property
    def pinned_class(self) -> Optional[VehicleClass]:
        if self is LanePolicy.HOVL:
            return VehicleClass.HV_HO
        if self is LanePolicy.DLA:
            return VehicleClass.AV_LO
        return None


@dataclass(frozen=True)
class SweepRow:
    x: float
    j_best: float
    j_worst: float
    phi_1_star: float
    unique: bool


@dataclass(frozen=True)
class SweepTable:
    """Rows of a one-dimensional design sweep, sorted by the design variable."""

    variable: str
    rows: Tuple[SweepRow, ...]

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.rows])

    def argmin_row(self, objective: DesignObjective) -> SweepRow:
        key = "j_best" if objective is DesignObjective.BEST_CASE else "j_worst"
        best = self.rows[0]
        for row in self.rows[1:]:
            if getattr(row, key) < getattr(best, key):
                best = row
        return best


def _with_toll(scenario: Scenario, tau: float) -> Scenario:
    return dataclasses.replace(scenario, toll=UniformToll(tau))


def _objective_fn(scenario: Scenario, objective: DesignObjective) -> Callable[[float], float]:
    def evaluate(tau: float) -> float:
        return objective.value_of(solve_equilibrium(_with_toll(scenario, tau)))

    return evaluate


def grid_range(lo: float, hi: float, step: float) -> np.ndarray:
    """Evenly spaced grid with exact endpoints (arange drifts at the top)."""
    if hi <= lo:
        return np.array([lo])
    n = int(round((hi - lo) / step)) + 1
    return np.linspace(lo, lo + (n - 1) * step, n)


def default_toll_grid(scenario: Scenario, step: float = 0.01) -> np.ndarray:
    """Grid from zero to just past the all-on-lane-2 threshold."""
    tau_high, _ = uniqueness_thresholds(scenario)
    top = max(tau_high, 0.0)
    margin = max(0.05, 0.1 * top)
    return grid_range(0.0, top + margin, step)


def _golden_refine(
    fn: Callable[[float], float],
    grid: Sequence[float],
    i: int,
    best_x: float,
    best_val: float,
) -> float:
    """Refine a grid argmin inside its bracketing cell; keep the grid point
    on ties (biases toward the smaller design value)."""
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    if hi <= lo:
        return best_x
    candidate = golden_section_min(fn, lo, hi, tol=1e-9)
    if fn(candidate) < best_val:
        return candidate
    return best_x


def sweep_uniform_toll(scenario: Scenario, tau_grid: Sequence[float]) -> SweepTable:
    rows = []
    for tau in tau_grid:
        res = solve_equilibrium(_with_toll(scenario, float(tau)))
        rows.append(
            SweepRow(
                x=float(tau),
                j_best=res.j_best,
                j_worst=res.j_worst,
                phi_1_star=res.phi_1_star,
                unique=res.kind.unique,
            )
        )
    return SweepTable(variable="tau", rows=tuple(rows))


def optimize_uniform_toll(
    scenario: Scenario,
    objective: DesignObjective,
    tau_grid: Optional[Sequence[float]] = None,
    refine: bool = True,
) -> Tuple[float, SweepTable]:
    """Grid-then-refine search for the toll minimizing the chosen objective.

    The sweep solves the equilibrium at every grid toll; the grid argmin is
    then polished by golden-section inside its bracketing cell (the objective
    may be non-monotone globally but is treated as unimodal within one cell).
    Ties break toward the smaller toll.
    """
    if tau_grid is None:
        tau_grid = default_toll_grid(scenario)
    tau_grid = [float(t) for t in tau_grid]
    if not tau_grid:
        raise EmptyGrid("tau_grid is empty")
    table = sweep_uniform_toll(scenario, tau_grid)
    key = "j_best" if objective is DesignObjective.BEST_CASE else "j_worst"
    values = [getattr(r, key) for r in table.rows]
    i = int(np.argmin(values))  # first minimum wins: ties go to the smaller toll
    tau_star = tau_grid[i]
    if refine and len(tau_grid) > 1:
        tau_star = _golden_refine(_objective_fn(scenario, objective), tau_grid, i, tau_star, values[i])
    return tau_star, table


def reciprocal_carpool_probability(n: float) -> float:
    """Shipped default: carpooling probability 1/n at occupancy threshold n."""
    return 1.0 / n


@dataclass(frozen=True)
class CarpoolModel:
    """Occupancy-threshold demand model.

    At threshold n, a fraction u(n) of the base HV and AV commuter demand
    carpools at occupancy n; the rest drives alone. u must be non-increasing
    with values in [0, 1].
    """

    d_hv: float
    d_av: float
    n_min: float = 2.0
    n_max: float = 4.0
    u: Callable[[float], float] = reciprocal_carpool_probability

    def __post_init__(self) -> None:
        if self.d_hv < 0 or self.d_av < 0:
            raise ValueError("base commuter demands must be nonnegative")
        if self.d_hv + self.d_av <= 0:
            raise ValueError("at least one base commuter demand must be positive")
        if self.n_min < 2:
            raise ValueError(f"occupancy threshold range must start at 2 or above, got {self.n_min}")
        if self.n_max < self.n_min:
            raise ValueError("n_max must be at least n_min")

    def validate_on(self, n_grid: Sequence[float]) -> None:
        probs = [self.u(float(n)) for n in n_grid]
        for n, p in zip(n_grid, probs):
            if not (0.0 <= p <= 1.0):
                raise InvalidCarpoolModel(f"u({n}) = {p} leaves [0, 1]")
        for (n0, p0), (n1, p1) in zip(zip(n_grid, probs), zip(n_grid[1:], probs[1:])):
            if p1 > p0:
                raise InvalidCarpoolModel(f"u increases between n = {n0} and n = {n1}")

    def demand_at(self, n: float) -> CommuterDemand:
        share = self.u(float(n))
        return CommuterDemand(
            {
                VehicleClass.HV_HO: self.d_hv * share,
                VehicleClass.HV_LO: self.d_hv * (1.0 - share),
                VehicleClass.AV_HO: self.d_av * share,
                VehicleClass.AV_LO: self.d_av * (1.0 - share),
            }
        )


def optimize_occupancy_threshold(
    carpool: CarpoolModel,
    template: Scenario,
    objective: DesignObjective,
    n_grid: Optional[Sequence[float]] = None,
    step: float = 0.05,
) -> Tuple[float, SweepTable]:
    """Sweep the high-occupancy threshold n, rebuilding demands from the
    carpool model at each grid point (n_lo is fixed at 1). The template
    scenario supplies the headway ratio, delay models, and toll."""
    if n_grid is None:
        n_grid = grid_range(carpool.n_min, carpool.n_max, step)
    n_grid = [float(n) for n in n_grid]
    if not n_grid:
        raise EmptyGrid("n_grid is empty")
    slack = 1e-9
    if n_grid[0] < carpool.n_min - slack or n_grid[-1] > carpool.n_max + slack:
        raise ValueError("n_grid must stay within the carpool model's range")
    carpool.validate_on(n_grid)
    rows = []
    for n in n_grid:
        scenario_n = dataclasses.replace(
            template,
            demand=carpool.demand_at(n),
            occupancy=OccupancyProfile(n_lo=1.0, n_ho=n),
        )
        res = solve_equilibrium(scenario_n)
        rows.append(
            SweepRow(
                x=n,
                j_best=res.j_best,
                j_worst=res.j_worst,
                phi_1_star=res.phi_1_star,
                unique=res.kind.unique,
            )
        )
    table = SweepTable(variable="n", rows=tuple(rows))
    n_star = table.argmin_row(objective).x
    return n_star, table


def solve_with_policy(scenario: Scenario, policy: LanePolicy) -> EquilibriumResult:
    """Equilibrium under a lane policy; pinned classes ride lane 1 untolled."""
    pinned = policy.pinned_class
    pins = () if pinned is None else (pinned,)
    return solve_equilibrium(scenario, pin_to_lane1=pins)


def compare_policies(
    scenario: Scenario,
    policies: Sequence[LanePolicy] = (LanePolicy.HOVL, LanePolicy.DLA),
    tau_grid: Optional[Sequence[float]] = None,
) -> Dict[LanePolicy, SweepTable]:
    """Per-policy toll sweeps on a common grid."""
    if tau_grid is None:
        tau_grid = default_toll_grid(scenario, step=0.05)
    tau_grid = [float(t) for t in tau_grid]
    if not tau_grid:
        raise EmptyGrid("tau_grid is empty")
    out: Dict[LanePolicy, SweepTable] = {}
    for policy in policies:
        rows = []
        for tau in tau_grid:
            res = solve_with_policy(_with_toll(scenario, tau), policy)
            rows.append(
                SweepRow(
                    x=tau,
                    j_best=res.j_best,
                    j_worst=res.j_worst,
                    phi_1_star=res.phi_1_star,
                    unique=res.kind.unique,
                )
            )
        out[policy] = SweepTable(variable="tau", rows=tuple(rows))
    return out
