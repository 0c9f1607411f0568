"""Lane-choice equilibria, toll design, and toll-evasion resilience for a
two-lane freeway where one lane is tolled and four vehicle classes (human or
autonomous, low or high occupancy) share the road."""

__version__ = "0.1.0"

from .model import (
    ALL_CLASSES,
    DECISION_CLASSES,
    BPRDelay,
    CommuterDemand,
    EffectiveQuantities,
    FlowDistribution,
    HeadwayRatio,
    OccupancyProfile,
    Scenario,
    TollVector,
    UniformToll,
    VehicleClass,
    effective_flows,
    effective_quantities,
    lane_commuters,
    lane_costs,
    total_commuter_delay,
)
from .equilibrium import (
    EquilibriumKind,
    EquilibriumResult,
    NoInteriorRoot,
    equilibrium_is_unique,
    solve_equilibrium,
    solve_phi1_star,
    uniqueness_thresholds,
    verify_equilibrium,
)
from .design import (
    CarpoolModel,
    DesignObjective,
    EmptyGrid,
    InvalidCarpoolModel,
    LanePolicy,
    SweepRow,
    SweepTable,
    compare_policies,
    optimize_occupancy_threshold,
    optimize_uniform_toll,
    solve_with_policy,
    sweep_uniform_toll,
)
from .hetero import (
    HeteroEquilibrium,
    LaneUse,
    NotApplicable,
    differentiate_tolls,
    solve_hetero_equilibrium,
)
from .resilience import (
    DelayVariation,
    MisbehaviorSweep,
    NoSplitClass,
    ResilienceReport,
    SecondaryRegion,
    build_resilience_report,
    classify_delay_variation,
    primary_resilient_region,
    secondary_resilient_regions,
    sweep_misbehavior,
)
from .oracle import GridSpec, GridTooLarge, brute_force_equilibria, brute_force_j_extremes
from .scenario_io import ScenarioFormatError, load_scenario, scenario_from_dict

__all__ = [
    "ALL_CLASSES",
    "DECISION_CLASSES",
    "BPRDelay",
    "CarpoolModel",
    "CommuterDemand",
    "DelayVariation",
    "DesignObjective",
    "EffectiveQuantities",
    "EmptyGrid",
    "EquilibriumKind",
    "EquilibriumResult",
    "FlowDistribution",
    "GridSpec",
    "GridTooLarge",
    "HeadwayRatio",
    "HeteroEquilibrium",
    "InvalidCarpoolModel",
    "LanePolicy",
    "LaneUse",
    "MisbehaviorSweep",
    "NoInteriorRoot",
    "NoSplitClass",
    "NotApplicable",
    "OccupancyProfile",
    "ResilienceReport",
    "Scenario",
    "ScenarioFormatError",
    "SecondaryRegion",
    "SweepRow",
    "SweepTable",
    "TollVector",
    "UniformToll",
    "VehicleClass",
    "brute_force_equilibria",
    "brute_force_j_extremes",
    "build_resilience_report",
    "classify_delay_variation",
    "compare_policies",
    "differentiate_tolls",
    "effective_flows",
    "effective_quantities",
    "equilibrium_is_unique",
    "lane_commuters",
    "lane_costs",
    "load_scenario",
    "optimize_occupancy_threshold",
    "optimize_uniform_toll",
    "primary_resilient_region",
    "scenario_from_dict",
    "secondary_resilient_regions",
    "solve_equilibrium",
    "solve_hetero_equilibrium",
    "solve_phi1_star",
    "solve_with_policy",
    "sweep_misbehavior",
    "sweep_uniform_toll",
    "total_commuter_delay",
    "uniqueness_thresholds",
    "verify_equilibrium",
]
