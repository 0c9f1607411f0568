"""Walk through the lane-choice model on a small two-lane segment.

Four vehicle classes share the road; high-occupancy autonomous vehicles ride
the tolled lane free, everyone else weighs the toll against the delay gap.
This script builds a scenario, inspects the effective quantities, finds the
equilibrium envelope, and double-checks both vertices against the raw
equilibrium inequalities.
"""

from lanechoice import (
    ALL_CLASSES,
    BPRDelay,
    CommuterDemand,
    HeadwayRatio,
    OccupancyProfile,
    Scenario,
    UniformToll,
    VehicleClass,
    solve_equilibrium,
    uniqueness_thresholds,
    verify_equilibrium,
)

scenario = Scenario(
    demand=CommuterDemand({
        VehicleClass.HV_LO: 5,  # commuters per minute, driving alone
        VehicleClass.HV_HO: 4,  # carpooling humans
        VehicleClass.AV_LO: 3,  # single-rider autonomous vehicles
        VehicleClass.AV_HO: 4,  # pooled autonomous vehicles, toll-free on lane 1
    }),
    occupancy=OccupancyProfile(n_lo=1.0, n_ho=4.0),
    headway=HeadwayRatio(mu=0.5),
    delays=(BPRDelay(theta=3, gamma=1, beta=1, capacity=10),
            BPRDelay(theta=3, gamma=1, beta=1, capacity=10)),
    toll=UniformToll(0.5),
)

eq = scenario.effective
print("per-class quantities (vehicle demand, effective demand, mobility degree):")
for cls in ALL_CLASSES:
    print(f"  {cls.name}: d_v = {eq.d_v[cls]:.3f}, delta = {eq.delta[cls]:.3f}, "
          f"nu = {eq.nu[cls]:.3f}")

tau_high, tau_low = uniqueness_thresholds(scenario)
print(f"\nthe equilibrium is unique for tau >= {tau_high:.3f} (everyone off the toll lane)")
print(f"or tau <= {tau_low:.3f} (everyone on it); our toll 0.5 sits in between,")
print("so the equilibria form a simplex of flow splits sharing one lane loading.\n")

result = solve_equilibrium(scenario)
print(f"balance flow phi_1* = {result.phi_1_star:.6f} "
      f"(decision budget {result.simplex_budget:.6f})")
print(f"best-case vertex  lane1 = {result.best.lane1_tuple()}  J = {result.j_best:.4f}")
print(f"worst-case vertex lane1 = {result.worst.lane1_tuple()}  J = {result.j_worst:.4f}")
print("\nthe best case sends the high-occupancy carpools onto the toll lane;")
print("the worst case wastes the same lane capacity on single riders.\n")

for label, flow in (("best", result.best), ("worst", result.worst)):
    ok, _ = verify_equilibrium(flow, scenario, tol=1e-8)
    print(f"{label} vertex satisfies the equilibrium inequalities: {ok}")
