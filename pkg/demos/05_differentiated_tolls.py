"""Lock in the best-case equilibrium with per-class tolls.

A uniform toll leaves a simplex of equilibria, so the realized delay is a
gamble between the best and worst vertices. The two-step fix: find the
uniform toll whose best case is minimal, then spread tolls around it (cheap
for high-mobility classes, dear for low-mobility ones) so the best-case
split becomes the unique equilibrium.
"""

import dataclasses
import sys
from pathlib import Path

from lanechoice import (
    DECISION_CLASSES,
    DesignObjective,
    UniformToll,
    differentiate_tolls,
    load_scenario,
    optimize_uniform_toll,
    solve_equilibrium,
    solve_hetero_equilibrium,
    total_commuter_delay,
)

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

scenario = load_scenario(sys.argv[1] if len(sys.argv) > 1 else FIXTURES / "example1a.json")

tau_star, _ = optimize_uniform_toll(scenario, DesignObjective.BEST_CASE)
uniform = dataclasses.replace(scenario, toll=UniformToll(tau_star))
envelope = solve_equilibrium(uniform)
print(f"step 1: optimal uniform toll tau* = {tau_star:.4f}")
print(f"        equilibrium delay band [{envelope.j_best:.4f}, {envelope.j_worst:.4f}]")

tolls = differentiate_tolls(uniform, tau_star)
print("step 2: differentiated tolls "
      + ", ".join(f"{p.value}={tolls[p]:.4f}" for p in DECISION_CLASSES))

result = solve_hetero_equilibrium(dataclasses.replace(uniform, toll=tolls))
j = total_commuter_delay(result.flow, uniform)
print(f"\ninduced equilibrium: phi_1 = {result.phi_1:.6f}, J = {j:.4f}")
print(f"matches the uniform best case ({envelope.j_best:.4f}) with no gamble left:")
print(f"unique = {result.is_unique}, split class = "
      f"{result.split_class.name if result.split_class else 'none'}")
