"""Probe how toll evasion degrades (or fails to degrade) the system.

Some vehicles use the toll lane without paying. As long as the class that
splits across lanes can keep retreating to the free lane, honest
self-interest absorbs the intruders and lane delays do not move at all; the
total commuter delay drifts only because cheaters displace better commuters.
This script maps those buffering regions and sweeps the cheating proportion
across them.
"""

import sys
from pathlib import Path

from lanechoice import VehicleClass, build_resilience_report, load_scenario, sweep_misbehavior
from lanechoice.design import grid_range

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

scenario = load_scenario(sys.argv[1] if len(sys.argv) > 1 else FIXTURES / "example5.json")
cheater = VehicleClass.HV_LO

report = build_resilience_report(scenario, misbehaving=(cheater,))
print(f"split class at the honest equilibrium: {report.split_class.name}")
print(f"cheaper-tolled classes: {[p.name for p in report.q_minus]}")
print(f"dearer-tolled classes:  {[p.name for p in report.q_plus]}")
print(f"\nprimary buffering region: alpha[{cheater.value}] <= "
      f"{report.alpha_threshold(cheater):.4f}")
for region in report.secondary:
    interval = region.alpha_interval(cheater, report.deltas[cheater])
    if interval:
        print(f"secondary region (buffered by {region.g_minus.name}): "
              f"alpha in [{interval[0]:.4f}, {interval[1]:.4f}]")
print(f"inside the regions, total commuter delay is {report.delay_trend.value}\n")

sweep = sweep_misbehavior(scenario, cheater, grid_range(0.0, 1.0, 0.05))
print("alpha   d1        d2        J           region")
for p in sweep.points:
    print(f"{p.alpha:5.2f}  {p.d1:8.4f}  {p.d2:8.4f}  {p.j:10.4f}  {p.region}")

print("\nwithin each buffered region the lane delays are frozen; between the")
print("regions the buffer class has been fully displaced and delays move until")
print("the next class reaches its own indifference point.")
