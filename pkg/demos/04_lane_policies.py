"""Compare dedicated-lane policies: high-occupancy vs. autonomy.

HOVL lets every high-occupancy vehicle ride lane 1 free; DLA gives that
right to every autonomous vehicle instead. Both keep tolled access for the
rest. The framework pins the favored class to lane 1 and re-solves the
remaining two-class game at each toll.
"""

import sys
from pathlib import Path

import numpy as np

from lanechoice import LanePolicy, compare_policies, load_scenario
from lanechoice.design import grid_range

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

scenario = load_scenario(sys.argv[1] if len(sys.argv) > 1 else FIXTURES / "example4.json")
grid = grid_range(0.0, 1.0, 0.05)
tables = compare_policies(scenario, (LanePolicy.HOVL, LanePolicy.DLA), grid)

print("toll    HOVL j_best  HOVL j_worst   DLA j_best   DLA j_worst")
for rh, rd in zip(tables[LanePolicy.HOVL].rows, tables[LanePolicy.DLA].rows):
    print(f"{rh.x:5.2f}  {rh.j_best:11.4f}  {rh.j_worst:12.4f}  {rd.j_best:11.4f}  {rd.j_worst:12.4f}")

hovl_worst = tables[LanePolicy.HOVL].column("j_worst")
dla_worst = tables[LanePolicy.DLA].column("j_worst")
if np.all(hovl_worst <= dla_worst + 1e-9):
    print("\nHOVL never loses to DLA on worst-case delay here: the carpools'")
    print("occupancy beats the autonomous headway advantage at these demands.")
else:
    print("\nDLA beats HOVL somewhere on this grid; with these demands the")
    print("headway advantage outweighs occupancy.")
