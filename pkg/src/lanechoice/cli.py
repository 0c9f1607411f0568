"""Command-line interface: solve scenario files and export design sweeps,
differentiated tolls, and misbehavior analyses as CSV tables.

Exit codes: 0 on success, 2 on scenario validation errors, 3 when an output
path cannot be written.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .design import (
    CarpoolModel,
    DesignObjective,
    LanePolicy,
    SweepTable,
    compare_policies,
    default_toll_grid,
    grid_range,
    optimize_occupancy_threshold,
    optimize_uniform_toll,
    sweep_uniform_toll,
)
from .equilibrium import (
    EquilibriumResult,
    solve_equilibrium,
    uniqueness_thresholds,
    verify_equilibrium,
)
from .hetero import HeteroEquilibrium, NotApplicable, differentiate_tolls, solve_hetero_equilibrium
from .model import (
    DECISION_CLASSES,
    FlowDistribution,
    Scenario,
    TollVector,
    UniformToll,
    VehicleClass,
    total_commuter_delay,
)
from .resilience import NoSplitClass, sweep_misbehavior
from .scenario_io import ScenarioFormatError, load_scenario

DESIGN_HEADER = ("x", "j_best", "j_worst", "phi1", "unique")
RESILIENCE_HEADER = ("alpha", "d1", "d2", "j", "region")


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, str):
        return value
    return format(float(value), ".9g")


def _flow_dict(flow: FlowDistribution) -> Dict[str, Dict[str, float]]:
    return {
        "lane1": {p.value: flow.lane1[p] for p in DECISION_CLASSES},
        "lane2": {p.value: flow.lane2[p] for p in DECISION_CLASSES},
    }


def _write_csv(out: Optional[str], header: Sequence[str], rows: Sequence[Sequence]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _table_rows(table: SweepTable) -> List[Tuple]:
    return [(r.x, r.j_best, r.j_worst, r.phi_1_star, r.unique) for r in table.rows]


def _lane1_str(flow: FlowDistribution) -> str:
    parts = ", ".join(f"{p.value}={_fmt(flow.lane1[p])}" for p in DECISION_CLASSES)
    return f"({parts})"


def _print_uniform_report(scenario: Scenario, result: EquilibriumResult, tol: float) -> None:
    tau_high, tau_low = uniqueness_thresholds(scenario)
    d1, d2 = scenario.delays
    phi_2 = scenario.effective.total_delta - result.phi_1_star
    print(f"toll: uniform tau = {_fmt(scenario.toll.tau)}")
    print(f"unique for tau >= {tau_high:g} or tau <= {tau_low:g}")
    print(f"equilibrium kind: {result.kind.value}")
    print(
        f"phi_1* = {_fmt(result.phi_1_star)}  "
        f"(lane delays d1 = {_fmt(d1(result.phi_1_star))}, d2 = {_fmt(d2(phi_2))})"
    )
    print(f"best flow  lane1 {_lane1_str(result.best)}  j = {_fmt(result.j_best)}")
    print(f"worst flow lane1 {_lane1_str(result.worst)}  j = {_fmt(result.j_worst)}")
    ok_best, _ = verify_equilibrium(result.best, scenario, tol)
    ok_worst, _ = verify_equilibrium(result.worst, scenario, tol)
    print(f"verified against equilibrium inequalities (tol {tol:g}): "
          f"best={'ok' if ok_best else 'VIOLATED'}, worst={'ok' if ok_worst else 'VIOLATED'}")


def _print_hetero_report(scenario: Scenario, result: HeteroEquilibrium, tol: float) -> None:
    d1, d2 = scenario.delays
    phi_2 = scenario.effective.total_delta - result.phi_1
    tolls = scenario.tolls_by_class()
    toll_str = ", ".join(f"{p.value}={_fmt(tolls[p])}" for p in DECISION_CLASSES)
    print(f"toll: differentiated ({toll_str})")
    split = result.split_class.name if result.split_class is not None else "none"
    print(f"split class: {split}")
    print(
        f"phi_1 = {_fmt(result.phi_1)}  "
        f"(lane delays d1 = {_fmt(d1(result.phi_1))}, d2 = {_fmt(d2(phi_2))})"
    )
    assign = ", ".join(f"{p.value}->{result.lane_assignment[p].value}" for p in DECISION_CLASSES)
    print(f"lane assignment: {assign}")
    j = total_commuter_delay(result.flow, scenario)
    print(f"flow lane1 {_lane1_str(result.flow)}  j = {_fmt(j)}")
    print(f"unique: {'yes' if result.is_unique else 'no (tie-simplex; best-case representative shown)'}")
    ok, _ = verify_equilibrium(result.flow, scenario, tol)
    print(f"verified against equilibrium inequalities (tol {tol:g}): {'ok' if ok else 'VIOLATED'}")


def _uniform_json(scenario: Scenario, result: EquilibriumResult) -> Dict:
    tau_high, tau_low = uniqueness_thresholds(scenario)
    return {
        "toll_kind": "uniform",
        "tau": scenario.toll.tau,
        "kind": result.kind.value,
        "unique": result.kind.unique,
        "tau_high": tau_high,
        "tau_low": tau_low,
        "phi_1_star": result.phi_1_star,
        "simplex_budget": result.simplex_budget,
        "j_best": result.j_best,
        "j_worst": result.j_worst,
        "best": _flow_dict(result.best),
        "worst": _flow_dict(result.worst),
    }


def _hetero_json(scenario: Scenario, result: HeteroEquilibrium) -> Dict:
    return {
        "toll_kind": "differentiated",
        "tolls": {p.value: scenario.tolls_by_class()[p] for p in DECISION_CLASSES},
        "phi_1": result.phi_1,
        "split_class": result.split_class.value if result.split_class else None,
        "is_unique": result.is_unique,
        "lane_assignment": {p.value: result.lane_assignment[p].value for p in DECISION_CLASSES},
        "flow": _flow_dict(result.flow),
        "j": total_commuter_delay(result.flow, scenario),
    }


def cmd_solve(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    if isinstance(scenario.toll, TollVector):
        result = solve_hetero_equilibrium(scenario)
        if args.json:
            print(json.dumps(_hetero_json(scenario, result), indent=2, sort_keys=True))
        else:
            _print_hetero_report(scenario, result, args.tol)
    else:
        result = solve_equilibrium(scenario)
        if args.json:
            print(json.dumps(_uniform_json(scenario, result), indent=2, sort_keys=True))
        else:
            _print_uniform_report(scenario, result, args.tol)
    return 0


def cmd_design_toll(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    objective = DesignObjective(args.objective)
    grid = default_toll_grid(scenario, step=args.grid_step)
    tau_star, table = optimize_uniform_toll(scenario, objective, grid)
    _write_csv(args.out, DESIGN_HEADER, _table_rows(table))
    if args.json:
        print(json.dumps({"tau_star": tau_star, "objective": objective.value}, sort_keys=True))
    print(f"tau* = {tau_star:.9g} (objective: {objective.value}-case total commuter delay)")
    return 0


def cmd_design_threshold(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    objective = DesignObjective(args.objective)
    d = scenario.demand
    carpool = CarpoolModel(
        d_hv=d[VehicleClass.HV_LO] + d[VehicleClass.HV_HO],
        d_av=d[VehicleClass.AV_LO] + d[VehicleClass.AV_HO],
        n_min=args.n_min,
        n_max=args.n_max,
    )
    n_grid = grid_range(args.n_min, args.n_max, args.grid_step)
    n_star, table = optimize_occupancy_threshold(carpool, scenario, objective, n_grid)
    _write_csv(args.out, DESIGN_HEADER, _table_rows(table))
    if args.json:
        print(json.dumps({"n_star": n_star, "objective": objective.value}, sort_keys=True))
    print(f"n* = {n_star:.9g} (objective: {objective.value}-case total commuter delay)")
    return 0


def _suffixed(out: Optional[str], suffix: str) -> Optional[str]:
    if out is None:
        return None
    path = Path(out)
    return str(path.with_name(f"{path.stem}_{suffix}{path.suffix or '.csv'}"))


def cmd_compare_policy(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    grid = grid_range(0.0, args.tau_max, args.grid_step)
    tables = compare_policies(scenario, (LanePolicy.HOVL, LanePolicy.DLA), grid)
    for policy, table in tables.items():
        target = _suffixed(args.out, policy.value)
        if target is None:
            print(f"# policy: {policy.value}")
        _write_csv(target, DESIGN_HEADER, _table_rows(table))
    hovl = tables[LanePolicy.HOVL].column("j_worst")
    dla = tables[LanePolicy.DLA].column("j_worst")
    dominates = bool(np.all(hovl <= dla + 1e-12))
    if args.json:
        print(json.dumps({"hovl_worst_dominates": dominates}, sort_keys=True))
    print(
        "hovl worst-case j <= dla worst-case j at every swept toll: "
        + ("yes" if dominates else "no")
    )
    return 0


def cmd_differentiate(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    if not isinstance(scenario.toll, UniformToll):
        scenario = dataclasses.replace(scenario, toll=UniformToll(args.tau_star or 0.0))
    if args.tau_star is not None:
        tau_star = args.tau_star
        uniform = dataclasses.replace(scenario, toll=UniformToll(tau_star))
        table = sweep_uniform_toll(scenario, [tau_star])
    else:
        grid = default_toll_grid(scenario, step=args.grid_step)
        tau_star, table = optimize_uniform_toll(scenario, DesignObjective.BEST_CASE, grid)
        uniform = dataclasses.replace(scenario, toll=UniformToll(tau_star))
    tolls = differentiate_tolls(uniform, tau_star, tau_minus=args.tau_minus, tau_plus=args.tau_plus)
    _write_csv(args.out, DESIGN_HEADER, _table_rows(table))
    toll_str = ", ".join(f"{p.value} = {_fmt(tolls[p])}" for p in DECISION_CLASSES)
    if args.json:
        print(json.dumps(
            {"tau_star": tau_star, "tolls": {p.value: tolls[p] for p in DECISION_CLASSES}},
            sort_keys=True,
        ))
    print(f"tau* = {tau_star:.9g}; differentiated tolls: {toll_str}")
    return 0


def cmd_resilience(args: argparse.Namespace) -> int:
    scenario = load_scenario(args.scenario)
    swept = VehicleClass(args.sweep_class) if args.sweep_class else _default_swept(scenario)
    alpha_grid = np.clip(grid_range(0.0, 1.0, args.grid_step), 0.0, 1.0)
    sweep = sweep_misbehavior(scenario, swept, alpha_grid)
    rows = [(p.alpha, p.d1, p.d2, p.j, p.region) for p in sweep.points]
    _write_csv(args.out, RESILIENCE_HEADER, rows)
    report = sweep.report
    if report is None:
        print("no split class at the no-misbehavior equilibrium; "
              "buffering analysis inapplicable, sweep is empirical only")
        return 0
    threshold = report.alpha_threshold(swept)
    summary = [
        f"split class: {report.split_class.name}",
        f"primary region: alpha[{swept.value}] <= {threshold:.9g}",
    ]
    for region in report.secondary:
        interval = region.alpha_interval(swept, report.deltas[swept])
        if interval is not None:
            summary.append(
                f"secondary region (split {region.g_minus.name}): "
                f"alpha[{swept.value}] in [{interval[0]:.9g}, {interval[1]:.9g}]"
            )
    summary.append(f"delay trend inside regions: {report.delay_trend.value}")
    if args.json:
        print(json.dumps(
            {
                "split_class": report.split_class.value,
                "primary_threshold": threshold,
                "secondary": [
                    {
                        "split": r.g_minus.value,
                        "interval": r.alpha_interval(swept, report.deltas[swept]),
                    }
                    for r in report.secondary
                ],
                "trend": report.delay_trend.value,
            },
            sort_keys=True,
        ))
    print("; ".join(summary))
    return 0


def _default_swept(scenario: Scenario) -> VehicleClass:
    positive = [p for p in DECISION_CLASSES if scenario.misbehavior[p] > 0]
    return positive[0] if positive else VehicleClass.HV_LO


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lanechoice",
        description="Lane-choice equilibria, toll design, and toll-evasion "
        "resilience for a two-lane tolled freeway.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, grid_step: float) -> None:
        p.add_argument("scenario", help="path to a scenario JSON file")
        p.add_argument("--json", action="store_true", help="also emit a JSON summary")
        p.add_argument("--out", default=None, help="CSV output path (default: stdout)")
        p.add_argument("--grid-step", type=float, default=grid_step,
                       help=f"sweep grid step (default {grid_step})")
        p.add_argument("--tol", type=float, default=1e-8,
                       help="verification tolerance in delay units (default 1e-8)")

    p = sub.add_parser("solve", help="solve the lane-choice equilibrium of a scenario")
    common(p, grid_step=0.01)
    p.set_defaults(handler=cmd_solve)

    p = sub.add_parser("design-toll", help="sweep uniform tolls and report the optimum")
    common(p, grid_step=0.01)
    p.add_argument("--objective", choices=["best", "worst"], default="best",
                   help="minimize best- or worst-case total commuter delay")
    p.set_defaults(handler=cmd_design_toll)

    p = sub.add_parser("design-threshold",
                       help="sweep the high-occupancy threshold under the carpool model")
    common(p, grid_step=0.05)
    p.add_argument("--objective", choices=["best", "worst"], default="best")
    p.add_argument("--n-min", type=float, default=2.0, help="lowest threshold (default 2)")
    p.add_argument("--n-max", type=float, default=4.0, help="highest threshold (default 4)")
    p.set_defaults(handler=cmd_design_threshold)

    p = sub.add_parser("compare-policy",
                       help="compare dedicated high-occupancy vs. autonomy lane policies")
    common(p, grid_step=0.05)
    p.add_argument("--tau-max", type=float, default=1.0, help="top of the toll grid (default 1)")
    p.set_defaults(handler=cmd_compare_policy)

    p = sub.add_parser("differentiate",
                       help="emit per-class tolls that lock in the best-case equilibrium")
    common(p, grid_step=0.01)
    p.add_argument("--tau-star", type=float, default=None,
                   help="interior uniform toll to differentiate (default: optimize first)")
    p.add_argument("--tau-minus", type=float, default=None,
                   help="toll for higher-mobility classes (default tau*/2)")
    p.add_argument("--tau-plus", type=float, default=None,
                   help="toll for lower-mobility classes (default 2*tau*)")
    p.set_defaults(handler=cmd_differentiate)

    p = sub.add_parser("resilience", help="sweep a class's misbehaving proportion")
    common(p, grid_step=0.05)
    p.add_argument("--sweep-class", choices=[p.value for p in DECISION_CLASSES], default=None,
                   help="decision class whose misbehaving proportion is swept "
                        "(default: the scenario's misbehaving class, else hv_lo)")
    p.set_defaults(handler=cmd_resilience)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ScenarioFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return 3
    except (NotApplicable, NoSplitClass, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
