"""Command-line surface: fixture ingestion, reports, CSV exports, exit codes."""

import json

import pytest

from conftest import FIXTURE_DIR
from lanechoice import FlowDistribution, VehicleClass, load_scenario, verify_equilibrium
from lanechoice.cli import main

FIXTURES = [f"example{tag}.json" for tag in ("1a", "2", "3", "4", "5")]


@pytest.mark.parametrize("name", FIXTURES)
def test_fixtures_solve_cleanly(name, capsys):
    assert main(["solve", str(FIXTURE_DIR / name)]) == 0
    out = capsys.readouterr().out
    assert "phi_1" in out


def test_solve_report_example1a(capsys):
    assert main(["solve", str(FIXTURE_DIR / "example1a.json")]) == 0
    out = capsys.readouterr().out
    assert "unique for tau >= 0.7" in out
    assert "best flow  lane1 (hv_lo=0, hv_ho=1, av_lo=" in out
    assert "worst flow lane1 (hv_lo=1, hv_ho=0, av_lo=0)" in out


def test_solve_report_example5(capsys):
    assert main(["solve", str(FIXTURE_DIR / "example5.json")]) == 0
    out = capsys.readouterr().out
    assert "split class: HV_HO" in out
    assert "phi_1 = 30" in out


def test_solve_json_flow_roundtrip_verifies(capsys):
    fixture = FIXTURE_DIR / "example1a.json"
    assert main(["solve", str(fixture), "--json"]) == 0
    payload = json.loads(capsys.readouterr().out)
    scenario = load_scenario(fixture)
    for key in ("best", "worst"):
        flows = payload[key]
        flow = FlowDistribution(
            lane1={VehicleClass(k): v for k, v in flows["lane1"].items()},
            lane2={VehicleClass(k): v for k, v in flows["lane2"].items()},
        )
        ok, report = verify_equilibrium(flow, scenario, tol=1e-8)
        assert ok, report
    assert payload["tau_high"] == pytest.approx(0.7)


def test_malformed_occupancy_is_named(tmp_path, capsys):
    bad = json.loads((FIXTURE_DIR / "example1a.json").read_text())
    bad["occupancy"]["n_ho"] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(bad))
    assert main(["solve", str(path)]) == 2
    err = capsys.readouterr().err
    assert "occupancy.n_ho" in err


def test_unknown_key_rejected(tmp_path, capsys):
    doc = json.loads((FIXTURE_DIR / "example1a.json").read_text())
    doc["surprise"] = 1
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    assert main(["solve", str(path)]) == 2
    assert "surprise" in capsys.readouterr().err


def test_non_finite_number_rejected(tmp_path, capsys):
    text = (FIXTURE_DIR / "example1a.json").read_text().replace('"mu": 0.5', '"mu": NaN')
    path = tmp_path / "bad.json"
    path.write_text(text)
    assert main(["solve", str(path)]) == 2
    assert "NaN" in capsys.readouterr().err


def test_not_json_rejected(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text("demands: 5")
    assert main(["solve", str(path)]) == 2
    assert "JSON" in capsys.readouterr().err


def test_design_toll_summary_and_csv(tmp_path, capsys):
    out = tmp_path / "toll.csv"
    code = main(["design-toll", str(FIXTURE_DIR / "example2.json"),
                 "--objective", "best", "--out", str(out)])
    assert code == 0
    summary = capsys.readouterr().out
    assert "tau* = " in summary
    tau_star = float(summary.split("tau* = ")[1].split()[0])
    assert abs(tau_star - 0.25) <= 0.05
    lines = out.read_text().splitlines()
    assert lines[0] == "x,j_best,j_worst,phi1,unique"
    assert len(lines) > 50


def test_design_toll_worst_objective(capsys, tmp_path):
    out = tmp_path / "toll.csv"
    assert main(["design-toll", str(FIXTURE_DIR / "example2.json"),
                 "--objective", "worst", "--out", str(out)]) == 0
    summary = capsys.readouterr().out
    assert "tau* = 0 " in summary


def test_design_threshold_runs(tmp_path, capsys):
    out = tmp_path / "threshold.csv"
    assert main(["design-threshold", str(FIXTURE_DIR / "example3.json"),
                 "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "x,j_best,j_worst,phi1,unique"
    assert lines[1].startswith("2,")
    assert lines[-1].startswith("4,")
    assert "n* = " in capsys.readouterr().out


def test_compare_policy_writes_per_policy_files(tmp_path, capsys):
    out = tmp_path / "policy.csv"
    assert main(["compare-policy", str(FIXTURE_DIR / "example4.json"),
                 "--out", str(out)]) == 0
    hovl = (tmp_path / "policy_hovl.csv").read_text().splitlines()
    dla = (tmp_path / "policy_dla.csv").read_text().splitlines()
    assert hovl[0] == dla[0] == "x,j_best,j_worst,phi1,unique"
    assert "hovl worst-case j <= dla worst-case j at every swept toll: yes" \
        in capsys.readouterr().out


def test_differentiate_with_given_toll(tmp_path, capsys):
    out = tmp_path / "diff.csv"
    code = main(["differentiate", str(FIXTURE_DIR / "example1a.json"),
                 "--tau-star", "0.5", "--out", str(out), "--json"])
    assert code == 0
    stdout = capsys.readouterr().out
    payload = json.loads(stdout.splitlines()[0])
    assert payload["tolls"] == {"hv_lo": 1.0, "hv_ho": 0.5, "av_lo": 1.0}
    assert out.read_text().splitlines()[0] == "x,j_best,j_worst,phi1,unique"


def test_resilience_csv_is_byte_stable(tmp_path, capsys):
    fixture = str(FIXTURE_DIR / "example5.json")
    out1, out2 = tmp_path / "r1.csv", tmp_path / "r2.csv"
    assert main(["resilience", fixture, "--sweep-class", "hv_lo", "--out", str(out1)]) == 0
    assert main(["resilience", fixture, "--sweep-class", "hv_lo", "--out", str(out2)]) == 0
    first, second = out1.read_bytes(), out2.read_bytes()
    assert first == second
    lines = first.decode("utf-8").splitlines()
    assert lines[0] == "alpha,d1,d2,j,region"
    regions = {line.split(",")[-1] for line in lines[1:]}
    assert regions == {"primary", "secondary", "uncharacterized"}
    for line in lines[1:]:
        alpha, *_, region = line.split(",")
        if float(alpha) <= 0.5:
            assert region == "primary"
    summary = capsys.readouterr().out
    assert "split class: HV_HO" in summary
    assert "increasing" in summary


def test_unwritable_output_exits_3(capsys):
    code = main(["design-toll", str(FIXTURE_DIR / "example2.json"),
                 "--out", "/nonexistent-dir/x.csv"])
    assert code == 3
    assert "cannot write" in capsys.readouterr().err
