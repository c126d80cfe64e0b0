import json
from pathlib import Path

import pytest

from linecolor import cli
from linecolor.cli import ExitCode
from linecolor.formats import coloring_from_json, instance_from_json, load
from linecolor.model import verify_coloring

INSTANCES = Path(__file__).resolve().parent / "instances"


@pytest.fixture(autouse=True)
def no_user_settings(tmp_path, monkeypatch):
    monkeypatch.setattr("linecolor.settings.SETTINGS_PATH", tmp_path / "absent.yaml")


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_solve_sat(capsys, tmp_path):
    out_path = tmp_path / "coloring.json"
    code, out = run(capsys, "solve", "--instance", INSTANCES / "path.json", "--out", out_path)
    assert code is ExitCode.SUCCESS
    assert json.loads(out) == json.loads(out_path.read_text())
    D, S = instance_from_json(load(INSTANCES / "path.json"))
    assert verify_coloring(S, coloring_from_json(load(out_path)), D) == []


def test_solve_unsat(capsys):
    code, out = run(capsys, "solve", "--instance", INSTANCES / "staircase2.json")
    assert code is ExitCode.NOT_FOUND
    assert out.strip() == "UNSAT"


def test_solve_obstruction_window(capsys):
    code, out = run(capsys, "solve", "--instance", INSTANCES / "three_column_window.json")
    assert code is ExitCode.NOT_FOUND
    assert out.strip() == "UNSAT"


def test_solve_budget(capsys):
    code, _ = run(
        capsys, "solve", "--instance", INSTANCES / "three_column_window.json", "--budget", "4"
    )
    assert code is ExitCode.BUDGET


def test_input_errors(capsys, tmp_path):
    code, _ = run(capsys, "solve", "--instance", INSTANCES / "float_entry.json")
    assert code is ExitCode.INPUT_ERROR
    code, _ = run(capsys, "solve", "--instance", tmp_path / "missing.json")
    assert code is ExitCode.INPUT_ERROR
    code, _ = run(capsys, "window", "--array", INSTANCES / "onetwo.json", "--radius", "0")
    assert code is ExitCode.INPUT_ERROR


def test_bad_settings(capsys, tmp_path):
    path = tmp_path / "settings.yaml"
    path.write_text("jobs: 0\n")
    code, _ = run(capsys, "-c", path, "bounds", "--k", "1")
    assert code is ExitCode.INPUT_ERROR


def test_window(capsys):
    code, out = run(capsys, "window", "--array", INSTANCES / "onetwo.json", "--radius", "4")
    assert code is ExitCode.SUCCESS
    data = json.loads(out)
    a, b = data["window"]
    assert b - a == 4

    code, out = run(capsys, "window", "--array", INSTANCES / "onethree.json", "--radius", "4")
    assert code is ExitCode.NOT_FOUND
    assert out.strip() == "none"


def test_periodic(capsys):
    code, out = run(
        capsys, "periodic", "--array", INSTANCES / "onethree.json", "--pmax", "8", "--window", 0, 3
    )
    assert code is ExitCode.SUCCESS
    data = json.loads(out)
    assert (data["period"], data["colors"]) == (2, [1, 2])
    assert data["window"] == {"0": 1, "1": 2, "2": 1, "3": 2}

    code, out = run(capsys, "periodic", "--array", INSTANCES / "onetwo.json", "--pmax", "8")
    assert code is ExitCode.NOT_FOUND


def test_color(capsys):
    code, out = run(
        capsys,
        "color",
        "--array",
        INSTANCES / "distinct16.json",
        "--points",
        INSTANCES / "halves.json",
        "--seed",
        "5",
    )
    assert code is ExitCode.SUCCESS
    data = json.loads(out)
    assert data["seed"] == 5
    assert [step["branch"] for step in data["trace"]] == ["c"]
    assert data["trace"][0]["fallback"] is False
    assert len(data["colors"]) == 14

    code, again = run(
        capsys,
        "--seed",
        "5",
        "color",
        "--array",
        INSTANCES / "distinct16.json",
        "--points",
        INSTANCES / "halves.json",
    )
    assert again == out


def test_bounds(capsys):
    code, out = run(capsys, "bounds", "--k", "2")
    assert code is ExitCode.SUCCESS
    data = json.loads(out)
    assert data["bounds"] == [1, 16, 992]
    assert data["closed_form"] == 2048


def test_diagnose(capsys):
    code, out = run(
        capsys,
        "diagnose",
        "--array",
        INSTANCES / "distinct16.json",
        "--points",
        INSTANCES / "halves.json",
    )
    assert code is ExitCode.SUCCESS
    data = json.loads(out)
    assert data["p"] == "1/256"
    assert data["product"] == "31/32"
    assert data["guarantee"] and data["strict"]
    assert data["dependency_degree"] <= data["delta_bound"]


def test_lowerbound(capsys):
    code, out = run(capsys, "lowerbound", "--n", "5", "--k", "3")
    assert json.loads(out)["bound"] == 20
    code, _ = run(capsys, "lowerbound", "--n", "2", "--k", "4")
    assert code is ExitCode.INPUT_ERROR


def test_kdistance_and_witness(capsys, tmp_path):
    pts = tmp_path / "pts.json"
    code, _ = run(capsys, "kdistance", "hypersimplex", "--n", "3", "--k", "2", "--out", pts)
    assert code is ExitCode.SUCCESS
    code, out = run(capsys, "witness", "--points", pts)
    assert code is ExitCode.SUCCESS
    data = json.loads(out)
    assert data["points"] == 6
    assert data["squared"]
    assert data["array"]["m"] == 5
    assert data["search"] is None

    code, out = run(capsys, "kdistance", "polygon", "--k", "3")
    assert code is ExitCode.SUCCESS
    assert len(json.loads(out)["points"]) == 7


def test_line_witness(capsys):
    code, out = run(capsys, "witness", "--points", INSTANCES / "line3.json")
    assert code is ExitCode.SUCCESS
    data = json.loads(out)
    assert data["array"]["entries"] == [["1", "1"], ["2", "2"]]
    assert data["search"] == "UNSAT"


def test_verify(capsys):
    code, out = run(
        capsys,
        "verify",
        "--instance",
        INSTANCES / "path.json",
        "--coloring",
        INSTANCES / "path_coloring.json",
    )
    assert code is ExitCode.SUCCESS
    assert json.loads(out)["violations"] == []

    code, out = run(
        capsys,
        "verify",
        "--instance",
        INSTANCES / "path.json",
        "--coloring",
        INSTANCES / "path_bad_coloring.json",
    )
    assert code is ExitCode.NOT_FOUND
    assert json.loads(out)["violations"] == [
        {"x": "0", "y": "1", "color": 1, "distance": "1", "row": 1}
    ]


def test_experiment_report_and_journal(capsys, tmp_path):
    report = tmp_path / "report.json"
    argv = ["experiment", "periodicity", "--entry-max", "3", "--radius", "6", "--pmax", "12"]
    code, out = run(capsys, *argv, "--out", report)
    assert code is ExitCode.SUCCESS
    assert report.read_text() == out
    journal = report.with_suffix(".journal").read_text().splitlines()
    assert len(journal) == 2
    assert journal[0].endswith("experiment started (periodicity)")

    # the report does not depend on the run
    _, again = run(capsys, *argv)
    assert again == out


def test_experiment_without_journal(capsys, tmp_path):
    settings = tmp_path / "settings.yaml"
    settings.write_text("journal: false\n")
    report = tmp_path / "report.json"
    code, _ = run(
        capsys, "-c", settings, "experiment", "onerow", "--entry-max", "2", "--out", report
    )
    assert code is ExitCode.SUCCESS
    assert not report.with_suffix(".journal").exists()


def test_help_config(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["-h", "config"])
    assert info.value.code == 0
    assert "node_budget" in capsys.readouterr().out


def test_flags_before_and_after_command(capsys, tmp_path):
    log = tmp_path / "run.log"
    code, _ = run(capsys, "-o", log, "bounds", "-d", "--k", "1")
    assert code is ExitCode.SUCCESS
    assert "settings:" in log.read_text()
