"""
Tests for the command-line entry point.
"""

import json

import pytest

from scripts.verify_bundle import EXIT_FAIL, EXIT_PASS, EXIT_USAGE, main

QUICK = ["--fixture", "exp_metric_1d", "--order", "2", "--samples", "2"]

def test_verify_passes(capsys):
    assert main(["verify"] + QUICK) == EXIT_PASS
    out = json.loads(capsys.readouterr().out)
    assert out["passed"] is True
    assert out["command"] == "verify"
    assert "timing" in out

def test_negative_control_exits_with_failure(capsys):
    code = main(["verify", "--fixture", "flat_poly", "--order", "3", "--samples", "2", "--negative-control"])
    assert code == EXIT_FAIL
    out = json.loads(capsys.readouterr().out)
    failed = [check["check_id"] for check in out["checks"] if not check["passed"]]
    assert failed == ["connection-compatibility"]

def test_table_report_to_file(tmp_path):
    target = tmp_path / "report.csv"
    assert main(["verify"] + QUICK + ["--format", "table", "--out", str(target)]) == EXIT_PASS
    header = target.read_text().splitlines()[0]
    assert header.startswith("check_id,anchor,samples,residual")

def test_lift_demo_table(capsys):
    assert main(["lift-demo", "--fixture", "exp_metric_1d", "--order", "1", "--samples", "3", "--format", "table"]) == EXIT_PASS
    out = capsys.readouterr().out
    assert "sample,chart,G,L,L_base" in out

@pytest.mark.parametrize("argv", [
    ["verify", "--order", "0"],
    ["verify", "--order", "13"],
    ["verify", "--samples", "0"],
    ["verify", "--tol", "no-such-check=1e-3"],
    ["verify", "--tol", "block-linearity"],
    ["verify", "--workers", "0"],
    ["verify", "--fixture", "torus"],
    ["explain"],
])
def test_usage_errors(argv):
    assert main(argv) == EXIT_USAGE

def test_unwritable_output(tmp_path):
    target = tmp_path / "missing" / "report.json"
    assert main(["verify"] + QUICK + ["--out", str(target)]) == EXIT_USAGE

def test_help_exits_cleanly():
    assert main(["--help"]) == EXIT_PASS

def test_tolerance_override_is_reported(capsys):
    assert main(["verify"] + QUICK + ["--tol", "frechet-axioms=1e-6"]) == EXIT_PASS
    out = json.loads(capsys.readouterr().out)
    assert out["config"]["tolerances"] == {"frechet-axioms": 1e-6}
    record = next(check for check in out["checks"] if check["check_id"] == "frechet-axioms")
    assert record["tolerance"] == 1e-6

def test_environment_supplies_defaults(capsys, monkeypatch):
    monkeypatch.setenv("TKBUNDLE_FIXTURE", "exp_metric_1d")
    monkeypatch.setenv("TKBUNDLE_ORDER", "2")
    monkeypatch.setenv("TKBUNDLE_SAMPLES", "2")
    assert main(["verify"]) == EXIT_PASS
    config = json.loads(capsys.readouterr().out)["config"]
    assert (config["fixture"], config["order"], config["samples"]) == ("exp_metric_1d", 2, 2)

def test_flags_override_environment(capsys, monkeypatch):
    monkeypatch.setenv("TKBUNDLE_FIXTURE", "sphere_stereo")
    monkeypatch.setenv("TKBUNDLE_ORDER", "4")
    assert main(["verify"] + QUICK) == EXIT_PASS
    config = json.loads(capsys.readouterr().out)["config"]
    assert (config["fixture"], config["order"]) == ("exp_metric_1d", 2)

@pytest.mark.parametrize("name, value", [("TKBUNDLE_SAMPLES", "many"), ("TKBUNDLE_FORMAT", "yaml")])
def test_malformed_environment_is_a_usage_error(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    assert main(["verify"] + QUICK) == EXIT_USAGE

@pytest.mark.parametrize("order", range(1, 6))
def test_overlap_free_fixture_at_every_order(capsys, order):
    argv = ["verify", "--fixture", "exp_metric_1d", "--order", str(order), "--samples", "1"]
    assert main(argv) == EXIT_PASS
    ids = [check["check_id"] for check in json.loads(capsys.readouterr().out)["checks"]]
    assert ("thread-transition-commutes" in ids) == (order >= 2)
