"""
Tests for the verification suite runner.
"""

import dataclasses

import pytest

from tkbundle.core.atlas import build_fixture
from tkbundle.core.suite import BundleVerifier, SuiteError, run_lift_demo, run_verify
from tkbundle.utils.config import RunConfig

def _ids(report):
    return [record.check_id for record in report.records]

def test_flat_poly_passes():
    report = run_verify(RunConfig(fixture="flat_poly", order=3, samples=3))
    assert report.passed, report.failed_checks
    ids = _ids(report)
    for check_id in ("fixture-invariants", "connection-compatibility", "block-linearity",
                     "strong-projective-system", "frechet-worked-value"):
        assert check_id in ids
    control = next(r for r in report.records if r.check_id == "block-linearity-negative-control")
    assert control.comparison == "gt"
    assert control.residual > control.tolerance

def test_sphere_passes():
    report = run_verify(RunConfig(fixture="sphere_stereo", order=3, samples=2))
    assert report.passed, report.failed_checks

def test_overlap_free_fixture_skips_transition_checks():
    report = run_verify(RunConfig(fixture="exp_metric_1d", order=2, samples=3))
    assert report.passed, report.failed_checks
    ids = _ids(report)
    assert "connection-compatibility" not in ids
    assert "block-linearity" not in ids
    assert "strong-projective-system" in ids
    assert "thread-transition-commutes" in ids

def test_order_one_skips_tower_diagrams():
    report = run_verify(RunConfig(fixture="exp_metric_1d", order=1, samples=2))
    assert report.passed, report.failed_checks
    assert "strong-projective-system" not in _ids(report)

def test_negative_control_fails():
    report = run_verify(RunConfig(fixture="flat_poly", order=3, samples=3, negative_control=True))
    assert not report.passed
    assert report.failed_checks == ["connection-compatibility"]

def test_report_body_is_deterministic():
    first = run_verify(RunConfig(fixture="flat_poly", order=2, samples=3, seed=7))
    second = run_verify(RunConfig(fixture="flat_poly", order=2, samples=3, seed=7, workers=3))
    assert first.body() == second.body()
    assert first.to_json(include_timing=False) == second.to_json(include_timing=False)

def test_seed_changes_residuals():
    first = run_verify(RunConfig(fixture="flat_poly", order=2, samples=3, seed=1))
    second = run_verify(RunConfig(fixture="flat_poly", order=2, samples=3, seed=2))
    assert first.body()["checks"] != second.body()["checks"]

def test_lift_demo_rows():
    report = run_lift_demo(RunConfig(fixture="sphere_stereo", order=2, samples=4))
    assert len(report.rows) == 4
    assert set(report.rows[0]) == {"sample", "chart", "G", "L", "L_base", "G_residual", "L_residual"}
    assert all(row["G"] > 0.0 for row in report.rows)
    assert report.passed, report.failed_checks

def test_lift_demo_order_one_matches_lagrangian():
    report = run_lift_demo(RunConfig(fixture="exp_metric_1d", order=1, samples=3))
    assert "lagrangian-lift-order-one" in _ids(report)
    for row in report.rows:
        assert row["L"] == pytest.approx(row["L_base"])

def test_invalid_configuration():
    with pytest.raises(SuiteError):
        BundleVerifier(RunConfig(order=0))

def test_broken_fixture_aborts_the_run():
    manifold = build_fixture("flat_poly")
    forward = manifold.transition("A", "B")
    broken = dataclasses.replace(manifold, transitions={("A", "B"): forward, ("B", "A"): forward})
    verifier = BundleVerifier(RunConfig(fixture="flat_poly", order=2, samples=2), manifold=broken)
    with pytest.raises(SuiteError):
        verifier.run()
