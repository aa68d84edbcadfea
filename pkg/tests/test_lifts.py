"""
Tests for the lifted metric and Lagrangian prolongations.
"""

import numpy as np
import pytest

from tkbundle.core.atlas import levi_civita
from tkbundle.core.lifts import (
    DegenerateLagrangianError,
    LiftError,
    degenerate_lagrangian,
    energy,
    energy_lagrangian,
    fibre_derivative,
    kinetic_lagrangian,
    lagrangian_connection,
    lagrangian_lift,
    lagrangian_vector_field,
    metric_lift,
)
from tkbundle.core.osculating import natural_transition, random_jet
from tkbundle.models.jet import CurveJet

ORIGIN_JET = CurveJet("A", [0.0], ([1.0], [0.0]))

def test_exp_metric_lift(exp_line, exp_components):
    assert metric_lift(exp_line.metric, exp_components, ORIGIN_JET, ORIGIN_JET) == pytest.approx(1.25)

def test_exp_lagrangian_lift(exp_line, exp_components):
    L = energy_lagrangian(exp_line.metric)
    assert lagrangian_lift(L, exp_components, ORIGIN_JET) == pytest.approx(0.625)

def test_exp_euler_lagrange(exp_line):
    L = energy_lagrangian(exp_line.metric)
    np.testing.assert_allclose(lagrangian_vector_field(L, "A", np.array([0.0]), np.array([1.0])), [-1.0])
    np.testing.assert_allclose(lagrangian_vector_field(L, "A", np.array([0.4]), np.array([2.0])), [-4.0])
    gamma = lagrangian_connection(L, ["A"])
    np.testing.assert_allclose(gamma("A", np.array([0.0]), np.array([1.0]), np.array([1.0])), [1.0])

def test_energy_and_fibre_derivative(exp_line):
    L = energy_lagrangian(exp_line.metric)
    x, y = np.array([0.0]), np.array([1.0])
    assert float(energy(L, "A", x, y)) == pytest.approx(0.5)
    assert float(fibre_derivative(L, "A", x, y, np.array([3.0]))) == pytest.approx(3.0)

def test_kinetic_lagrangian_has_no_acceleration(rng):
    z = lagrangian_vector_field(kinetic_lagrangian(), "A", rng.normal(size=2), rng.normal(size=2))
    np.testing.assert_allclose(z, np.zeros(2), atol=1e-14)

def test_spray_connection_matches_levi_civita(sphere, rng):
    L = energy_lagrangian(sphere.metric)
    spray = lagrangian_connection(L, sphere.chart_names)
    metric = levi_civita(sphere.metric)
    x = rng.uniform(-1.0, 1.0, size=2)
    u, v = rng.uniform(-1.0, 1.0, size=(2, 2))
    np.testing.assert_allclose(spray("N", x, u, v), metric("N", x, u, v), rtol=1e-9, atol=1e-12)

def test_metric_lift_is_symmetric_and_positive(sphere, sphere_components, rng):
    j1 = random_jet(sphere, rng, "N", 3)
    j2 = CurveJet("N", j1.x, tuple(rng.uniform(-1.0, 1.0, size=2) for _ in range(3)))
    metric = sphere.metric
    assert metric_lift(metric, sphere_components, j1, j2) == pytest.approx(
        metric_lift(metric, sphere_components, j2, j1), rel=1e-12)
    assert metric_lift(metric, sphere_components, j1, j1) > 0.0

def test_lifts_are_chart_independent(sphere, sphere_components, rng):
    metric = sphere.metric
    L = energy_lagrangian(metric)
    j1 = random_jet(sphere, rng, "N", 3, overlap=True)
    j2 = CurveJet("N", j1.x, tuple(rng.uniform(-1.0, 1.0, size=2) for _ in range(3)))
    m1, m2 = natural_transition(sphere, j1, "S"), natural_transition(sphere, j2, "S")
    assert metric_lift(metric, sphere_components, m1, m2) == pytest.approx(
        metric_lift(metric, sphere_components, j1, j2), rel=1e-9, abs=1e-9)
    assert lagrangian_lift(L, sphere_components, m1) == pytest.approx(
        lagrangian_lift(L, sphere_components, j1), rel=1e-9, abs=1e-10)

def test_order_one_lift_is_the_lagrangian(sphere, sphere_components, rng):
    L = energy_lagrangian(sphere.metric)
    jet = random_jet(sphere, rng, "N", 1)
    assert lagrangian_lift(L, sphere_components, jet) == pytest.approx(float(L("N", jet.x, jet.xi[0])))

def test_degenerate_lagrangian_is_rejected():
    L = degenerate_lagrangian()
    x, y = np.zeros(2), np.array([1.0, -1.0])
    assert not L.is_nondegenerate("A", x, y)
    with pytest.raises(DegenerateLagrangianError):
        lagrangian_vector_field(L, "A", x, y)

def test_metric_lift_needs_matching_jets(exp_line, exp_components):
    other = CurveJet("A", [0.5], ([1.0], [0.0]))
    with pytest.raises(LiftError):
        metric_lift(exp_line.metric, exp_components, ORIGIN_JET, other)
    with pytest.raises(LiftError):
        metric_lift(exp_line.metric, exp_components, ORIGIN_JET, CurveJet("A", [0.0], ([1.0],)))
