"""
Tests for truncated series and the brute-force composition oracles.
"""

import numpy as np
import pytest
from numpy.polynomial import Polynomial
from hypothesis import given, settings
import hypothesis.strategies as st

from tkbundle.core.atlas import polynomial_from_monomials, random_polynomial_map
from tkbundle.core.jets import (
    JetError,
    TruncSeries1,
    TruncSeries2,
    max_relative_deviation,
    series_compose_oracle,
    series_compose_oracle2,
    series_to_jet,
)
from tkbundle.models.jet import CurveJet, OsculatingTangent
from tkbundle.utils.validators import ValidationError

CUBIC = polynomial_from_monomials("cubic", 1, [{(1,): 1.0, (3,): 1.0}])

def test_series_needs_order_one():
    with pytest.raises(JetError):
        TruncSeries1((np.zeros(1),))

def test_series_rejects_ragged_coefficients():
    with pytest.raises(JetError):
        TruncSeries1((np.zeros(2), np.zeros(3)))

def test_jet_rejects_non_finite():
    with pytest.raises(ValidationError):
        CurveJet("A", [np.nan], ([1.0],))

def test_cubic_composition_truncates():
    # (1 + t)³ + (1 + t) = 2 + 4t + 3t² + t³
    jet = CurveJet("A", [1.0], ([1.0], [0.0]))
    out = series_to_jet("B", series_compose_oracle(CUBIC, TruncSeries1.from_jet(jet)))
    np.testing.assert_allclose(np.concatenate(out.coefficients()), [2.0, 4.0, 3.0])

def test_cubic_composition_full_order():
    jet = CurveJet("A", [1.0], ([1.0], [0.0], [0.0]))
    out = series_compose_oracle(CUBIC, TruncSeries1.from_jet(jet))
    np.testing.assert_allclose(np.concatenate(out.coeffs), [2.0, 4.0, 3.0, 1.0])

def test_two_variable_series_of_cubic():
    # ψ(1 + t + s) = (1+t+s)³ + (1+t+s); s·t^i coefficients 4, 6, 3
    base = CurveJet("A", [1.0], ([1.0], [0.0]))
    tangent = OsculatingTangent(base, [1.0], ([0.0], [0.0]))
    out = series_compose_oracle2(CUBIC, TruncSeries2.from_tangent(tangent))
    np.testing.assert_allclose([row[1][0] for row in out.coeffs], [4.0, 6.0, 3.0])
    np.testing.assert_allclose([row[0][0] for row in out.coeffs], [2.0, 4.0, 3.0])

def test_oracles_agree_on_s_free_part(rng):
    f = random_polynomial_map(rng, 2, 4, scale=0.5)
    coeffs = tuple(rng.uniform(-1.0, 1.0, size=2) for _ in range(4))
    single = series_compose_oracle(f, TruncSeries1(coeffs))
    double = series_compose_oracle2(f, TruncSeries2(tuple((c, np.zeros(2)) for c in coeffs)))
    assert max_relative_deviation([row[0] for row in double.coeffs], single.coeffs) < 1e-13

def test_dimension_mismatch_is_rejected():
    with pytest.raises(JetError):
        series_compose_oracle(CUBIC, TruncSeries1((np.zeros(2), np.ones(2))))

def test_max_relative_deviation_scales_by_reference():
    assert max_relative_deviation([np.array([10.5])], [np.array([10.0])]) == pytest.approx(0.05)
    assert max_relative_deviation([np.array([0.5])], [np.array([0.0])]) == pytest.approx(0.5)

def _poly_map(name, poly):
    table = {(d,): float(c) for d, c in enumerate(poly.coef) if c}
    table.setdefault((1,), 0.0)
    return polynomial_from_monomials(name, 1, [table])

@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.integers(min_value=-3, max_value=3), min_size=2, max_size=4),
    st.lists(st.integers(min_value=-3, max_value=3), min_size=2, max_size=4),
    st.integers(min_value=0, max_value=2 ** 32 - 1),
    st.integers(min_value=1, max_value=5),
)
def test_composition_is_associative(f_coef, g_coef, seed, order):
    f_poly, g_poly = Polynomial(f_coef), Polynomial(g_coef)
    rng = np.random.default_rng(seed)
    s = TruncSeries1(tuple(rng.uniform(-1.0, 1.0, size=1) for _ in range(order + 1)))
    nested = series_compose_oracle(_poly_map("g", g_poly), series_compose_oracle(_poly_map("f", f_poly), s))
    direct = series_compose_oracle(_poly_map("g∘f", g_poly(f_poly)), s)
    assert max_relative_deviation(nested.coeffs, direct.coeffs) <= 1e-10
