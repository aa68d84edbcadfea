"""
Tests for partitions, chain-rule coefficients and jet push-forward.
"""

import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial
from hypothesis import given, settings
import hypothesis.strategies as st

from tkbundle.core.atlas import polynomial_from_monomials, polynomial_map, random_polynomial_map
from tkbundle.core.faa import (
    FaaError,
    PartitionTuple,
    chain_coefficient,
    enumerate_partitions,
    pushforward_jet,
)
from tkbundle.core.jets import TruncSeries1, max_relative_deviation, series_compose_oracle
from tkbundle.models.jet import CurveJet

PARTITION_COUNTS = [1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56, 77]
BELL = [1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975, 678570, 4213597]

def _stirling2(n, k):
    return sum((-1) ** j * math.comb(k, j) * (k - j) ** n for j in range(k + 1)) // math.factorial(k)

def test_partitions_of_four_in_canonical_order():
    parts = [p.parts for p in enumerate_partitions(4)]
    assert parts == [(4,), (1, 3), (2, 2), (1, 1, 2), (1, 1, 1, 1)]

@pytest.mark.parametrize("k", range(1, 13))
def test_partition_counts(k):
    assert len(enumerate_partitions(k)) == PARTITION_COUNTS[k - 1]

def test_order_three_coefficients():
    assert [chain_coefficient(p) for p in enumerate_partitions(3)] == [1, 3, 1]

@given(st.integers(min_value=1, max_value=12))
def test_coefficients_count_set_partitions(k):
    partitions = enumerate_partitions(k)
    assert sum(chain_coefficient(p) for p in partitions) == BELL[k - 1]
    for length in range(1, k + 1):
        total = sum(chain_coefficient(p) for p in partitions if p.length == length)
        assert total == _stirling2(k, length)

@given(st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=5))
def test_multiplicities_sum_to_length(parts):
    p = PartitionTuple(tuple(sorted(parts)))
    assert sum(p.multiplicities) == p.length
    assert sum(r * m for r, m in enumerate(p.multiplicities, start=1)) == p.k

def test_invalid_orders():
    with pytest.raises(FaaError):
        enumerate_partitions(0)
    with pytest.raises(FaaError):
        chain_coefficient(PartitionTuple((13,)))
    with pytest.raises(FaaError):
        PartitionTuple((2, 1))

def test_cubic_pushforward():
    cubic = polynomial_from_monomials("cubic", 1, [{(1,): 1.0, (3,): 1.0}])
    out = pushforward_jet(cubic, CurveJet("A", [1.0], ([1.0], [0.0])), "B")
    assert out.chart == "B"
    np.testing.assert_allclose(np.concatenate(out.coefficients()), [2.0, 4.0, 3.0])

@settings(max_examples=30, deadline=None)
@given(
    st.integers(min_value=0, max_value=2 ** 32 - 1),
    st.integers(min_value=1, max_value=3),
    st.integers(min_value=1, max_value=6),
)
def test_pushforward_matches_oracle(seed, dim, order):
    rng = np.random.default_rng(seed)
    f = random_polynomial_map(rng, dim, order + 1, scale=0.5)
    jet = CurveJet("A", rng.uniform(-1, 1, dim), tuple(rng.uniform(-1, 1, dim) for _ in range(order)))
    oracle = series_compose_oracle(f, TruncSeries1.from_jet(jet))
    assert max_relative_deviation(pushforward_jet(f, jet).coefficients(), oracle.coeffs) <= 1e-12

def test_pushforward_rejects_dimension_mismatch(rng):
    f = random_polynomial_map(rng, 2, 2)
    with pytest.raises(FaaError):
        pushforward_jet(f, CurveJet("A", [0.0], ([1.0],)))

def _poly_map(name, poly):
    table = {(d,): float(c) for d, c in enumerate(poly.coef) if c}
    table.setdefault((1,), 0.0)
    return polynomial_from_monomials(name, 1, [table])

def _linear_precomposition(g_coefficients, a):
    """Coefficient tensors of x ↦ g(Ax)."""
    out = []
    for tensor in g_coefficients:
        for axis in range(1, tensor.ndim):
            tensor = np.moveaxis(np.tensordot(tensor, a, axes=([axis], [0])), -1, axis)
        out.append(tensor)
    return out

def test_cubic_plus_identity_on_quadratic_curve():
    # (t + t²)³ + t + t² = t + t² + t³ + O(t⁴)
    cubic = polynomial_from_monomials("cubic", 1, [{(1,): 1.0, (3,): 1.0}])
    out = pushforward_jet(cubic, CurveJet("A", [0.0], ([1.0], [1.0], [0.0])))
    np.testing.assert_allclose(np.concatenate(out.coefficients()), [0.0, 1.0, 1.0, 1.0])

def test_square_on_shifted_line():
    square = polynomial_from_monomials("square", 1, [{(2,): 1.0}])
    out = pushforward_jet(square, CurveJet("A", [1.0], ([1.0], [0.0])))
    np.testing.assert_allclose(np.concatenate(out.coefficients()), [1.0, 2.0, 1.0])

@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.integers(min_value=-3, max_value=3), min_size=2, max_size=4),
    st.lists(st.integers(min_value=-3, max_value=3), min_size=2, max_size=4),
    st.integers(min_value=0, max_value=2 ** 32 - 1),
    st.integers(min_value=1, max_value=5),
)
def test_pushforward_is_functorial(f_coef, g_coef, seed, order):
    f_poly, g_poly = Polynomial(f_coef), Polynomial(g_coef)
    f, g = _poly_map("f", f_poly), _poly_map("g", g_poly)
    gf = _poly_map("g∘f", g_poly(f_poly))
    rng = np.random.default_rng(seed)
    jet = CurveJet("A", rng.uniform(-1, 1, 1), tuple(rng.uniform(-1, 1, 1) for _ in range(order)))
    stepwise = pushforward_jet(g, pushforward_jet(f, jet))
    assert max_relative_deviation(stepwise.coefficients(), pushforward_jet(gf, jet).coefficients()) <= 1e-10

@settings(max_examples=20, deadline=None)
@given(
    st.integers(min_value=0, max_value=2 ** 32 - 1),
    st.integers(min_value=2, max_value=3),
    st.integers(min_value=1, max_value=5),
)
def test_pushforward_is_functorial_after_linear_maps(seed, dim, order):
    rng = np.random.default_rng(seed)
    a = rng.uniform(-1.0, 1.0, size=(dim, dim))
    g_coefficients = [rng.uniform(-0.5, 0.5, size=(dim,) + (dim,) * d) for d in range(4)]
    f = polynomial_map("A", [np.zeros(dim), a])
    g = polynomial_map("g", g_coefficients)
    gf = polynomial_map("g∘A", _linear_precomposition(g_coefficients, a))
    jet = CurveJet("A", rng.uniform(-1, 1, dim), tuple(rng.uniform(-1, 1, dim) for _ in range(order)))
    stepwise = pushforward_jet(g, pushforward_jet(f, jet))
    assert max_relative_deviation(stepwise.coefficients(), pushforward_jet(gf, jet).coefficients()) <= 1e-10
