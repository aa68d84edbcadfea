"""
The natural bundle structure of T^kM: chart transitions of jets, their
tangent maps and the vertical endomorphism J.
"""

import logging
from typing import TYPE_CHECKING, Tuple

import numpy as np

from tkbundle.core.faa import pushforward_coefficients, pushforward_jet
from tkbundle.core.jets import TruncSeries2, dual_directional, series_compose_oracle2
from tkbundle.models.jet import CurveJet, OsculatingTangent

if TYPE_CHECKING:
    from tkbundle.core.atlas import ChartedManifold, SmoothMapOracle

logger = logging.getLogger(__name__)

class OsculatingError(Exception):
    """Base exception for natural-chart transition errors."""
    pass

def _transition_for(m: 'ChartedManifold', chart: str, x: np.ndarray, target_chart: str) -> 'SmoothMapOracle':
    if not m.in_overlap(chart, target_chart, x):
        raise OsculatingError(f"Point {x} of chart {chart} is outside the overlap with {target_chart}")
    return m.transition(chart, target_chart)

def natural_transition(m: 'ChartedManifold', j: CurveJet, target_chart: str) -> CurveJet:
    """
    Ψ^k_{βα}: carry a jet into another chart through the order-k chain rule.

    Raises:
        OsculatingError: If the base point lies outside the chart overlap
    """
    psi = _transition_for(m, j.chart, j.x, target_chart)
    return pushforward_jet(psi, j, target_chart)

def tangent_transition(m: 'ChartedManifold', ot: OsculatingTangent, target_chart: str) -> OsculatingTangent:
    """
    TΨ^k_{βα} by the two-variable series of ψ∘c̄, c̄(t, s) = x + s·y + Σ t^j (ξ_j + s·η_j).

    The s^0 row is the transported jet; the s^1 row is (ȳ, η̄_1, ..., η̄_k).

    Raises:
        OsculatingError: If the base point lies outside the chart overlap
    """
    psi = _transition_for(m, ot.chart, ot.base.x, target_chart)
    series = series_compose_oracle2(psi, TruncSeries2.from_tangent(ot))
    rows = series.coeffs
    base = CurveJet(target_chart, rows[0][0], tuple(row[0] for row in rows[1:]))
    return OsculatingTangent(base, rows[0][1], tuple(row[1] for row in rows[1:]))

def tangent_transition_directional(
    m: 'ChartedManifold',
    ot: OsculatingTangent,
    target_chart: str
) -> OsculatingTangent:
    """Same map as tangent_transition, as the dual-number derivative of Ψ^k along (y, η)."""
    psi = _transition_for(m, ot.chart, ot.base.x, target_chart)

    def transit(point):
        return pushforward_coefficients(psi, point[0], point[1:])

    base = natural_transition(m, ot.base, target_chart)
    moved = dual_directional(transit, ot.base.coefficients(), ot.components())
    return OsculatingTangent(base, moved[0], tuple(moved[1:]))

def vertical_shift_J(ot: OsculatingTangent) -> OsculatingTangent:
    """J(u; y, η_1, ..., η_k) = (u; 0, y, η_1, ..., η_{k-1})."""
    shifted: Tuple[np.ndarray, ...] = (ot.y,) + ot.eta[:-1]
    return OsculatingTangent(ot.base, np.zeros_like(ot.y), shifted)

def random_jet(
    m: 'ChartedManifold',
    rng: np.random.Generator,
    chart: str,
    order: int,
    overlap: bool = False
) -> CurveJet:
    """Jet at a fixture sample point; coefficients uniform in [-1, 1]."""
    x = m.sample(rng, overlap=overlap)
    xi = tuple(rng.uniform(-1.0, 1.0, size=m.dim) for _ in range(order))
    return CurveJet(chart, x, xi)

def random_tangent(
    m: 'ChartedManifold',
    rng: np.random.Generator,
    chart: str,
    order: int,
    overlap: bool = False
) -> OsculatingTangent:
    """Tangent at a random jet; fibre entries uniform in [-1, 1]."""
    base = random_jet(m, rng, chart, order, overlap)
    y = rng.uniform(-1.0, 1.0, size=m.dim)
    eta = tuple(rng.uniform(-1.0, 1.0, size=m.dim) for _ in range(order))
    return OsculatingTangent(base, y, eta)
