"""
Connection-induced vector bundle charts of T^kM.

In normalized coefficients the fibre coordinates are

    z_i = ξ_i + (1/i) Σ_{l=1}^{i-1} (i - l) · M^l(x, ξ_1..ξ_l)[ξ_{i-l}]

so z_1 = ξ_1 and z_i depends only on ξ_1..ξ_i. Chart changes in these
coordinates act slot-wise as dψ(x).
"""

import logging
from typing import TYPE_CHECKING, List, Mapping, Union

import numpy as np

from tkbundle.core.connection import ConnectionComponents
from tkbundle.core.osculating import OsculatingError, natural_transition
from tkbundle.models.jet import CurveJet, LinearizedVector

if TYPE_CHECKING:
    from tkbundle.core.atlas import ChartedManifold

logger = logging.getLogger(__name__)

Components = Union[ConnectionComponents, Mapping[str, ConnectionComponents]]

class TrivializationError(Exception):
    """Base exception for trivialization errors."""
    pass

def _for_chart(mc: Components, chart: str) -> ConnectionComponents:
    if isinstance(mc, ConnectionComponents):
        return mc
    try:
        return mc[chart]
    except KeyError:
        raise TrivializationError(f"No connection components for chart {chart}")

def _check_order(mc: ConnectionComponents, order: int) -> None:
    if mc.order < order:
        raise TrivializationError(f"Components of order {mc.order} cannot trivialize order {order}")

def _correction(mc: ConnectionComponents, chart: str, x: np.ndarray, xis: List[np.ndarray], i: int) -> np.ndarray:
    total = np.zeros_like(x)
    for l in range(1, i):
        total = total + (i - l) * mc.eval(l, chart, x, xis, xis[i - l - 1])
    return total / i

def trivialize(mc: Components, j: CurveJet) -> LinearizedVector:
    """
    Φ^k: the connection-corrected fibre coordinates of a jet.

    Raises:
        TrivializationError: If the components have lower order than the jet
    """
    components = _for_chart(mc, j.chart)
    _check_order(components, j.order)
    xis = list(j.xi)
    z = [xis[i - 1] + _correction(components, j.chart, j.x, xis, i) for i in range(1, j.order + 1)]
    return LinearizedVector(j.chart, j.x, tuple(z))

def detrivialize(mc: Components, lv: LinearizedVector) -> CurveJet:
    """
    Inverse of trivialize, solving for ξ_1, ξ_2, ... in increasing order.

    Raises:
        TrivializationError: If the components have lower order than the vector
    """
    components = _for_chart(mc, lv.chart)
    _check_order(components, lv.order)
    xis: List[np.ndarray] = []
    for i in range(1, lv.order + 1):
        # M^l reads ξ_1..ξ_l with l < i, all solved already
        xis.append(lv.z[i - 1] - _correction(components, lv.chart, lv.x, xis, i))
    return CurveJet(lv.chart, lv.x, tuple(xis))

def linear_transition(
    m: 'ChartedManifold',
    mc: Components,
    lv: LinearizedVector,
    target_chart: str
) -> LinearizedVector:
    """
    Chart change of a linearized vector through the jet bundle:
    detrivialize, transport the jet, trivialize in the target chart.

    Both charts' components must come from the same global connection.
    """
    jet = detrivialize(mc, lv)
    try:
        moved = natural_transition(m, jet, target_chart)
    except OsculatingError as e:
        raise TrivializationError(str(e))
    return trivialize(mc, moved)

def block_linear_transition(m: 'ChartedManifold', lv: LinearizedVector, target_chart: str) -> LinearizedVector:
    """(ψ(x), dψ(x)z_1, ..., dψ(x)z_k)."""
    if not m.in_overlap(lv.chart, target_chart, lv.x):
        raise TrivializationError(f"Point {lv.x} of chart {lv.chart} is outside the overlap with {target_chart}")
    psi = m.transition(lv.chart, target_chart)
    first = psi.tensor(1, lv.x)
    return LinearizedVector(target_chart, psi(lv.x), tuple(first(z) for z in lv.z))

def restrict_order(lv: LinearizedVector, order: int) -> LinearizedVector:
    """
    Drop the fibre slots above the given order.

    Raises:
        TrivializationError: Unless 1 <= order < lv.order
    """
    if not 1 <= order < lv.order:
        raise TrivializationError(f"Cannot restrict order {lv.order} to {order}")
    return LinearizedVector(lv.chart, lv.x, lv.z[:order])
