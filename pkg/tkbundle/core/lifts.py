"""
Prolongations to T^kM through the connection-induced trivialization: the
lifted metric G^k, and Lagrangians with their fibre derivative, energy,
Euler-Lagrange vector field and order-k lift.

All partial derivatives are taken by dual-number passes, so Lagrangians only
need a value evaluator that accepts dual coordinates.
"""

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Callable, Sequence

import numpy as np

from tkbundle.core.connection import LinearConnection
from tkbundle.core.dual import dot, real_part, solve, stack
from tkbundle.core.jets import dual_directional
from tkbundle.core.linearize import Components, trivialize
from tkbundle.models.jet import CurveJet

if TYPE_CHECKING:
    from tkbundle.core.atlas import MetricFixture

logger = logging.getLogger(__name__)

# fibre Hessians worse than this are treated as singular
HESSIAN_CONDITION_LIMIT = 1e12

class LiftError(Exception):
    """Base exception for metric and Lagrangian lift errors."""
    pass

class DegenerateLagrangianError(LiftError):
    """Raised when the fibre Hessian of a Lagrangian is singular."""
    pass

def _gradient(f: Callable[[Any], Any], point: Any) -> Any:
    dim = np.shape(real_part(point))[0]
    return stack([dual_directional(f, point, e) for e in np.eye(dim)])

@dataclass(frozen=True)
class Lagrangian:
    """A function L(chart, x, y) on TM, given per chart."""

    name: str
    value: Callable[[str, Any, Any], Any]

    def __call__(self, chart: str, x: Any, y: Any) -> Any:
        return self.value(chart, x, y)

    def d1(self, chart: str, x: Any, y: Any) -> Any:
        """∂_1L(x, y) as a vector."""
        return _gradient(lambda p: self.value(chart, p, y), x)

    def d2(self, chart: str, x: Any, y: Any) -> Any:
        """∂_2L(x, y) as a vector."""
        return _gradient(lambda q: self.value(chart, x, q), y)

    def d22(self, chart: str, x: Any, y: Any) -> Any:
        """Fibre Hessian ∂²_2L(x, y)."""
        dim = np.shape(real_part(y))[0]
        columns = [dual_directional(lambda q: self.d2(chart, x, q), y, e) for e in np.eye(dim)]
        return stack(columns, axis=1)

    def d12(self, chart: str, x: Any, y: Any, w: Any) -> Any:
        """Derivative of ∂_2L(x, y) along w in x."""
        return dual_directional(lambda p: self.d2(chart, p, y), x, w)

    def is_nondegenerate(self, chart: str, x: Any, y: Any) -> bool:
        try:
            _checked_hessian(self, chart, x, y)
        except DegenerateLagrangianError:
            return False
        return True

def _checked_hessian(L: Lagrangian, chart: str, x: Any, y: Any) -> Any:
    hessian = L.d22(chart, x, y)
    plain = np.asarray(real_part(hessian), dtype=float)
    if np.linalg.matrix_rank(plain) < plain.shape[0] or np.linalg.cond(plain) > HESSIAN_CONDITION_LIMIT:
        raise DegenerateLagrangianError(
            f"Fibre Hessian of {L.name} is singular at x={real_part(x)}, y={real_part(y)}"
        )
    return hessian

def kinetic_lagrangian(name: str = "kinetic") -> Lagrangian:
    """L = ½|y|² in every chart."""
    return Lagrangian(name, lambda chart, x, y: 0.5 * dot(y, y))

def energy_lagrangian(metric: 'MetricFixture', name: str = "energy") -> Lagrangian:
    """L = ½ g_x(y, y)."""
    return Lagrangian(name, lambda chart, x, y: 0.5 * metric.inner(chart, x, y, y))

def degenerate_lagrangian(name: str = "first-velocity") -> Lagrangian:
    """L = y_1, whose fibre Hessian vanishes."""
    return Lagrangian(name, lambda chart, x, y: y[0])

def metric_lift(m: 'MetricFixture', mc: Components, j1: CurveJet, j2: CurveJet) -> float:
    """
    G^k(j1, j2) = Σ_i g(x)(z_i(j1), z_i(j2)).

    Raises:
        LiftError: If the jets do not share chart, base point and order
    """
    if j1.chart != j2.chart or j1.order != j2.order or not np.array_equal(j1.x, j2.x):
        raise LiftError("Metric lift needs jets with the same chart, base point and order")
    z1 = trivialize(mc, j1).z
    z2 = trivialize(mc, j2).z
    return float(sum(m.inner(j1.chart, j1.x, a, b) for a, b in zip(z1, z2)))

def fibre_derivative(L: Lagrangian, chart: str, x: Any, v: Any, w: Any) -> Any:
    """FL(v)w = d/dt L(x, v + tw) at t = 0."""
    return dual_directional(lambda q: L(chart, x, q), v, w)

def energy(L: Lagrangian, chart: str, x: Any, y: Any) -> Any:
    """E = FL(y)y − L."""
    return fibre_derivative(L, chart, x, y, y) - L(chart, x, y)

def lagrangian_vector_field(L: Lagrangian, chart: str, x: Any, y: Any) -> Any:
    """
    Euler-Lagrange acceleration Z = [∂²_2L]⁻¹(∂_1L − D_x(∂_2L)[y]).

    Raises:
        DegenerateLagrangianError: If the fibre Hessian is singular
    """
    hessian = _checked_hessian(L, chart, x, y)
    rhs = L.d1(chart, x, y) - L.d12(chart, x, y, y)
    return solve(hessian, rhs)

def lagrangian_connection(L: Lagrangian, charts: Sequence[str] = ()) -> LinearConnection:
    """The linear connection Γ(x)(u, v) = −½ ∂_2Z(x, u)v of a quadratic Lagrangian."""
    def gamma(chart, x, u, v):
        return -0.5 * dual_directional(lambda q: lagrangian_vector_field(L, chart, x, q), u, v)

    return LinearConnection(f"spray:{L.name}", gamma, charts=tuple(charts))

def lagrangian_lift(L: Lagrangian, mc: Components, j: CurveJet) -> float:
    """L^k(j) = Σ_i L(x, z_i(j))."""
    lv = trivialize(mc, j)
    return float(sum(L(j.chart, j.x, z) for z in lv.z))
