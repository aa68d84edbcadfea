"""
Finite truncations of the jet tower T^1M <- T^2M <- ...: order projections,
lazily extended jet threads, the Fréchet metric on threads and the
level-wise consistency checks of the tower's vector bundle charts.
"""

import logging
import threading
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, List, Optional, Union

import numpy as np

from tkbundle.core.atlas import jacobian
from tkbundle.core.connection import ConnectionComponents
from tkbundle.core.linearize import Components, restrict_order, trivialize
from tkbundle.core.osculating import random_jet
from tkbundle.models.jet import CurveJet
from tkbundle.models.report import CheckRecord
from tkbundle.utils.validators import as_vector

if TYPE_CHECKING:
    from tkbundle.core.atlas import ChartedManifold

logger = logging.getLogger(__name__)

DEFAULT_THREAD_CAP = 8

# i ↦ ξ_i, or None once the supplier is exhausted
Supplier = Callable[[int], Optional[np.ndarray]]

class TowerError(Exception):
    """Base exception for projective-tower errors."""
    pass

class JetThread:
    """
    A compatible family of jets (x; ξ_1..ξ_i), one per order, materialized on
    demand from a coefficient supplier up to a hard cap.
    """

    def __init__(self, chart: str, x: np.ndarray, supplier: Supplier, cap: int = DEFAULT_THREAD_CAP):
        if cap < 1:
            raise TowerError(f"Thread cap must be at least 1, got {cap}")
        self.chart = chart
        self.x = as_vector(x, name="base point")
        self.cap = cap
        self._supplier = supplier
        self._coefficients: List[np.ndarray] = []
        self._exhausted = False
        self._lock = threading.Lock()

    @classmethod
    def from_jet(cls, jet: CurveJet, cap: int = DEFAULT_THREAD_CAP) -> 'JetThread':
        """Thread whose supplier stops at the jet's order."""
        def supplier(i):
            return jet.xi[i - 1] if i <= jet.order else None
        return cls(jet.chart, jet.x, supplier, cap)

    @classmethod
    def from_supplier(cls, chart: str, x: np.ndarray, supplier: Supplier, cap: int = DEFAULT_THREAD_CAP) -> 'JetThread':
        return cls(chart, x, supplier, cap)

    @property
    def dim(self) -> int:
        return self.x.shape[0]

    @property
    def materialized(self) -> int:
        with self._lock:
            return len(self._coefficients)

    def extend(self, order: int) -> int:
        """
        Materialize coefficients up to order.

        Returns:
            The materialized order

        Raises:
            TowerError: If order exceeds the cap or the supplier runs out first
        """
        if order > self.cap:
            raise TowerError(f"Order {order} exceeds the thread cap {self.cap}")
        with self._lock:
            while len(self._coefficients) < order:
                if self._exhausted:
                    break
                value = self._supplier(len(self._coefficients) + 1)
                if value is None:
                    self._exhausted = True
                    break
                self._coefficients.append(as_vector(value, self.dim, f"xi_{len(self._coefficients) + 1}"))
            available = len(self._coefficients)
        if available < order:
            raise TowerError(f"Thread supplier exhausted at order {available}, {order} requested")
        return available

    def jet(self, order: int) -> CurveJet:
        self.extend(order)
        with self._lock:
            return CurveJet(self.chart, self.x, tuple(self._coefficients[:order]))

def project(t: Union[JetThread, CurveJet], order: int) -> CurveJet:
    """
    The connecting morphism to T^order M: keep the first order coefficients.

    Raises:
        TowerError: If order is below 1 or above what t can supply
    """
    if order < 1:
        raise TowerError(f"Projection order must be at least 1, got {order}")
    if isinstance(t, JetThread):
        return t.jet(order)
    if order > t.order:
        raise TowerError(f"Cannot project a jet of order {t.order} to order {order}")
    return CurveJet(t.chart, t.x, t.xi[:order])

@dataclass(frozen=True)
class FrechetDistance:
    """Partial sum of the tower metric up to a truncation, with its tail bound."""

    value: float
    truncation: int
    tail_bound: float

    @property
    def upper(self) -> float:
        return self.value + self.tail_bound

def _level_norm(a: CurveJet, b: CurveJet) -> float:
    """Max over (x, ξ_1..ξ_i) of the Euclidean norm of the difference."""
    return max(float(np.linalg.norm(u - v)) for u, v in zip(a.coefficients(), b.coefficients()))

def frechet_distance(t1: JetThread, t2: JetThread, truncation: int) -> FrechetDistance:
    """
    Σ_{i=1}^N 2^{-i} · d_i / (1 + d_i), d_i the level-i norm of the difference.

    Raises:
        TowerError: On chart mismatch or a truncation beyond either cap
    """
    if t1.chart != t2.chart:
        raise TowerError(f"Threads live in different charts: {t1.chart} and {t2.chart}")
    if truncation < 1 or truncation > min(t1.cap, t2.cap):
        raise TowerError(f"Truncation {truncation} outside 1..{min(t1.cap, t2.cap)}")

    total = 0.0
    for i in range(1, truncation + 1):
        d = _level_norm(t1.jet(i), t2.jet(i))
        total += 2.0 ** -i * d / (1.0 + d)
    return FrechetDistance(total, truncation, 2.0 ** -truncation)

def strong_system_check(
    m: 'ChartedManifold',
    mc: Components,
    samples: int,
    tol: float,
    rng: Optional[np.random.Generator] = None,
    order: Optional[int] = None,
    check_id: str = "strong-projective-system"
) -> CheckRecord:
    """
    Truncating the order-j trivialized fibre to j' slots against trivializing
    the truncated jet, for every j' < j.
    """
    rng = rng or np.random.default_rng(0)
    if order is None:
        if not isinstance(mc, ConnectionComponents):
            raise TowerError("An explicit order is needed with per-chart components")
        order = mc.order
    if order < 2:
        raise TowerError(f"The truncation diagram needs order >= 2, got {order}")

    worst = 0.0
    for index in range(samples):
        chart = m.chart_names[index % len(m.chart_names)]
        jet = random_jet(m, rng, chart, order)
        full = trivialize(mc, jet)
        for lower in range(1, order):
            direct = trivialize(mc, project(jet, lower))
            truncated = restrict_order(full, lower)
            worst = max(worst, max(float(np.max(np.abs(a - b))) for a, b in zip(truncated.z, direct.z)))

    return CheckRecord(check_id, "strong projective system: truncation commutes with trivialization",
                       samples, worst, tol)

def transition_block(m: 'ChartedManifold', source: str, target: str, x: np.ndarray, order: int) -> np.ndarray:
    """The fibre transition of the order-k vector bundle chart: k diagonal copies of dψ(x)."""
    return np.kron(np.eye(order), np.asarray(jacobian(m.transition(source, target), x), dtype=float))

def commutes_with_truncation(block: np.ndarray, dim: int) -> float:
    """
    Max residual of ρ·B = B'·ρ over all truncations ρ to fewer slots, B' the
    leading diagonal part of B.
    """
    order = block.shape[0] // dim
    worst = 0.0
    for lower in range(1, order):
        rho = np.eye(lower * dim, order * dim)
        leading = block[:lower * dim, :lower * dim]
        worst = max(worst, float(np.max(np.abs(rho @ block - leading @ rho))))
    return worst
