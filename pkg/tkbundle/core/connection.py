"""
Linear connections, their induced connection-map components M^i, the
connection map K and the horizontal/vertical splitting of TT^kM.

Components are built recursively:

    M^1(x, ξ_1)y = Γ(x)(ξ_1, y)
    i·M^i(x, ξ_1..ξ_i)y = D_v[M^{i-1}(·)y] + M^1(x, ξ_1)[M^{i-1}(x, ξ_1..ξ_{i-1})y]

where D_v differentiates over (x, ξ_1, ..., ξ_{i-1}) along (ξ_1, 2ξ_2, ..., iξ_i).
One evaluation of M^i calls Γ i times, once per level; each level adds a dual
layer, so the arithmetic per call still grows geometrically with i.
"""

import logging
import threading
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from tkbundle.core.jets import dual_value_and_directional, max_relative_deviation
from tkbundle.core.osculating import random_tangent, tangent_transition
from tkbundle.models.jet import OsculatingTangent
from tkbundle.models.report import CheckRecord

if TYPE_CHECKING:
    from tkbundle.core.atlas import ChartedManifold

logger = logging.getLogger(__name__)

Evaluator = Callable[[Any, Sequence[Any], Any], Any]

class ConnectionMapError(Exception):
    """Base exception for connection-map errors."""
    pass

@dataclass(frozen=True)
class LinearConnection:
    """
    Per-chart local components (ξ, y) ↦ Γ(x)(ξ, y).

    gamma(chart, x, xi, y) must accept dual-number arguments. An empty charts
    tuple means every chart is accepted.
    """

    name: str
    gamma: Callable[[str, Any, Any, Any], Any]
    charts: Tuple[str, ...] = ()

    def __call__(self, chart: str, x: Any, xi: Any, y: Any) -> Any:
        if self.charts and chart not in self.charts:
            raise ConnectionMapError(f"Connection {self.name} has no representative in chart {chart}")
        return self.gamma(chart, x, xi, y)

@dataclass
class ConnectionComponents:
    """
    The maps M^1..M^k induced by a linear connection.

    scale multiplies the output of eval(i) for the listed orders; it exists to
    build deliberately broken components for negative controls and does not
    enter the recursion.
    """

    connection: LinearConnection
    order: int
    scale: Dict[int, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.order < 1:
            raise ConnectionMapError(f"Connection components need order >= 1, got {self.order}")
        self._evaluators: Dict[Tuple[str, int], Evaluator] = {}
        self._lock = threading.Lock()

    def _evaluator(self, chart: str, i: int) -> Evaluator:
        key = (chart, i)
        with self._lock:
            cached = self._evaluators.get(key)
        if cached is not None:
            return cached

        if i == 1:
            def evaluate(x, xis, y):
                return self.connection(chart, x, xis[0], y)
        else:
            previous = self._evaluator(chart, i - 1)
            first = self._evaluator(chart, 1)

            def evaluate(x, xis, y):
                head = tuple(xis[:i - 1])
                direction = (xis[0],) + tuple((j + 1) * xis[j] for j in range(1, i))
                # the primal of the dual pass is M^{i-1}(x, ξ_1..ξ_{i-1})y
                value, flow = dual_value_and_directional(
                    lambda point: previous(point[0], point[1:], y),
                    (x,) + head,
                    direction,
                )
                return (flow + first(x, xis, value)) / i

        with self._lock:
            return self._evaluators.setdefault(key, evaluate)

    def eval(self, i: int, chart: str, x: Any, xis: Sequence[Any], y: Any) -> Any:
        """
        M^i(x, ξ_1..ξ_i)y; only the first i entries of xis are read.

        Raises:
            ConnectionMapError: If i is outside 1..order or too few ξ are given
        """
        if not 1 <= i <= self.order:
            raise ConnectionMapError(f"Component order {i} outside 1..{self.order}")
        if len(xis) < i:
            raise ConnectionMapError(f"M^{i} needs {i} jet coefficients, got {len(xis)}")
        value = self._evaluator(chart, i)(x, tuple(xis[:i]), y)
        factor = self.scale.get(i)
        return value if factor is None else factor * value

    def corrupted(self, i: int, factor: float) -> 'ConnectionComponents':
        """Copy whose M^i output is scaled by factor."""
        scale = dict(self.scale)
        scale[i] = factor
        return ConnectionComponents(self.connection, self.order, scale)

def induce_components(c: LinearConnection, k: int) -> ConnectionComponents:
    """
    Connection-map components M^1..M^k of a linear connection.

    Raises:
        ConnectionMapError: If k < 1
    """
    if k < 1:
        raise ConnectionMapError(f"Connection components need order >= 1, got {k}")
    return ConnectionComponents(c, k)

def _check_order(mc: ConnectionComponents, order: int) -> None:
    if mc.order < order:
        raise ConnectionMapError(f"Components of order {mc.order} cannot act on order {order}")

def connection_map_apply(mc: ConnectionComponents, ot: OsculatingTangent) -> Tuple[np.ndarray, ...]:
    """
    K(u; y, η): i-th output η_i + M^1 η_{i-1} + ... + M^i y, with η_0 = y.
    """
    _check_order(mc, ot.order)
    x, xis = ot.base.x, ot.base.xi
    fibre = ot.components()
    outputs = []
    for i in range(1, ot.order + 1):
        total = fibre[i]
        for l in range(1, i + 1):
            total = total + mc.eval(l, ot.chart, x, xis, fibre[i - l])
        outputs.append(np.asarray(total, dtype=float))
    return tuple(outputs)

def horizontal_projector(mc: ConnectionComponents, ot: OsculatingTangent) -> OsculatingTangent:
    """The tangent with the same y annihilated by K: η_i = −Σ_{l=1}^i M^l η_{i−l}."""
    _check_order(mc, ot.order)
    x, xis = ot.base.x, ot.base.xi
    fibre: List[np.ndarray] = [ot.y]
    for i in range(1, ot.order + 1):
        total = np.zeros_like(ot.y)
        for l in range(1, i + 1):
            total = total - mc.eval(l, ot.chart, x, xis, fibre[i - l])
        fibre.append(total)
    return OsculatingTangent(ot.base, ot.y, tuple(fibre[1:]))

def verify_compatibility(
    m: 'ChartedManifold',
    mc: ConnectionComponents,
    samples: int,
    tol: float,
    rng: Optional[np.random.Generator] = None,
    check_id: str = "connection-compatibility"
) -> CheckRecord:
    """
    Compare dψ(x)[K_α(u; y, η)] with K_β(TΨ(u; y, η)) across chart overlaps.

    Returns:
        CheckRecord with the max relative residual over all samples

    Raises:
        ConnectionMapError: If the manifold has no chart overlap
    """
    if not m.has_overlap:
        raise ConnectionMapError(f"{m.name} has no chart overlap to test compatibility on")
    rng = rng or np.random.default_rng(0)
    pairs = sorted(m.transitions)

    worst = 0.0
    for index in range(samples):
        source, target = pairs[index % len(pairs)]
        ot = random_tangent(m, rng, source, mc.order, overlap=True)
        first = m.transition(source, target).tensor(1, ot.base.x)
        lhs = [first(value) for value in connection_map_apply(mc, ot)]
        rhs = connection_map_apply(mc, tangent_transition(m, ot, target))
        worst = max(worst, max_relative_deviation(lhs, rhs))
        logger.debug(f"compatibility sample {index} ({source}->{target}): residual {worst:.3e}")

    return CheckRecord(check_id, "connection-map compatibility across charts", samples, worst, tol)
