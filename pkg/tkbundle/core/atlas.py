"""
Charts, transition maps with exact derivative oracles, metrics and the
manifold fixtures the verification suite runs on.

Every oracle accepts dual-number coordinates, so transitions and metrics can
be differentiated again by the connection and lift machinery.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from functools import reduce
import operator
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from tkbundle.core.connection import LinearConnection
from tkbundle.core.dual import Dual, dot, exp, real_part, solve, stack
from tkbundle.core.jets import JetError, dual_directional, max_relative_deviation
from tkbundle.utils.config import FixtureParams
from tkbundle.utils.validators import KNOWN_FIXTURES

logger = logging.getLogger(__name__)

class AtlasError(Exception):
    """Base exception for chart, transition and metric errors."""
    pass

TensorFn = Callable[[int, Any, Sequence[Any]], Any]

@dataclass(frozen=True)
class SmoothMapOracle:
    """
    A map between chart domains with exact derivative tensors.

    tensor_fn(i, x, vectors) evaluates the symmetric i-linear d^iψ(x) on the
    given vectors; max_order=None means every order is available.
    """

    name: str
    dim_in: int
    dim_out: int
    value: Callable[[Any], Any]
    tensor_fn: TensorFn
    max_order: Optional[int] = None

    def tensor(self, i: int, x: Any) -> Callable[..., Any]:
        """d^iψ(x) as a multilinear evaluator."""
        if i < 1:
            raise AtlasError(f"Derivative tensors start at order 1, got {i}")
        if self.max_order is not None and i > self.max_order:
            raise AtlasError(f"Map {self.name} supplies tensors to order {self.max_order}, {i} requested")

        def evaluate(*vectors: Any) -> Any:
            if len(vectors) != i:
                raise AtlasError(f"d^{i}{self.name} takes {i} arguments, got {len(vectors)}")
            return self.tensor_fn(i, x, vectors)

        return evaluate

    def __call__(self, x: Any) -> Any:
        return self.value(x)

def jacobian(f: SmoothMapOracle, x: Any) -> Any:
    """dψ(x) as a (dim_out, dim_in) matrix, dual-aware."""
    first = f.tensor(1, x)
    return stack([first(e) for e in np.eye(f.dim_in)], axis=1)

def identity_map(dim: int, name: str = "id") -> SmoothMapOracle:
    def tensor_fn(i, x, vectors):
        return vectors[0] if i == 1 else np.zeros(dim)

    return SmoothMapOracle(name, dim, dim, lambda x: x, tensor_fn)

# --- polynomial maps ---

def _symmetrize(a: np.ndarray) -> np.ndarray:
    degree = a.ndim - 1
    if degree < 2:
        return a
    perms = list(itertools.permutations(range(1, degree + 1)))
    return sum(np.transpose(a, (0,) + p) for p in perms) / len(perms)

def _contract(a: Any, vectors: Sequence[Any]) -> Any:
    for v in vectors:
        a = a @ v
    return a

class _PolynomialTensors:
    """Σ_d A_d[x, ..., x] with symmetric coefficient tensors A_d."""

    def __init__(self, coefficients: Sequence[np.ndarray]):
        self.coefficients = [_symmetrize(np.asarray(a, dtype=float)) for a in coefficients]
        self.dim_out = self.coefficients[0].shape[0]

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def value(self, x: Any) -> Any:
        terms = [_contract(a, [x] * d) for d, a in enumerate(self.coefficients)]
        return reduce(operator.add, terms)

    def tensor(self, i: int, x: Any, vectors: Sequence[Any]) -> Any:
        # d^i f(x)[v] = Σ_{d>=i} d!/(d-i)! · A_d[v_1..v_i, x..x]
        total: Any = np.zeros(self.dim_out)
        for d in range(i, self.degree + 1):
            weight = math.factorial(d) / math.factorial(d - i)
            partial = _contract(self.coefficients[d], [x] * (d - i))
            total = total + weight * _contract(partial, vectors)
        return total

def polynomial_map(name: str, coefficients: Sequence[np.ndarray]) -> SmoothMapOracle:
    """
    Polynomial map from coefficient tensors.

    Args:
        name: Label used in errors
        coefficients: coefficients[d] has shape (dim_out,) + (dim_in,) * d;
            it is symmetrized over its input axes

    Returns:
        SmoothMapOracle with tensors of every order
    """
    if not coefficients:
        raise AtlasError("A polynomial map needs at least a constant term")
    poly = _PolynomialTensors(coefficients)
    dim_in = poly.coefficients[1].shape[1] if poly.degree >= 1 else 0
    return SmoothMapOracle(name, dim_in, poly.dim_out, poly.value, poly.tensor)

def polynomial_from_monomials(
    name: str,
    dim_in: int,
    components: Sequence[Dict[Tuple[int, ...], float]]
) -> SmoothMapOracle:
    """
    Polynomial map from per-component monomial tables {exponents: coefficient}.

    x1 + x2³ in two variables is {(1, 0): 1.0, (0, 3): 1.0}.
    """
    degree = max((sum(e) for table in components for e in table), default=0)
    coefficients = [np.zeros((len(components),) + (dim_in,) * d) for d in range(degree + 1)]
    for out, table in enumerate(components):
        for exponents, c in table.items():
            if len(exponents) != dim_in:
                raise AtlasError(f"Monomial {exponents} does not match dimension {dim_in}")
            indices = tuple(j for j, power in enumerate(exponents) for _ in range(power))
            slots = set(itertools.permutations(indices))
            for slot in slots:
                coefficients[len(indices)][(out,) + slot] += c / len(slots)
    return polynomial_map(name, coefficients)

def random_polynomial_map(
    rng: np.random.Generator,
    dim: int,
    degree: int,
    scale: float = 1.0,
    dim_out: Optional[int] = None
) -> SmoothMapOracle:
    """Random polynomial map with coefficients uniform in [-scale, scale] / d!."""
    dim_out = dim_out or dim
    coefficients = [
        rng.uniform(-scale, scale, size=(dim_out,) + (dim,) * d) / math.factorial(d)
        for d in range(degree + 1)
    ]
    return polynomial_map(f"random_poly_deg{degree}", coefficients)

# --- inverse of x³ + x ---

def _cubic_root(y: Any) -> Any:
    """Real solution of x³ + x = y, dual-aware."""
    if isinstance(y, Dual):
        x = _cubic_root(y.re)
        return Dual(x, y.du / (3.0 * x * x + 1.0), y.tag)
    y = np.asarray(y, dtype=float)
    root = np.sqrt(y * y / 4.0 + 1.0 / 27.0)
    x = np.cbrt(y / 2.0 + root) + np.cbrt(y / 2.0 - root)
    for _ in range(2):
        x = x - (x ** 3 + x - y) / (3.0 * x ** 2 + 1.0)
    return x

def _reversion_coefficients(x0: Any, order: int) -> List[Any]:
    """b_1..b_order of φ(y0 + h) = x0 + Σ b_m h^m, the inverse series of x³ + x."""
    p1 = 3.0 * x0 * x0 + 1.0
    b: List[Any] = [None]
    for m in range(1, order + 1):
        square = 0.0
        for a in range(1, m):
            square = square + b[a] * b[m - a]
        cube = 0.0
        for a in range(1, m):
            for c in range(1, m - a):
                cube = cube + b[a] * b[c] * b[m - a - c]
        numerator = (1.0 if m == 1 else 0.0) - 3.0 * x0 * square - cube
        b.append(numerator / p1)
    return b

def cubic_inverse_map(name: str = "psi_AB") -> SmoothMapOracle:
    """The inverse of x ↦ x³ + x on the real line."""
    def tensor_fn(i, y, vectors):
        b = _reversion_coefficients(_cubic_root(y), i)
        return math.factorial(i) * b[i] * reduce(operator.mul, vectors)

    return SmoothMapOracle(name, 1, 1, _cubic_root, tensor_fn)

# --- inversion x ↦ x / |x|² ---

def _matchings(items: Tuple[int, ...]):
    """Splits of items into singletons and unordered pairs."""
    if not items:
        yield (), ()
        return
    first, rest = items[0], items[1:]
    for singles, pairs in _matchings(rest):
        yield (first,) + singles, pairs
    for position, partner in enumerate(rest):
        remaining = rest[:position] + rest[position + 1:]
        for singles, pairs in _matchings(remaining):
            yield singles, ((first, partner),) + pairs

def _reciprocal_tensor(x: Any, vectors: Sequence[Any]) -> Any:
    """d^n(1/|x|²)[v_1..v_n]; |x|² is quadratic so only 1- and 2-blocks survive."""
    r = dot(x, x)
    total: Any = 0.0
    for singles, pairs in _matchings(tuple(range(len(vectors)))):
        blocks = len(singles) + len(pairs)
        term: Any = (-1) ** blocks * math.factorial(blocks) / r ** (blocks + 1)
        for s in singles:
            term = term * (2.0 * dot(x, vectors[s]))
        for a, c in pairs:
            term = term * (2.0 * dot(vectors[a], vectors[c]))
        total = total + term
    return total

def inversion_map(dim: int, name: str = "psi_SN") -> SmoothMapOracle:
    """x ↦ x/|x|², with closed-form tensors of every order."""
    def value(x):
        return x * (1.0 / dot(x, x))

    def tensor_fn(i, x, vectors):
        # Leibniz on x · (1/|x|²); x is linear
        total = x * _reciprocal_tensor(x, vectors)
        for k in range(i):
            others = [v for j, v in enumerate(vectors) if j != k]
            total = total + vectors[k] * _reciprocal_tensor(x, others)
        return total

    return SmoothMapOracle(name, dim, dim, value, tensor_fn)

# --- charts and manifolds ---

@dataclass(frozen=True)
class Chart:
    name: str
    contains: Callable[[np.ndarray], bool]

Sampler = Callable[[np.random.Generator], np.ndarray]

@dataclass
class MetricFixture:
    """
    Per-chart Riemannian metric g(chart, x) with an optional analytic
    derivative x ↦ dg(x)[w] and optional closed-form Christoffel symbols.
    """

    g: Dict[str, Callable[[Any], Any]]
    derivative: Dict[str, Callable[[Any, Any], Any]] = field(default_factory=dict)
    christoffel: Dict[str, Callable[[Any, Any, Any], Any]] = field(default_factory=dict)

    def matrix(self, chart: str, x: Any) -> Any:
        if chart not in self.g:
            raise AtlasError(f"No metric representative in chart {chart}")
        return self.g[chart](x)

    def inner(self, chart: str, x: Any, u: Any, v: Any) -> Any:
        return dot(u, self.matrix(chart, x) @ v)

    def metric_derivative(self, chart: str, x: Any, w: Any) -> Any:
        """dg(x)[w]; dual-number derivative when no analytic one is registered."""
        if chart in self.derivative:
            return self.derivative[chart](x, w)
        return dual_directional(lambda p: self.matrix(chart, p), x, w)

@dataclass
class ChartedManifold:
    """Atlas with transition oracles ψ_{βα}, keyed by (α, β)."""

    name: str
    dim: int
    charts: Dict[str, Chart]
    transitions: Dict[Tuple[str, str], SmoothMapOracle]
    overlaps: Dict[Tuple[str, str], Callable[[np.ndarray], bool]]
    sampler: Sampler
    overlap_sampler: Optional[Sampler] = None
    metric: Optional[MetricFixture] = None

    def __post_init__(self):
        self._identity = identity_map(self.dim)

    @property
    def chart_names(self) -> List[str]:
        return sorted(self.charts)

    @property
    def has_overlap(self) -> bool:
        return bool(self.transitions)

    def transition(self, source: str, target: str) -> SmoothMapOracle:
        """ψ_{target,source}; the identity when source == target."""
        for chart in (source, target):
            if chart not in self.charts:
                raise AtlasError(f"Unknown chart {chart!r} on {self.name}")
        if source == target:
            return self._identity
        try:
            return self.transitions[(source, target)]
        except KeyError:
            raise AtlasError(f"Charts {source} and {target} of {self.name} do not overlap")

    def in_overlap(self, source: str, target: str, x: Any) -> bool:
        x = np.asarray(real_part(x), dtype=float)
        if source not in self.charts or not self.charts[source].contains(x):
            return False
        if source == target:
            return True
        predicate = self.overlaps.get((source, target))
        return predicate is not None and bool(predicate(x))

    def sample(self, rng: np.random.Generator, overlap: bool = False) -> np.ndarray:
        """Base point from the fixture's safe region (the overlap region if asked)."""
        if overlap:
            if self.overlap_sampler is None:
                raise AtlasError(f"{self.name} has no chart overlap to sample")
            return self.overlap_sampler(rng)
        return self.sampler(rng)

def _box_sampler(dim: int, radius: float) -> Sampler:
    return lambda rng: rng.uniform(-radius, radius, size=dim)

def _annulus_sampler(dim: int, inner: float, outer: float) -> Sampler:
    def sample(rng):
        direction = rng.normal(size=dim)
        direction /= np.linalg.norm(direction)
        return rng.uniform(inner, outer) * direction
    return sample

def _everywhere(x: np.ndarray) -> bool:
    return bool(np.all(np.isfinite(x)))

def pushforward_metric(base: Callable[[Any], Any], back: SmoothMapOracle) -> Callable[[Any], Any]:
    """Representative of a metric in the chart reached by back's inverse: Jᵀ g(back(u)) J."""
    def g(u):
        j = jacobian(back, u)
        return j.T @ (base(back(u)) @ j)
    return g

def _flat_poly(params: FixtureParams) -> ChartedManifold:
    dim = params.flat_dim
    if dim == 1:
        forward = polynomial_from_monomials("psi_BA", 1, [{(1,): 1.0, (3,): 1.0}])
        backward = cubic_inverse_map("psi_AB")
    elif dim == 2:
        forward = polynomial_from_monomials("psi_BA", 2, [
            {(1, 0): 1.0, (0, 3): 1.0},
            {(0, 1): 1.0, (2, 0): 1.0, (1, 3): 2.0, (0, 6): 1.0},
        ])
        backward = polynomial_from_monomials("psi_AB", 2, [
            {(1, 0): 1.0, (0, 3): -1.0, (2, 2): 3.0, (4, 1): -3.0, (6, 0): 1.0},
            {(0, 1): 1.0, (2, 0): -1.0},
        ])
    else:
        raise AtlasError(f"flat_poly supports dimension 1 or 2, got {dim}")

    def euclidean(x):
        return np.eye(dim)

    def chart_b_christoffel(u, a, b):
        # geodesics are straight lines in chart A
        x = backward(u)
        return forward.tensor(1, x)(backward.tensor(2, u)(a, b))

    metric = MetricFixture(
        g={"A": euclidean, "B": pushforward_metric(euclidean, backward)},
        derivative={"A": lambda x, w: np.zeros((dim, dim))},
        christoffel={"A": lambda x, a, b: np.zeros(dim), "B": chart_b_christoffel},
    )
    return ChartedManifold(
        name="flat_poly",
        dim=dim,
        charts={"A": Chart("A", _everywhere), "B": Chart("B", _everywhere)},
        transitions={("A", "B"): forward, ("B", "A"): backward},
        overlaps={("A", "B"): _everywhere, ("B", "A"): _everywhere},
        sampler=_box_sampler(dim, params.box_radius),
        overlap_sampler=_box_sampler(dim, params.box_radius),
        metric=metric,
    )

def _exp_metric_1d(params: FixtureParams) -> ChartedManifold:
    c = params.c

    def g(x):
        # 1x1 matrix e^{2cx}
        return exp(2.0 * c * x)[None, :]

    metric = MetricFixture(
        g={"A": g},
        derivative={"A": lambda x, w: (2.0 * c * w * exp(2.0 * c * x))[None, :]},
        christoffel={"A": lambda x, u, v: c * u * v},
    )
    return ChartedManifold(
        name="exp_metric_1d",
        dim=1,
        charts={"A": Chart("A", _everywhere)},
        transitions={},
        overlaps={},
        sampler=_box_sampler(1, params.box_radius),
        metric=metric,
    )

def _sphere_stereo(params: FixtureParams) -> ChartedManifold:
    dim = params.sphere_dim
    if dim not in (1, 2):
        raise AtlasError(f"sphere_stereo supports dimension 1 or 2, got {dim}")
    if not 0.0 < params.annulus_inner < params.annulus_outer:
        raise AtlasError(
            f"Overlap annulus needs 0 < inner < outer, got {params.annulus_inner}, {params.annulus_outer}"
        )

    def g(x):
        return (4.0 / (1.0 + dot(x, x)) ** 2) * np.eye(dim)

    def dg(x, w):
        return (-16.0 * dot(x, w) / (1.0 + dot(x, x)) ** 3) * np.eye(dim)

    def christoffel(x, u, v):
        numerator = dot(u, x) * v + dot(v, x) * u - dot(u, v) * x
        return numerator * (-2.0 / (1.0 + dot(x, x)))

    def punctured(x):
        return _everywhere(x) and float(np.dot(x, x)) > 0.0

    return ChartedManifold(
        name="sphere_stereo",
        dim=dim,
        charts={"N": Chart("N", _everywhere), "S": Chart("S", _everywhere)},
        transitions={("N", "S"): inversion_map(dim, "psi_SN"), ("S", "N"): inversion_map(dim, "psi_NS")},
        overlaps={("N", "S"): punctured, ("S", "N"): punctured},
        sampler=_box_sampler(dim, params.box_radius),
        overlap_sampler=_annulus_sampler(dim, params.annulus_inner, params.annulus_outer),
        metric=MetricFixture(
            g={"N": g, "S": g},
            derivative={"N": dg, "S": dg},
            christoffel={"N": christoffel, "S": christoffel},
        ),
    )

_BUILDERS = {
    "flat_poly": _flat_poly,
    "exp_metric_1d": _exp_metric_1d,
    "sphere_stereo": _sphere_stereo,
}

def build_fixture(name: str, params: Optional[FixtureParams] = None) -> ChartedManifold:
    """
    Build a named manifold fixture with its metric.

    Args:
        name: One of flat_poly, exp_metric_1d, sphere_stereo
        params: Fixture parameters (defaults when None)

    Raises:
        AtlasError: On unknown fixture names or unsupported parameters
    """
    if name not in KNOWN_FIXTURES:
        raise AtlasError(f"Unknown fixture {name!r}; expected one of {', '.join(KNOWN_FIXTURES)}")
    manifold = _BUILDERS[name](params or FixtureParams())
    logger.info(f"Built fixture {name} (dim {manifold.dim}, charts {manifold.chart_names})")
    return manifold

# --- connections from metrics ---

def levi_civita(m: MetricFixture, name: str = "levi-civita") -> LinearConnection:
    """
    Christoffel map Γ(x)(u, v) = ½ g⁻¹[dg(u)v + dg(v)u − ∇_x(uᵀ g v)] per chart.

    Evaluated generically from the metric and its derivative, so it accepts
    dual-number arguments.
    """
    def gamma(chart: str, x: Any, u: Any, v: Any) -> Any:
        dim = np.shape(real_part(x))[0]
        gradient = stack([
            dot(u, m.metric_derivative(chart, x, e) @ v) for e in np.eye(dim)
        ])
        rhs = m.metric_derivative(chart, x, u) @ v + m.metric_derivative(chart, x, v) @ u - gradient
        try:
            return 0.5 * solve(m.matrix(chart, x), rhs)
        except np.linalg.LinAlgError as e:
            raise AtlasError(f"Metric is singular in chart {chart} at {real_part(x)}: {e}")

    return LinearConnection(name, gamma, charts=tuple(sorted(m.g)))

def flat_connection(charts: Sequence[str], dim: int) -> LinearConnection:
    """Γ ≡ 0 in every listed chart."""
    return LinearConnection("flat", lambda chart, x, u, v: np.zeros(dim), charts=tuple(charts))

# --- fixture self-test ---

def check_fixture(
    m: ChartedManifold,
    rng: np.random.Generator,
    samples: int = 10,
    max_order: int = 3
) -> Dict[str, float]:
    """
    Residuals of the fixture's own invariants on random samples.

    Returns:
        {invariant name: max relative residual}; empty categories are omitted
    """
    residuals: Dict[str, List[float]] = {}

    def record(key: str, value: float) -> None:
        residuals.setdefault(key, []).append(value)

    for _ in range(samples):
        x = m.sample(rng, overlap=m.has_overlap)
        u, v, w = (rng.uniform(-1.0, 1.0, size=m.dim) for _ in range(3))

        for (source, target), psi in sorted(m.transitions.items()):
            back = m.transition(target, source)
            record("round-trip", max_relative_deviation([back(psi(x))], [x]))

            first = psi.tensor(1, x)(u)
            try:
                dual = dual_directional(psi.value, x, u)
            except JetError as e:
                raise AtlasError(f"Transition {psi.name} rejects dual input: {e}")
            record("first-tensor", max_relative_deviation([first], [dual]))

            for i in range(2, max_order + 1):
                args = [rng.uniform(-1.0, 1.0, size=m.dim) for _ in range(i)]
                straight = psi.tensor(i, x)(*args)
                swapped = psi.tensor(i, x)(*reversed(args))
                record("tensor-symmetry", max_relative_deviation([swapped], [straight]))

            if m.metric is not None:
                y = psi(x)
                jac = jacobian(psi, x)
                moved = m.metric.inner(target, y, jac @ u, jac @ v)
                record("metric-invariance", max_relative_deviation(
                    [np.atleast_1d(moved)], [np.atleast_1d(m.metric.inner(source, x, u, v))]
                ))

        if m.metric is not None:
            connection = levi_civita(m.metric)
            for chart in m.chart_names:
                gamma_uv = connection(chart, x, u, v)
                record("christoffel-symmetry", max_relative_deviation([connection(chart, x, v, u)], [gamma_uv]))
                closed = m.metric.christoffel.get(chart)
                if closed is not None:
                    record("christoffel-closed-form", max_relative_deviation([gamma_uv], [closed(x, u, v)]))

        identity = m.transition(m.chart_names[0], m.chart_names[0])
        record("identity", max_relative_deviation([identity(x)], [x]))

    return {key: max(values) for key, values in sorted(residuals.items())}
