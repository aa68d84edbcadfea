"""
Truncated Taylor series and dual-number directional derivatives.

The composition oracles here expand a map's Taylor polynomial on a polynomial
curve by brute force; the production chain rule in `faa` is checked against
them.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from tkbundle.core.dual import Dual, new_tag
from tkbundle.models.jet import CurveJet, OsculatingTangent
from tkbundle.utils.validators import ValidationError, as_vectors

if TYPE_CHECKING:
    from tkbundle.core.atlas import SmoothMapOracle

logger = logging.getLogger(__name__)

class JetError(Exception):
    """Base exception for series and jet arithmetic errors."""
    pass

@dataclass(frozen=True)
class TruncSeries1:
    """c_0 + c_1 t + ... + c_K t^K with vector coefficients."""

    coeffs: Tuple[np.ndarray, ...]

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise JetError("A truncated series needs order K >= 1")
        dim = np.atleast_1d(self.coeffs[0]).shape[0]
        try:
            object.__setattr__(self, "coeffs", as_vectors(self.coeffs, dim, "series"))
        except ValidationError as e:
            raise JetError(str(e))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def dim(self) -> int:
        return self.coeffs[0].shape[0]

    @classmethod
    def from_jet(cls, jet: CurveJet) -> 'TruncSeries1':
        """The polynomial representative x + tξ_1 + ... + t^kξ_k."""
        return cls(jet.coefficients())

@dataclass(frozen=True)
class TruncSeries2:
    """Σ c_{i,j} t^i s^j for 0 <= i <= K and 0 <= j <= 1."""

    coeffs: Tuple[Tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        if len(self.coeffs) < 2:
            raise JetError("A truncated series needs order K >= 1")
        dim = np.atleast_1d(self.coeffs[0][0]).shape[0]
        try:
            rows = tuple(tuple(as_vectors(row, dim, "series")) for row in self.coeffs)
        except ValidationError as e:
            raise JetError(str(e))
        if any(len(row) != 2 for row in rows):
            raise JetError("Two-variable series rows must hold exactly the s^0 and s^1 terms")
        object.__setattr__(self, "coeffs", rows)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @property
    def dim(self) -> int:
        return self.coeffs[0][0].shape[0]

    @classmethod
    def from_tangent(cls, tangent: OsculatingTangent) -> 'TruncSeries2':
        """c̄(t, s) = x + s·y + Σ t^j (ξ_j + s·η_j)."""
        base = tangent.base
        rows = [(base.x, tangent.y)]
        rows.extend(zip(base.xi, tangent.eta))
        return cls(tuple(rows))

def _check_map(f: 'SmoothMapOracle', dim: int, order: int) -> None:
    if f.dim_in != dim:
        raise JetError(f"Map {f.name} takes dimension {f.dim_in}, series has {dim}")
    if f.max_order is not None and f.max_order < order:
        raise JetError(f"Map {f.name} supplies tensors to order {f.max_order}, {order} required")

def _compositions(total: int):
    """Ordered tuples of positive integers with sum <= total."""
    yield ()
    for first in range(1, total + 1):
        for rest in _compositions(total - first):
            yield (first,) + rest

def series_compose_oracle(f: 'SmoothMapOracle', s: TruncSeries1) -> TruncSeries1:
    """
    Truncated series of t ↦ f(s(t)), by expanding the Taylor polynomial of f
    at s.c_0 over every ordered tuple of increments.

    Args:
        f: Map with derivative tensors to order K
        s: Series of order K

    Returns:
        Series of the composite, same order
    """
    order = s.order
    _check_map(f, s.dim, order)

    base = s.coeffs[0]
    tensors = {n: f.tensor(n, base) for n in range(1, order + 1)}
    out: List[Any] = [f.value(base)] + [np.zeros(f.dim_out) for _ in range(order)]
    for degrees in _compositions(order):
        if not degrees:
            continue
        n = len(degrees)
        term = tensors[n](*(s.coeffs[d] for d in degrees)) / math.factorial(n)
        out[sum(degrees)] = out[sum(degrees)] + term

    return TruncSeries1(tuple(out))

def series_compose_oracle2(f: 'SmoothMapOracle', s: TruncSeries2) -> TruncSeries2:
    """
    Truncated two-variable series of (t, s) ↦ f(c(t, s)), keeping s-degree <= 1.

    Increments are grouped by multiset; a multiset with multiplicities m
    contributes T_n(h, ..., h) / Π m! (the ordered tuples it stands for, over n!).
    At most one increment may carry s.
    """
    order = s.order
    _check_map(f, s.dim, order + 1)

    base = s.coeffs[0][0]
    tensors = {n: f.tensor(n, base) for n in range(1, order + 2)}
    out: Dict[Tuple[int, int], Any] = {
        (i, j): np.zeros(f.dim_out) for i in range(order + 1) for j in range(2)
    }
    out[(0, 0)] = f.value(base)

    t_keys = [(i, 0) for i in range(1, order + 1)]
    s_keys: List[Any] = [None] + [(i, 1) for i in range(order + 1)]
    for n in range(order + 1):
        for combo in itertools.combinations_with_replacement(t_keys, n):
            t_degree = sum(key[0] for key in combo)
            if t_degree > order:
                continue
            multiplicity = 1
            for _, group in itertools.groupby(combo):
                multiplicity *= math.factorial(len(list(group)))
            for extra in s_keys:
                keys = combo if extra is None else combo + (extra,)
                degree = t_degree + (0 if extra is None else extra[0])
                if not keys or degree > order:
                    continue
                term = tensors[len(keys)](*(s.coeffs[i][j] for i, j in keys))
                slot = (degree, 0 if extra is None else 1)
                out[slot] = out[slot] + term / multiplicity

    return TruncSeries2(tuple((out[(i, 0)], out[(i, 1)]) for i in range(order + 1)))

def _lift(point: Any, direction: Any, tag: int) -> Any:
    if isinstance(point, (tuple, list)):
        if len(point) != len(direction):
            raise JetError("Point and direction have different structure")
        return tuple(_lift(p, d, tag) for p, d in zip(point, direction))
    if not isinstance(point, Dual):
        point = np.asarray(point, dtype=float) if np.ndim(point) else float(point)
    if not isinstance(direction, Dual):
        direction = np.asarray(direction, dtype=float) if np.ndim(direction) else float(direction)
    return Dual(point, direction, tag)

def _tangent(value: Any, tag: int) -> Any:
    if isinstance(value, (tuple, list)):
        return tuple(_tangent(v, tag) for v in value)
    if isinstance(value, Dual) and value.tag == tag:
        return value.du
    # f did not depend on the perturbation
    return 0.0 * value

def _primal(value: Any, tag: int) -> Any:
    if isinstance(value, (tuple, list)):
        return tuple(_primal(v, tag) for v in value)
    if isinstance(value, Dual) and value.tag == tag:
        return value.re
    return value

def dual_value_and_directional(f: Callable[[Any], Any], point: Any, direction: Any) -> Tuple[Any, Any]:
    """
    f(point) and d/ds f(point + s·direction) at s = 0 from one forward dual pass.

    point and direction may be vectors, scalars or matching tuples of them;
    the result mirrors the structure of f's output. Inputs that are already
    dual (from an enclosing derivative) are supported.

    Raises:
        JetError: If the evaluator rejects the perturbed input
    """
    tag = new_tag()
    lifted = _lift(point, direction, tag)
    try:
        value = f(lifted)
    except (ZeroDivisionError, FloatingPointError, ValueError, np.linalg.LinAlgError) as e:
        raise JetError(f"Evaluator rejected perturbed input: {type(e).__name__}: {e}")
    return _primal(value, tag), _tangent(value, tag)

def dual_directional(f: Callable[[Any], Any], point: Any, direction: Any) -> Any:
    """d/ds f(point + s·direction) at s = 0, by one forward dual pass."""
    return dual_value_and_directional(f, point, direction)[1]

def central_difference(
    f: Callable[[np.ndarray], np.ndarray],
    point: np.ndarray,
    direction: np.ndarray,
    step: float = 1e-5
) -> np.ndarray:
    """Central finite difference, used to cross-check dual_directional."""
    point = np.asarray(point, dtype=float)
    direction = np.asarray(direction, dtype=float)
    return (np.asarray(f(point + step * direction)) - np.asarray(f(point - step * direction))) / (2.0 * step)

def series_to_jet(chart: str, series: TruncSeries1) -> CurveJet:
    return CurveJet.from_coefficients(chart, series.coeffs)

def max_relative_deviation(a: Sequence[np.ndarray], b: Sequence[np.ndarray]) -> float:
    """max|a - b| / max(1, max|b|) over matching coefficient sequences."""
    diff = max(float(np.max(np.abs(np.asarray(u) - np.asarray(v)))) for u, v in zip(a, b))
    scale = max(1.0, max(float(np.max(np.abs(np.asarray(v)))) for v in b))
    return diff / scale
