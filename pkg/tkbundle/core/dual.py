"""
Tagged dual numbers for nested forward-mode differentiation.

A Dual carries a real part and a tangent part, each of which may be a float, a
numpy array or another Dual with an older tag. Every directional derivative
creates a fresh tag; operations between Duals of different tags treat the
older one as a constant, so nested derivatives never mix their perturbations.
"""

import itertools
from typing import Any, Optional, Tuple

import numpy as np

_TAGS = itertools.count(1)

def new_tag() -> int:
    """Return a tag newer than every tag handed out so far."""
    return next(_TAGS)

def _top_tag(*values: Any) -> Optional[int]:
    tags = [v.tag for v in values if isinstance(v, Dual)]
    return max(tags) if tags else None

def _parts(value: Any, tag: int) -> Tuple[Any, Any]:
    """Split a value at a tag level; constants have no tangent part (None)."""
    if isinstance(value, Dual) and value.tag == tag:
        return value.re, value.du
    return value, None

class Dual:
    """Dual number re + du·ε_tag over floats, arrays or older Duals."""

    __slots__ = ("re", "du", "tag")

    # Make numpy defer to our reflected operators instead of broadcasting
    __array_ufunc__ = None

    def __init__(self, re: Any, du: Any, tag: int):
        self.re = re
        self.du = du
        self.tag = tag

    def _newer(self, other: Any) -> bool:
        return isinstance(other, Dual) and other.tag > self.tag

    def __add__(self, other: Any) -> 'Dual':
        if self._newer(other):
            return other.__radd__(self)
        ore, odu = _parts(other, self.tag)
        return Dual(self.re + ore, self.du if odu is None else self.du + odu, self.tag)

    def __radd__(self, other: Any) -> 'Dual':
        return Dual(other + self.re, self.du, self.tag)

    def __sub__(self, other: Any) -> 'Dual':
        if self._newer(other):
            return other.__rsub__(self)
        ore, odu = _parts(other, self.tag)
        return Dual(self.re - ore, self.du if odu is None else self.du - odu, self.tag)

    def __rsub__(self, other: Any) -> 'Dual':
        return Dual(other - self.re, -self.du, self.tag)

    def __mul__(self, other: Any) -> 'Dual':
        if self._newer(other):
            return other.__rmul__(self)
        ore, odu = _parts(other, self.tag)
        if odu is None:
            return Dual(self.re * ore, self.du * ore, self.tag)
        return Dual(self.re * ore, self.re * odu + self.du * ore, self.tag)

    def __rmul__(self, other: Any) -> 'Dual':
        return Dual(other * self.re, other * self.du, self.tag)

    def __matmul__(self, other: Any) -> 'Dual':
        if self._newer(other):
            return other.__rmatmul__(self)
        ore, odu = _parts(other, self.tag)
        if odu is None:
            return Dual(self.re @ ore, self.du @ ore, self.tag)
        return Dual(self.re @ ore, self.re @ odu + self.du @ ore, self.tag)

    def __rmatmul__(self, other: Any) -> 'Dual':
        return Dual(other @ self.re, other @ self.du, self.tag)

    def __truediv__(self, other: Any) -> 'Dual':
        if self._newer(other):
            return other.__rtruediv__(self)
        ore, odu = _parts(other, self.tag)
        if odu is None:
            return Dual(self.re / ore, self.du / ore, self.tag)
        quotient = self.re / ore
        return Dual(quotient, (self.du - quotient * odu) / ore, self.tag)

    def __rtruediv__(self, other: Any) -> 'Dual':
        quotient = other / self.re
        return Dual(quotient, -(quotient * self.du) / self.re, self.tag)

    def __pow__(self, exponent: int) -> 'Dual':
        if not isinstance(exponent, (int, np.integer)) or exponent < 0:
            raise TypeError("Dual powers are limited to non-negative integers")
        result = 1.0
        for _ in range(int(exponent)):
            result = self * result
        return result

    def __neg__(self) -> 'Dual':
        return Dual(-self.re, -self.du, self.tag)

    def __pos__(self) -> 'Dual':
        return self

    def __getitem__(self, index: Any) -> 'Dual':
        return Dual(self.re[index], self.du[index], self.tag)

    @property
    def T(self) -> 'Dual':
        return Dual(self.re.T, self.du.T, self.tag)

    def __repr__(self) -> str:
        return f"Dual({self.re!r} + {self.du!r}ε{self.tag})"

def real_part(value: Any) -> Any:
    """Strip every dual layer."""
    while isinstance(value, Dual):
        value = value.re
    return value

def dot(a: Any, b: Any) -> Any:
    """Inner product of two (possibly dual) vectors."""
    tag = _top_tag(a, b)
    if tag is None:
        result = np.dot(a, b)
        # plain float so numpy scalars never sit left of a Dual
        return float(result) if np.ndim(result) == 0 else result
    ar, ad = _parts(a, tag)
    br, bd = _parts(b, tag)
    tangent = None
    if ad is not None:
        tangent = dot(ad, br)
    if bd is not None:
        term = dot(ar, bd)
        tangent = term if tangent is None else tangent + term
    return Dual(dot(ar, br), tangent, tag)

def exp(a: Any) -> Any:
    if isinstance(a, Dual):
        value = exp(a.re)
        return Dual(value, value * a.du, a.tag)
    return np.exp(a)

def sqrt(a: Any) -> Any:
    if isinstance(a, Dual):
        value = sqrt(a.re)
        return Dual(value, a.du / (2.0 * value), a.tag)
    return np.sqrt(a)

def solve(a: Any, b: Any) -> Any:
    """Solve a x = b for (possibly dual) matrix a and vector b."""
    tag = _top_tag(a, b)
    if tag is None:
        return np.linalg.solve(a, b)
    ar, ad = _parts(a, tag)
    br, bd = _parts(b, tag)
    x = solve(ar, br)
    rhs = bd
    if ad is not None:
        correction = ad @ x
        rhs = -correction if rhs is None else rhs - correction
    return Dual(x, solve(ar, rhs), tag)

def stack(items: Any, axis: int = 0) -> Any:
    """np.stack for sequences that may contain Duals."""
    items = list(items)
    tag = _top_tag(*items)
    if tag is None:
        return np.stack([np.asarray(item, dtype=float) for item in items], axis=axis)
    parts = [_parts(item, tag) for item in items]
    re = stack([p[0] for p in parts], axis=axis)
    du = stack([p[1] if p[1] is not None else 0.0 * p[0] for p in parts], axis=axis)
    return Dual(re, du, tag)
