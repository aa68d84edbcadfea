"""
Integer partitions, chain-rule coefficients and the order-k chain rule.

The chain rule sums, for every order r <= k, one term per partition of r
(a canonical non-decreasing representative of each multiset):

    (f∘γ)^(r)(0) = Σ_p a^r_p · d^i f(x)[γ^(j_1)(0), ..., γ^(j_i)(0)]

with a^r_p = r! / (j_1!···j_i! · m_1!···m_r!).
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache, reduce
import operator
from typing import TYPE_CHECKING, Any, List, Optional, Sequence, Tuple

from tkbundle.models.jet import CurveJet
from tkbundle.utils.validators import MAX_SUPPORTED_ORDER

if TYPE_CHECKING:
    from tkbundle.core.atlas import SmoothMapOracle

logger = logging.getLogger(__name__)

class FaaError(Exception):
    """Base exception for partition and chain-rule errors."""
    pass

@dataclass(frozen=True)
class PartitionTuple:
    """Non-decreasing tuple of positive integers."""

    parts: Tuple[int, ...]

    def __post_init__(self):
        if not self.parts or any(p < 1 for p in self.parts):
            raise FaaError(f"Partition parts must be positive: {self.parts}")
        if list(self.parts) != sorted(self.parts):
            raise FaaError(f"Partition parts must be non-decreasing: {self.parts}")

    @property
    def k(self) -> int:
        return sum(self.parts)

    @property
    def length(self) -> int:
        return len(self.parts)

    @property
    def multiplicities(self) -> Tuple[int, ...]:
        """(m_1, ..., m_k), m_r = number of parts equal to r."""
        return tuple(self.parts.count(r) for r in range(1, self.k + 1))

def _non_decreasing(n: int, smallest: int):
    if n == 0:
        yield ()
        return
    for first in range(smallest, n + 1):
        for rest in _non_decreasing(n - first, first):
            yield (first,) + rest

@lru_cache(maxsize=None)
def _partition_table(k: int) -> Tuple[PartitionTuple, ...]:
    found = [PartitionTuple(parts) for parts in _non_decreasing(k, 1)]
    found.sort(key=lambda p: (p.length, p.parts))
    return tuple(found)

def enumerate_partitions(k: int) -> List[PartitionTuple]:
    """
    All partitions of k, ordered by number of parts and then lexicographically.

    Raises:
        FaaError: If k < 1
    """
    if k < 1:
        raise FaaError(f"Partitions are enumerated for k >= 1, got {k}")
    return list(_partition_table(k))

def chain_coefficient(p: PartitionTuple) -> int:
    """
    a^k_p = k! / (j_1!···j_i! · m_1!···m_k!), exact.

    Raises:
        FaaError: If k exceeds the supported order
    """
    if p.k > MAX_SUPPORTED_ORDER:
        raise FaaError(f"Chain coefficients are supported up to k = {MAX_SUPPORTED_ORDER}, got {p.k}")
    denominator = 1
    for part in p.parts:
        denominator *= math.factorial(part)
    for m in p.multiplicities:
        denominator *= math.factorial(m)
    return math.factorial(p.k) // denominator

def pushforward_coefficients(
    f: 'SmoothMapOracle',
    x: Any,
    xis: Sequence[Any]
) -> Tuple[Any, ...]:
    """
    Normalized coefficients of f∘γ for γ(t) = x + Σ t^i ξ_i.

    Works on raw (possibly dual) vectors so that the transition can itself be
    differentiated.

    Returns:
        (f(x), ξ̄_1, ..., ξ̄_k)
    """
    k = len(xis)
    if f.max_order is not None and f.max_order < k:
        raise FaaError(f"Map {f.name} supplies tensors to order {f.max_order}, {k} required")

    # γ^(j)(0) = j!·ξ_j
    raw = [math.factorial(j + 1) * xi for j, xi in enumerate(xis)]
    tensors = [f.tensor(i, x) for i in range(1, k + 1)]

    out = [f.value(x)]
    for r in range(1, k + 1):
        terms = [
            chain_coefficient(p) * tensors[p.length - 1](*(raw[j - 1] for j in p.parts))
            for p in enumerate_partitions(r)
        ]
        out.append(reduce(operator.add, terms) / math.factorial(r))
    return tuple(out)

def pushforward_jet(f: 'SmoothMapOracle', j: CurveJet, target_chart: Optional[str] = None) -> CurveJet:
    """
    Transport a jet through f with the explicit order-k chain rule.

    Args:
        f: Map between chart domains with tensors to order j.order
        j: Jet in the source chart
        target_chart: Chart label of the result (default: j.chart)

    Returns:
        Jet of f∘γ

    Raises:
        FaaError: On order or dimension mismatch
    """
    if f.dim_in != j.dim:
        raise FaaError(f"Map {f.name} takes dimension {f.dim_in}, jet has {j.dim}")
    coefficients = pushforward_coefficients(f, j.x, j.xi)
    return CurveJet.from_coefficients(target_chart or j.chart, coefficients)
