"""
Data models for points of T^kM and of its tangent bundle in local charts.
All vectors are stored as read-only numpy arrays.
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from tkbundle.utils.validators import ValidationError, as_vector, as_vectors

@dataclass(frozen=True)
class CurveJet:
    """
    Order-k class of curves in a chart.

    xi[i-1] is the normalized Taylor coefficient γ^(i)(0)/i!.
    """

    chart: str
    x: np.ndarray
    xi: Tuple[np.ndarray, ...]

    def __post_init__(self):
        x = as_vector(self.x, name="base point")
        if len(self.xi) < 1:
            raise ValidationError("A jet needs at least one coefficient (k >= 1)")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "xi", as_vectors(self.xi, x.shape[0], "xi"))

    @property
    def order(self) -> int:
        return len(self.xi)

    @property
    def dim(self) -> int:
        return self.x.shape[0]

    def coefficients(self) -> Tuple[np.ndarray, ...]:
        """(x, ξ_1, ..., ξ_k)"""
        return (self.x,) + self.xi

    @classmethod
    def from_coefficients(cls, chart: str, coefficients: Sequence[np.ndarray]) -> 'CurveJet':
        return cls(chart=chart, x=coefficients[0], xi=tuple(coefficients[1:]))

@dataclass(frozen=True)
class OsculatingTangent:
    """Local tangent vector (u; y, η_1..η_k) to T^kM at the jet u."""

    base: CurveJet
    y: np.ndarray
    eta: Tuple[np.ndarray, ...]

    def __post_init__(self):
        dim = self.base.dim
        object.__setattr__(self, "y", as_vector(self.y, dim, "y"))
        if len(self.eta) != self.base.order:
            raise ValidationError(
                f"Tangent has {len(self.eta)} fibre components, base jet has order {self.base.order}"
            )
        object.__setattr__(self, "eta", as_vectors(self.eta, dim, "eta"))

    @property
    def order(self) -> int:
        return self.base.order

    @property
    def chart(self) -> str:
        return self.base.chart

    def components(self) -> Tuple[np.ndarray, ...]:
        """(y, η_1, ..., η_k)"""
        return (self.y,) + self.eta

@dataclass(frozen=True)
class LinearizedVector:
    """Point (x; z_1..z_k) of T^kM in a connection-induced vector bundle chart."""

    chart: str
    x: np.ndarray
    z: Tuple[np.ndarray, ...]

    def __post_init__(self):
        x = as_vector(self.x, name="base point")
        if len(self.z) < 1:
            raise ValidationError("A linearized vector needs at least one fibre slot")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", as_vectors(self.z, x.shape[0], "z"))

    @property
    def order(self) -> int:
        return len(self.z)

    @property
    def dim(self) -> int:
        return self.x.shape[0]

    def fibre(self) -> np.ndarray:
        """Fibre slots concatenated into one vector of length k·dim."""
        return np.concatenate(self.z)
