"""
Validation utilities for coordinate vectors, orders and run settings.
Provides functions to check shapes and parameter ranges before computation.
"""

from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

# Orders above this are rejected everywhere: chain coefficients and nested
# dual recursions are only exercised up to here.
MAX_SUPPORTED_ORDER = 12

KNOWN_FIXTURES = ('flat_poly', 'exp_metric_1d', 'sphere_stereo')

OUTPUT_FORMATS = ('tree', 'table')

class ValidationError(Exception):
    """Raised when validation fails."""
    pass

def as_vector(value: Any, dim: Optional[int] = None, name: str = "vector") -> np.ndarray:
    """
    Convert a value to a read-only 1-D float array.

    Args:
        value: Sequence or array of reals
        dim: Required length, if any
        name: Name used in error messages

    Returns:
        Read-only float array

    Raises:
        ValidationError: If the value is not a finite 1-D vector of length dim
    """
    try:
        arr = np.atleast_1d(np.array(value, dtype=float))
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{name} is not a real vector: {e}")

    if arr.ndim != 1:
        raise ValidationError(f"{name} must be 1-D, got shape {arr.shape}")

    if dim is not None and arr.shape[0] != dim:
        raise ValidationError(f"{name} has length {arr.shape[0]}, expected {dim}")

    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} has non-finite entries")

    arr.setflags(write=False)
    return arr

def as_vectors(values: Iterable[Any], dim: int, name: str = "coefficients") -> Tuple[np.ndarray, ...]:
    """Convert a sequence of vectors, all of length dim."""
    return tuple(as_vector(v, dim, f"{name}[{i}]") for i, v in enumerate(values))

def validate_order(order: int, name: str = "order", maximum: int = MAX_SUPPORTED_ORDER) -> int:
    """
    Check that an order lies in 1..maximum.

    Raises:
        ValidationError: If the order is out of range
    """
    if isinstance(order, bool) or not isinstance(order, (int, np.integer)):
        raise ValidationError(f"{name} must be an integer, got {order!r}")
    if order < 1:
        raise ValidationError(f"{name} must be at least 1, got {order}")
    if order > maximum:
        raise ValidationError(f"{name} {order} exceeds supported maximum {maximum}")
    return int(order)

def validate_run_settings(settings: Dict[str, Any]) -> Tuple[bool, Optional[str]]:
    """
    Validate run settings.

    Args:
        settings: Dictionary of run settings

    Returns:
        Tuple of (is_valid, error_message)
    """
    required_fields = ['fixture', 'order', 'samples', 'seed', 'output_format']

    for field in required_fields:
        if field not in settings:
            return False, f"Missing required field: {field}"

    if settings.get('fixture') not in KNOWN_FIXTURES:
        return False, f"Unknown fixture: {settings.get('fixture')}"

    order = settings.get('order')
    if not isinstance(order, int) or order < 1:
        return False, "Order must be a positive integer"
    if order > MAX_SUPPORTED_ORDER:
        return False, f"Order must not exceed {MAX_SUPPORTED_ORDER}"

    samples = settings.get('samples')
    if not isinstance(samples, int) or samples < 1:
        return False, "Sample count must be a positive integer"

    if not isinstance(settings.get('seed'), int):
        return False, "Seed must be an integer"

    if settings.get('output_format') not in OUTPUT_FORMATS:
        return False, f"Invalid output format: {settings.get('output_format')}"

    for check_id, tol in settings.get('tolerances', {}).items():
        if not isinstance(tol, (int, float)) or tol < 0:
            return False, f"Tolerance for {check_id} must be a non-negative number"

    return True, None

def parse_tolerance_overrides(items: Sequence[str]) -> Dict[str, float]:
    """
    Parse 'check=value' strings into a tolerance dictionary.

    Raises:
        ValidationError: On malformed entries
    """
    overrides: Dict[str, float] = {}
    for item in items:
        if '=' not in item:
            raise ValidationError(f"Tolerance override must look like check=value, got {item!r}")
        check_id, raw = item.split('=', 1)
        try:
            overrides[check_id.strip()] = float(raw)
        except ValueError:
            raise ValidationError(f"Tolerance for {check_id!r} is not a number: {raw!r}")
    return overrides
