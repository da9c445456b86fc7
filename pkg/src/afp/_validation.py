"""Small input-validation helpers used by the public entry points."""

from __future__ import annotations

import numpy as np

from .errors import RangeError, ShapeError, ValidationError

SYMMETRY_TOL = 1e-12


def as_float_vector(values, name: str) -> np.ndarray:
    """Coerce to a finite 1-d float64 array."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 1:
        raise ShapeError(f"{name} must be 1-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or Inf")
    return arr


def as_float_matrix(values, name: str) -> np.ndarray:
    """Coerce to a finite 2-d float64 array."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name} contains NaN or Inf")
    return arr


def check_square_symmetric(matrix, name: str = "distance matrix") -> np.ndarray:
    """Validate a square symmetric matrix with a (near-)zero diagonal."""
    arr = as_float_matrix(matrix, name)
    n, m = arr.shape
    if n != m:
        raise ShapeError(f"{name} must be square, got shape {arr.shape}")
    if n and np.max(np.abs(arr - arr.T)) > SYMMETRY_TOL:
        raise ShapeError(f"{name} is asymmetric beyond {SYMMETRY_TOL}")
    if n and np.max(np.abs(np.diag(arr))) > SYMMETRY_TOL:
        raise ShapeError(f"{name} has a nonzero diagonal")
    return arr


def check_unit_interval(value: float, name: str) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0) or not np.isfinite(value):
        raise RangeError(f"{name} must lie in [0, 1], got {value}")
    return value
