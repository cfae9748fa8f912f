"""Input checks shared by the estimators."""

import numpy as np

from .exceptions import InsufficientSampleError


def check_series(x, name="x", min_length=1, allow_nan=False):
    """Return ``x`` as a contiguous 1-d float64 array after validation."""
    arr = np.ascontiguousarray(np.asarray(x, dtype=np.float64))
    if arr.ndim == 2 and 1 in arr.shape:
        arr = arr.ravel()
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if not allow_nan and not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    if arr.shape[0] < min_length:
        raise InsufficientSampleError(
            f"{name} has {arr.shape[0]} observations, need at least {min_length}"
        )
    return arr


def check_pair(x, y, min_length=1, names=("x", "y")):
    x = check_series(x, names[0], min_length)
    y = check_series(y, names[1], min_length)
    if x.shape[0] != y.shape[0]:
        raise ValueError(
            f"{names[0]} and {names[1]} differ in length ({x.shape[0]} != {y.shape[0]})"
        )
    return x, y


def check_matrix(X, n_columns=None, min_rows=1, name="X"):
    """Validate a 2-d float array (rows are time points)."""
    arr = np.ascontiguousarray(np.asarray(X, dtype=np.float64))
    if arr.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if n_columns is not None and arr.shape[1] != n_columns:
        raise ValueError(f"{name} must have {n_columns} columns, got {arr.shape[1]}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or infinite values")
    if arr.shape[0] < min_rows:
        raise InsufficientSampleError(
            f"{name} has {arr.shape[0]} rows, need at least {min_rows}"
        )
    return arr


def check_positive(value, name):
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")
    return value


def check_nonneg_int(value, name):
    if int(value) != value or value < 0:
        raise ValueError(f"{name} must be a nonnegative integer, got {value!r}")
    return int(value)
