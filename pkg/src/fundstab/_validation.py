"""Input validation helpers used across the package."""

import math
import os

import numpy as np

from .exceptions import DomainError

DEFAULT_TOL = 1e-9
EXPONENT_CAP = 1e6


def resolve_tol(tol=None):
    """Return ``tol``, or the ``SOLVER_TOL`` environment override, or 1e-9."""
    if tol is not None:
        return float(tol)
    raw = os.environ.get("SOLVER_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        value = float(raw)
    except ValueError as exc:
        raise DomainError(f"SOLVER_TOL must be a number, got {raw!r}") from exc
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"SOLVER_TOL must be finite and non-negative, got {raw!r}")
    return value


def check_exponent(value, name, cap=EXPONENT_CAP):
    value = float(value)
    if not math.isfinite(value):
        raise DomainError(f"{name} must be finite, got {value}")
    if value < 0:
        raise DomainError(f"{name} must be non-negative, got {value}")
    if value > cap:
        raise DomainError(f"{name}={value} exceeds the exponent cap {cap:g}")
    return value


def check_fraction(x, name="x"):
    """Validate a position (or array of positions) on the unit interval.

    Scalars come back as ``float``; anything array-like as a float ndarray.
    """
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"{name} must be finite")
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError(f"{name} must lie in [0, 1]")
    if arr.ndim == 0:
        return float(arr)
    return arr


def check_share(value, name):
    value = float(value)
    if not math.isfinite(value) or value < 0.0 or value > 1.0:
        raise DomainError(f"{name} must lie in [0, 1], got {value}")
    return value
