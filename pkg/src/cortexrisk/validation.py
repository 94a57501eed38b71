"""Shared input-validation helpers.

Every scoring path funnels range and shape checks through these functions so
that error messages stay uniform across the library, CLI, and service.
"""

from __future__ import annotations

from typing import Iterable

import numpy as np

#: Absolute tolerance on the weight-simplex sum. Inputs outside this are
#: rejected, never renormalized: silent renormalization hides config bugs.
WEIGHT_SUM_TOLERANCE = 1e-9


class PackError(ValueError):
    """A data pack could not be parsed or failed validation at load time."""


def check_unit_interval(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or not (0.0 <= value <= 1.0):
        raise ValueError(f"{name} must be in [0, 1], got {value!r}")
    return value


def check_score_scale(value: int, name: str) -> int:
    """Validate a 0-5 likelihood/impact score."""
    if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
        raise ValueError(f"{name} must be an integer in 0..5, got {value!r}")
    if not (0 <= int(value) <= 5):
        raise ValueError(f"{name} must be in 0..5, got {value}")
    return int(value)


def check_positive(value: float, name: str) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be > 0, got {value!r}")
    return value


def check_weight_sum(values: Iterable[float]) -> None:
    values = [float(v) for v in values]
    for v in values:
        if not np.isfinite(v) or v < 0.0:
            raise ValueError(f"weights must be non-negative, got {v!r}")
    total = sum(values)
    if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
        raise ValueError(
            f"weights must sum to 1 within {WEIGHT_SUM_TOLERANCE} "
            f"(simplex constraint), got sum {total!r}"
        )


def check_li_matrix(X) -> np.ndarray:
    """Validate an (n, 2) array of likelihood/impact pairs for the estimators."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError(
            f"expected an (n, 2) array of (likelihood, impact) rows, got shape {arr.shape}"
        )
    if not np.isfinite(arr).all():
        raise ValueError("likelihood/impact values must be finite")
    if (arr < 0).any() or (arr > 5).any():
        raise ValueError("likelihood/impact values must lie in [0, 5]")
    return arr
