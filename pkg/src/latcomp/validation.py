"""Input validation helpers shared by the public entry points."""

from __future__ import annotations

import numpy as np


def as_plane(arr, name: str = "plane") -> np.ndarray:
    """Coerce to a 2D float64 array, rejecting anything else."""
    out = np.asarray(arr, dtype=np.float64)
    if out.ndim != 2 or out.shape[0] < 1 or out.shape[1] < 1:
        raise ValueError(f"{name} must be a 2D array, got shape {out.shape}")
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{name} contains non-finite values")
    return out


def as_image(arr, name: str = "image") -> np.ndarray:
    """Coerce to an (H, W, 3) float64 array, rejecting anything else."""
    out = np.asarray(arr, dtype=np.float64)
    if out.ndim != 3 or out.shape[2] != 3:
        raise ValueError(f"{name} must have shape (H, W, 3), got {out.shape}")
    if out.shape[0] < 1 or out.shape[1] < 1:
        raise ValueError(f"{name} must contain at least one pixel")
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{name} contains non-finite values")
    return out


def check_unit_range(arr: np.ndarray, name: str = "image") -> np.ndarray:
    """Reject samples outside [0, 1]; callers must normalize first."""
    lo = float(arr.min())
    hi = float(arr.max())
    if lo < 0.0 or hi > 1.0:
        raise ValueError(
            f"{name} samples must lie in [0, 1], found range [{lo:.6g}, {hi:.6g}]"
        )
    return arr
