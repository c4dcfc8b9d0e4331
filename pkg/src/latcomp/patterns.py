"""Deterministic test stimuli for calibration and qualitative checks.

All generators emit encoded-RGB float images in [0, 1], pre-quantized to the
16-bit grid so files round-trip losslessly.  Geometry and gray levels are
documented constants; nothing is randomized.
"""

from __future__ import annotations

import numpy as np

_MIN_DIM = 16


def _check_dims(width: int, height: int):
    if width < _MIN_DIM or height < _MIN_DIM:
        raise ValueError(f"pattern dimensions must be >= {_MIN_DIM}, got {width}x{height}")


def _quantize16(img: np.ndarray) -> np.ndarray:
    return np.round(np.clip(img, 0.0, 1.0) * 65535.0) / 65535.0


def _gray(plane: np.ndarray) -> np.ndarray:
    return np.repeat(plane[..., None], 3, axis=2)


def stripes(width: int = 512, height: int = 512, n_columns: int = 8,
            low: float = 0.15, high: float = 0.85,
            stripe_level: float = 0.5, stripe_frac: float = 0.2) -> np.ndarray:
    """Vertical gray-level columns crossed by one constant mid-gray stripe."""
    _check_dims(width, height)
    levels = np.linspace(low, high, n_columns)
    col_idx = np.minimum(np.arange(width) * n_columns // width, n_columns - 1)
    img = np.tile(levels[col_idx], (height, 1))
    band = int(round(height * stripe_frac / 2))
    mid = height // 2
    img[mid - band : mid + band, :] = stripe_level
    return _quantize16(_gray(img))


def chevreul(width: int = 512, height: int = 512, n_columns: int = 6,
             high: float = 0.7, low: float = 0.2) -> np.ndarray:
    """Descending constant-gray columns (high on the left, low on the right)."""
    _check_dims(width, height)
    levels = np.linspace(high, low, n_columns)
    col_idx = np.minimum(np.arange(width) * n_columns // width, n_columns - 1)
    img = np.tile(levels[col_idx], (height, 1))
    return _quantize16(_gray(img))


def mach_ramp(width: int = 512, height: int = 128,
              low: float = 0.25, high: float = 0.75) -> np.ndarray:
    """Flat low region, linear ramp over the middle third, flat high region."""
    _check_dims(width, height)
    i0 = width // 3
    i1 = 2 * width // 3
    row = np.full(width, low)
    row[i1:] = high
    row[i0:i1] = np.linspace(low, high, i1 - i0)
    return _quantize16(_gray(np.tile(row, (height, 1))))


def sim_contrast(width: int = 512, height: int = 256,
                 dark: float = 0.15, bright: float = 0.85,
                 patch_level: float = 0.5) -> np.ndarray:
    """Two identical gray patches on dark and bright surround halves."""
    _check_dims(width, height)
    img = np.full((height, width), dark)
    img[:, width // 2 :] = bright
    side = min(width // 2, height) // 3
    cy = height // 2
    for cx in (width // 4, 3 * width // 4):
        img[cy - side // 2 : cy - side // 2 + side,
            cx - side // 2 : cx - side // 2 + side] = patch_level
    return _quantize16(_gray(img))


def opponent_edge(width: int = 512, height: int = 256) -> np.ndarray:
    """Saturated blue and yellow half-planes meeting at a vertical edge."""
    _check_dims(width, height)
    img = np.zeros((height, width, 3))
    img[:, : width // 2] = (0.0, 0.0, 1.0)
    img[:, width // 2 :] = (1.0, 1.0, 0.0)
    return _quantize16(img)


def step_edge(width: int = 512, height: int = 128,
              low: float = 0.3, high: float = 0.7) -> np.ndarray:
    """Two-level step with a vertical boundary at width // 2."""
    _check_dims(width, height)
    img = np.full((height, width), low)
    img[:, width // 2 :] = high
    return _quantize16(_gray(img))


PATTERNS = {
    "stripes": stripes,
    "chevreul": chevreul,
    "mach-ramp": mach_ramp,
    "sim-contrast": sim_contrast,
    "opponent-edge": opponent_edge,
    "step-edge": step_edge,
}


def pattern_names() -> list[str]:
    return sorted(PATTERNS)


def generate(name: str, width: int = 512, height: int = 512, **params) -> np.ndarray:
    """Build a named pattern at the requested size."""
    try:
        builder = PATTERNS[name]
    except KeyError:
        raise ValueError(
            f"unknown pattern {name!r}; available: {', '.join(pattern_names())}"
        ) from None
    return builder(width=width, height=height, **params)
