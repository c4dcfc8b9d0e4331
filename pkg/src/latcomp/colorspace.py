"""Pointwise color transformations of the pipeline.

Covers the display transfer decode/encode, linear RGB <-> CIEXYZ through a
display profile, CIEXYZ <-> LMS through the cone absorption matrix, and the
logarithmic photoreceptor compression with its inverse.  All functions are
pure and operate on float64 arrays whose last axis holds the three channels.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .validation import as_image, check_unit_range

# Cone absorption matrix: rows (L, M, S), columns (X, Y, Z).  Unlike a
# colorimetric XYZ->LMS transform it encodes total light absorbed per cone
# class and is not chromaticity-preserving.
ABSORPTION_MATRIX = np.array(
    [
        [63.0, 74.7, 7.5],
        [40.5, 65.7, 12.6],
        [14.0, 4.1, 75.1],
    ]
)
ABSORPTION_MATRIX.setflags(write=False)

_ABSORPTION_INV = np.linalg.inv(ABSORPTION_MATRIX)
_ABSORPTION_INV.setflags(write=False)

# sRGB primaries with D65 white (IEC 61966-2-1), linear RGB -> XYZ.
SRGB_MATRIX = np.array(
    [
        [0.4124564, 0.3575761, 0.1804375],
        [0.2126729, 0.7151522, 0.0721750],
        [0.0193339, 0.1191920, 0.9503041],
    ]
)
SRGB_MATRIX.setflags(write=False)

# Relative floor for the log compression, applied to the largest absorbed
# value the active profile can produce (log is singular at zero).
COMPRESSION_FLOOR_REL = 1e-4


@dataclass(frozen=True)
class Transfer:
    """Display transfer function: "srgb", "gamma" (with exponent) or "linear"."""

    kind: str = "srgb"
    gamma: float = 2.2

    def __post_init__(self):
        if self.kind not in ("srgb", "gamma", "linear"):
            raise ValueError(f"unknown transfer kind {self.kind!r}")
        if self.kind == "gamma" and not self.gamma > 0:
            raise ValueError("gamma exponent must be strictly positive")

    @classmethod
    def parse(cls, token: str) -> "Transfer":
        """Parse a config token: "srgb", "linear" or "gamma:<exponent>"."""
        token = token.strip().lower()
        if token in ("srgb", "linear"):
            return cls(kind=token)
        if token.startswith("gamma:"):
            return cls(kind="gamma", gamma=float(token.split(":", 1)[1]))
        raise ValueError(f"unknown transfer token {token!r}")

    @property
    def token(self) -> str:
        if self.kind == "gamma":
            return f"gamma:{self.gamma:g}"
        return self.kind

    def decode(self, x: np.ndarray) -> np.ndarray:
        """Encoded [0,1] samples to linear light."""
        if self.kind == "linear":
            return np.array(x, dtype=np.float64, copy=True)
        if self.kind == "gamma":
            return np.power(x, self.gamma)
        return np.where(x <= 0.04045, x / 12.92, ((x + 0.055) / 1.055) ** 2.4)

    def encode(self, x: np.ndarray) -> np.ndarray:
        """Linear light to encoded samples; input is clipped to [0,1]."""
        x = np.clip(x, 0.0, 1.0)
        if self.kind == "linear":
            return x
        if self.kind == "gamma":
            return np.power(x, 1.0 / self.gamma)
        return np.where(x <= 0.0031308, 12.92 * x, 1.055 * x ** (1.0 / 2.4) - 0.055)


@dataclass(frozen=True, eq=False)
class DisplayProfile:
    """Distilled display characterization: linear RGB -> XYZ matrix + transfer.

    Stands in for a measured ICC profile; the default is sRGB/D65, the
    universal fallback when no colorimeter data is available.
    """

    rgb_to_xyz: np.ndarray = field(default_factory=lambda: SRGB_MATRIX)
    transfer: Transfer = field(default_factory=Transfer)

    def __eq__(self, other):
        return (
            isinstance(other, DisplayProfile)
            and np.array_equal(self.rgb_to_xyz, other.rgb_to_xyz)
            and self.transfer == other.transfer
        )

    def __post_init__(self):
        m = np.asarray(self.rgb_to_xyz, dtype=np.float64)
        if m.shape != (3, 3):
            raise ValueError(f"rgb_to_xyz must be 3x3, got {m.shape}")
        if abs(np.linalg.det(m)) <= 1e-9:
            raise ValueError("rgb_to_xyz matrix is singular")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "rgb_to_xyz", m)

    @cached_property
    def xyz_to_rgb(self) -> np.ndarray:
        inv = np.linalg.inv(self.rgb_to_xyz)
        inv.setflags(write=False)
        return inv

    @cached_property
    def white_xyz(self) -> np.ndarray:
        """XYZ of display white (RGB all ones); Y is 1 for the sRGB default."""
        return self.rgb_to_xyz @ np.ones(3)


SRGB_PROFILE = DisplayProfile()


@dataclass(frozen=True)
class CompressionFn:
    """Photoreceptor compression e = ln(max(y, floor)) and its inverse.

    The floor keeps the log away from its singularity at zero; values at or
    above the floor round-trip through expand(compress(y)) exactly.
    """

    floor: float
    kind: str = "fechner-weber-log"

    def __post_init__(self):
        if not self.floor > 0:
            raise ValueError("compression floor must be strictly positive")

    @classmethod
    def for_profile(
        cls, profile: DisplayProfile, absorption: np.ndarray = ABSORPTION_MATRIX
    ) -> "CompressionFn":
        """Floor relative to the largest absorbed value the profile can emit."""
        lms_white = np.asarray(absorption) @ profile.white_xyz
        return cls(floor=COMPRESSION_FLOOR_REL * float(np.max(lms_white)))


def _apply_matrix(img: np.ndarray, m: np.ndarray) -> np.ndarray:
    return np.asarray(img, dtype=np.float64) @ m.T


def decode_transfer(img: np.ndarray, profile: DisplayProfile) -> np.ndarray:
    """Encoded RGB in [0,1] to linear RGB; rejects out-of-range samples."""
    img = as_image(img)
    check_unit_range(img, "encoded image")
    return profile.transfer.decode(img)


def encode_transfer(img: np.ndarray, profile: DisplayProfile) -> np.ndarray:
    """Linear RGB to encoded RGB, the inverse of :func:`decode_transfer`."""
    return profile.transfer.encode(as_image(img))


def rgb_to_xyz(img: np.ndarray, profile: DisplayProfile) -> np.ndarray:
    return _apply_matrix(img, profile.rgb_to_xyz)


def xyz_to_rgb(img: np.ndarray, profile: DisplayProfile) -> np.ndarray:
    return _apply_matrix(img, profile.xyz_to_rgb)


def xyz_to_lms(img: np.ndarray, absorption: np.ndarray = ABSORPTION_MATRIX) -> np.ndarray:
    """Light absorbed by the three cone classes; tiny negative XYZ roundoff
    is clamped to zero first (absorbed light is nonnegative)."""
    img = np.maximum(np.asarray(img, dtype=np.float64), 0.0)
    return _apply_matrix(img, np.asarray(absorption))


def lms_to_xyz(img: np.ndarray, absorption: np.ndarray = ABSORPTION_MATRIX) -> np.ndarray:
    absorption = np.asarray(absorption)
    if absorption is ABSORPTION_MATRIX:
        inv = _ABSORPTION_INV
    else:
        inv = np.linalg.inv(absorption)
    return _apply_matrix(img, inv)


def compress(values: np.ndarray, fn: CompressionFn) -> np.ndarray:
    """Absorbed light to graded excitation, e = ln(max(y, floor))."""
    return np.log(np.maximum(np.asarray(values, dtype=np.float64), fn.floor))


def expand(excitation: np.ndarray, fn: CompressionFn) -> np.ndarray:
    """Inverse compression, y = exp(e)."""
    return np.exp(np.asarray(excitation, dtype=np.float64))
