"""Discrete inhibitory kernel and its convolution operator.

The kernel realizes a Gaussian-minus-impulse surround field on the display
pixel grid: applying it to a plane p computes alpha * (G*p - p), where G is
a separable 2D Gaussian sampled as g(i) = exp(-i^2 / sigma^2) and truncated
at a finite radius.  Two normalizations are provided:

* "unit-sum" (default): the truncated 2D Gaussian is rescaled to sum to
  exactly one, so the effective kernel alpha*(G - delta) sums to zero and
  constant regions pass through unchanged.
* "paper-literal": each 1D factor is scaled by 1 / (pi^(1/4) * sqrt(sigma)),
  so the 2D product carries the literal 1/(sqrt(pi)*sigma) prefactor.  The
  2D mass is then about sqrt(pi)*sigma rather than one; flat regions shift
  and the forward model generally fails to contract.  Kept for fidelity
  experiments.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.ndimage import convolve1d

from .validation import as_plane

# Base scale relating viewing geometry to the kernel scale in pixels:
# sigma = KERNEL_BASE_SCALE * density_ppi * distance_in.
KERNEL_BASE_SCALE = 7.1e-3

UNIT_SUM = "unit-sum"
PAPER_LITERAL = "paper-literal"
_NORMALIZATIONS = (UNIT_SUM, PAPER_LITERAL)


@dataclass(frozen=True)
class ViewingGeometry:
    """Viewer distance (inches) and display pixel density (pixels/inch)."""

    distance_in: float = 30.0
    density_ppi: float = 94.0

    def __post_init__(self):
        if not self.density_ppi > 0:
            raise ValueError("density_ppi must be strictly positive")
        if not self.distance_in > 0:
            raise ValueError("distance_in must be strictly positive")
        if not 6.0 <= self.distance_in <= 240.0:
            raise ValueError(
                f"distance_in {self.distance_in} outside sanity range [6, 240] inches"
            )


def sigma_from_geometry(geometry: ViewingGeometry) -> float:
    """Kernel scale in pixels for a given viewing geometry (linear in both)."""
    return KERNEL_BASE_SCALE * geometry.density_ppi * geometry.distance_in


@dataclass(frozen=True)
class InhibitionParams:
    """Compensation level alpha, kernel scale sigma (pixels) and options.

    beta, when present, selects the excitation-dependent nonlinear variant.
    truncation_radius_px defaults to ceil(3 * sigma_px), which covers all but
    a negligible tail of the Gaussian mass.
    """

    alpha: float = 0.037
    sigma_px: float = 20.022
    beta: Optional[float] = None
    normalization: str = UNIT_SUM
    truncation_radius_px: Optional[int] = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 0.5:
            raise ValueError(f"alpha {self.alpha} outside [0, 0.5]")
        if not self.sigma_px > 0:
            raise ValueError("sigma_px must be strictly positive")
        if self.beta is not None and not 0.0 <= self.beta < 1.0:
            raise ValueError(f"beta {self.beta} outside [0, 1)")
        if self.normalization not in _NORMALIZATIONS:
            raise ValueError(
                f"normalization must be one of {_NORMALIZATIONS}, got {self.normalization!r}"
            )

    @property
    def radius(self) -> int:
        if self.truncation_radius_px is not None:
            return int(self.truncation_radius_px)
        return math.ceil(3.0 * self.sigma_px)


@dataclass(frozen=True, eq=False)
class DiscreteKernel:
    """Sampled separable Gaussian profile plus the alpha coupling strength.

    taps holds the full symmetric 1D profile over integer offsets
    [-radius, radius]; the 2D Gaussian is the outer product of taps with
    itself.  The delta term is implicit: applying the kernel means
    alpha * (G*p - p).
    """

    taps: np.ndarray
    radius: int
    alpha: float
    sigma_px: float
    normalization: str

    @property
    def gaussian_sum_2d(self) -> float:
        """Total 2D Gaussian mass (exactly 1 in unit-sum mode)."""
        s = float(self.taps.sum())
        return s * s

    @property
    def effective_sum(self) -> float:
        """Sum of the full effective kernel alpha * (G - delta)."""
        return self.alpha * (self.gaussian_sum_2d - 1.0)


def build_kernel(params: InhibitionParams) -> DiscreteKernel:
    """Sample and normalize the inhibitory kernel for the given parameters."""
    radius = params.radius
    if radius < 1:
        raise ValueError(f"truncation radius must be >= 1, got {radius}")
    offsets = np.arange(-radius, radius + 1, dtype=np.float64)
    taps = np.exp(-(offsets**2) / params.sigma_px**2)
    if params.normalization == UNIT_SUM:
        taps = taps / taps.sum()
    else:
        taps = taps / (math.pi**0.25 * math.sqrt(params.sigma_px))
    taps.setflags(write=False)
    return DiscreteKernel(
        taps=taps,
        radius=radius,
        alpha=params.alpha,
        sigma_px=params.sigma_px,
        normalization=params.normalization,
    )


def gaussian_blur(plane: np.ndarray, kernel: DiscreteKernel) -> np.ndarray:
    """Separable G*p with replicate (clamp-to-edge) boundary extension."""
    blurred = convolve1d(plane, kernel.taps, axis=0, mode="nearest")
    return convolve1d(blurred, kernel.taps, axis=1, mode="nearest")


def apply_inhibition(plane: np.ndarray, kernel: DiscreteKernel) -> np.ndarray:
    """Inhibition term (k * p) = alpha * (G*p - p)."""
    plane = as_plane(plane)
    if kernel.alpha == 0.0:
        return np.zeros_like(plane)
    return kernel.alpha * (gaussian_blur(plane, kernel) - plane)
