"""Perception model core: forward prediction and lateral compensation.

The forward model is the linear fixed point p = e - (k * p): excitation e
minus the inhibition gathered from the perceived surround.  Compensation
inverts it in closed form, e' = p' + (k * p'), so that displaying e' yields
the target percept p'.

Color images couple through a single chromatically-blind inhibition term
driven by the total excitation (a weighted sum of the three cone channels);
a channel-independent variant is provided for comparison.  The nonlinear
variant scales the inhibition by (1 - beta * e), which stays linear in p
because the mask depends only on the fixed stimulus.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .kernel import DiscreteKernel, apply_inhibition
from .validation import as_image, as_plane


class NoConvergence(RuntimeError):
    """Fixed-point iteration failed to reach tolerance within max_iter."""

    def __init__(self, iterations: int, residual: float, tol: float):
        self.iterations = iterations
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"no convergence after {iterations} iterations: "
            f"residual {residual:.3e} >= tol {tol:.3e}"
        )


class DegenerateDenominator(ValueError):
    """The nonlinear closed form hit a denominator too close to zero."""


@dataclass(frozen=True)
class SolverConfig:
    """Fixed-point stopping rule: max-norm iterate delta below tol."""

    tol: float = 1e-8
    max_iter: int = 200

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be strictly positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


@dataclass(frozen=True)
class ExcitationWeights:
    """Cone population weights for the total excitation, 1.5 L + M + S / 4."""

    w_l: float = 1.5
    w_m: float = 1.0
    w_s: float = 0.25

    def __post_init__(self):
        for name in ("w_l", "w_m", "w_s"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")

    @property
    def total(self) -> float:
        return self.w_l + self.w_m + self.w_s

    def as_array(self) -> np.ndarray:
        return np.array([self.w_l, self.w_m, self.w_s])


DEFAULT_WEIGHTS = ExcitationWeights()


def total_excitation(lms: np.ndarray, weights: ExcitationWeights = DEFAULT_WEIGHTS) -> np.ndarray:
    """Pointwise weighted sum of the three excitation channels."""
    lms = as_image(lms, "lms")
    return lms @ weights.as_array()


def _iterate(e, step, cfg: SolverConfig, full_output: bool):
    """Run p <- step(p) from p0 = e until the max-norm delta drops below tol."""
    p = e
    for iteration in range(1, cfg.max_iter + 1):
        p_next = step(p)
        delta = float(np.max(np.abs(p_next - p)))
        p = p_next
        if delta < cfg.tol:
            if full_output:
                return p, {"iterations": iteration, "delta": delta}
            return p
    raise NoConvergence(cfg.max_iter, delta, cfg.tol)


def perceive_achromatic(
    e: np.ndarray,
    kernel: DiscreteKernel,
    cfg: SolverConfig = SolverConfig(),
    full_output: bool = False,
):
    """Solve p = e - (k * p) for a single excitation plane.

    The iteration p(t+1) = e - (k * p(t)) contracts with factor 2*alpha in
    unit-sum mode; the returned plane satisfies
    max|p - (e - k*p)| < tol * (1 + 2*alpha).
    """
    e = as_plane(e, "excitation")
    return _iterate(e, lambda p: e - apply_inhibition(p, kernel), cfg, full_output)


def perceive_barlow_lange(
    e: np.ndarray,
    kernel: DiscreteKernel,
    beta: float,
    cfg: SolverConfig = SolverConfig(),
    full_output: bool = False,
):
    """Forward model with excitation-dependent inhibition.

    p = e - (1 - beta*e) * (k * p).  The mask (1 - beta*e) is fixed by the
    stimulus, so each iteration stays linear in p.
    """
    e = as_plane(e, "excitation")
    mask = 1.0 - beta * e
    return _iterate(e, lambda p: e - mask * apply_inhibition(p, kernel), cfg, full_output)


def perceive_color(
    e_lms: np.ndarray,
    kernel: DiscreteKernel,
    weights: ExcitationWeights = DEFAULT_WEIGHTS,
    cfg: SolverConfig = SolverConfig(),
    beta: Optional[float] = None,
    full_output: bool = False,
):
    """Joint fixed point p_c = e_c - (k * total(p)) over the three channels.

    The shared inhibition term makes the coupling chromatically blind.  With
    beta set, the term is additionally scaled per channel by (1 - beta*e_c).
    """
    e_lms = as_image(e_lms, "excitation")
    mask = None if beta is None else 1.0 - beta * e_lms
    w = weights.as_array()

    def step(p):
        shared = apply_inhibition(p @ w, kernel)[..., None]
        if mask is None:
            return e_lms - shared
        return e_lms - mask * shared

    return _iterate(e_lms, step, cfg, full_output)


def compensate_achromatic(p_target: np.ndarray, kernel: DiscreteKernel) -> np.ndarray:
    """Stimulus that is perceived as p_target: e' = p' + (k * p')."""
    p_target = as_plane(p_target, "target")
    return p_target + apply_inhibition(p_target, kernel)


def _guard_denominator(beta: float, inhibition: np.ndarray) -> np.ndarray:
    scaled = beta * inhibition
    worst = float(np.max(np.abs(scaled)))
    if worst >= 0.5:
        raise DegenerateDenominator(
            f"|beta * (k*p')| reaches {worst:.3f} >= 0.5; "
            "beta is too large for this image"
        )
    return 1.0 + scaled


def compensate_barlow_lange(
    p_target: np.ndarray, kernel: DiscreteKernel, beta: float
) -> np.ndarray:
    """Closed-form inverse of the nonlinear forward model.

    From p' = e - (1 - beta*e) * (k * p') solve for e:
    e' = (p' + k*p') / (1 + beta * (k*p')).  At beta = 0 this reduces to the
    linear compensation exactly.
    """
    p_target = as_plane(p_target, "target")
    inhibition = apply_inhibition(p_target, kernel)
    denom = _guard_denominator(beta, inhibition)
    return (p_target + inhibition) / denom


def compensate_color(
    p_lms: np.ndarray,
    kernel: DiscreteKernel,
    weights: ExcitationWeights = DEFAULT_WEIGHTS,
    beta: Optional[float] = None,
) -> np.ndarray:
    """Chromatically-blind compensation: one shared inhibition term.

    s = k * total(p') is computed once and added to every channel, so
    per-pixel channel differences are preserved and no hue shifts appear.
    """
    p_lms = as_image(p_lms, "target")
    shared = apply_inhibition(total_excitation(p_lms, weights), kernel)[..., None]
    if beta is None:
        return p_lms + shared
    denom = _guard_denominator(beta, shared)
    return (p_lms + shared) / denom


def compensate_color_channel_independent(
    p_lms: np.ndarray, kernel: DiscreteKernel, beta: Optional[float] = None
) -> np.ndarray:
    """Per-channel compensation (no cross-channel coupling).

    Reproduces the chromatic halos that the blind scheme avoids; kept for
    comparison.
    """
    p_lms = as_image(p_lms, "target")
    channels = []
    for c in range(3):
        if beta is None:
            channels.append(compensate_achromatic(p_lms[..., c], kernel))
        else:
            channels.append(compensate_barlow_lange(p_lms[..., c], kernel, beta))
    return np.stack(channels, axis=-1)


def perceive_color_channel_independent(
    e_lms: np.ndarray,
    kernel: DiscreteKernel,
    cfg: SolverConfig = SolverConfig(),
    beta: Optional[float] = None,
) -> np.ndarray:
    """Forward model with per-channel (decoupled) inhibition."""
    e_lms = as_image(e_lms, "excitation")
    channels = []
    for c in range(3):
        if beta is None:
            channels.append(perceive_achromatic(e_lms[..., c], kernel, cfg))
        else:
            channels.append(perceive_barlow_lange(e_lms[..., c], kernel, beta, cfg))
    return np.stack(channels, axis=-1)
