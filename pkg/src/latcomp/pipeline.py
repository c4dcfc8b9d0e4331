"""End-to-end pipeline: image in, laterally-compensated image out.

The compensation path is decode -> XYZ -> LMS -> log compression ->
(optional base/detail split) -> compensation -> inverse compression ->
XYZ -> RGB -> clamp -> encode.  The analysis path solves the forward model
instead, predicting the perceived image of whatever is displayed.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np

from . import colorspace as cs
from . import model
from .config import (
    BARLOW_LANGE,
    CHANNEL_INDEPENDENT,
    CHROMATICALLY_BLIND,
    CompensationConfig,
    ResolvedConfig,
)
from .detail import split_base_detail
from .validation import as_image, check_unit_range

ConfigLike = Union[CompensationConfig, ResolvedConfig]

# Fraction of clamped samples above which a gamut warning is emitted.
CLIP_WARN_FRACTION = 0.01
# Slack for float roundoff when deciding whether a sample actually clipped.
_CLIP_EPS = 1e-9


class GamutClipWarning(UserWarning):
    """More than CLIP_WARN_FRACTION of samples were clamped to [0, 1]."""


@dataclass
class CompensationReport:
    """Side-channel diagnostics for one compensation run."""

    resolved: dict
    clip_fraction: np.ndarray  # per-channel fraction of clamped samples
    clip_mask: np.ndarray  # (H, W) bool, any channel clamped

    @property
    def total_clip_fraction(self) -> float:
        return float(self.clip_mask.mean())


class PerceivedImage(NamedTuple):
    """Perceived excitations per cone channel plus their weighted total."""

    lms: np.ndarray
    total: np.ndarray


def _resolve(config: ConfigLike) -> ResolvedConfig:
    if isinstance(config, ResolvedConfig):
        return config
    return config.resolve()


def _decode_to_lms(img: np.ndarray, rc: ResolvedConfig) -> np.ndarray:
    cfg = rc.config
    linear = cs.decode_transfer(img, cfg.profile)
    xyz = cs.rgb_to_xyz(linear, cfg.profile)
    return cs.xyz_to_lms(xyz)


def _to_target_excitation(img: np.ndarray, rc: ResolvedConfig) -> np.ndarray:
    """Decode chain: encoded RGB to per-cone excitation planes."""
    return cs.compress(_decode_to_lms(img, rc), rc.compression)


def _realize(
    lms_in: np.ndarray, e_new: np.ndarray, e_ref: np.ndarray, rc: ResolvedConfig
) -> tuple[np.ndarray, np.ndarray]:
    """Excitation change back to encoded RGB; returns (image, pre-clamp linear).

    The inverse compression is applied as a multiplicative gain on the
    absorbed values, lms * exp(e_new - e_ref) with e_ref = compress(lms).
    At or above the compression floor this equals exp(e_new) exactly; below
    it (essentially-black pixels, where the log model is singular) the gain
    extension keeps zero at zero, so flat fields and zero-strength configs
    pass through untouched instead of being lifted to the floor.
    """
    cfg = rc.config
    lms = lms_in * np.exp(e_new - e_ref)
    xyz = cs.lms_to_xyz(lms)
    linear = cs.xyz_to_rgb(xyz, cfg.profile)
    clamped = np.clip(linear, 0.0, 1.0)
    return cs.encode_transfer(clamped, cfg.profile), linear


def _compensate_excitation(p_lms: np.ndarray, rc: ResolvedConfig) -> np.ndarray:
    """Dispatch on model and color mode in the excitation domain."""
    cfg = rc.config
    beta = cfg.beta if cfg.model == BARLOW_LANGE else None
    if cfg.color_mode == CHROMATICALLY_BLIND:
        return model.compensate_color(p_lms, rc.kernel, cfg.weights, beta=beta)
    return model.compensate_color_channel_independent(p_lms, rc.kernel, beta=beta)


def _perceive_excitation(e_lms: np.ndarray, rc: ResolvedConfig) -> np.ndarray:
    cfg = rc.config
    beta = cfg.beta if cfg.model == BARLOW_LANGE else None
    if cfg.color_mode == CHROMATICALLY_BLIND:
        return model.perceive_color(e_lms, rc.kernel, cfg.weights, cfg.solver, beta=beta)
    return model.perceive_color_channel_independent(e_lms, rc.kernel, cfg.solver, beta=beta)


def compensate_image_report(
    img: np.ndarray, config: ConfigLike
) -> tuple[np.ndarray, CompensationReport]:
    """Compensate an encoded RGB image, returning diagnostics alongside."""
    rc = _resolve(config)
    img = as_image(img)
    check_unit_range(img)

    lms_in = _decode_to_lms(img, rc)
    p_target = cs.compress(lms_in, rc.compression)
    if rc.config.detail_preserve:
        base, detail_layer = split_base_detail(p_target, rc.config.bilateral)
        e_comp = _compensate_excitation(base, rc) + detail_layer
    else:
        e_comp = _compensate_excitation(p_target, rc)

    out, linear = _realize(lms_in, e_comp, p_target, rc)
    clipped = (linear < -_CLIP_EPS) | (linear > 1.0 + _CLIP_EPS)
    report = CompensationReport(
        resolved=rc.echo(),
        clip_fraction=clipped.reshape(-1, 3).mean(axis=0),
        clip_mask=clipped.any(axis=-1),
    )
    if report.total_clip_fraction > CLIP_WARN_FRACTION:
        percents = ", ".join(f"{100 * f:.2f}%" for f in report.clip_fraction)
        warnings.warn(
            f"compensation clamped {100 * report.total_clip_fraction:.2f}% of pixels "
            f"to the display gamut (per channel: {percents})",
            GamutClipWarning,
            stacklevel=2,
        )
    return out, report


def compensate_image(img: np.ndarray, config: ConfigLike) -> np.ndarray:
    """Laterally-compensated image for the given config (same shape as input)."""
    out, _ = compensate_image_report(img, config)
    return out


def predict_perceived(img: np.ndarray, config: ConfigLike) -> PerceivedImage:
    """Forward model: how the displayed image is perceived."""
    rc = _resolve(config)
    img = as_image(img)
    check_unit_range(img)
    e_lms = _to_target_excitation(img, rc)
    p_lms = _perceive_excitation(e_lms, rc)
    return PerceivedImage(lms=p_lms, total=model.total_excitation(p_lms, rc.config.weights))


def perceive_scanline(
    img: np.ndarray,
    row: int,
    col_range: tuple[int, int],
    config: ConfigLike,
    perceived: Optional[PerceivedImage] = None,
) -> np.ndarray:
    """Perceived total-excitation values along one horizontal segment.

    The forward model runs on the whole image; the segment is sampled from
    the resulting total-excitation plane.
    """
    img = as_image(img)
    h, w = img.shape[:2]
    col0, col1 = col_range
    if not (0 <= row < h):
        raise ValueError(f"row {row} out of bounds for height {h}")
    if not (0 <= col0 < col1 <= w):
        raise ValueError(f"column range [{col0}, {col1}) invalid for width {w}")
    if perceived is None:
        perceived = predict_perceived(img, config)
    return perceived.total[row, col0:col1]


def render_perceived(img: np.ndarray, config: ConfigLike) -> np.ndarray:
    """Encoded-RGB rendering of the predicted percept (for visual inspection)."""
    rc = _resolve(config)
    img = as_image(img)
    check_unit_range(img)
    lms_in = _decode_to_lms(img, rc)
    e_lms = cs.compress(lms_in, rc.compression)
    p_lms = _perceive_excitation(e_lms, rc)
    out, _ = _realize(lms_in, p_lms, e_lms, rc)
    return out
