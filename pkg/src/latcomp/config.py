"""Pipeline configuration: defaults, file schema, validation, resolution.

The file format is JSON with the following keys (all optional, defaults
shown by ``default_config()``)::

    {
      "viewing":    {"distance_in": 30.0, "density_ppi": 94.0},
      "inhibition": {"alpha": 0.037, "sigma_px": null, "beta": null,
                     "normalization": "unit-sum"},
      "weights":    {"l": 1.5, "m": 1.0, "s": 0.25},
      "profile":    {"matrix": [... 9 reals row-major ...], "transfer": "srgb"},
      "detail":     {"enabled": false, "sigma_s": 5.0, "sigma_r": 0.08},
      "solver":     {"tol": 1e-8, "max_iter": 200},
      "color_mode": "chromatically-blind",
      "model":      "hartline-ratliff",
      "meta":       { ... ignored free-form ... }
    }

When ``inhibition.sigma_px`` is absent it is derived from the viewing
geometry at resolution time and echoed back, so outputs are reproducible
without the original config.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .colorspace import CompressionFn, DisplayProfile, Transfer
from .detail import BilateralParams
from .kernel import (
    DiscreteKernel,
    InhibitionParams,
    ViewingGeometry,
    build_kernel,
    sigma_from_geometry,
)
from .model import ExcitationWeights, SolverConfig

CHROMATICALLY_BLIND = "chromatically-blind"
CHANNEL_INDEPENDENT = "channel-independent"
_COLOR_MODES = (CHROMATICALLY_BLIND, CHANNEL_INDEPENDENT)

HARTLINE_RATLIFF = "hartline-ratliff"
BARLOW_LANGE = "barlow-lange"
_MODELS = (HARTLINE_RATLIFF, BARLOW_LANGE)

DEFAULT_ALPHA = 0.037


class ConfigError(ValueError):
    """Invalid or inconsistent configuration."""


@dataclass(frozen=True)
class CompensationConfig:
    """Everything the pipeline needs, cross-validated as a whole."""

    geometry: ViewingGeometry = field(default_factory=ViewingGeometry)
    alpha: float = DEFAULT_ALPHA
    sigma_px: Optional[float] = None
    beta: Optional[float] = None
    normalization: str = "unit-sum"
    weights: ExcitationWeights = field(default_factory=ExcitationWeights)
    profile: DisplayProfile = field(default_factory=DisplayProfile)
    detail_preserve: bool = False
    bilateral: BilateralParams = field(default_factory=BilateralParams)
    solver: SolverConfig = field(default_factory=SolverConfig)
    color_mode: str = CHROMATICALLY_BLIND
    model: str = HARTLINE_RATLIFF

    def __post_init__(self):
        if self.color_mode not in _COLOR_MODES:
            raise ConfigError(
                f"color_mode must be one of {_COLOR_MODES}, got {self.color_mode!r}"
            )
        if self.model not in _MODELS:
            raise ConfigError(f"model must be one of {_MODELS}, got {self.model!r}")
        if self.model == BARLOW_LANGE and self.beta is None:
            raise ConfigError("model 'barlow-lange' requires inhibition.beta")
        # Solvability of the forward model: the coupled iteration contracts
        # only while 2*alpha*(w_l + w_m + w_s) stays below one.
        if 2.0 * self.alpha * self.weights.total >= 1.0:
            raise ConfigError(
                f"2*alpha*(w_l+w_m+w_s) = {2.0 * self.alpha * self.weights.total:.3f} "
                ">= 1: forward model not solvable"
            )

    def resolved_sigma(self) -> float:
        if self.sigma_px is not None:
            return float(self.sigma_px)
        return sigma_from_geometry(self.geometry)

    def inhibition_params(self) -> InhibitionParams:
        return InhibitionParams(
            alpha=self.alpha,
            sigma_px=self.resolved_sigma(),
            beta=self.beta,
            normalization=self.normalization,
        )

    def resolve(self) -> "ResolvedConfig":
        params = self.inhibition_params()
        return ResolvedConfig(
            config=replace(self, sigma_px=params.sigma_px),
            kernel=build_kernel(params),
            compression=CompressionFn.for_profile(self.profile),
        )

    def to_dict(self) -> dict:
        return {
            "viewing": {
                "distance_in": self.geometry.distance_in,
                "density_ppi": self.geometry.density_ppi,
            },
            "inhibition": {
                "alpha": self.alpha,
                "sigma_px": self.sigma_px,
                "beta": self.beta,
                "normalization": self.normalization,
            },
            "weights": {"l": self.weights.w_l, "m": self.weights.w_m, "s": self.weights.w_s},
            "profile": {
                "matrix": [float(v) for v in np.asarray(self.profile.rgb_to_xyz).ravel()],
                "transfer": self.profile.transfer.token,
            },
            "detail": {
                "enabled": self.detail_preserve,
                "sigma_s": self.bilateral.sigma_s,
                "sigma_r": self.bilateral.sigma_r,
            },
            "solver": {"tol": self.solver.tol, "max_iter": self.solver.max_iter},
            "color_mode": self.color_mode,
            "model": self.model,
        }


@dataclass(frozen=True)
class ResolvedConfig:
    """Config with sigma pinned, the kernel built and the compression floored."""

    config: CompensationConfig
    kernel: DiscreteKernel
    compression: CompressionFn

    def echo(self) -> dict:
        """Fully-resolved parameter echo for diagnostics and reproducibility."""
        out = self.config.to_dict()
        out["resolved"] = {
            "sigma_px": self.kernel.sigma_px,
            "kernel_radius_px": self.kernel.radius,
            "compression_floor": self.compression.floor,
        }
        return out


def default_config() -> CompensationConfig:
    return CompensationConfig()


_SECTION_KEYS = {
    "viewing": {"distance_in", "density_ppi"},
    "inhibition": {"alpha", "sigma_px", "beta", "normalization"},
    "weights": {"l", "m", "s"},
    "profile": {"matrix", "transfer"},
    "detail": {"enabled", "sigma_s", "sigma_r"},
    "solver": {"tol", "max_iter"},
}
_TOP_KEYS = set(_SECTION_KEYS) | {"color_mode", "model", "meta"}


def _check_keys(data: dict):
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for section, allowed in _SECTION_KEYS.items():
        if section in data:
            if not isinstance(data[section], dict):
                raise ConfigError(f"config section {section!r} must be an object")
            bad = set(data[section]) - allowed
            if bad:
                raise ConfigError(f"unknown keys in {section!r}: {sorted(bad)}")


def _section(data: dict, name: str) -> dict:
    return data.get(name) or {}


def config_from_dict(data: dict, base: Optional[CompensationConfig] = None) -> CompensationConfig:
    """Build a config from (possibly partial) schema data over a base config."""
    if base is None:
        base = default_config()
    if not isinstance(data, dict):
        raise ConfigError("config root must be a JSON object")
    _check_keys(data)
    try:
        viewing = _section(data, "viewing")
        geometry = ViewingGeometry(
            distance_in=float(viewing.get("distance_in", base.geometry.distance_in)),
            density_ppi=float(viewing.get("density_ppi", base.geometry.density_ppi)),
        )
        inhibition = _section(data, "inhibition")
        sigma_px = inhibition.get("sigma_px", base.sigma_px)
        beta = inhibition.get("beta", base.beta)
        wsec = _section(data, "weights")
        weights = ExcitationWeights(
            w_l=float(wsec.get("l", base.weights.w_l)),
            w_m=float(wsec.get("m", base.weights.w_m)),
            w_s=float(wsec.get("s", base.weights.w_s)),
        )
        psec = _section(data, "profile")
        if "matrix" in psec:
            matrix = np.asarray(psec["matrix"], dtype=np.float64)
            if matrix.size != 9:
                raise ConfigError("profile.matrix must hold 9 reals, row-major")
            matrix = matrix.reshape(3, 3)
        else:
            matrix = base.profile.rgb_to_xyz
        transfer = (
            Transfer.parse(psec["transfer"]) if "transfer" in psec else base.profile.transfer
        )
        dsec = _section(data, "detail")
        ssec = _section(data, "solver")
        cfg = CompensationConfig(
            geometry=geometry,
            alpha=float(inhibition.get("alpha", base.alpha)),
            sigma_px=None if sigma_px is None else float(sigma_px),
            beta=None if beta is None else float(beta),
            normalization=str(inhibition.get("normalization", base.normalization)),
            weights=weights,
            profile=DisplayProfile(rgb_to_xyz=matrix, transfer=transfer),
            detail_preserve=bool(dsec.get("enabled", base.detail_preserve)),
            bilateral=BilateralParams(
                sigma_s=float(dsec.get("sigma_s", base.bilateral.sigma_s)),
                sigma_r=float(dsec.get("sigma_r", base.bilateral.sigma_r)),
            ),
            solver=SolverConfig(
                tol=float(ssec.get("tol", base.solver.tol)),
                max_iter=int(ssec.get("max_iter", base.solver.max_iter)),
            ),
            color_mode=str(data.get("color_mode", base.color_mode)),
            model=str(data.get("model", base.model)),
        )
    except ConfigError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    # Early validation of the derived kernel parameters (alpha/sigma ranges).
    try:
        cfg.inhibition_params()
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    return cfg


def load_config(path: str | Path, base: Optional[CompensationConfig] = None) -> CompensationConfig:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return config_from_dict(data, base)


def save_config(cfg: CompensationConfig, path: str | Path):
    Path(path).write_text(json.dumps(cfg.to_dict(), indent=2) + "\n", encoding="utf-8")
