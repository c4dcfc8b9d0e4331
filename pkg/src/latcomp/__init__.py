"""latcomp: cancel retinal lateral-inhibition effects in displayed images.

Computes laterally-compensated images whose built-in counter-biases cancel
the Mach bands, halos and simultaneous-contrast effects the retina adds when
an image is viewed on a display, and predicts the perceived appearance of
arbitrary displayed images under the same model.
"""

from .colorspace import (
    ABSORPTION_MATRIX,
    SRGB_MATRIX,
    SRGB_PROFILE,
    CompressionFn,
    DisplayProfile,
    Transfer,
    compress,
    decode_transfer,
    encode_transfer,
    expand,
    lms_to_xyz,
    rgb_to_xyz,
    xyz_to_lms,
    xyz_to_rgb,
)
from .config import (
    BARLOW_LANGE,
    CHANNEL_INDEPENDENT,
    CHROMATICALLY_BLIND,
    HARTLINE_RATLIFF,
    CompensationConfig,
    ConfigError,
    ResolvedConfig,
    config_from_dict,
    default_config,
    load_config,
    save_config,
)
from .detail import BilateralParams, bilateral_base, split_base_detail
from .kernel import (
    KERNEL_BASE_SCALE,
    DiscreteKernel,
    InhibitionParams,
    ViewingGeometry,
    apply_inhibition,
    build_kernel,
    sigma_from_geometry,
)
from .model import (
    DegenerateDenominator,
    ExcitationWeights,
    NoConvergence,
    SolverConfig,
    compensate_achromatic,
    compensate_barlow_lange,
    compensate_color,
    compensate_color_channel_independent,
    perceive_achromatic,
    perceive_barlow_lange,
    perceive_color,
    perceive_color_channel_independent,
    total_excitation,
)
from .patterns import generate, pattern_names
from .pipeline import (
    CompensationReport,
    GamutClipWarning,
    PerceivedImage,
    compensate_image,
    compensate_image_report,
    perceive_scanline,
    predict_perceived,
    render_perceived,
)

__version__ = "0.1.0"


def __getattr__(name):
    # The estimator pulls in scikit-learn, which roughly doubles import
    # time; load it only when actually requested.
    if name == "LateralCompensator":
        from .estimator import LateralCompensator

        return LateralCompensator
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


__all__ = [
    "ABSORPTION_MATRIX",
    "SRGB_MATRIX",
    "SRGB_PROFILE",
    "KERNEL_BASE_SCALE",
    "BARLOW_LANGE",
    "CHANNEL_INDEPENDENT",
    "CHROMATICALLY_BLIND",
    "HARTLINE_RATLIFF",
    "BilateralParams",
    "CompensationConfig",
    "CompensationReport",
    "CompressionFn",
    "ConfigError",
    "DegenerateDenominator",
    "DiscreteKernel",
    "DisplayProfile",
    "ExcitationWeights",
    "GamutClipWarning",
    "InhibitionParams",
    "LateralCompensator",
    "NoConvergence",
    "PerceivedImage",
    "ResolvedConfig",
    "SolverConfig",
    "Transfer",
    "ViewingGeometry",
    "apply_inhibition",
    "bilateral_base",
    "build_kernel",
    "compensate_achromatic",
    "compensate_barlow_lange",
    "compensate_color",
    "compensate_color_channel_independent",
    "compensate_image",
    "compensate_image_report",
    "compress",
    "config_from_dict",
    "decode_transfer",
    "default_config",
    "encode_transfer",
    "expand",
    "generate",
    "lms_to_xyz",
    "load_config",
    "pattern_names",
    "perceive_achromatic",
    "perceive_barlow_lange",
    "perceive_color",
    "perceive_color_channel_independent",
    "perceive_scanline",
    "predict_perceived",
    "render_perceived",
    "rgb_to_xyz",
    "save_config",
    "sigma_from_geometry",
    "split_base_detail",
    "total_excitation",
    "xyz_to_lms",
    "xyz_to_rgb",
]
