"""Scikit-learn style front door for the compensation pipeline.

``LateralCompensator`` follows the estimator protocol (constructor stores
parameters verbatim, ``fit`` validates and resolves them, ``get_params`` /
``set_params`` work with ``sklearn.clone``), so the filter drops into
sklearn pipelines operating on images.
"""

from __future__ import annotations

from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .colorspace import DisplayProfile
from .config import CompensationConfig
from .detail import BilateralParams
from .kernel import ViewingGeometry
from .model import ExcitationWeights, SolverConfig
from .pipeline import compensate_image, predict_perceived


class LateralCompensator(TransformerMixin, BaseEstimator):
    """Compensate retinal lateral-inhibition effects in displayed images.

    ``transform`` maps an encoded RGB image in [0, 1] to its
    laterally-compensated counterpart; ``predict`` returns the perceived
    total-excitation plane of an image under the same model.  There is
    nothing to learn from data: ``fit`` resolves and validates the
    parameters (deriving the kernel scale from the viewing geometry when
    ``sigma_px`` is None) and is required before either method.

    Parameters mirror the pipeline configuration; see the config module for
    the file-level schema.
    """

    def __init__(
        self,
        alpha: float = 0.037,
        sigma_px: Optional[float] = None,
        distance_in: float = 30.0,
        density_ppi: float = 94.0,
        beta: Optional[float] = None,
        normalization: str = "unit-sum",
        weights: tuple[float, float, float] = (1.5, 1.0, 0.25),
        profile: Optional[DisplayProfile] = None,
        detail_preserve: bool = False,
        sigma_s: float = 5.0,
        sigma_r: float = 0.08,
        tol: float = 1e-8,
        max_iter: int = 200,
        color_mode: str = "chromatically-blind",
        model: str = "hartline-ratliff",
    ):
        self.alpha = alpha
        self.sigma_px = sigma_px
        self.distance_in = distance_in
        self.density_ppi = density_ppi
        self.beta = beta
        self.normalization = normalization
        self.weights = weights
        self.profile = profile
        self.detail_preserve = detail_preserve
        self.sigma_s = sigma_s
        self.sigma_r = sigma_r
        self.tol = tol
        self.max_iter = max_iter
        self.color_mode = color_mode
        self.model = model

    def _build_config(self) -> CompensationConfig:
        w_l, w_m, w_s = self.weights
        return CompensationConfig(
            geometry=ViewingGeometry(
                distance_in=self.distance_in, density_ppi=self.density_ppi
            ),
            alpha=self.alpha,
            sigma_px=self.sigma_px,
            beta=self.beta,
            normalization=self.normalization,
            weights=ExcitationWeights(w_l=w_l, w_m=w_m, w_s=w_s),
            profile=self.profile if self.profile is not None else DisplayProfile(),
            detail_preserve=self.detail_preserve,
            bilateral=BilateralParams(sigma_s=self.sigma_s, sigma_r=self.sigma_r),
            solver=SolverConfig(tol=self.tol, max_iter=self.max_iter),
            color_mode=self.color_mode,
            model=self.model,
        )

    def fit(self, X=None, y=None):
        """Validate parameters and resolve the kernel; X and y are ignored."""
        resolved = self._build_config().resolve()
        self.config_ = resolved.config
        self.resolved_ = resolved
        self.sigma_px_ = resolved.kernel.sigma_px
        self.kernel_ = resolved.kernel
        return self

    def _check_fitted(self):
        if not hasattr(self, "resolved_"):
            raise NotFittedError(
                "this LateralCompensator is not fitted yet; call fit() first"
            )

    def transform(self, X: np.ndarray) -> np.ndarray:
        """Laterally-compensated image for an (H, W, 3) input in [0, 1]."""
        self._check_fitted()
        return compensate_image(X, self.resolved_)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Perceived total-excitation plane (H, W) of the displayed image."""
        self._check_fitted()
        return predict_perceived(X, self.resolved_).total
