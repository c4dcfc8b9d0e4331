import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from latcomp.estimator import LateralCompensator
from latcomp.patterns import generate
from latcomp.pipeline import compensate_image, predict_perceived
from latcomp.png_io import quantize


def test_get_set_params_roundtrip():
    est = LateralCompensator(alpha=0.05, sigma_px=4.0)
    params = est.get_params()
    assert params["alpha"] == 0.05
    assert params["sigma_px"] == 4.0
    est.set_params(alpha=0.02)
    assert est.alpha == 0.02


def test_clone_preserves_params():
    est = LateralCompensator(alpha=0.06, beta=0.1, model="barlow-lange")
    cloned = clone(est)
    assert cloned.get_params() == est.get_params()


def test_requires_fit_before_use():
    est = LateralCompensator()
    with pytest.raises(NotFittedError):
        est.transform(np.zeros((16, 16, 3)))
    with pytest.raises(NotFittedError):
        est.predict(np.zeros((16, 16, 3)))


def test_fit_resolves_sigma_from_geometry():
    est = LateralCompensator().fit()
    assert est.sigma_px_ == pytest.approx(20.022)
    assert est.kernel_.radius == 61


def test_fit_validates_params():
    with pytest.raises(ValueError):
        LateralCompensator(alpha=0.3).fit()  # violates the solvability bound
    with pytest.raises(ValueError):
        LateralCompensator(model="barlow-lange").fit()  # beta missing


def test_transform_matches_pipeline():
    est = LateralCompensator(sigma_px=3.0).fit()
    img = generate("stripes", 48, 48)
    assert np.array_equal(est.transform(img), compensate_image(img, est.config_))


def test_predict_matches_pipeline_total():
    est = LateralCompensator(sigma_px=3.0).fit()
    img = generate("step-edge", 48, 32)
    assert np.array_equal(est.predict(img), predict_perceived(img, est.config_).total)


def test_alpha_zero_transform_is_identity():
    est = LateralCompensator(alpha=0.0, sigma_px=3.0).fit()
    img = generate("chevreul", 48, 48)
    out = est.transform(img)
    assert np.max(np.abs(quantize(out, 16).astype(int) - quantize(img, 16).astype(int))) <= 1


def test_fit_transform_via_mixin():
    est = LateralCompensator(sigma_px=3.0)
    img = generate("stripes", 32, 32)
    out = est.fit_transform(img)
    assert out.shape == img.shape
