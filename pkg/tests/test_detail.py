import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latcomp.detail import BilateralParams, bilateral_base, split_base_detail

from oracles import brute_bilateral, brute_spatial_blur_inbounds


class TestBilateralBase:
    def test_defaults(self):
        params = BilateralParams()
        assert params.sigma_s == 5.0
        assert params.sigma_r == 0.08
        assert params.radius == 15

    def test_constant_plane_unchanged(self):
        plane = np.full((20, 20), 0.37)
        assert np.array_equal(bilateral_base(plane), plane)

    def test_matches_brute_force_oracle(self):
        rng = np.random.default_rng(21)
        plane = rng.random((16, 16))
        params = BilateralParams()
        got = bilateral_base(plane, params)
        sigma_abs = params.sigma_r * (plane.max() - plane.min())
        want = brute_bilateral(plane, params.sigma_s, sigma_abs, params.radius)
        assert np.max(np.abs(got - want)) < 1e-9

    def test_matches_brute_force_small_sigma(self):
        rng = np.random.default_rng(22)
        plane = rng.random((16, 16)) * 4.0 - 1.0
        params = BilateralParams(sigma_s=1.5, sigma_r=0.2)
        got = bilateral_base(plane, params)
        sigma_abs = params.sigma_r * (plane.max() - plane.min())
        want = brute_bilateral(plane, params.sigma_s, sigma_abs, params.radius)
        assert np.max(np.abs(got - want)) < 1e-9

    def test_huge_range_sigma_approaches_plain_blur(self):
        # Range weights deviate from 1 by at most span^2 / (2 sigma_r^2), so
        # the gap to a plain blur shrinks quadratically in sigma_r.
        rng = np.random.default_rng(23)
        plane = rng.random((16, 16))
        for sigma_r, bound in ((100.0, 1e-5), (1e4, 1e-6)):
            params = BilateralParams(sigma_s=2.0, sigma_r=sigma_r)
            got = bilateral_base(plane, params)
            want = brute_spatial_blur_inbounds(plane, params.sigma_s, params.radius)
            assert np.max(np.abs(got - want)) < bound

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=15, deadline=None)
    def test_conservative_output_range(self, seed):
        rng = np.random.default_rng(seed)
        plane = rng.uniform(-2, 2, size=(12, 12))
        out = bilateral_base(plane, BilateralParams(sigma_s=2.0, sigma_r=0.1))
        assert out.min() >= plane.min() - 1e-12
        assert out.max() <= plane.max() + 1e-12

    def test_invalid_params_rejected(self):
        with pytest.raises(ValueError):
            BilateralParams(sigma_s=0.0)
        with pytest.raises(ValueError):
            BilateralParams(sigma_r=-1.0)


class TestSplitBaseDetail:
    def test_constant_image_has_zero_detail(self):
        img = np.full((18, 18, 3), 0.6)
        base, detail_layer = split_base_detail(img)
        assert np.array_equal(base, img)
        assert np.array_equal(detail_layer, np.zeros_like(img))

    def test_reconstruction_identity(self):
        rng = np.random.default_rng(24)
        img = rng.random((16, 16, 3))
        base, detail_layer = split_base_detail(img, BilateralParams(sigma_s=2.0))
        assert np.array_equal(base + detail_layer, img)

    def test_edge_stays_in_base_texture_goes_to_detail(self):
        # Step edge plus fine checkerboard texture: the edge magnitude must
        # survive in the base while most texture energy lands in detail.
        h, w = 24, 48
        rng = np.random.default_rng(25)
        edge = np.zeros((h, w))
        edge[:, w // 2 :] = 1.0
        texture = 0.02 * (-1.0) ** (np.add.outer(np.arange(h), np.arange(w)))
        plane = edge + texture
        params = BilateralParams(sigma_s=2.0, sigma_r=0.08)
        base = bilateral_base(plane, params)
        detail_layer = plane - base

        # Cross-check the split against the brute-force oracle.
        sigma_abs = params.sigma_r * (plane.max() - plane.min())
        want = brute_bilateral(plane, params.sigma_s, sigma_abs, params.radius)
        assert np.max(np.abs(base - want)) < 1e-9

        edge_in = plane[:, w // 2 + 2].mean() - plane[:, w // 2 - 3].mean()
        edge_base = base[:, w // 2 + 2].mean() - base[:, w // 2 - 3].mean()
        assert edge_base >= 0.9 * edge_in
        interior = (slice(4, -4), slice(4, w // 2 - 4))
        texture_energy = np.var(texture[interior])
        detail_energy = np.var(detail_layer[interior])
        base_energy = np.var(base[interior] - base[interior].mean())
        assert detail_energy > 0.5 * texture_energy
        assert detail_energy > base_energy
