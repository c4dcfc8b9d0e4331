import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from latcomp.kernel import InhibitionParams, build_kernel
from latcomp.model import (
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

from oracles import (
    inhibition_matrix,
    solve_perceive_color_dense,
    solve_perceive_dense,
    solve_perceive_masked_dense,
)

SIGMA = 2.0
ALPHA = 0.1
PARAMS = InhibitionParams(alpha=ALPHA, sigma_px=SIGMA)
KERNEL = build_kernel(PARAMS)
CFG = SolverConfig(tol=1e-10, max_iter=300)
WEIGHTS = ExcitationWeights()


def k_matrix(h, w, alpha=ALPHA):
    return inhibition_matrix(h, w, SIGMA, PARAMS.radius, alpha)


class TestTotalExcitation:
    def test_zero(self):
        assert total_excitation(np.zeros((4, 4, 3)))[2, 2] == 0.0

    def test_unit_channels(self):
        out = total_excitation(np.ones((4, 4, 3)))
        assert np.allclose(out, 1.5 + 1.0 + 0.25)
        assert out[0, 0] == pytest.approx(2.75)

    def test_weighted_sum(self):
        lms = np.zeros((2, 2, 3))
        lms[..., 0] = 2.0
        lms[..., 2] = 4.0
        assert total_excitation(lms)[0, 0] == pytest.approx(1.5 * 2.0 + 0.25 * 4.0)

    def test_default_weights(self):
        w = ExcitationWeights()
        assert (w.w_l, w.w_m, w.w_s) == (1.5, 1.0, 0.25)


class TestPerceiveAchromatic:
    def test_constant_input_passes_through(self):
        e = np.full((16, 16), 3.7)
        p = perceive_achromatic(e, KERNEL, CFG)
        assert np.max(np.abs(p - e)) < 1e-9

    def test_alpha_zero_identity(self):
        k0 = build_kernel(InhibitionParams(alpha=0.0, sigma_px=SIGMA))
        rng = np.random.default_rng(0)
        e = rng.random((12, 12))
        assert np.array_equal(perceive_achromatic(e, k0, CFG), e)

    def test_matches_dense_solve(self):
        rng = np.random.default_rng(1)
        e = rng.uniform(-2, 2, size=(16, 16))
        got = perceive_achromatic(e, KERNEL, CFG)
        want = solve_perceive_dense(e, k_matrix(16, 16))
        assert np.max(np.abs(got - want)) < 1e-6

    def test_residual_contract(self):
        rng = np.random.default_rng(2)
        e = rng.uniform(-1, 1, size=(16, 16))
        cfg = SolverConfig(tol=1e-8, max_iter=200)
        from latcomp.kernel import apply_inhibition

        p = perceive_achromatic(e, KERNEL, cfg)
        residual = np.max(np.abs(p - (e - apply_inhibition(p, KERNEL))))
        assert residual < cfg.tol * (1 + 2 * ALPHA)

    def test_iteration_count_bound(self):
        rng = np.random.default_rng(3)
        e = rng.uniform(-1, 1, size=(16, 16))
        cfg = SolverConfig(tol=1e-8, max_iter=200)
        p, info = perceive_achromatic(e, KERNEL, cfg, full_output=True)
        # First delta is bounded by 2a*||e||_inf; each iteration contracts
        # the delta by at least 2a.
        factor = 2 * ALPHA
        rho0 = factor * np.max(np.abs(e))
        bound = int(np.ceil(np.log(cfg.tol / rho0) / np.log(factor))) + 1
        assert info["iterations"] <= bound

    def test_mach_band_sign_property(self):
        # Monotone ramp between flats: perceived dips below the input just
        # before the ramp foot and overshoots just after the shoulder.
        width = 64
        e = np.full((8, width), 1.0)
        i0, i1 = 24, 40
        e[:, i1:] = 2.0
        e[:, i0:i1] = np.linspace(1.0, 2.0, i1 - i0)
        p = perceive_achromatic(e, KERNEL, CFG)
        diff = (p - e)[4]
        assert diff[i0 - 1] < 0  # dark band at the foot
        assert diff[i1] > 0  # bright band past the shoulder

    def test_no_convergence_raises(self):
        # Paper-literal normalization is not a contraction at this scale.
        bad = build_kernel(
            InhibitionParams(alpha=0.2, sigma_px=8.0, normalization="paper-literal")
        )
        rng = np.random.default_rng(4)
        with pytest.raises(NoConvergence, match="residual"):
            perceive_achromatic(rng.random((16, 16)), bad, SolverConfig(1e-8, 50))


class TestCompensateAchromatic:
    def test_constant_unchanged(self):
        p = np.full((16, 16), 0.8)
        out = compensate_achromatic(p, KERNEL)
        assert np.max(np.abs(out - p)) < 1e-10

    def test_alpha_zero_identity(self):
        k0 = build_kernel(InhibitionParams(alpha=0.0, sigma_px=SIGMA))
        rng = np.random.default_rng(5)
        p = rng.random((12, 12))
        assert np.array_equal(compensate_achromatic(p, k0), p)

    def test_step_edge_counter_halo_signs(self):
        # e' - p' = k*p' is positive on the dark side near the edge and
        # negative on the bright side, the counter-halo that cancels the
        # perceived halo pair.
        width = 64
        p = np.full((8, width), 1.0)
        p[:, width // 2 :] = 2.0
        out = compensate_achromatic(p, KERNEL)
        diff = (out - p)[4]
        edge = width // 2
        assert diff[edge - 1] > 0  # rises above the dark flat
        assert diff[edge] < 0  # dips below the bright flat
        # Amplitude check against direct evaluation of p' + k*p'.
        from oracles import brute_inhibition

        want = p + brute_inhibition(p, SIGMA, PARAMS.radius, ALPHA)
        assert np.max(np.abs(out - want)) < 1e-10

    @given(st.integers(min_value=0, max_value=2**32 - 1))
    @settings(max_examples=15, deadline=None)
    def test_linearity(self, seed):
        rng = np.random.default_rng(seed)
        p = rng.random((10, 10))
        q = rng.random((10, 10))
        a, b = rng.uniform(-2, 2, size=2)
        lhs = compensate_achromatic(a * p + b * q, KERNEL)
        rhs = a * compensate_achromatic(p, KERNEL) + b * compensate_achromatic(q, KERNEL)
        assert np.max(np.abs(lhs - rhs)) < 1e-9

    def test_inverse_pair(self):
        rng = np.random.default_rng(6)
        p_target = rng.uniform(-1, 3, size=(24, 24))
        e = compensate_achromatic(p_target, KERNEL)
        p = perceive_achromatic(e, KERNEL, CFG)
        assert np.max(np.abs(p - p_target)) < 10 * CFG.tol


class TestColor:
    def test_constant_total_excitation_unchanged(self):
        # Any image whose total excitation is constant passes through.
        rng = np.random.default_rng(7)
        l_chan = rng.random((12, 12))
        m_chan = rng.random((12, 12))
        s_chan = (5.0 - 1.5 * l_chan - 1.0 * m_chan) / 0.25
        lms = np.stack([l_chan, m_chan, s_chan], axis=-1)
        out = compensate_color(lms, KERNEL, WEIGHTS)
        assert np.max(np.abs(out - lms)) < 1e-9

    def test_alpha_zero_identity(self):
        k0 = build_kernel(InhibitionParams(alpha=0.0, sigma_px=SIGMA))
        rng = np.random.default_rng(8)
        lms = rng.random((10, 10, 3))
        assert np.array_equal(compensate_color(lms, k0, WEIGHTS), lms)

    def test_channel_differences_preserved(self):
        rng = np.random.default_rng(9)
        lms = rng.uniform(-1, 2, size=(20, 20, 3))
        out = compensate_color(lms, KERNEL, WEIGHTS)
        for a, b in ((0, 1), (0, 2), (1, 2)):
            before = lms[..., a] - lms[..., b]
            after = out[..., a] - out[..., b]
            assert np.max(np.abs(after - before)) < 1e-12

    def test_channel_independent_constant_channel_untouched(self):
        rng = np.random.default_rng(10)
        lms = np.empty((16, 16, 3))
        lms[..., 0] = 0.5  # constant L
        lms[..., 1] = rng.random((16, 16))  # varying M
        lms[..., 2] = 0.25
        out = compensate_color_channel_independent(lms, KERNEL)
        assert np.max(np.abs(out[..., 0] - 0.5)) < 1e-10
        assert np.max(np.abs(out[..., 1] - lms[..., 1])) > 1e-4  # halo on M

    def test_channel_independent_shifts_differences(self):
        lms = np.zeros((8, 32, 3))
        lms[..., 0] = 1.0
        lms[:, 16:, 0] = 2.0  # L steps, M constant
        lms[..., 1] = 1.0
        out = compensate_color_channel_independent(lms, KERNEL)
        diff_change = (out[..., 0] - out[..., 1]) - (lms[..., 0] - lms[..., 1])
        assert np.max(np.abs(diff_change)) > 1e-3

    def test_perceive_color_matches_dense_solve(self):
        rng = np.random.default_rng(11)
        e = rng.uniform(-1, 2, size=(16, 16, 3))
        got = perceive_color(e, KERNEL, WEIGHTS, CFG)
        want = solve_perceive_color_dense(
            e, k_matrix(16, 16), (WEIGHTS.w_l, WEIGHTS.w_m, WEIGHTS.w_s)
        )
        assert np.max(np.abs(got - want)) < 1e-6

    def test_perceive_color_constant_unchanged(self):
        e = np.ones((12, 12, 3)) * np.array([1.0, 2.0, 3.0])
        p = perceive_color(e, KERNEL, WEIGHTS, CFG)
        assert np.max(np.abs(p - e)) < 1e-9

    def test_inverse_pair_color(self):
        rng = np.random.default_rng(12)
        target = rng.uniform(-1, 2, size=(20, 20, 3))
        e = compensate_color(target, KERNEL, WEIGHTS)
        p = perceive_color(e, KERNEL, WEIGHTS, CFG)
        assert np.max(np.abs(p - target)) < 10 * CFG.tol

    def test_perceive_channel_independent_decouples(self):
        rng = np.random.default_rng(13)
        e = rng.uniform(-1, 1, size=(12, 12, 3))
        got = perceive_color_channel_independent(e, KERNEL, CFG)
        for c in range(3):
            want = perceive_achromatic(e[..., c], KERNEL, CFG)
            assert np.array_equal(got[..., c], want)


class TestBarlowLange:
    BETA = 0.1

    def test_beta_zero_equals_linear_bitwise(self):
        rng = np.random.default_rng(14)
        p = rng.uniform(-1, 2, size=(16, 16))
        linear = compensate_achromatic(p, KERNEL)
        nonlin = compensate_barlow_lange(p, KERNEL, 0.0)
        assert np.array_equal(linear, nonlin)

    def test_constant_unchanged(self):
        p = np.full((12, 12), 1.4)
        out = compensate_barlow_lange(p, KERNEL, self.BETA)
        assert np.max(np.abs(out - p)) < 1e-10

    def test_forward_model_recovers_target(self):
        # Push the closed form through the nonlinear forward model and check
        # the target percept comes back.
        rng = np.random.default_rng(15)
        target = rng.uniform(0.0, 2.0, size=(16, 16))
        e = compensate_barlow_lange(target, KERNEL, self.BETA)
        p = perceive_barlow_lange(e, KERNEL, self.BETA, CFG)
        assert np.max(np.abs(p - target)) < 1e-6

    def test_perceive_matches_dense_solve(self):
        rng = np.random.default_rng(16)
        e = rng.uniform(0.0, 2.0, size=(16, 16))
        got = perceive_barlow_lange(e, KERNEL, self.BETA, CFG)
        want = solve_perceive_masked_dense(e, k_matrix(16, 16), self.BETA)
        assert np.max(np.abs(got - want)) < 1e-6

    def test_perceive_beta_zero_equals_linear(self):
        rng = np.random.default_rng(17)
        e = rng.uniform(-1, 1, size=(12, 12))
        a = perceive_barlow_lange(e, KERNEL, 0.0, CFG)
        b = perceive_achromatic(e, KERNEL, CFG)
        assert np.max(np.abs(a - b)) < 1e-12

    def test_degenerate_denominator_raises(self):
        # A huge step with strong coupling pushes |beta * k*p'| past 0.5.
        p = np.zeros((16, 64))
        p[:, 32:] = 40.0
        k = build_kernel(InhibitionParams(alpha=0.5, sigma_px=4.0))
        with pytest.raises(DegenerateDenominator, match="beta"):
            compensate_barlow_lange(p, k, 0.09)

    def test_color_blind_coupling_with_mask(self):
        # Color + nonlinear variant: inverse pair still holds.
        rng = np.random.default_rng(18)
        target = rng.uniform(0.0, 1.5, size=(14, 14, 3))
        e = compensate_color(target, KERNEL, WEIGHTS, beta=self.BETA)
        p = perceive_color(e, KERNEL, WEIGHTS, CFG, beta=self.BETA)
        assert np.max(np.abs(p - target)) < 1e-6
