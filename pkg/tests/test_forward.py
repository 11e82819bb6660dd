"""Tests for kernel assembly, the two Delta routes and eigenvalue location."""

import numpy as np
import pytest

from conftest import sine_poly_potential, trig_poly_potential, window_flat_potential
from frozenhill import (
    CharFn,
    FrozenConfig,
    Potential,
    SineSeries,
    build_w,
    compute_alpha,
    compute_spectrum,
    delta0,
    eval_delta_det,
    eval_delta_factored,
    eval_delta_fundrep,
    fundamental_solutions,
    reference_lambda,
    reference_rho,
    shift_to_zero,
    verify_asymptotics,
)

PI = np.pi
N = 256


def grid(n=N):
    return np.linspace(0.0, 1.0, n + 1)


class TestBuildW:
    def test_zero_potential(self):
        w = build_w(Potential.zeros(N), FrozenConfig(a=0.25, gamma=2.0))
        assert np.all(w.samples == 0)

    def test_a_zero_constant(self):
        w = build_w(Potential(np.ones(N + 1, complex)), FrozenConfig(a=0.0, gamma=2.0))
        assert np.allclose(w.samples, 6.0)

    def test_quarter_point_unit_coupling(self):
        w = build_w(Potential(np.ones(N + 1, complex)), FrozenConfig(a=0.25, gamma=1.0))
        assert np.allclose(w.samples, 2.0)

    @pytest.mark.parametrize("gamma,sign", [(1.0, 1.0), (-1.0, -1.0)])
    def test_symmetry_for_unit_couplings(self, gamma, sign):
        rng = np.random.default_rng(5)
        q = trig_poly_potential(rng, N)
        for a in (0.0, 0.25, 0.5):
            w = build_w(q, FrozenConfig(a=a, gamma=gamma)).samples
            assert np.max(np.abs(w - sign * w[::-1])) < 1e-12 * max(1, np.max(np.abs(w)))

    def test_reflection_for_large_a(self):
        # w for a > 1/2 is gamma^2 times the mirrored problem's kernel
        rng = np.random.default_rng(6)
        q = trig_poly_potential(rng, N)
        cfg = FrozenConfig(a=0.75, gamma=2.0)
        w = build_w(q, cfg)
        q_r = Potential(q.samples[::-1].copy())
        w_r = build_w(q_r, FrozenConfig(a=0.25, gamma=0.5))
        assert np.allclose(w.samples, 4.0 * w_r.samples, rtol=1e-13)


class TestFundamentalSolutions:
    def test_initial_conditions_at_a(self):
        q = Potential(np.ones(N + 1, complex))
        cfg = FrozenConfig(a=0.25, gamma=2.0)
        fs = fundamental_solutions(0.25, 17.0 + 3j, q, cfg)
        assert fs.c == pytest.approx(1.0)
        assert fs.s_prime == pytest.approx(1.0)
        assert abs(fs.s) < 1e-15 and abs(fs.c_prime) < 1e-15
        assert fs.w == pytest.approx(1.0)

    def test_free_solutions(self):
        q = Potential.zeros(N)
        cfg = FrozenConfig(a=0.0, gamma=1.0)
        fs = fundamental_solutions(1.0, PI**2, q, cfg)
        assert fs.c == pytest.approx(-1.0, abs=1e-14)
        assert abs(fs.s) < 1e-14

    def test_constant_potential_closed_form(self):
        # C(1, 0) = 1 + int_0^1 (1 - t) dt = 3/2 for q = 1, a = 0
        q = Potential(np.ones(2048 + 1, complex))
        cfg = FrozenConfig(a=0.0, gamma=1.0)
        fs = fundamental_solutions(1.0, 0.0, q, cfg)
        assert fs.c == pytest.approx(1.5, abs=1e-10)

    def test_wronski_identity(self):
        rng = np.random.default_rng(7)
        q = trig_poly_potential(rng, 2048, degree=3)
        cfg = FrozenConfig(a=0.5, gamma=2.0)
        for lam in (3.0 + 1j, -25.0, 144.7):
            for x in (0.0, 0.25, 1.0):
                fs = fundamental_solutions(x, lam, q, cfg)
                assert abs(fs.w - (fs.c * fs.s_prime - fs.c_prime * fs.s)) < 1e-9


class TestDeltaRoutes:
    def test_det_free_equals_delta0(self):
        q = Potential.zeros(N)
        cfg = FrozenConfig(a=0.25, gamma=2.0)
        for lam in (0.0, 3 - 2j, -70.0, 120.0 + 40j):
            assert eval_delta_det(lam, q, cfg) == pytest.approx(
                delta0(lam, 2.0), rel=1e-12, abs=1e-12
            )

    def test_det_at_zero_energy(self):
        q = Potential.zeros(N)
        cfg = FrozenConfig(a=0.25, gamma=3.0)
        assert eval_delta_det(0.0, q, cfg) == pytest.approx(4.0, abs=1e-12)

    def test_constant_potential_value(self):
        # Delta(pi^2) = 9 - 12/pi^2 for q = 1, a = 0, gamma = 2
        q = Potential(np.ones(2048 + 1, complex))
        cfg = FrozenConfig(a=0.0, gamma=2.0)
        expect = 9 - 12 / PI**2
        assert eval_delta_det(PI**2, q, cfg) == pytest.approx(expect, abs=1e-10)
        w = build_w(q, cfg)
        assert eval_delta_fundrep(PI**2, w, 2.0) == pytest.approx(expect, abs=1e-10)

    def test_fundrep_zero_kernel(self):
        for lam in (2.0, -10 + 1j):
            got = eval_delta_fundrep(lam, Potential.zeros(N), 0.5 + 0.5j)
            assert got == pytest.approx(delta0(lam, 0.5 + 0.5j), rel=1e-14)

    def test_sine_series_kernel_near_resonance(self):
        b = np.array([0.0, 0.0, 1.5 - 0.5j])
        series = SineSeries(b)
        lam_res = (3 * PI) ** 2
        at_res = eval_delta_fundrep(lam_res, series, 2.0)
        nearby = eval_delta_fundrep((3 * PI + 1e-7) ** 2, series, 2.0)
        assert abs(at_res - nearby) < 1e-6 * (1 + abs(at_res))
        # quadrature cross-check of the closed-form sine integrals
        n = 4096
        xs = np.linspace(0, 1, n + 1)
        w_grid = Potential(series.evaluate(xs))
        for lam in (lam_res, 7.0 - 3j, -40.0):
            a_val = eval_delta_fundrep(lam, series, 2.0)
            b_val = eval_delta_fundrep(lam, w_grid, 2.0)
            assert abs(a_val - b_val) < 1e-9 * (1 + abs(a_val))

    def test_two_route_agreement_spot(self):
        rng = np.random.default_rng(8)
        q = trig_poly_potential(rng, 2048, degree=4)
        for a in (0.0, 0.25, 0.5):
            cfg = FrozenConfig(a=a, gamma=0.5 + 0.5j)
            w = build_w(q, cfg)
            for lam in (1.0, -50.0 + 10j, 130.0 - 80j):
                d1 = eval_delta_det(lam, q, cfg)
                d2 = eval_delta_fundrep(lam, w, cfg.gamma)
                assert abs(d1 - d2) <= 1e-7 * (1 + abs(d1))

    def test_factored_form_matches_fundrep(self):
        rng = np.random.default_rng(9)
        q = trig_poly_potential(rng, 2048, degree=4)
        for gamma in (1.0, -1.0):
            cfg = FrozenConfig(a=0.0, gamma=gamma)
            w = build_w(q, cfg)
            for lam in (0.3, 17.0 + 4j, -60.0, 200.0):
                d1 = eval_delta_fundrep(lam, w, gamma)
                d2 = eval_delta_factored(lam, w, gamma)
                assert abs(d1 - d2) <= 1e-8 * (1 + abs(d1))

    def test_charfn_integral_form(self):
        q = Potential(np.ones(N + 1, complex))
        cfg = FrozenConfig(a=0.0, gamma=2.0)
        fn = CharFn(gamma=2.0, w=build_w(q, cfg))
        assert fn(PI**2) == pytest.approx(9 - 12 / PI**2, abs=1e-8)

    def test_two_route_agreement_mirrored_a(self):
        rng = np.random.default_rng(18)
        q = trig_poly_potential(rng, 2048, degree=3)
        cfg = FrozenConfig(a=0.75, gamma=2.0)
        w = build_w(q, cfg)
        for lam in (2.5, -30.0 + 5j, 90.0):
            d1 = eval_delta_det(lam, q, cfg)
            d2 = eval_delta_fundrep(lam, w, cfg.gamma)
            assert abs(d1 - d2) <= 1e-7 * (1 + abs(d1))


class TestSpectrum:
    def test_free_problem_hits_references(self):
        cfg = FrozenConfig(a=0.0, gamma=2.0)
        spec = compute_spectrum(Potential.zeros(512), cfg, 12)
        for n, lam in enumerate(spec.values):
            assert lam == pytest.approx(reference_lambda(n, spec.alpha), rel=1e-10, abs=1e-9)

    def test_degenerate_odd_indices_exact(self):
        rng = np.random.default_rng(10)
        q = trig_poly_potential(rng, 512, degree=3)
        for gamma in (1.0, -1.0):
            spec = compute_spectrum(q, FrozenConfig(a=0.0, gamma=gamma), 14)
            for n in range(1, 14, 2):
                assert spec.values[n] == reference_lambda(n, spec.alpha)

    def test_constant_potential_against_scalar_oracle(self):
        # independent oracle: fixed-point iteration on cos(rho) = (6c/rho^2-5)/(6c/rho^2-4)
        c = 1.0
        cfg = FrozenConfig(a=0.0, gamma=2.0)
        q = Potential(np.full(1024 + 1, c, dtype=complex))
        spec = compute_spectrum(q, cfg, 8)
        alpha = spec.alpha

        def oracle(n):
            rho = reference_rho(n, alpha)
            base = 2 * PI * ((n + 1) // 2)
            for _ in range(200):
                t = 6.0 * c / rho**2
                ac = np.arccos(complex((t - 5.0) / (t - 4.0)))
                cand = min((base + ac, base - ac), key=lambda z: abs(z - rho))
                if abs(cand - rho) < 1e-15 * (1 + abs(rho)):
                    rho = cand
                    break
                rho = cand
            return rho * rho

        for n in range(1, 8):
            assert spec.values[n] == pytest.approx(oracle(n), rel=1e-9)

    def test_small_index_root_with_large_shift(self):
        # q = 1, gamma = 2: lambda_0 sits across the window, found by fallback
        cfg = FrozenConfig(a=0.0, gamma=2.0)
        q = Potential(np.ones(1024 + 1, complex))
        spec = compute_spectrum(q, cfg, 1)
        lam0 = spec.values[0]
        assert lam0.real == pytest.approx(0.958, abs=5e-3)
        w = build_w(q, cfg)
        assert abs(eval_delta_fundrep(lam0, w, 2.0)) < 1e-9

    def test_shift_invariance(self):
        rng = np.random.default_rng(11)
        q = window_flat_potential(rng, 0.25, 1024)
        gamma = 2.0
        for a in (0.25, 0.5):
            cfg = FrozenConfig(a=a, gamma=gamma)
            spec_a = compute_spectrum(q, cfg, 12)
            q_a = shift_to_zero(q, cfg)
            spec_0 = compute_spectrum(q_a, FrozenConfig(a=0.0, gamma=gamma), 12)
            assert np.max(np.abs(spec_a.values - spec_0.values)) < 1e-7

    def test_reflection_invariance(self):
        rng = np.random.default_rng(12)
        q = window_flat_potential(rng, 0.25, 1024)
        cfg = FrozenConfig(a=0.25, gamma=2.0)
        spec = compute_spectrum(q, cfg, 12)
        q_r = Potential(q.samples[::-1].copy())
        spec_r = compute_spectrum(q_r, FrozenConfig(a=0.75, gamma=0.5), 12)
        assert np.max(np.abs(spec.values - spec_r.values)) < 1e-7

    def test_near_degenerate_pair_refinement(self):
        rng = np.random.default_rng(13)
        q = sine_poly_potential(rng, 512, degree=2, scale=0.3)
        cfg = FrozenConfig(a=0.0, gamma=1.0 + 1e-4)
        spec = compute_spectrum(q, cfg, 8)
        res = verify_asymptotics(spec)
        assert np.all(np.abs(res.eps) < 0.5)


class TestAsymptotics:
    def test_free_problem_zero_residuals(self):
        cfg = FrozenConfig(a=0.0, gamma=1 + 1j)
        spec = compute_spectrum(Potential.zeros(512), cfg, 10)
        res = verify_asymptotics(spec)
        assert np.max(np.abs(res.kappa)) < 1e-8
        assert res.tail_ok

    def test_degenerate_odd_residuals_vanish(self):
        rng = np.random.default_rng(14)
        q = trig_poly_potential(rng, 512, degree=3)
        spec = compute_spectrum(q, FrozenConfig(a=0.0, gamma=-1.0), 12)
        res = verify_asymptotics(spec)
        assert np.all(np.abs(res.kappa[1::2]) == 0)

    def test_kappa_eps_consistency(self):
        rng = np.random.default_rng(15)
        q = trig_poly_potential(rng, 512, degree=3, scale=0.5)
        spec = compute_spectrum(q, FrozenConfig(a=0.0, gamma=2.0), 20)
        res = verify_asymptotics(spec)
        for n in range(20):
            rho0 = reference_rho(n, spec.alpha)
            recon = (rho0 + res.eps[n]) ** 2 - rho0**2
            assert abs(recon - res.kappa[n]) < 1e-10 * (1 + abs(res.kappa[n]))

    def test_tail_decay_for_smooth_potential(self):
        rng = np.random.default_rng(16)
        q = sine_poly_potential(rng, 1024, degree=4)
        spec = compute_spectrum(q, FrozenConfig(a=0.0, gamma=2.0), 60)
        res = verify_asymptotics(spec)
        assert res.last_quarter_energy < res.first_quarter_energy
        partial = np.cumsum(np.abs(res.kappa) ** 2)
        assert np.all(np.diff(partial) >= 0)
