import math

import numpy as np
import pytest

from magnon_memory import (
    BosonModel,
    ChiSpectrum,
    DomainError,
    LargeNFidelityParams,
    PhysicalParams,
    RegimeError,
    SingularModeError,
    SmallNFidelityParams,
    adiabaticity,
    chi_spectrum,
    custom_profile,
    decay_rate,
    default_broadening,
    effective_coupling,
    effective_couplings,
    fidelity_large_n,
    fidelity_small_n,
    gaussian_profile,
    homogeneous_profile,
    numeric_fidelity,
    omega_shift,
    swap_time,
)
from magnon_memory.decoherence import FidelityCurve
from magnon_memory.model import spectator_frequencies


def _single_mode_chi(N: int, k: int, value: complex) -> ChiSpectrum:
    chi = np.zeros(N, dtype=complex)
    chi[k - 1] = value
    chi[-1] = 1.0
    return ChiSpectrum(chi)


def _resonant_params(N=6, s=0.5, lam=1.0, J=0.7, k_res=2):
    """B0 tuned so omega_{k_res} = 2g exactly."""
    g = lam * math.sqrt(s / (2 * N))
    b0 = 2 * g - 2.0 * J * s * (1.0 - np.cos(2.0 * np.pi * k_res / N))
    return PhysicalParams(N=N, s=s, lam=lam, J=J, B0=b0)


class TestDecayRate:
    def test_homogeneous_is_exactly_zero(self):
        params = PhysicalParams(N=10, J=1.0)
        chi = chi_spectrum(homogeneous_profile(10))
        assert decay_rate(params, chi, broadening=0.1) == 0.0

    def test_broadening_validated(self):
        params = PhysicalParams(N=4, J=1.0)
        chi = chi_spectrum(homogeneous_profile(4))
        for eta in (0.0, -1.0, None):
            with pytest.raises(DomainError):
                decay_rate(params, chi, eta)

    def test_lorentzian_peak_scales_inversely_with_eta(self):
        # a single resonant mode sampled at the peak: gamma ~ 1/eta
        params = _resonant_params(k_res=2)
        chi = _single_mode_chi(6, 2, 0.3)
        g1 = decay_rate(params, chi, broadening=0.2)
        g2 = decay_rate(params, chi, broadening=0.1)
        assert g2 / g1 == pytest.approx(2.0, rel=1e-10)

    def test_monotone_in_mode_weight(self):
        params = _resonant_params(k_res=2)
        weak = decay_rate(params, _single_mode_chi(6, 2, 0.3), 0.1)
        strong = decay_rate(params, _single_mode_chi(6, 2, 0.6), 0.1)
        assert strong == pytest.approx(4.0 * weak, rel=1e-12)

    def test_quadratic_in_coupling_scale_at_fixed_detuning(self):
        # doubling every lambda_l keeps chi fixed; shifting B0 by 2 Delta(g)
        # keeps every omega_k - 2g fixed, so gamma scales by lambda^2 = 4
        N, s = 8, 0.5
        lambdas = np.linspace(1.0, 0.3, N)
        p1 = PhysicalParams(N=N, s=s, J=0.9, B0=0.5, lam=1.0)
        chi1 = chi_spectrum(custom_profile(lambdas))
        g1 = effective_coupling(p1)
        p2 = PhysicalParams(N=N, s=s, J=0.9, B0=0.5 + 2 * g1, lam=2.0)
        chi2 = chi_spectrum(custom_profile(2.0 * lambdas))
        assert np.allclose(chi1.chi, chi2.chi, atol=1e-15)
        r1 = decay_rate(p1, chi1, 0.3)
        r2 = decay_rate(p2, chi2, 0.3)
        assert r2 == pytest.approx(4.0 * r1, rel=1e-12)

    def test_default_broadening_needs_split_levels(self):
        with pytest.raises(DomainError):
            default_broadening(PhysicalParams(N=8, J=0.0, B0=1.0))
        eta = default_broadening(PhysicalParams(N=100, s=0.5, J=50.0))
        assert eta > 0


class TestLargeNFidelity:
    def test_params_reduce_to_arcsin_ratio(self):
        p = LargeNFidelityParams(gamma=0.02, g=1.0)
        assert p.phi == pytest.approx(math.asin(0.02), abs=1e-15)
        assert p.delta1p == pytest.approx(math.sqrt(1 - 0.02**2), abs=1e-15)

    def test_overdamped_rejected(self):
        with pytest.raises(RegimeError):
            LargeNFidelityParams(gamma=1.0, g=1.0)
        with pytest.raises(RegimeError):
            LargeNFidelityParams(gamma=1.5, g=1.0)
        with pytest.raises(DomainError):
            LargeNFidelityParams(gamma=-0.1, g=1.0)

    def test_no_dissipation_is_unity(self):
        p = LargeNFidelityParams(gamma=0.0, g=0.7)
        t = np.linspace(0.0, 40.0, 500)
        assert np.max(np.abs(fidelity_large_n(t, p) - 1.0)) < 1e-12

    def test_starts_at_one(self):
        p = LargeNFidelityParams(gamma=0.05, g=1.0)
        assert fidelity_large_n(0.0, p) == pytest.approx(1.0, abs=1e-12)

    def test_storage_instant_value(self):
        # gamma/g = 0.02 at t = pi/(2g): close to 1 - pi gamma / 8 g
        p = LargeNFidelityParams(gamma=0.02, g=1.0)
        f = fidelity_large_n(math.pi / 2.0, p)
        assert f == pytest.approx(0.9923058283953026, abs=1e-12)
        assert abs(f - (1.0 - math.pi * 0.02 / 8.0)) < 0.002

    def test_range(self):
        # any roundoff overshoot beyond 1e-9 warns, which this test escalates
        import warnings
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            for ratio in (0.01, 0.3, 0.9):
                p = LargeNFidelityParams(gamma=ratio, g=1.0)
                f = fidelity_large_n(np.linspace(0, 60, 4000), p)
                assert np.all(f >= 0.0) and np.all(f <= 1.0)


class TestAdiabaticity:
    def test_homogeneous_all_zero(self):
        params = PhysicalParams(N=8, J=1.0)
        report = adiabaticity(params, chi_spectrum(homogeneous_profile(8)))
        assert report.max_ratio == 0.0
        assert np.all(report.ratios == 0.0)

    def test_stronger_exchange_suppresses_ratios(self):
        chi = chi_spectrum(gaussian_profile(10, 2.0))
        weak = adiabaticity(PhysicalParams(N=10, J=0.5), chi)
        strong = adiabaticity(PhysicalParams(N=10, J=50.0), chi)
        assert strong.max_ratio < weak.max_ratio
        assert weak.satisfied(threshold=1e9) and not weak.satisfied(threshold=0.0)

    def test_zero_frequency_names_the_mode(self):
        params = PhysicalParams(N=6, J=0.0, B0=0.0)
        chi = chi_spectrum(gaussian_profile(6, 2.0))
        with pytest.raises(SingularModeError) as err:
            adiabaticity(params, chi)
        assert err.value.k == 1

    def test_worst_mode_identified(self):
        params = _resonant_params(N=8, J=0.4, k_res=1)
        chi = chi_spectrum(gaussian_profile(8, 2.0))
        report = adiabaticity(params, chi)
        omega = np.abs(spectator_frequencies(params))
        expected = effective_coupling(params) * np.abs(chi.chi[:-1]) / omega
        assert report.worst_k == int(np.argmax(expected)) + 1


class TestOmegaShift:
    def test_homogeneous_is_zero(self):
        params = PhysicalParams(N=8, J=1.0)
        assert omega_shift(params, chi_spectrum(homogeneous_profile(8))) == 0.0

    def test_single_mode_value(self):
        params = PhysicalParams(N=6, s=0.5, J=0.7, B0=0.2, lam=1.3)
        chi = _single_mode_chi(6, 2, 0.4)
        w = spectator_frequencies(params)[1]
        expected = -(1.3**2 * 0.5 / 6) * (0.4**2) / (2 * w)
        assert omega_shift(params, chi) == pytest.approx(expected, rel=1e-12)

    def test_gaussian_negative_and_shrinking_with_sigma(self):
        params = PhysicalParams(N=100, s=0.5, J=50.0)
        shifts = [omega_shift(params, chi_spectrum(gaussian_profile(100, f * 100)))
                  for f in (0.1, 0.2)]
        assert all(v < 0 for v in shifts)
        assert abs(shifts[1]) < abs(shifts[0])

    def test_zero_frequency_raises(self):
        params = PhysicalParams(N=6, J=0.0, B0=0.0)
        with pytest.raises(SingularModeError):
            omega_shift(params, chi_spectrum(gaussian_profile(6, 2.0)))


class TestEffectiveCouplings:
    def test_symmetric(self):
        params = PhysicalParams(N=7, s=1.0, J=0.9, B0=0.3)
        m = effective_couplings(params, chi_spectrum(gaussian_profile(7, 2.0)))
        assert m.shape == (6, 6)
        assert np.array_equal(m, m.T)

    def test_diagonal_value(self):
        params = PhysicalParams(N=7, s=1.0, J=0.9, B0=0.3, lam=1.1)
        m = effective_couplings(params, chi_spectrum(homogeneous_profile(7)))
        omega = spectator_frequencies(params)
        expected = 1.1**2 * 1.0 / (7 * omega)
        assert np.allclose(np.diag(m), expected, rtol=1e-12)

    def test_flat_spectrum_gives_constant_matrix(self):
        # J = 0 with a Zeeman offset: all spectator frequencies equal
        params = PhysicalParams(N=5, s=0.5, J=0.0, B0=2.0, lam=1.0)
        m = effective_couplings(params, chi_spectrum(homogeneous_profile(5)))
        expected = 1.0 * 0.5 / (5 * 2.0)
        assert np.allclose(m, expected, rtol=1e-12)

    def test_mode_reflection_invariance(self):
        params = PhysicalParams(N=9, s=0.5, J=1.2, B0=0.4)
        m = effective_couplings(params, chi_spectrum(homogeneous_profile(9)))
        assert np.allclose(m, m[::-1, ::-1], atol=1e-12)


class TestSmallNFidelity:
    def test_trig_identity(self):
        p = SmallNFidelityParams(omega_shift=-3.7, g=0.4)
        assert p.cos_xi**2 + p.sin_xi**2 == pytest.approx(1.0, abs=1e-12)

    def test_starts_at_one(self):
        p = SmallNFidelityParams(omega_shift=-8.0, g=0.2)
        assert fidelity_small_n(0.0, p) == pytest.approx(1.0, abs=1e-12)

    def test_homogeneous_limit_is_unity(self):
        p = SmallNFidelityParams(omega_shift=0.0, g=0.5)
        assert p.sin_xi == pytest.approx(1.0)
        t = np.linspace(0.0, 50.0, 700)
        assert np.max(np.abs(fidelity_small_n(t, p) - 1.0)) < 1e-12

    def test_storage_instant_near_half(self):
        # |g / 2 Omega'| = 0.025, Delta1 = g: F(pi / 2 Delta1) ~ 1/2
        g = 0.05
        p = SmallNFidelityParams(omega_shift=-20.0 * g, g=g)
        f = fidelity_small_n(math.pi / (2.0 * p.delta1), p)
        assert f == pytest.approx(0.5038937955835605, abs=1e-12)
        assert 0.45 <= f <= 0.55

    def test_even_in_shift_sign(self):
        t = np.linspace(0.0, 30.0, 400)
        a = fidelity_small_n(t, SmallNFidelityParams(omega_shift=4.0, g=0.3))
        b = fidelity_small_n(t, SmallNFidelityParams(omega_shift=-4.0, g=0.3))
        assert np.max(np.abs(a - b)) < 1e-12

    def test_range(self):
        import warnings
        rng = np.random.default_rng(8)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            for _ in range(10):
                p = SmallNFidelityParams(
                    omega_shift=float(rng.uniform(-30, 30)),
                    g=float(rng.uniform(0.05, 2.0)),
                    delta1=float(rng.uniform(0.05, 2.0)),
                )
                f = fidelity_small_n(np.linspace(0, 40, 2000), p)
                assert np.all(f >= 0.0) and np.all(f <= 1.0)

    def test_delta1_default_and_override(self):
        p = SmallNFidelityParams(omega_shift=-2.0, g=0.3)
        assert p.delta1 == 0.3
        p2 = SmallNFidelityParams(omega_shift=-2.0, g=0.3, delta1=0.7)
        assert p2.delta1 == 0.7

    def test_from_model_constructors(self):
        params = PhysicalParams(N=20, s=0.5, J=10.0)
        chi = chi_spectrum(gaussian_profile(20, 4.0))
        p_small = SmallNFidelityParams.from_model(params, chi)
        assert p_small.omega_shift == omega_shift(params, chi)
        assert p_small.g == effective_coupling(params)
        eta = default_broadening(params)
        p_large = LargeNFidelityParams.from_model(params, chi, eta)
        assert p_large.gamma == decay_rate(params, chi, eta)


class TestNumericFidelity:
    def test_homogeneous_stays_at_unity(self):
        params = PhysicalParams(N=12, s=0.5, J=1.0)
        model = BosonModel(params, chi_spectrum(homogeneous_profile(12)))
        curve = numeric_fidelity(model, np.linspace(0.0, 3 * swap_time(params), 50))
        assert np.max(np.abs(curve.f - 1.0)) < 1e-10

    def test_time_zero_is_unity(self):
        params = PhysicalParams(N=20, s=0.5, J=30.0)
        model = BosonModel(params, chi_spectrum(gaussian_profile(20, 4.0)))
        curve = numeric_fidelity(model, [0.0])
        assert curve.f[0] == pytest.approx(1.0, abs=1e-12)

    def test_empty_grid_rejected(self):
        params = PhysicalParams(N=8, s=0.5, J=1.0)
        model = BosonModel(params, chi_spectrum(homogeneous_profile(8)))
        with pytest.raises(DomainError):
            numeric_fidelity(model, [])

    def test_inhomogeneity_causes_decay(self):
        N = 100
        g = effective_coupling(PhysicalParams(N=N, s=0.5))
        J = 2 * g / (2 * 0.5 * (1 - math.cos(2 * math.pi / N)))
        params = PhysicalParams(N=N, s=0.5, J=J)
        model = BosonModel(params, chi_spectrum(gaussian_profile(N, 0.2 * N)))
        t0 = swap_time(params)
        curve = numeric_fidelity(model, np.linspace(0.0, 2 * t0, 9))
        assert curve.f[0] == pytest.approx(1.0, abs=1e-12)
        assert np.min(curve.f) < 1.0 - 1e-8

    def test_curve_shape_validation(self):
        with pytest.raises(DomainError):
            FidelityCurve(np.zeros(3), np.zeros(4), "numeric", {})
