"""Adaptive quadrature honesty, energy densities, and the two W' routes."""

import math

import numpy as np
import pytest

from relplanck import (
    Component,
    CorrelationCoincidence,
    QuadratureConfig,
    QuadratureConvergenceError,
    UnitSystem,
    correlation_coincidence,
    energy_density_moving_correlation,
    energy_density_moving_spectral,
    energy_density_rest,
    expected_energy_ratio,
    integrate_semi_infinite,
    make_boost,
    thermal_energy_density_closed_form,
    thermal_occupation,
)

# closed-form reference values, frozen after independent evaluation:
#   integral x^3 e^{-x}          = Gamma(4) = 6
#   integral x^3 / (e^x - 1)     = pi^4 / 15           (Bose series sum 6/k^4)
#   integral x^4 / (e^x - 1)     = 24 zeta(5)          (Bose series sum 24/k^5)
GAMMA_4 = 6.0
PI4_OVER_15 = math.pi**4 / 15.0
ZETA5_INTEGRAL = 24.886266123440878

W_THERMAL_NATURAL_T1 = math.pi**2 / 15.0


def _gl128_reference(f, scale, n_panels=8):
    """Composite 128-node Gauss-Legendre on the same t-map, as an
    independently structured check on the adaptive integrator."""
    x, w = np.polynomial.legendre.leggauss(128)
    edges = np.linspace(0.0, 1.0, n_panels + 1)
    total = 0.0
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        t = 0.5 * (a + b) + half * x
        om = scale * t / (1.0 - t)
        total += half * float(w @ (f(om) * (scale / (1.0 - t) ** 2)))
    return total


class TestIntegrator:
    def test_gamma_function_integral(self):
        res = integrate_semi_infinite(lambda x: x**3 * np.exp(-x))
        assert res.value == pytest.approx(GAMMA_4, rel=1e-12)
        assert abs(res.value - GAMMA_4) <= res.error_estimate

    def test_bose_cubic_integral(self):
        # 1/(e^x - 1) written overflow-free as e^{-x}/(1 - e^{-x})
        res = integrate_semi_infinite(lambda x: x**3 * np.exp(-x) / -np.expm1(-x))
        assert res.value == pytest.approx(PI4_OVER_15, rel=1e-12)
        assert abs(res.value - PI4_OVER_15) <= res.error_estimate

    def test_bose_quartic_integral_with_series_crosscheck(self):
        res = integrate_semi_infinite(lambda x: x**4 * np.exp(-x) / -np.expm1(-x))
        assert res.value == pytest.approx(ZETA5_INTEGRAL, rel=1e-12)
        # series tail beyond k = 4000 is below 1e-15 relative
        series = math.fsum(24.0 / k**5 for k in range(4000, 0, -1))
        assert series == pytest.approx(ZETA5_INTEGRAL, rel=1e-13)

    def test_signed_integrand(self):
        # integral x^3 e^{-x} cos x = Re Gamma(4)/(1+i)^4 = -3/2
        res = integrate_semi_infinite(lambda x: x**3 * np.exp(-x) * np.cos(x))
        assert res.value == pytest.approx(-1.5, rel=1e-11)
        assert abs(res.value + 1.5) <= res.error_estimate

    def test_against_fixed_rule_on_same_map(self):
        f = lambda x: x**3 * thermal_occupation(x) / (1.0 + 0.25 * x**2)
        res = integrate_semi_infinite(f)
        ref = _gl128_reference(f, 1.0)
        assert res.value == pytest.approx(ref, rel=1e-11)

    def test_scale_choice_does_not_move_the_value(self):
        f = lambda x: x**3 * np.exp(-x)
        lo = integrate_semi_infinite(f, scale=0.37)
        hi = integrate_semi_infinite(f, scale=11.0)
        assert lo.value == pytest.approx(GAMMA_4, rel=1e-11)
        assert hi.value == pytest.approx(GAMMA_4, rel=1e-11)

    def test_cutoff_truncates_domain(self):
        cfg = QuadratureConfig(omega_cutoff=3.0)
        res = integrate_semi_infinite(lambda x: x**3, cfg, scale=3.0)
        assert res.value == pytest.approx(3.0**4 / 4.0, rel=1e-13)

    def test_bookkeeping_fields(self):
        res = integrate_semi_infinite(lambda x: x**3 * np.exp(-x))
        assert res.n_panels >= 8
        # 8 seed panels at 15 + 7 evals each, 2 more panels per bisection
        assert res.n_evaluations == 176 + 44 * (res.n_panels - 8)

    def test_unresolvable_spike_raises_with_partial_result(self):
        cfg = QuadratureConfig(rel_tol=1e-15, abs_tol=1e-250, max_levels=2)
        spike = lambda x: 1.0 / (1.0 + 1e8 * (x - 2.0) ** 2)
        with pytest.raises(QuadratureConvergenceError, match="max_levels") as exc:
            integrate_semi_infinite(spike, cfg, scale=2.0)
        assert math.isfinite(exc.value.value)
        assert exc.value.error > 0.0

    def test_bad_scale_rejected(self):
        f = lambda x: np.exp(-x)
        with pytest.raises(ValueError):
            integrate_semi_infinite(f, scale=0.0)
        with pytest.raises(ValueError):
            integrate_semi_infinite(f, scale=-2.0)
        with pytest.raises(ValueError):
            integrate_semi_infinite(f, scale=math.nan)

    def test_bad_config_rejected(self):
        with pytest.raises(ValueError):
            QuadratureConfig(rel_tol=0.0)
        with pytest.raises(ValueError):
            QuadratureConfig(abs_tol=-1.0)
        with pytest.raises(ValueError):
            QuadratureConfig(max_levels=0)
        with pytest.raises(ValueError):
            QuadratureConfig(omega_cutoff=-5.0)


class TestRestEnergyDensity:
    def test_thermal_matches_closed_form(self):
        w = energy_density_rest(1.0)
        assert w == pytest.approx(W_THERMAL_NATURAL_T1, rel=1e-11)
        assert thermal_energy_density_closed_form(1.0) == W_THERMAL_NATURAL_T1

    def test_fourth_power_scaling(self):
        ratios = [energy_density_rest(t) / t**4 for t in (0.5, 1.0, 2.725, 7.0)]
        assert np.max(np.abs(np.asarray(ratios) / ratios[0] - 1.0)) <= 1e-10

    def test_zero_temperature_thermal_vanishes(self):
        assert energy_density_rest(0.0) == 0.0

    def test_zero_point_demands_cutoff(self):
        with pytest.raises(ValueError, match="cutoff"):
            energy_density_rest(1.0, Component.ZERO_POINT)
        with pytest.raises(ValueError, match="cutoff"):
            energy_density_rest(1.0, Component.TOTAL)

    def test_zero_point_quartic_in_cutoff(self):
        for lam in (3.0, 6.0):
            cfg = QuadratureConfig(omega_cutoff=lam)
            w = energy_density_rest(1.0, Component.ZERO_POINT, cfg)
            assert w == pytest.approx(lam**4 / (8.0 * math.pi**2), rel=1e-12)

    def test_total_is_sum_of_parts_under_shared_cutoff(self):
        cfg = QuadratureConfig(omega_cutoff=40.0)
        total = energy_density_rest(1.0, Component.TOTAL, cfg)
        zp = energy_density_rest(1.0, Component.ZERO_POINT, cfg)
        th = energy_density_rest(1.0, Component.THERMAL, cfg)
        assert total == pytest.approx(zp + th, rel=1e-12)
        # at cutoff 40 the truncated thermal part is the full one to rounding
        assert th == pytest.approx(W_THERMAL_NATURAL_T1, rel=1e-11)

    def test_si_radiation_constant(self):
        si = UnitSystem.si()
        t = 2.725
        w = energy_density_rest(t, units=si)
        sigma = 5.670374419e-8  # W m^-2 K^-4
        assert w == pytest.approx(4.0 * sigma / si.c * t**4, rel=1e-9)
        assert w == pytest.approx(thermal_energy_density_closed_form(t, si), rel=1e-10)


class TestMovingSpectral:
    def test_rest_limit(self):
        rep = energy_density_moving_spectral(1.0, make_boost([0, 0, 0]))
        assert rep.method == "spectral"
        assert rep.ratio == pytest.approx(1.0, abs=1e-14)

    def test_ratio_sweep_matches_closed_form(self):
        # gamma^2 (1 + beta^2/3) at the four sample speeds
        frozen = {
            0.1: 1.0134680134680135,
            0.3: 1.1318681318681319,
            0.6: 1.75,
            0.9: 6.684210526315789,
        }
        for beta, want in frozen.items():
            v = make_boost([0.0, 0.0, beta])
            assert expected_energy_ratio(v) == pytest.approx(want, rel=1e-15)
            rep = energy_density_moving_spectral(1.0, v)
            assert rep.ratio == pytest.approx(want, rel=1e-9)
            assert rep.ratio == rep.W_moving / rep.W_rest
            assert rep.ratio > 1.0

    def test_moving_density_scales_as_t_fourth(self):
        v = make_boost([0.0, 0.0, 0.6])
        r1 = energy_density_moving_spectral(1.0, v, n_mu=32)
        r2 = energy_density_moving_spectral(2.0, v, n_mu=32)
        assert r2.W_moving / r1.W_moving == pytest.approx(16.0, rel=1e-9)

    def test_axis_choice_is_irrelevant(self):
        rep_z = energy_density_moving_spectral(1.0, make_boost([0.0, 0.0, 0.6]), n_mu=32)
        b = 0.6 / math.sqrt(3.0)
        rep_d = energy_density_moving_spectral(1.0, make_boost([b, b, b]), n_mu=32)
        assert rep_d.ratio == pytest.approx(rep_z.ratio, rel=1e-12)

    def test_rejects_unsupported_requests(self):
        v = make_boost([0.0, 0.0, 0.5])
        with pytest.raises(ValueError):
            energy_density_moving_spectral(0.0, v)
        with pytest.raises(ValueError):
            energy_density_moving_spectral(1.0, v, component=Component.TOTAL)


class TestCorrelations:
    def test_isotropy_of_electric_tensor(self):
        corr = correlation_coincidence(1.0)
        tens = corr.elel_tensor
        scale = corr.elel_trace
        off = tens - np.diag(np.diag(tens))
        assert np.max(np.abs(off)) <= 1e-15 * scale
        assert np.max(np.abs(np.diag(tens) - scale / 3.0)) <= 1e-14 * scale
        assert isinstance(corr, CorrelationCoincidence)

    def test_trace_reproduces_energy_density(self):
        corr = correlation_coincidence(1.0)
        assert corr.elel_trace / (4.0 * math.pi) == pytest.approx(
            W_THERMAL_NATURAL_T1, rel=1e-10
        )

    def test_electric_magnetic_average_vanishes(self):
        corr = correlation_coincidence(1.3)
        assert np.max(np.abs(corr.elmag_axial)) <= 1e-14 * corr.elel_trace
        assert corr.elmag_axial_trace == corr.elmag_axial[2]

    def test_tensor_is_read_only(self):
        corr = correlation_coincidence(1.0)
        with pytest.raises(ValueError):
            corr.elel_tensor[0, 0] = 0.0

    def test_requires_positive_temperature(self):
        with pytest.raises(ValueError):
            correlation_coincidence(0.0)


class TestRouteAgreement:
    def test_correlation_route_hits_closed_form_algebraically(self):
        # the trace assembly reduces to gamma^2 (1 + beta^2/3) exactly; only
        # angular-rule rounding can move it
        for beta in (0.2, 0.75):
            v = make_boost([0.0, 0.0, beta])
            rep = energy_density_moving_correlation(1.0, v)
            assert rep.method == "correlation"
            assert rep.ratio == pytest.approx(expected_energy_ratio(v), rel=1e-13)

    def test_two_routes_agree(self):
        for beta in (0.1, 0.6, 0.9):
            v = make_boost([0.0, 0.0, beta])
            spect = energy_density_moving_spectral(1.0, v)
            corr = energy_density_moving_correlation(1.0, v)
            assert abs(spect.W_moving / corr.W_moving - 1.0) <= 1e-8
            assert abs(spect.W_rest / corr.W_rest - 1.0) <= 1e-10

    def test_oblique_axis_route_agreement(self):
        n = np.array([1.0, -2.0, 2.0]) / 3.0
        v = make_boost(0.8 * n)
        spect = energy_density_moving_spectral(1.0, v, n_mu=48)
        corr = energy_density_moving_correlation(1.0, v)
        assert abs(spect.W_moving / corr.W_moving - 1.0) <= 1e-8
