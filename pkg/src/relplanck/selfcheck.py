"""Deterministic self-test battery behind the `selftest` CLI subcommand.

Each check exercises one identity the package is built around and reports
a residual against a tolerance.  Randomized sweeps use a fixed seed, so a
given build either always passes or always fails.  quick=True skips the
two statistically expensive Monte Carlo checks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kinematics, montecarlo, radiometry, spectrum
from .core import Component, PhotonMode, make_boost

__all__ = ["CheckResult", "run_selfcheck"]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    detail: str = ""


def _result(name: str, residual: float, tolerance: float, detail: str = "") -> CheckResult:
    residual = float(residual)
    return CheckResult(name, bool(residual <= tolerance), residual, float(tolerance), detail)


def _random_boosts(rng: np.random.Generator, n: int, beta_max: float = 0.99):
    b = beta_max * rng.random(n) ** 0.5
    mu = 2.0 * rng.random(n) - 1.0
    phi = 2.0 * np.pi * rng.random(n)
    s = np.sqrt(1.0 - mu**2)
    return [make_boost(bi * np.array([si * np.cos(p), si * np.sin(p), m]))
            for bi, m, si, p in zip(b, mu, s, phi)]


def _random_modes(rng: np.random.Generator, n: int):
    omega = 10.0 ** rng.uniform(-2.0, 2.0, n)
    mu = 2.0 * rng.random(n) - 1.0
    phi = 2.0 * np.pi * rng.random(n)
    s = np.sqrt(1.0 - mu**2)
    return [PhotonMode(w, np.array([si * np.cos(p), si * np.sin(p), m]))
            for w, m, si, p in zip(omega, mu, s, phi)]


def _check_gamma_identity(rng) -> CheckResult:
    worst = 0.0
    for v in _random_boosts(rng, 200):
        worst = max(worst, abs(v.gamma**2 * (1.0 - v.beta_mag**2) - 1.0))
    return _result("gamma-identity", worst, 1e-12, "gamma^2 (1 - beta^2) = 1")


def _check_component_additivity(rng) -> CheckResult:
    omega = 10.0 ** rng.uniform(-3.0, 3.0, 500)
    T = 10.0 ** rng.uniform(-2.0, 2.0)
    total = spectrum.rho_rest(omega, T, Component.TOTAL)
    parts = spectrum.rho_rest(omega, T, Component.ZERO_POINT) + spectrum.rho_rest(
        omega, T, Component.THERMAL
    )
    worst = float(np.max(np.abs(parts - total) / total))
    return _result("component-additivity", worst, 1e-13, "zero-point + thermal = total")


def _check_mode_roundtrip(rng) -> CheckResult:
    worst = 0.0
    boosts = _random_boosts(rng, 300)
    modes = _random_modes(rng, 300)
    for v, m in zip(boosts, modes):
        back = kinematics.inverse_boost_mode(kinematics.boost_mode(m, v).mode_prime, v)
        worst = max(
            worst,
            abs(back.omega - m.omega) / m.omega,
            float(np.max(np.abs(back.khat - m.khat))),
        )
    return _result("mode-roundtrip", worst, 1e-12, "boost then inverse boost")


def _check_jacobian_freq(rng) -> CheckResult:
    worst = 0.0
    for v, m in zip(_random_boosts(rng, 200, 0.95), _random_modes(rng, 200)):
        mu = float(m.khat @ v.vhat)
        # reciprocity: gamma (1 + beta mu') must equal 1 / (gamma (1 - beta mu))
        r = kinematics.boost_mode(m, v)
        num = 1.0 / (v.gamma * (1.0 - v.beta_mag * mu))
        worst = max(worst, abs(r.jac_freq - num) / num)
    return _result("jacobian-freq", worst, 1e-12, "d omega/d omega' = 1/(d omega'/d omega)")


def _check_jacobian_solid_angle(rng) -> CheckResult:
    worst = 0.0
    for v, m in zip(_random_boosts(rng, 200, 0.95), _random_modes(rng, 200)):
        mu = float(m.khat @ v.vhat)
        # step follows the local Doppler denominator: keeps the truncation
        # term ~1e-9 while leaving enough signal above rounding noise
        h = 3e-5 * (1.0 - v.beta_mag * mu)
        if abs(mu) + h >= 1.0:
            continue
        dmup = kinematics.aberrate_mu(mu + h, v) - kinematics.aberrate_mu(mu - h, v)
        num = float(dmup) / (2.0 * h)  # d mu'/d mu; solid-angle Jacobian is its inverse
        r = kinematics.boost_mode(m, v)
        worst = max(worst, abs(r.jac_solid_angle - 1.0 / num) * num)
    return _result("jacobian-solid-angle", worst, 1e-8, "central difference of aberration")


def _check_lightcone(rng) -> CheckResult:
    worst = 0.0
    for v, m in zip(_random_boosts(rng, 300), _random_modes(rng, 300)):
        r = kinematics.boost_mode(m, v)
        k = m.omega * m.khat  # c = 1
        kpar = float(k @ v.vhat)
        kvec = k - kpar * v.vhat + (v.gamma * (kpar - v.beta_mag * m.omega)) * v.vhat
        worst = max(worst, abs(float(np.linalg.norm(kvec)) - r.mode_prime.omega) / m.omega)
    return _result("lightcone", worst, 1e-12, "omega' = c |k'| from the raw wavevector boost")


def _check_field_invariants(rng) -> CheckResult:
    worst = 0.0
    for v in _random_boosts(rng, 300):
        f = kinematics.FieldPair(rng.normal(size=3), rng.normal(size=3))
        fb = kinematics.field_boost(f, v)
        scale = float(f.E @ f.E + f.B @ f.B)
        inv1 = float(f.E @ f.E - f.B @ f.B) - float(fb.E @ fb.E - fb.B @ fb.B)
        inv2 = float(f.E @ f.B) - float(fb.E @ fb.B)
        worst = max(worst, abs(inv1) / scale, abs(inv2) / scale)
    return _result("field-invariants", worst, 1e-10, "E^2 - B^2 and E.B preserved")


def _check_aberration_bounds(rng) -> CheckResult:
    worst = 0.0
    for v, m in zip(_random_boosts(rng, 300), _random_modes(rng, 300)):
        khat_p = kinematics.aberrate(m, v)
        worst = max(
            worst,
            abs(float(np.linalg.norm(khat_p)) - 1.0),
            max(0.0, abs(float(khat_p @ v.vhat)) - 1.0),
        )
    return _result("aberration-bounds", worst, 1e-12, "|khat'| = 1 and |mu'| <= 1")


def _check_zero_t_invariance(rng) -> CheckResult:
    worst = 0.0
    for v, m in zip(_random_boosts(rng, 200), _random_modes(rng, 200)):
        r = kinematics.boost_mode(m, v)
        lhs = spectrum.rho_moving(r.mode_prime.omega, r.mode_prime.khat, v, 0.0)
        rhs = spectrum.rho_rest(r.mode_prime.omega, 0.0)
        worst = max(worst, abs(lhs - rhs) / rhs)
    return _result("zero-T-invariance", worst, 1e-12, "T = 0 spectrum identical in both frames")


def _check_pullback_identity(rng) -> CheckResult:
    omega = 10.0 ** rng.uniform(-2.0, 2.0, 400)
    mu = 2.0 * rng.random(400) - 1.0
    worst = 0.0
    for beta in (0.0, 0.1, 0.6, 0.99):
        v = make_boost([0.0, 0.0, beta])
        a = spectrum.rho_moving_mu(omega, mu, v, 1.0)
        b = spectrum.rho_moving_pullback_mu(omega, mu, v, 1.0)
        worst = max(worst, float(np.max(np.abs(a - b) / a)))
    return _result("pullback-identity", worst, 1e-12, "explicit form vs pulled-back rest form")


def _check_occupation_invariance(rng) -> CheckResult:
    worst = 0.0
    for v, m in zip(_random_boosts(rng, 200), _random_modes(rng, 200)):
        r = kinematics.boost_mode(m, v)
        back = kinematics.inverse_boost_mode(r.mode_prime, v)
        lhs = spectrum.rho_moving(r.mode_prime.omega, r.mode_prime.khat, v, 1.0) / r.mode_prime.omega**3
        rhs = spectrum.rho_rest(back.omega, 1.0) / back.omega**3
        worst = max(worst, abs(lhs - rhs) / rhs)
    return _result(
        "occupation-invariance", worst, 1e-12, "rho/omega^3 equal along the mode map"
    )


def _check_teff_factorization(rng) -> CheckResult:
    omega = 10.0 ** rng.uniform(-2.0, 2.0, 300)
    worst = 0.0
    for beta in (0.1, 0.6, 0.9):
        v = make_boost([0.0, 0.0, beta])
        for mu in (-1.0, -0.3, 0.2, 1.0):
            teff = spectrum.effective_temperature_mu(mu, v, 1.0)
            a = spectrum.rho_moving_mu(omega, mu, v, 1.0, Component.THERMAL)
            b = spectrum.rho_rest(omega, teff, Component.THERMAL)
            nz = a > 0.0
            worst = max(worst, float(np.max(np.abs(a[nz] - b[nz]) / a[nz])))
    return _result(
        "teff-factorization", worst, 1e-12, "thermal part is Planck at T_eff(mu')"
    )


def _check_multipoles(rng) -> CheckResult:
    worst = 0.0
    for beta in (1e-3, 0.123, 0.6, 0.9):
        v = make_boost([0.0, 0.0, beta])
        coeff = spectrum.temperature_multipoles(v, 1.0, 4)
        a0 = math.atanh(beta) / (v.gamma * beta)
        worst = max(worst, abs(coeff.a[0] - a0) / a0)
    v = make_boost([0.0, 0.0, 1e-3])
    coeff = spectrum.temperature_multipoles(v, 1.0, 1)
    worst = max(worst, abs(coeff.a[1] + 1e-3))
    return _result("multipoles", worst, 1e-9, "monopole closed form; dipole -> -beta T")


def _check_stefan_boltzmann(rng) -> CheckResult:
    worst = 0.0
    for t in (0.5, 1.0, 3.0):
        w = radiometry.energy_density_rest(t, Component.THERMAL)
        exact = radiometry.thermal_energy_density_closed_form(t)
        worst = max(worst, abs(w - exact) / exact)
    return _result("stefan-boltzmann", worst, 1e-8, "thermal quadrature vs pi^2 T^4/15")


def _check_cutoff_scaling(rng) -> CheckResult:
    w1 = radiometry.energy_density_rest(
        0.0, Component.ZERO_POINT, radiometry.QuadratureConfig(omega_cutoff=1.0)
    )
    w2 = radiometry.energy_density_rest(
        0.0, Component.ZERO_POINT, radiometry.QuadratureConfig(omega_cutoff=2.0)
    )
    exact = 1.0 / (8.0 * math.pi**2)
    worst = max(abs(w1 - exact) / exact, abs(w2 / w1 - 16.0) / 16.0)
    return _result("cutoff-scaling", worst, 1e-10, "zero-point energy grows as cutoff^4")


def _check_route_agreement(rng) -> CheckResult:
    worst = 0.0
    for beta in (0.0, 0.3, 0.6, 0.9):
        v = make_boost([0.0, 0.0, beta])
        spec = radiometry.energy_density_moving_spectral(1.0, v)
        corr = radiometry.energy_density_moving_correlation(1.0, v)
        expect = radiometry.expected_energy_ratio(v)
        worst = max(
            worst,
            abs(spec.ratio - corr.ratio) / expect,
            abs(spec.ratio - expect) / expect,
            abs(corr.ratio - expect) / expect,
        )
    return _result(
        "route-agreement", worst, 1e-8, "spectral vs correlation vs gamma^2(1 + beta^2/3)"
    )


def _check_quadrature_honesty(rng) -> CheckResult:
    cases = [
        (lambda om: om**3 * spectrum.thermal_occupation(om) / 2.0, math.pi**4 / 15.0),
        (lambda om: om**3 * np.exp(-om), 6.0),
        (lambda om: om**4 * spectrum.thermal_occupation(om) / 2.0, 24.886266123440878),
    ]
    worst = 0.0
    honest = True
    for f, exact in cases:
        r = radiometry.integrate_semi_infinite(f)
        err = abs(r.value - exact)
        worst = max(worst, err / exact)
        honest = honest and err <= max(r.error_estimate, 1e-13 * exact)
    res = _result("quadrature-honesty", worst, 1e-9, "known integrals within reported error")
    if not honest:
        return CheckResult(res.name, False, res.residual, res.tolerance, "error estimate too small")
    return res


def _check_mc_determinism(rng) -> CheckResult:
    cfg = montecarlo.McConfig(n_samples=20_000, seed=7, omega_prime_max=24.0)
    v = make_boost([0.0, 0.0, 0.6])
    a = montecarlo.run_identity_check(1.0, v, cfg)
    b = montecarlo.run_identity_check(1.0, v, cfg)
    c = montecarlo.run_identity_check(1.0, v, cfg, n_threads=2)
    same = (
        np.array_equal(a.estimated, b.estimated)
        and np.array_equal(a.estimated, c.estimated)
        and np.array_equal(a.counts, c.counts)
    )
    return CheckResult(
        "mc-determinism", same, 0.0 if same else 1.0, 0.0, "same seed, serial vs threaded"
    )


def _check_sampler_moments(rng) -> CheckResult:
    n = 400_000
    gen = np.random.Generator(np.random.Philox(np.random.SeedSequence(int(rng.integers(2**31)))))
    omega, khat = montecarlo.sample_rest_modes(1.0, n, gen)
    se_mean = float(np.std(omega)) / math.sqrt(n)
    z_mean = abs(float(np.mean(omega)) - montecarlo.PLANCK_ENERGY_MEAN_X) / se_mean
    frac = float(np.mean(omega < montecarlo.PLANCK_ENERGY_MEDIAN_X))
    z_med = abs(frac - 0.5) / (0.5 / math.sqrt(n))
    z_dir = float(np.max(np.abs(np.mean(khat, axis=0)))) / (1.0 / math.sqrt(3.0 * n))
    worst = max(z_mean, z_med, z_dir)
    return _result("sampler-moments", worst, 5.0, "mean, median and isotropy within 5 sigma")


def _check_mc_identity(rng) -> CheckResult:
    v = make_boost([0.0, 0.0, 0.6])
    cfg = montecarlo.McConfig(n_samples=400_000, seed=int(rng.integers(2**31)), omega_prime_max=24.0)
    rep = montecarlo.run_identity_check(1.0, v, cfg)
    ok = rep.dof >= 50 and 0.5 <= rep.chi2_per_dof <= 1.5 and rep.max_abs_z < 6.0
    detail = f"chi2/dof={rep.chi2_per_dof:.3f} dof={rep.dof} max|z|={rep.max_abs_z:.2f}"
    residual = abs(rep.chi2_per_dof - 1.0) if rep.dof else float("inf")
    return CheckResult("mc-identity", ok, residual, 0.5, detail)


def run_selfcheck(quick: bool = False, seed: int = 1234) -> list[CheckResult]:
    """Run the whole battery; returns one CheckResult per check.

    quick=True skips the statistically heavy sampler checks, leaving a
    battery that runs in well under a second.
    """
    rng = np.random.default_rng(seed)
    checks = [
        _check_gamma_identity,
        _check_component_additivity,
        _check_mode_roundtrip,
        _check_jacobian_freq,
        _check_jacobian_solid_angle,
        _check_lightcone,
        _check_field_invariants,
        _check_aberration_bounds,
        _check_zero_t_invariance,
        _check_pullback_identity,
        _check_occupation_invariance,
        _check_teff_factorization,
        _check_multipoles,
        _check_stefan_boltzmann,
        _check_cutoff_scaling,
        _check_route_agreement,
        _check_quadrature_honesty,
        _check_mc_determinism,
    ]
    if not quick:
        checks += [_check_sampler_moments, _check_mc_identity]
    return [c(rng) for c in checks]
