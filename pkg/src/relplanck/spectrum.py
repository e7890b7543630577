"""Planck spectral distributions in the rest frame and in a boosted frame.

The spectral density here is energy per unit volume, per unit angular
frequency, per steradian of propagation direction:

    rest frame:    rho(omega)        = (hbar / (2 pi c)^3) omega^3 coth(hbar omega / 2 k_B T)
    moving frame:  rho'(omega', mu') = (hbar / (2 pi c)^3) omega'^3 coth(hbar D omega' / 2 k_B T)

with D = gamma (1 + |beta| mu') the frequency pull-back factor and
mu' = khat' . vhat.  The coth splits as coth(x) = 1 + 2/(e^{2x} - 1): the 1
is the temperature-independent zero-point part (identical in both frames),
the remainder the thermal Planck part.  The moving-frame thermal part is a
rest-frame Planck law at the direction-dependent effective temperature
T_eff(mu') = T / D, which is what temperature_multipoles expands.

At T = 0 only the zero-point part survives and the density is the same
function of (omega, khat) in every frame.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import NATURAL, BoostVelocity, Component, UnitSystem, temperature_value
from .kinematics import inverse_doppler_factor

__all__ = [
    "spectral_prefactor",
    "thermal_occupation",
    "rho_rest",
    "rho_moving",
    "rho_moving_mu",
    "rho_moving_pullback",
    "rho_moving_pullback_mu",
    "effective_temperature",
    "effective_temperature_mu",
    "MultipoleCoefficients",
    "temperature_multipoles",
]


def spectral_prefactor(units: UnitSystem = NATURAL) -> float:
    """hbar / (2 pi c)^3, the overall scale of the spectral density."""
    return units.hbar / (2.0 * np.pi * units.c) ** 3


def thermal_occupation(z):
    """The thermal factor 2 / (e^z - 1) of the coth split, for z > 0.

    Written as 2 e^{-z} / (1 - e^{-z}): no overflow at large z (the
    numerator underflows smoothly to an exact 0 in the deep Wien tail) and
    expm1 keeps full precision at small z.  Vectorized.
    """
    z = np.asarray(z, dtype=float)
    return 2.0 * np.exp(-z) / (-np.expm1(-z))


def _check_nonneg_omega(om: np.ndarray, label: str):
    if np.any(om < 0.0) or not np.all(np.isfinite(om)):
        raise ValueError(f"{label} must be finite and >= 0")


def _planck_density(om, z_of_om, t, component, units):
    """Assemble prefactor * om^3 * {1, occupation, coth} from the z map.

    z_of_om maps frequencies to the coth argument; for the rest frame that
    is hbar om / (k_B T), for the moving frame it carries the extra Doppler
    factor.  om = 0 and T = 0 give a thermal part of exactly 0.
    """
    if not isinstance(component, Component):
        raise TypeError(f"component must be a Component, got {component!r}")
    zero_point = spectral_prefactor(units) * om**3
    if component is Component.ZERO_POINT:
        return zero_point
    if t == 0.0:
        thermal = np.zeros_like(zero_point)
    else:
        z = z_of_om(om)
        positive = z > 0.0
        occ = np.where(positive, thermal_occupation(np.where(positive, z, 1.0)), 0.0)
        thermal = zero_point * occ
    if component is Component.THERMAL:
        return thermal
    return zero_point + thermal


def _maybe_scalar(out, *inputs):
    if all(np.ndim(x) == 0 for x in inputs):
        return float(out)
    return out


def rho_rest(omega, T, component: Component = Component.TOTAL, units: UnitSystem = NATURAL):
    """Rest-frame spectral density; isotropic, so no direction argument.

    Vectorized over omega.  The total is exactly zero-point + thermal.
    """
    om = np.asarray(omega, dtype=float)
    _check_nonneg_omega(om, "omega")
    t = temperature_value(T)
    scale = units.k_B * t / units.hbar if t > 0.0 else 1.0
    out = _planck_density(om, lambda w: w / scale, t, component, units)
    return _maybe_scalar(out, omega)


def rho_moving_mu(
    omega_prime,
    mu_prime,
    v: BoostVelocity,
    T,
    component: Component = Component.TOTAL,
    units: UnitSystem = NATURAL,
):
    """Moving-frame spectral density as a function of the cosine mu' = khat' . vhat.

    Broadcasts omega_prime against mu_prime.  The zero-point part is
    unchanged by the boost; the thermal part is the rest-frame Planck law
    at T_eff = T / (gamma (1 + |beta| mu')).
    """
    om = np.asarray(omega_prime, dtype=float)
    _check_nonneg_omega(om, "omega_prime")
    mu = np.asarray(mu_prime, dtype=float)
    if np.any(np.abs(mu) > 1.0 + 1e-12):
        raise ValueError("mu_prime must lie in [-1, 1]")
    t = temperature_value(T)
    d = inverse_doppler_factor(mu, v)
    om_b, d_b = np.broadcast_arrays(om, d)
    scale = units.k_B * t / units.hbar if t > 0.0 else 1.0
    out = _planck_density(om_b, lambda w: d_b * w / scale, t, component, units)
    return _maybe_scalar(out, omega_prime, mu_prime)


def rho_moving(
    omega_prime,
    khat_prime,
    v: BoostVelocity,
    T,
    component: Component = Component.TOTAL,
    units: UnitSystem = NATURAL,
):
    """rho_moving_mu with the cosine taken from an explicit direction vector."""
    mu = _cosine_along_boost(khat_prime, v)
    return rho_moving_mu(omega_prime, mu, v, T, component, units)


def rho_moving_pullback_mu(
    omega_prime,
    mu_prime,
    v: BoostVelocity,
    T,
    component: Component = Component.TOTAL,
    units: UnitSystem = NATURAL,
):
    """Moving-frame density by pulling back to the rest frame.

    rho'(omega', mu') = rho(D omega') / D^3 with D = gamma (1 + |beta| mu'):
    the rest-frame density at the pulled-back frequency, divided by the
    cubed frequency ratio.  Agrees with rho_moving_mu identically; the two
    are kept as separate code paths on purpose.
    """
    om = np.asarray(omega_prime, dtype=float)
    _check_nonneg_omega(om, "omega_prime")
    mu = np.asarray(mu_prime, dtype=float)
    if np.any(np.abs(mu) > 1.0 + 1e-12):
        raise ValueError("mu_prime must lie in [-1, 1]")
    d = inverse_doppler_factor(mu, v)
    out = rho_rest(d * om, T, component, units) / d**3
    return _maybe_scalar(out, omega_prime, mu_prime)


def rho_moving_pullback(
    omega_prime,
    khat_prime,
    v: BoostVelocity,
    T,
    component: Component = Component.TOTAL,
    units: UnitSystem = NATURAL,
):
    mu = _cosine_along_boost(khat_prime, v)
    return rho_moving_pullback_mu(omega_prime, mu, v, T, component, units)


def _cosine_along_boost(khat_prime, v: BoostVelocity) -> float:
    k = np.asarray(khat_prime, dtype=float)
    if k.shape != (3,):
        raise ValueError(f"khat_prime must be a 3-vector, got shape {k.shape}")
    norm = float(np.linalg.norm(k))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"khat_prime must be a unit vector, |khat_prime| = {norm}")
    return float(k @ v.vhat) / norm


def effective_temperature_mu(mu_prime, v: BoostVelocity, T):
    """T / (gamma (1 + |beta| mu')): the rest-frame temperature whose Planck law
    equals the moving-frame thermal spectrum at cosine mu'.  Vectorized."""
    t = temperature_value(T)
    out = t / inverse_doppler_factor(mu_prime, v)
    return _maybe_scalar(out, mu_prime)


def effective_temperature(khat_prime, v: BoostVelocity, T) -> float:
    return effective_temperature_mu(_cosine_along_boost(khat_prime, v), v, T)


@dataclass(frozen=True, eq=False)
class MultipoleCoefficients:
    """Legendre coefficients of the effective temperature over mu'.

    T_eff(mu') = sum_l a[l] P_l(mu') with mu' = khat' . vhat the cosine of
    the propagation direction.  Note this is the propagation-direction
    convention: an observer scanning arrival directions sees the sign of
    every odd multipole flipped.  The dipole a[1] is negative.
    """

    l_max: int
    a: np.ndarray
    convention: str = "T_eff(mu') = sum_l a_l P_l(mu'), mu' = propagation cosine khat'.vhat"

    def __post_init__(self):
        arr = np.array(self.a, dtype=float, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "a", arr)


def temperature_multipoles(
    v: BoostVelocity, T, l_max: int, n_nodes: int | None = None
) -> MultipoleCoefficients:
    """Project T_eff(mu') on Legendre polynomials by Gauss-Legendre quadrature.

        a_l = (2l + 1)/2 * integral_{-1}^{1} T_eff(mu') P_l(mu') d mu'

    T_eff is smooth on [-1, 1] for |beta| < 1 but has a pole at
    mu' = -1/|beta| just outside the interval, so Gauss-Legendre error
    decays like rho^{-2n} with rho = 1/|beta| + sqrt(1/beta^2 - 1).  The
    default node count is sized from that rate (and kept comfortably above
    l_max) so the projection is converged to rounding even near |beta| = 1.
    """
    if l_max < 0:
        raise ValueError(f"l_max must be >= 0, got {l_max}")
    if n_nodes is not None:
        n = n_nodes
    else:
        n = max(64, 2 * (l_max + 1))
        if v.beta_mag > 0.0:
            # want rho^{-2n} below double rounding: n >= 38 / ln(rho)
            n = max(n, math.ceil(38.0 / math.acosh(1.0 / v.beta_mag)))
    if n <= l_max:
        raise ValueError("need more quadrature nodes than l_max")
    x, w = np.polynomial.legendre.leggauss(n)
    teff = effective_temperature_mu(x, v, T)
    vander = np.polynomial.legendre.legvander(x, l_max)
    ells = np.arange(l_max + 1)
    a = (2.0 * ells + 1.0) / 2.0 * (vander.T @ (w * teff))
    return MultipoleCoefficients(l_max=l_max, a=a)
