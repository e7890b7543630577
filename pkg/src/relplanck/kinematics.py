"""Lorentz transformation of photon modes and electromagnetic field pairs.

Conventions: primed quantities live in the frame moving with velocity
``beta`` relative to the radiation rest frame, and mu = khat . vhat is the
cosine between a propagation direction and the boost axis.  The mode map is

    omega' = gamma (1 - khat . beta) omega
    mu'    = (mu - |beta|) / (1 - |beta| mu)

with frequency Jacobian d(omega)/d(omega') = gamma (1 + |beta| mu') and
solid-angle Jacobian d(Omega)/d(Omega') = 1 / (gamma (1 + |beta| mu'))^2,
both evaluated at the boosted direction.  ``boost_mu`` is the vectorized
scalar-cosine path; it uses the same formulas as the PhotonMode API.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import BoostVelocity, PhotonMode

__all__ = [
    "ModeTransformResult",
    "FieldPair",
    "doppler_factor",
    "inverse_doppler_factor",
    "doppler",
    "aberrate_mu",
    "aberrate",
    "boost_mode",
    "inverse_boost_mode",
    "boost_mu",
    "field_boost",
    "direction_with_cosine",
]

# below this, 1 - |mu| is noise and the transverse direction is undefined
_COLLINEAR_EPS = 1e-14


@dataclass(frozen=True, eq=False)
class ModeTransformResult:
    """Boosted mode together with the Jacobians of the mode map at that point."""

    mode_prime: PhotonMode
    jac_freq: float
    jac_solid_angle: float


@dataclass(frozen=True, eq=False)
class FieldPair:
    """An (E, B) amplitude pair at a point; no normalization implied."""

    E: np.ndarray
    B: np.ndarray

    def __post_init__(self):
        for name in ("E", "B"):
            v = np.array(getattr(self, name), dtype=float, copy=True)
            if v.shape != (3,):
                raise ValueError(f"{name} must be a 3-vector, got shape {v.shape}")
            if not np.all(np.isfinite(v)):
                raise ValueError(f"{name} components must be finite")
            v.setflags(write=False)
            object.__setattr__(self, name, v)


def doppler_factor(mu, v: BoostVelocity):
    """gamma (1 - |beta| mu) = omega'/omega at rest-frame cosine mu.  Vectorized."""
    return v.gamma * (1.0 - v.beta_mag * np.asarray(mu, dtype=float))


def inverse_doppler_factor(mu_prime, v: BoostVelocity):
    """gamma (1 + |beta| mu') = omega/omega' at moving-frame cosine mu'.  Vectorized."""
    return v.gamma * (1.0 + v.beta_mag * np.asarray(mu_prime, dtype=float))


def doppler(mode: PhotonMode, v: BoostVelocity) -> float:
    """Boosted frequency of a mode; identity at beta = 0."""
    mu = float(mode.khat @ v.vhat)
    return mode.omega * float(doppler_factor(mu, v))


def aberrate_mu(mu, v: BoostVelocity):
    """Boosted propagation cosine (mu - |beta|) / (1 - |beta| mu).  Vectorized."""
    mu = np.asarray(mu, dtype=float)
    b = v.beta_mag
    return (mu - b) / (1.0 - b * mu)


def aberrate(mode: PhotonMode, v: BoostVelocity) -> np.ndarray:
    """Boosted unit propagation direction.

    The full wavevector is transformed and renormalized, so the azimuth
    about vhat is preserved exactly while the cosine follows aberrate_mu.
    Within 1e-14 of collinear the transverse part is pure noise and the
    result snaps to +-vhat.
    """
    if v.is_rest:
        return mode.khat
    khat = mode.khat
    mu = float(khat @ v.vhat)
    kpar = v.gamma * (mu - v.beta_mag)
    if 1.0 - abs(mu) < _COLLINEAR_EPS:
        return v.vhat if kpar >= 0.0 else -v.vhat
    kvec = (khat - mu * v.vhat) + kpar * v.vhat
    return kvec / np.linalg.norm(kvec)


def boost_mode(mode: PhotonMode, v: BoostVelocity) -> ModeTransformResult:
    """Apply Doppler shift and aberration; report the Jacobians alongside.

    At beta = 0 the input mode is returned unchanged with unit Jacobians.
    """
    if v.is_rest:
        return ModeTransformResult(mode, 1.0, 1.0)
    mu = float(mode.khat @ v.vhat)
    omega_p = mode.omega * float(doppler_factor(mu, v))
    khat_p = aberrate(mode, v)
    mu_p = float(khat_p @ v.vhat)
    jac_freq = float(inverse_doppler_factor(mu_p, v))
    return ModeTransformResult(PhotonMode(omega_p, khat_p), jac_freq, 1.0 / jac_freq**2)


def inverse_boost_mode(mode_prime: PhotonMode, v: BoostVelocity) -> PhotonMode:
    """Map a moving-frame mode back to the rest frame.

    Implemented as the forward map with the velocity reversed, so the two
    directions can never drift apart.
    """
    return boost_mode(mode_prime, v.reversed()).mode_prime


def boost_mu(omega, mu, v: BoostVelocity):
    """Vectorized boost of (omega, mu) pairs; no 3-vector bookkeeping.

    Returns (omega', mu', jac_freq, jac_solid_angle) as arrays broadcast
    against each other.  Same formulas as boost_mode.
    """
    omega = np.asarray(omega, dtype=float)
    omega_p = omega * doppler_factor(mu, v)
    mu_p = aberrate_mu(mu, v)
    jac_freq = inverse_doppler_factor(mu_p, v)
    return omega_p, mu_p, jac_freq, 1.0 / jac_freq**2


def field_boost(f: FieldPair, v: BoostVelocity) -> FieldPair:
    """Boost an (E, B) pair: longitudinal parts fixed, transverse mixed with gamma.

        E' = (vhat.E) vhat + gamma [E - (vhat.E) vhat + beta x B]
        B' = (vhat.B) vhat + gamma [B - (vhat.B) vhat - beta x E]

    Identity at beta = 0.
    """
    if v.is_rest:
        return f
    vh = v.vhat
    g = v.gamma
    E, B = f.E, f.B
    E_par = (E @ vh) * vh
    B_par = (B @ vh) * vh
    E_p = E_par + g * (E - E_par + np.cross(v.beta, B))
    B_p = B_par + g * (B - B_par - np.cross(v.beta, E))
    return FieldPair(E_p, B_p)


def direction_with_cosine(mu, v: BoostVelocity, azimuth: float = 0.0) -> np.ndarray:
    """A unit vector whose cosine with v.vhat is mu, at the given azimuth."""
    mu = float(mu)
    if not -1.0 <= mu <= 1.0:
        raise ValueError(f"cosine must lie in [-1, 1], got {mu}")
    vh = v.vhat
    helper = np.array([1.0, 0.0, 0.0]) if abs(vh[0]) <= 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(vh, helper)
    e1 = e1 / np.linalg.norm(e1)
    e2 = np.cross(vh, e1)
    s = np.sqrt(max(0.0, (1.0 - mu) * (1.0 + mu)))
    k = mu * vh + s * (np.cos(azimuth) * e1 + np.sin(azimuth) * e2)
    return k / np.linalg.norm(k)
