"""Shared random-geometry builders for the test modules."""

import numpy as np

from relplanck import PhotonMode, make_boost


def random_unit_vectors(rng, n):
    mu = 2.0 * rng.random(n) - 1.0
    phi = 2.0 * np.pi * rng.random(n)
    s = np.sqrt(1.0 - mu**2)
    return np.stack([s * np.cos(phi), s * np.sin(phi), mu], axis=1)


def random_boosts(rng, n, beta_max=0.99):
    mags = beta_max * rng.random(n) ** 0.5
    dirs = random_unit_vectors(rng, n)
    return [make_boost(b * d) for b, d in zip(mags, dirs)]


def random_modes(rng, n, omega_lo=1e-2, omega_hi=1e2):
    omega = np.exp(rng.uniform(np.log(omega_lo), np.log(omega_hi), n))
    dirs = random_unit_vectors(rng, n)
    return [PhotonMode(w, d) for w, d in zip(omega, dirs)]
