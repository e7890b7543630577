"""Unit systems, boost velocities, photon modes, and the spectral split.

Shared domain types for the whole package.  The default unit system is
natural (hbar = c = k_B = 1); SI constants are available via
``UnitSystem.si()``.  Every type here is a frozen dataclass, immutable
after construction and safe to share across threads.  Temperature always
means the temperature in the radiation rest frame; nothing in this package
ever boosts a temperature, only the spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

__all__ = [
    "Component",
    "UnitsMode",
    "UnitSystem",
    "NATURAL",
    "BoostVelocity",
    "make_boost",
    "PhotonMode",
    "RestTemperature",
    "temperature_value",
    "thermal_frequency_scale",
    "dimensionless_energy",
    "frequency_from_dimensionless",
]


class Component(Enum):
    """Selector for the zero-point / thermal split of the spectral density.

    The split follows coth(x) = 1 + 2/(e^{2x} - 1): TOTAL is identically
    ZERO_POINT + THERMAL, pointwise, in every frame.
    """

    ZERO_POINT = "zero-point"
    THERMAL = "thermal"
    TOTAL = "total"


class UnitsMode(Enum):
    NATURAL = "natural"
    CUSTOM = "custom"


@dataclass(frozen=True)
class UnitSystem:
    """Values of hbar, c and k_B fixing the unit system.

    The natural system pins all three to 1 exactly; anything else is
    CUSTOM.  Constants must be positive and finite.
    """

    hbar: float = 1.0
    c: float = 1.0
    k_B: float = 1.0
    mode: UnitsMode = UnitsMode.NATURAL

    def __post_init__(self):
        for name in ("hbar", "c", "k_B"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0.0):
                raise ValueError(f"{name} must be positive and finite, got {value!r}")
        if self.mode is UnitsMode.NATURAL and (self.hbar, self.c, self.k_B) != (1.0, 1.0, 1.0):
            raise ValueError("natural units require hbar = c = k_B = 1 exactly")

    @classmethod
    def custom(cls, hbar: float, c: float, k_B: float) -> "UnitSystem":
        return cls(float(hbar), float(c), float(k_B), UnitsMode.CUSTOM)

    @classmethod
    def si(cls) -> "UnitSystem":
        """CODATA 2018 values in J s, m/s, J/K."""
        return cls(1.054571817e-34, 299792458.0, 1.380649e-23, UnitsMode.CUSTOM)


NATURAL = UnitSystem()


@dataclass(frozen=True, eq=False)
class BoostVelocity:
    """Dimensionless frame velocity beta = v/c with |beta| < 1.

    gamma is computed once at construction as 1/sqrt((1 - |b|)(1 + |b|));
    the factored form loses no precision as |beta| approaches 1.  ``vhat``
    is the unit vector along beta; at beta = 0 it is a fixed placeholder
    (+z) that no formula depends on.
    """

    beta: np.ndarray
    beta_mag: float = field(init=False)
    gamma: float = field(init=False)
    vhat: np.ndarray = field(init=False)

    def __post_init__(self):
        b = np.array(self.beta, dtype=float, copy=True)
        if b.shape != (3,):
            raise ValueError(f"beta must be a 3-vector, got shape {b.shape}")
        if not np.all(np.isfinite(b)):
            raise ValueError("beta components must be finite")
        bmag = float(np.linalg.norm(b))
        if bmag >= 1.0:
            raise ValueError(f"|beta| = {bmag} must be < 1")
        vhat = b / bmag if bmag > 0.0 else np.array([0.0, 0.0, 1.0])
        gamma = 1.0 / math.sqrt((1.0 - bmag) * (1.0 + bmag))
        b.setflags(write=False)
        vhat.setflags(write=False)
        object.__setattr__(self, "beta", b)
        object.__setattr__(self, "beta_mag", bmag)
        object.__setattr__(self, "gamma", gamma)
        object.__setattr__(self, "vhat", vhat)

    @property
    def is_rest(self) -> bool:
        return self.beta_mag == 0.0

    def reversed(self) -> "BoostVelocity":
        """The inverse boost, -beta."""
        return BoostVelocity(-self.beta)


def make_boost(beta) -> BoostVelocity:
    """Build a BoostVelocity from any 3-sequence; rejects |beta| >= 1."""
    return BoostVelocity(np.asarray(beta, dtype=float))


_KHAT_NORM_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PhotonMode:
    """A photon mode: angular frequency omega >= 0, unit propagation direction khat.

    Directions within 1e-9 of unit length are renormalized on construction;
    anything further off is rejected as a caller bug.
    """

    omega: float
    khat: np.ndarray

    def __post_init__(self):
        om = float(self.omega)
        if not (math.isfinite(om) and om >= 0.0):
            raise ValueError(f"omega must be finite and >= 0, got {self.omega!r}")
        k = np.array(self.khat, dtype=float, copy=True)
        if k.shape != (3,):
            raise ValueError(f"khat must be a 3-vector, got shape {k.shape}")
        if not np.all(np.isfinite(k)):
            raise ValueError("khat components must be finite")
        norm = float(np.linalg.norm(k))
        if abs(norm - 1.0) > _KHAT_NORM_TOL:
            raise ValueError(f"khat must be a unit vector, |khat| = {norm}")
        k = k / norm
        k.setflags(write=False)
        object.__setattr__(self, "omega", om)
        object.__setattr__(self, "khat", k)


@dataclass(frozen=True)
class RestTemperature:
    """Temperature of the radiation in its own rest frame."""

    T: float

    def __post_init__(self):
        t = float(self.T)
        if not (math.isfinite(t) and t >= 0.0):
            raise ValueError(f"temperature must be finite and >= 0, got {self.T!r}")
        object.__setattr__(self, "T", t)


def temperature_value(T) -> float:
    """Accept a RestTemperature or a bare number; return the value as float."""
    if isinstance(T, RestTemperature):
        return T.T
    t = float(T)
    if not (math.isfinite(t) and t >= 0.0):
        raise ValueError(f"temperature must be finite and >= 0, got {T!r}")
    return t


def thermal_frequency_scale(T, units: UnitSystem = NATURAL):
    """Characteristic angular frequency k_B T / hbar of the thermal spectrum.

    Returns None at T = 0, where the thermal part vanishes and no scale
    exists; callers must branch rather than divide.
    """
    t = temperature_value(T)
    if t == 0.0:
        return None
    return units.k_B * t / units.hbar


def dimensionless_energy(omega, T, units: UnitSystem = NATURAL):
    """x = hbar omega / (k_B T).  Vectorized over omega; requires T > 0."""
    t = temperature_value(T)
    if t == 0.0:
        raise ValueError("dimensionless energy is undefined at T = 0")
    return units.hbar * np.asarray(omega, dtype=float) / (units.k_B * t)


def frequency_from_dimensionless(x, T, units: UnitSystem = NATURAL):
    """Inverse of dimensionless_energy: omega = x k_B T / hbar."""
    t = temperature_value(T)
    if t == 0.0:
        raise ValueError("no frequency scale at T = 0")
    return np.asarray(x, dtype=float) * (units.k_B * t / units.hbar)
