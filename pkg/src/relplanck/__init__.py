"""Blackbody radiation seen from a uniformly moving frame.

The package evaluates the Planck spectral distribution with its zero-point
part in the radiation rest frame, Lorentz-transforms photon modes and
electromagnetic fields, computes the boosted spectral distribution and the
direction-dependent effective temperature, and verifies the transformation
identities by quadrature and Monte Carlo.  Temperature always means the
rest-frame temperature; it is never transformed.
"""

from .core import (
    NATURAL,
    BoostVelocity,
    Component,
    PhotonMode,
    RestTemperature,
    UnitsMode,
    UnitSystem,
    dimensionless_energy,
    frequency_from_dimensionless,
    make_boost,
    temperature_value,
    thermal_frequency_scale,
)
from .kinematics import (
    FieldPair,
    ModeTransformResult,
    aberrate,
    aberrate_mu,
    boost_mode,
    boost_mu,
    direction_with_cosine,
    doppler,
    doppler_factor,
    field_boost,
    inverse_boost_mode,
    inverse_doppler_factor,
)
from .montecarlo import (
    PLANCK_ENERGY_MEAN_X,
    PLANCK_ENERGY_MEDIAN_X,
    McConfig,
    McReport,
    planck_energy_cdf,
    run_identity_check,
    sample_rest_mode,
    sample_rest_modes,
)
from .radiometry import (
    CorrelationCoincidence,
    EnergyDensityReport,
    QuadratureConfig,
    QuadratureConvergenceError,
    QuadratureResult,
    correlation_coincidence,
    energy_density_moving_correlation,
    energy_density_moving_spectral,
    energy_density_rest,
    expected_energy_ratio,
    integrate_semi_infinite,
    thermal_energy_density_closed_form,
)
from .selfcheck import CheckResult, run_selfcheck
from .spectrum import (
    MultipoleCoefficients,
    effective_temperature,
    effective_temperature_mu,
    rho_moving,
    rho_moving_mu,
    rho_moving_pullback,
    rho_moving_pullback_mu,
    rho_rest,
    spectral_prefactor,
    temperature_multipoles,
    thermal_occupation,
)

__version__ = "0.1.0"
