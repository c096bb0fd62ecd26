"""Casimir free energy, entropy, and pressure between magnetic metal plates.

Two parallel ferromagnetic plates at finite temperature are described by
their plasma frequency, static permeability, and optional relaxation and
permeability dispersion.  The package evaluates the interaction three
independent ways and cross-checks them:

* direct numerics over the discrete imaginary frequencies
  (:func:`free_energy_matsubara`), with a contour-integral variant of
  the thermal part (:func:`free_energy_abel_plana`);
* analytic perturbation series in the relative plasma wavelength for the
  lossless model (:mod:`casimir_mag.perturbation_plasma`);
* analytic decomposition of the dissipative model into a lossless part,
  a zero-frequency shift, and a relaxation term
  (:mod:`casimir_mag.perturbation_drude`).

Entropy and pressure come from Richardson-extrapolated central
differences (:func:`entropy_fd`, :func:`pressure_fd`), and
:mod:`casimir_mag.diagnostics` packages the standard consistency scans.
"""

from .constants import C_LIGHT, HBAR, K_B
from .errors import CasimirMagError, ConfigError, ConvergenceError, ValidityError
from .special_functions import polylog, zeta
from .materials import (
    DimensionlessState,
    MaterialModel,
    PlateConfiguration,
    dimensionless_state,
    epsilon_drude,
    epsilon_plasma,
    load_material,
    mu_at_frequency,
    nickel,
    relaxation_frequency,
)
from .lifshitz_numeric import (
    EntropyResult,
    FreeEnergyResult,
    ReflectionPair,
    entropy_fd,
    free_energy_abel_plana,
    free_energy_matsubara,
    pressure_fd,
    reflection_coefficients,
    zero_frequency_coefficients,
)
from .perturbation_plasma import (
    BCoefficients,
    a_functions,
    b_coefficients,
    entropy_asymptotic,
    integrand_expansion,
    low_T_free_energy,
    thermal_correction_series,
)
from .perturbation_drude import (
    DrudeDecomposition,
    drude_free_energy,
    entropy_at_zero_T,
    expansion_coefficient_R,
    f_gamma_derivative,
    positivity_threshold,
    r_mu,
    relaxation_term_F_gamma,
    zero_frequency_term_F0,
)
from .mu_dispersion import (
    DispersionCorrection,
    dispersion_correction,
    entropy_correction_debye,
    low_T_free_energy_debye,
    pressure_correction,
    thermal_correction_static_mu_zero_only,
)
from .diagnostics import (
    DiscrepancyRow,
    NernstReport,
    discrepancy_table,
    entropy_sign_map,
    nernst_scan,
)

__version__ = "0.1.0"

__all__ = [
    "C_LIGHT",
    "HBAR",
    "K_B",
    "CasimirMagError",
    "ConfigError",
    "ConvergenceError",
    "ValidityError",
    "polylog",
    "zeta",
    "DimensionlessState",
    "MaterialModel",
    "PlateConfiguration",
    "dimensionless_state",
    "epsilon_drude",
    "epsilon_plasma",
    "load_material",
    "mu_at_frequency",
    "nickel",
    "relaxation_frequency",
    "EntropyResult",
    "FreeEnergyResult",
    "ReflectionPair",
    "entropy_fd",
    "free_energy_abel_plana",
    "free_energy_matsubara",
    "pressure_fd",
    "reflection_coefficients",
    "zero_frequency_coefficients",
    "BCoefficients",
    "a_functions",
    "b_coefficients",
    "entropy_asymptotic",
    "integrand_expansion",
    "low_T_free_energy",
    "thermal_correction_series",
    "DrudeDecomposition",
    "drude_free_energy",
    "entropy_at_zero_T",
    "expansion_coefficient_R",
    "f_gamma_derivative",
    "positivity_threshold",
    "r_mu",
    "relaxation_term_F_gamma",
    "zero_frequency_term_F0",
    "DispersionCorrection",
    "dispersion_correction",
    "entropy_correction_debye",
    "low_T_free_energy_debye",
    "pressure_correction",
    "thermal_correction_static_mu_zero_only",
    "DiscrepancyRow",
    "NernstReport",
    "discrepancy_table",
    "entropy_sign_map",
    "nernst_scan",
]
