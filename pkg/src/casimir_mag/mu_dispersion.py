"""Corrections from the frequency dependence of the permeability.

The magnetic response of a ferromagnet dies off well below optical
frequencies.  Modelling it as a Debye rolloff
mu(i zeta) = 1 + (mu0 - 1) / (1 + ae_m zeta), ae_m = omega_c / omega_m,
leaves every nonzero Matsubara term essentially nonmagnetic while the
zero-frequency term keeps the full static mu0.

The reference point for these corrections is the "static mu, zero
frequency only" scheme: the l >= 1 coefficient series taken with the
nonmagnetic parameter Lambda1 plus a closed-form zero-frequency term
carrying all of the magnetism.  On top of it, the Debye rolloff shifts
the free energy at low temperature by

    Delta F = hbar c zeta(3) (mu0 - 1) ae_m Lambda / (48 a^3 mu0 t^2),

whose negative T derivative is the entropy correction; both vanish
linearly in ae_m and quadratically (linearly) in 1/t (tau), so the
Nernst theorem is untouched.
"""

import math
from dataclasses import dataclass
from typing import Optional

from scipy.special import zeta as _hurwitz_zeta

from .constants import C_LIGHT, HBAR, K_B, ZETA3, ZETA5
from .errors import ValidityError
from .materials import PlateConfiguration, dimensionless_state
from .perturbation_plasma import _b_derivatives, _series_sum, b_coefficients

__all__ = [
    "DispersionCorrection",
    "thermal_correction_static_mu_zero_only",
    "pressure_correction",
    "low_T_free_energy_debye",
    "entropy_correction_debye",
    "dispersion_correction",
]


@dataclass(frozen=True)
class DispersionCorrection:
    """Debye-rolloff shift of free energy (J/m^2) and entropy (J/(K m^2))."""

    free_energy_correction: float
    entropy_correction: float


def thermal_correction_static_mu_zero_only(
    cfg: PlateConfiguration, lam: float, lam1: float, l_max: Optional[int] = None
) -> float:
    """Thermal correction with the magnetism confined to zero frequency.

    The l >= 1 series runs with the nonmagnetic parameter Lambda1 and
    the static permeability enters only through the zero-frequency
    term, expanded through second order:

        Delta_T F = hbar c / (16 pi^2 a^3)
                    sum_l [B0 + Lambda1 B1 + Lambda1^2 B2]
                    + k_B T zeta(3) / (4 pi a^2)
                      (Lambda - Lambda1) [1 - 3 (Lambda + Lambda1)].

    Intended for t = 2 pi / tau of order one or larger; at higher
    temperatures the neglected orders grow.  Returns 0 at T = 0.
    """
    if cfg.T == 0.0:
        return 0.0
    st = dimensionless_state(cfg)
    series = HBAR * C_LIGHT / (16.0 * math.pi ** 2 * cfg.a ** 3) * _series_sum(
        st.t, lam1, l_max
    )
    zero_term = (
        K_B
        * cfg.T
        * ZETA3
        / (4.0 * math.pi * cfg.a ** 2)
        * (lam - lam1)
        * (1.0 - 3.0 * (lam + lam1))
    )
    return series + zero_term


def pressure_correction(
    cfg: PlateConfiguration, lam: float, lam1: float, l_max: Optional[int] = None
) -> float:
    """Thermal pressure in the same scheme, the exact -d/da of
    ``thermal_correction_static_mu_zero_only``.

    Differentiating the series term by term (k = l t scales like 1/a,
    Lambda like 1/a) gives

        Delta_T P = hbar c / (16 pi^2 a^4)
                    sum_l [(3 B0 + k B0') + (4 B1 + k B1') Lambda1
                           + (5 B2 + k B2') Lambda1^2]
                    + 3 k_B T zeta(3) / (4 pi a^3)
                      (Lambda - Lambda1) [1 - 4 (Lambda + Lambda1)].

    The combinations (3+j) B_j + k B_j' decay like 1/k^4, 1/k^3 and
    exponentially, so the tails are completed with Hurwitz zetas.

    Returns
    -------
    float
        Pressure correction in Pa; 0 at T = 0.
    """
    if cfg.T == 0.0:
        return 0.0
    st = dimensionless_state(cfg)
    t = st.t
    if l_max is not None and l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    L = l_max if l_max is not None else max(int(math.ceil(25.0 / t)) + 5, 8)
    total = 0.0
    for l in range(1, L + 1):
        k = l * t
        b = b_coefficients(l, t)
        db0, db1, db2 = _b_derivatives(l, t)
        total += (
            (3.0 * b.b0 + k * db0)
            + lam1 * (4.0 * b.b1 + k * db1)
            + lam1 * lam1 * (5.0 * b.b2 + k * db2)
        )
    q = float(L + 1)
    tail0 = -2.0 / t ** 4 * float(_hurwitz_zeta(4, q))
    tail1 = -2.0 * math.pi / t ** 3 * float(_hurwitz_zeta(3, q))
    total += tail0 + lam1 * tail1
    series = HBAR * C_LIGHT / (16.0 * math.pi ** 2 * cfg.a ** 4) * total
    zero_term = (
        3.0
        * K_B
        * cfg.T
        * ZETA3
        / (4.0 * math.pi * cfg.a ** 3)
        * (lam - lam1)
        * (1.0 - 4.0 * (lam + lam1))
    )
    return series + zero_term


def _require_similar(cfg: PlateConfiguration, what: str):
    if not cfg.similar:
        raise ValidityError(f"{what} is derived for two similar plates")


def low_T_free_energy_debye(cfg: PlateConfiguration, lam: float) -> float:
    """Low-temperature thermal correction including the Debye rolloff.

    The static-permeability power terms plus the dispersion shift:

        Delta_T F = -(hbar c / 8 pi a^3)
                    [zeta(3)/(2 t^3) - pi^3/(90 t^4)
                     + Lambda (zeta(3)/t^3 - 2 pi^3/(45 t^4))
                     - Lambda^2 zeta(5)/t^5]
                    + hbar c zeta(3) (mu0 - 1) ae_m Lambda
                      / (48 a^3 mu0 t^2).

    Assumes t >> 1; exponentially small terms are dropped, and the
    cross term of order Lambda^2 ae_m / t^2 is not included.  Requires
    two similar plates (the dispersion shift is derived per material).
    Materials without Debye dispersion get ae_m = 0 and reduce to the
    static form.
    """
    _require_similar(cfg, "low_T_free_energy_debye")
    st = dimensionless_state(cfg)
    t = st.t
    if cfg.T == 0.0:
        return 0.0
    pi = math.pi
    base = (
        ZETA3 / (2.0 * t ** 3)
        - pi ** 3 / (90.0 * t ** 4)
        + lam * (ZETA3 / t ** 3 - 2.0 * pi ** 3 / (45.0 * t ** 4))
        - lam * lam * ZETA5 / t ** 5
    )
    mu0 = cfg.material_1.mu0
    ae = st.ae_m[0]
    shift = (
        HBAR
        * C_LIGHT
        * ZETA3
        * (mu0 - 1.0)
        * ae
        * lam
        / (48.0 * cfg.a ** 3 * mu0 * t * t)
    )
    return -HBAR * C_LIGHT / (8.0 * pi * cfg.a ** 3) * base + shift


def entropy_correction_debye(cfg: PlateConfiguration, lam: float) -> float:
    """Entropy shift caused by the Debye rolloff of the permeability.

    The negative temperature derivative of the dispersion shift in
    ``low_T_free_energy_debye``:

        Delta S = -k_B zeta(3) (mu0 - 1) ae_m Lambda tau
                  / (24 pi a^2 mu0).

    Linear in tau, so it vanishes at T = 0 and leaves the Nernst
    theorem intact while reducing the low-temperature entropy.
    Requires two similar plates.
    """
    _require_similar(cfg, "entropy_correction_debye")
    st = dimensionless_state(cfg)
    mu0 = cfg.material_1.mu0
    ae = st.ae_m[0]
    return (
        -K_B
        * ZETA3
        * (mu0 - 1.0)
        * ae
        * lam
        * st.tau
        / (24.0 * math.pi * cfg.a ** 2 * mu0)
    )


def dispersion_correction(cfg: PlateConfiguration, lam: float) -> DispersionCorrection:
    """Debye-rolloff corrections as a pair (free energy, entropy).

    The free energy part is the shift alone, the difference between
    ``low_T_free_energy_debye`` and its static (ae_m = 0) base form.
    """
    _require_similar(cfg, "dispersion_correction")
    st = dimensionless_state(cfg)
    mu0 = cfg.material_1.mu0
    ae = st.ae_m[0]
    if cfg.T == 0.0:
        shift = 0.0
    else:
        shift = (
            HBAR
            * C_LIGHT
            * ZETA3
            * (mu0 - 1.0)
            * ae
            * lam
            / (48.0 * cfg.a ** 3 * mu0 * st.t ** 2)
        )
    return DispersionCorrection(
        free_energy_correction=shift,
        entropy_correction=entropy_correction_debye(cfg, lam),
    )
