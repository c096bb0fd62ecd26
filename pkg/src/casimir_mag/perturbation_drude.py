"""Analytic Drude-model corrections on top of the plasma-model result.

For small relaxation frequency the Drude free energy decomposes as

    F_D = F_p + F_0 + F_gamma,

where F_p is the plasma-model free energy, F_0 is the temperature-
linear shift from the zero-frequency TE mode (whose reflection drops
from the plasma value to the purely magnetic (mu0 - 1) / (mu0 + 1)
when dissipation is switched on), and F_gamma collects the first-order
relaxation effect of all nonzero Matsubara frequencies.

F_0 does not vanish as T -> 0 in slope, so it fixes the Drude entropy
at zero temperature; its sign changes with separation for magnetic
plates, which is what ``positivity_threshold`` locates.
"""

import math
from dataclasses import dataclass

from .constants import C_LIGHT, HBAR, K_B, ZETA3, ZETA_PRIME_3
from .errors import ValidityError
from .materials import (
    DimensionlessState,
    MaterialModel,
    PlateConfiguration,
    dimensionless_state,
    relaxation_frequency,
)
from .special_functions import polylog
from .perturbation_plasma import thermal_correction_series
from .lifshitz_numeric import _zero_t_energy

__all__ = [
    "DrudeDecomposition",
    "r_mu",
    "expansion_coefficient_R",
    "zero_frequency_term_F0",
    "relaxation_term_F_gamma",
    "drude_free_energy",
    "entropy_at_zero_T",
    "positivity_threshold",
    "f_gamma_derivative",
]

# Constant in the relaxation term, 2 + zeta'(3)/zeta(3).
_F_GAMMA_CONST = 2.0 + ZETA_PRIME_3 / ZETA3


@dataclass(frozen=True)
class DrudeDecomposition:
    """Drude free energy split into its analytic pieces, all J/m^2.

    Attributes
    ----------
    plasma_part : float
        Zero-temperature energy plus the plasma-model thermal series.
    zero_frequency_shift : float
        Temperature-linear term from the altered zero-frequency TE
        reflection.
    relaxation_part : float
        First-order effect of the relaxation frequency on all l >= 1
        terms.
    total : float
        Sum of the three.
    """

    plasma_part: float
    zero_frequency_shift: float
    relaxation_part: float
    total: float


def r_mu(mu0: float) -> float:
    """Zero-frequency TE reflection of a dissipative magnetic plate."""
    if mu0 < 1.0:
        raise ValueError(f"requires mu0 >= 1, got {mu0}")
    return (mu0 - 1.0) / (mu0 + 1.0)


def expansion_coefficient_R(
    alpha: str,
    n: int,
    zeta_l: float,
    y: float,
    state: DimensionlessState,
    mu0: float,
) -> float:
    """First-order relaxation coefficient of one plate at one (zeta, y).

    Defined by the expansion of the two-plate reflection product,

        r_D1 r_D2 = r_p1 r_p2 - sum_n (tilde_gamma_n / zeta) R_n + O(gamma^2),

    per polarization alpha in {"TM", "TE"}, with the plasma-model
    coefficients on the right.  Both plates share the static
    permeability mu0; the plate index n in {1, 2} selects beta_n.

    Notes
    -----
    The sign convention and both closed forms are pinned by
    ``test_r_matches_reflection_product_derivative``, which compares
    against the exact product difference at small relaxation.
    """
    if alpha not in ("TM", "TE"):
        raise ValueError(f"alpha must be 'TM' or 'TE', got {alpha!r}")
    if n not in (1, 2):
        raise ValueError(f"plate index must be 1 or 2, got {n}")
    if y < zeta_l:
        raise ValueError(f"requires y >= zeta_l, got y={y}, zeta_l={zeta_l}")
    if zeta_l <= 0.0:
        raise ValueError(f"requires zeta_l > 0, got {zeta_l}")
    beta = state.beta[n - 1]
    z2 = zeta_l * zeta_l
    y2 = y * y
    root_n = math.sqrt(beta * beta * y2 + beta * beta * z2 * (mu0 - 1.0) + mu0)

    prod_tm = 1.0
    prod_te = 1.0
    for wt in state.tilde_omega_p:
        e2 = z2 + wt * wt
        q2 = mu0 * e2 - z2
        root = math.sqrt(y2 + q2)
        prod_tm *= (e2 * y - z2 * root) / (e2 * y + z2 * root)
        prod_te *= (mu0 * y - root) / (mu0 * y + root)

    if alpha == "TM":
        b2 = beta * beta
        den = b2 * z2 * (2.0 * y2 - z2 * (b2 * z2 * (mu0 - 1.0) + mu0)) + y2
        num = beta * z2 * y * (mu0 + b2 * (z2 * mu0 + 2.0 * (y2 - z2)))
        return num * prod_tm / (root_n * den)
    b2 = beta * beta
    den = b2 * (mu0 * mu0 - 1.0) * y2 - b2 * z2 * (mu0 - 1.0) - mu0
    return -beta * mu0 * mu0 * y * prod_te / (root_n * den)


def zero_frequency_term_F0(cfg: PlateConfiguration, lam: float) -> float:
    """Temperature-linear zero-frequency shift of the Drude free energy.

    The true zero-frequency term of the Drude sum minus the smooth
    zero-frequency limit implied by the plasma-model series, expanded
    through second order in Lambda:

        F_0 = k_B T zeta(3) / (16 pi a^2)
              [1 - Li3(r_mu1 r_mu2) / zeta(3) - 4 Lambda + 12 Lambda^2].

    Returns 0 at T = 0.
    """
    if cfg.T == 0.0:
        return 0.0
    rr = r_mu(cfg.material_1.mu0) * r_mu(cfg.material_2.mu0)
    bracket = 1.0 - polylog(3, rr) / ZETA3 - 4.0 * lam + 12.0 * lam * lam
    return K_B * cfg.T * ZETA3 / (16.0 * math.pi * cfg.a ** 2) * bracket


def relaxation_term_F_gamma(cfg: PlateConfiguration) -> float:
    """First-order relaxation contribution of all l >= 1 frequencies.

    For tau = 4 pi a k_B T / (hbar c) < 1,

        F_gamma = k_B T_eff zeta(3) / (8 pi^2 a^2)
                  [sum_n sqrt(mu0_n) gamma_n(T) / omega_p_n]
                  (-ln tau + 2 + zeta'(3)/zeta(3)),

    with T_eff = hbar c / (2 a k_B).  The neglected corrections are
    O(tau^2 ln tau) relative to the leading bracket; accuracy degrades
    past tau ~ 0.5.

    Raises
    ------
    ValidityError
        If tau >= 1, where the expansion no longer applies.
    """
    st = dimensionless_state(cfg)
    if st.tau >= 1.0:
        raise ValidityError(
            f"relaxation term requires tau < 1, got {st.tau:.3g}"
        )
    if cfg.T == 0.0:
        return 0.0
    weight = 0.0
    for m in (cfg.material_1, cfg.material_2):
        weight += math.sqrt(m.mu0) * relaxation_frequency(m, cfg.T) / m.omega_p
    if weight == 0.0:
        return 0.0
    t_eff = HBAR * C_LIGHT / (2.0 * cfg.a * K_B)
    scale = K_B * t_eff * ZETA3 / (8.0 * math.pi ** 2 * cfg.a ** 2)
    return scale * weight * (-math.log(st.tau) + _F_GAMMA_CONST)


def drude_free_energy(cfg: PlateConfiguration) -> DrudeDecomposition:
    """Analytic Drude free energy as plasma part plus the two shifts.

    The plasma part combines the numerically exact zero-temperature
    energy with the second-order thermal coefficient series; the shifts
    are ``zero_frequency_term_F0`` and ``relaxation_term_F_gamma``.
    Valid for tau < 1 (enforced by the relaxation term).
    """
    st = dimensionless_state(cfg)
    e_zero, _err = _zero_t_energy(cfg)
    f_plasma = e_zero + thermal_correction_series(cfg, st.lam)
    f0 = zero_frequency_term_F0(cfg, st.lam)
    fg = relaxation_term_F_gamma(cfg)
    return DrudeDecomposition(
        plasma_part=f_plasma,
        zero_frequency_shift=f0,
        relaxation_part=fg,
        total=f_plasma + f0 + fg,
    )


def entropy_at_zero_T(cfg: PlateConfiguration, lam: float) -> float:
    """Drude-model entropy per unit area at T = 0.

    The zero-frequency shift is linear in T, so its negative slope
    survives at T = 0:

        S(a, 0) = -k_B zeta(3) / (16 pi a^2)
                  [1 - Li3(r_mu1 r_mu2) / zeta(3) - 4 Lambda + 12 Lambda^2].

    Positive for strongly magnetic plates at small separation, negative
    at large separation; see ``positivity_threshold``.  Temperature in
    cfg is ignored.
    """
    rr = r_mu(cfg.material_1.mu0) * r_mu(cfg.material_2.mu0)
    bracket = 1.0 - polylog(3, rr) / ZETA3 - 4.0 * lam + 12.0 * lam * lam
    return -K_B * ZETA3 / (16.0 * math.pi * cfg.a ** 2) * bracket


def positivity_threshold(m: MaterialModel) -> float:
    """Separation where the zero-temperature Drude entropy changes sign.

    For two similar plates of material m the bracket of
    ``entropy_at_zero_T`` is a quadratic in Lambda; its smaller root
    gives the threshold separation

        a* = sqrt(mu0) lambda_p / (2 pi Lambda*),
        Lambda* = (1 - sqrt(1 - 3 delta)) / 6,
        delta = 1 - Li3(r_mu^2) / zeta(3).

    Below a* the entropy at T = 0 is positive, above it negative.  For
    large mu0 this approaches 3 lambda_p mu0^(3/2) zeta(3) / pi^3.

    Raises
    ------
    ValidityError
        If mu0 = 1 or the magnetic reflection is too weak for a sign
        change (delta >= 1/3).
    """
    if m.mu0 == 1.0:
        raise ValidityError("nonmagnetic plates have no entropy sign change")
    delta = 1.0 - polylog(3, r_mu(m.mu0) ** 2) / ZETA3
    disc = 1.0 - 3.0 * delta
    if disc <= 0.0:
        raise ValidityError(
            f"no sign change: permeability {m.mu0} is too weak (delta={delta:.3g})"
        )
    lam_star = (1.0 - math.sqrt(disc)) / 6.0
    return math.sqrt(m.mu0) * m.plasma_wavelength / (2.0 * math.pi * lam_star)


def f_gamma_derivative(cfg: PlateConfiguration) -> float:
    """Temperature derivative of the relaxation term, J/(K m^2).

    Requires every dissipative plate to follow the perfect-lattice law
    gamma(T) = gamma0 T^2, which makes F_gamma proportional to
    T^2 (-ln tau + const) and its derivative analytic:

        dF_gamma/dT = K [2 T (-ln tau + C) - T].

    Vanishes as T -> 0 (like T ln T), which is how the relaxation term
    respects the Nernst heat theorem.
    """
    st = dimensionless_state(cfg)
    if st.tau >= 1.0:
        raise ValidityError(
            f"relaxation term requires tau < 1, got {st.tau:.3g}"
        )
    for m in (cfg.material_1, cfg.material_2):
        if m.relaxation == "gamma":
            raise ValidityError(
                "f_gamma_derivative requires the gamma0 T^2 relaxation law"
            )
    if cfg.T == 0.0:
        return 0.0
    weight0 = 0.0
    for m in (cfg.material_1, cfg.material_2):
        if m.relaxation == "gamma0":
            weight0 += math.sqrt(m.mu0) * m.gamma_value / m.omega_p
    if weight0 == 0.0:
        return 0.0
    t_eff = HBAR * C_LIGHT / (2.0 * cfg.a * K_B)
    k_scale = K_B * t_eff * ZETA3 / (8.0 * math.pi ** 2 * cfg.a ** 2) * weight0
    lnterm = -math.log(st.tau) + _F_GAMMA_CONST
    return k_scale * (2.0 * cfg.T * lnterm - cfg.T)
