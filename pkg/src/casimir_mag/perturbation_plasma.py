"""Analytic small-penetration expansion of the plasma-model free energy.

For plate materials with a plasma wavelength small against the
separation, the log integrand expands in the combined penetration
parameter Lambda = sum_n sqrt(mu0^(n)) c / (2 a omega_p^(n)).  Order by
order the thermal correction to the zero-temperature energy becomes a
sum of closed-form coefficient functions

    Delta_T F = hbar c / (16 pi^2 a^3)
                sum_{l>=1} [B0(l t) + Lambda B1(l t) + Lambda^2 B2(l t)],

with t = hbar c / (2 a k_B T).  The B_j come from frequency-space
integrals of oscillatory kernels A_j and evaluate to elementary
functions plus a dilogarithm.  At low temperature (t >> 1) the sum
collapses further to the closed form implemented in
``low_T_free_energy`` and its negative temperature derivative
``entropy_asymptotic``.

Everything here is cross-validated against the direct Matsubara
numerics in the test suite; the two code paths share nothing.
"""

import math
from typing import NamedTuple, Optional

from scipy.special import zeta as _hurwitz_zeta

from .constants import HBAR, C_LIGHT, K_B, ZETA3, ZETA5
from .errors import ValidityError
from .materials import PlateConfiguration, dimensionless_state
from .special_functions import polylog

__all__ = [
    "BCoefficients",
    "integrand_expansion",
    "a_functions",
    "b_coefficients",
    "thermal_correction_series",
    "low_T_free_energy",
    "entropy_asymptotic",
]

# Beyond this value of pi k the hyperbolic factors are replaced by
# their limits; the dropped corrections are below e^(-40).
_HYP_ASYMPTOTIC = 20.0


class BCoefficients(NamedTuple):
    """Closed-form series coefficients at one reduced frequency k = l t."""

    b0: float
    b1: float
    b2: float


def integrand_expansion(zeta: float, y: float, lam: float) -> float:
    """Log integrand expanded through second order in Lambda.

    Parameters
    ----------
    zeta : float
        Dimensionless frequency, 0 <= zeta <= y.
    y : float
        Integration variable, > 0.
    lam : float
        Expansion parameter Lambda.

    Returns
    -------
    float
        2 ln(1 - e^-y) + 2 Lambda (zeta^2 + y^2) / (y (e^y - 1))
        - 2 Lambda^2 e^-y (zeta^4 + y^4) / ((1 - e^-y)^2 y^2).
    """
    if zeta > y:
        raise ValueError(f"requires zeta <= y, got zeta={zeta}, y={y}")
    if y <= 0.0:
        raise ValueError(f"requires y > 0, got {y}")
    emy = math.exp(-y)
    first = 2.0 * math.log1p(-emy)
    second = 2.0 * lam * (zeta * zeta + y * y) / (y * math.expm1(y))
    third = (
        -2.0
        * lam
        * lam
        * emy
        * (zeta ** 4 + y ** 4)
        / ((1.0 - emy) ** 2 * y * y)
    )
    return first + second + third


def a_functions(l: int, t: float, y: float):
    """Oscillatory kernels A0, A1, A2 at reduced frequency k = l t.

    These are the y-resolved integrands whose y-integrals give the B
    coefficients; they are exposed for validation.

    Parameters
    ----------
    l : int
        Harmonic index, >= 1.
    t : float
        Inverse reduced temperature, > 0.
    y : float
        Integration variable, > 0.

    Returns
    -------
    tuple of float
        (A0, A1, A2).
    """
    if l < 1:
        raise ValueError(f"requires l >= 1, got {l}")
    if t <= 0.0 or y <= 0.0:
        raise ValueError("requires t > 0 and y > 0")
    k = l * t
    emy = math.exp(-y)
    sk = math.sin(k * y)
    ck = math.cos(k * y)
    a0 = 2.0 * math.log1p(-emy) * sk / k
    a1 = (4.0 / (y * math.expm1(y))) * (
        y * y * sk / k + y * ck / (k * k) - sk / (k ** 3)
    )
    a2 = -(4.0 * emy / (y * y * (1.0 - emy) ** 2)) * (
        y ** 4 * sk / k
        + 2.0 * y ** 3 * ck / (k * k)
        - 6.0 * y * y * sk / (k ** 3)
        - 12.0 * y * ck / (k ** 4)
        + 12.0 * sk / (k ** 5)
    )
    return a0, a1, a2


def _hyperbolic_factors(k: float):
    """coth(pi k), csch^2(pi k), 1/(e^(2 pi k) - 1), ln(1 - e^(-2 pi k)),
    Li2(e^(-2 pi k)), computed without overflow."""
    pk = math.pi * k
    if pk > _HYP_ASYMPTOTIC:
        w = math.exp(-2.0 * pk)
        return 1.0 + 2.0 * w, 4.0 * w, w, -w, w
    coth = 1.0 + 2.0 / math.expm1(2.0 * pk)
    em = math.expm1(-2.0 * pk)
    csch2 = 4.0 * math.exp(-2.0 * pk) / (em * em)
    n_bose = 1.0 / math.expm1(2.0 * pk)
    w = math.exp(-2.0 * pk)
    log_term = math.log1p(-w)
    li2 = polylog(2, w)
    return coth, csch2, n_bose, log_term, li2


def b_coefficients(l: int, t: float) -> BCoefficients:
    """Closed-form coefficients B0, B1, B2 at k = l t.

    Parameters
    ----------
    l : int
        Harmonic index, >= 1.
    t : float
        Inverse reduced temperature, > 0.

    Returns
    -------
    BCoefficients

    Notes
    -----
    All three decay like 1/k^3 or slower with exponentially small
    hyperbolic corrections; the evaluation switches to the asymptotic
    forms once pi k > 20, where the dropped terms are below e^(-40).
    """
    if l < 1:
        raise ValueError(f"requires l >= 1, got {l}")
    if t <= 0.0:
        raise ValueError(f"requires t > 0, got {t}")
    k = l * t
    c, s2, n, lg, li2 = _hyperbolic_factors(k)
    pi = math.pi
    b0 = 2.0 / k ** 4 - pi * c / k ** 3 - pi ** 2 * s2 / (k * k)
    b1 = (
        8.0 / k ** 4
        - 2.0 * pi * c / k ** 3
        - 2.0 * pi ** 2 * s2 / (k * k)
        - 4.0 * pi ** 3 * c * s2 / k
    )
    b2 = (
        2.0 * pi / k ** 5
        - 24.0 * pi * n / k ** 3
        - 4.0 * pi ** 2 * s2 / (k * k)
        + 4.0 * pi ** 3 * c * s2 / k
        - 8.0 * pi ** 4 * c * c * s2
        - 4.0 * pi ** 4 * s2 * s2
        + 24.0 * lg / k ** 4
        - 12.0 * li2 / (pi * k ** 5)
    )
    return BCoefficients(b0=b0, b1=b1, b2=b2)


def _b_derivatives(l: int, t: float):
    """dB0/dk, dB1/dk, dB2/dk at k = l t; used by the pressure series."""
    if l < 1:
        raise ValueError(f"requires l >= 1, got {l}")
    if t <= 0.0:
        raise ValueError(f"requires t > 0, got {t}")
    k = l * t
    c, s2, n, lg, li2 = _hyperbolic_factors(k)
    pi = math.pi
    db0 = (
        -8.0 / k ** 5
        + 3.0 * pi * c / k ** 4
        + 3.0 * pi ** 2 * s2 / k ** 3
        + 2.0 * pi ** 3 * s2 * c / (k * k)
    )
    db1 = (
        -32.0 / k ** 5
        + 6.0 * pi * c / k ** 4
        + 6.0 * pi ** 2 * s2 / k ** 3
        + 8.0 * pi ** 3 * s2 * c / (k * k)
        + 4.0 * pi ** 4 * s2 * s2 / k
        + 8.0 * pi ** 4 * s2 * c * c / k
    )
    db2 = (
        -10.0 * pi / k ** 6
        + 120.0 * pi * n / k ** 4
        + 20.0 * pi ** 2 * s2 / k ** 3
        + 4.0 * pi ** 3 * s2 * c / (k * k)
        - 4.0 * pi ** 4 * s2 * s2 / k
        - 8.0 * pi ** 4 * s2 * c * c / k
        + 16.0 * pi ** 5 * s2 * c ** 3
        + 32.0 * pi ** 5 * s2 * s2 * c
        - 120.0 * lg / k ** 5
        + 60.0 * li2 / (pi * k ** 6)
    )
    return db0, db1, db2


def _series_sum(t: float, lam: float, l_max: Optional[int] = None) -> float:
    """sum_{l>=1} B0 + lam B1 + lam^2 B2 with power-law tail completion.

    The exact closed forms are summed up to L ~ 25 / t; beyond that the
    hyperbolic corrections are below e^(-50 pi) and the remaining pure
    power tails are Hurwitz zeta functions.
    """
    if l_max is not None and l_max < 1:
        raise ValueError(f"l_max must be >= 1, got {l_max}")
    L = l_max if l_max is not None else max(int(math.ceil(25.0 / t)) + 5, 8)
    total = 0.0
    for l in range(1, L + 1):
        b = b_coefficients(l, t)
        total += b.b0 + lam * b.b1 + lam * lam * b.b2
    q = float(L + 1)
    z4 = float(_hurwitz_zeta(4, q))
    z3 = float(_hurwitz_zeta(3, q))
    z5 = float(_hurwitz_zeta(5, q))
    tail0 = 2.0 / t ** 4 * z4 - math.pi / t ** 3 * z3
    tail1 = 8.0 / t ** 4 * z4 - 2.0 * math.pi / t ** 3 * z3
    tail2 = 2.0 * math.pi / t ** 5 * z5
    total += tail0 + lam * tail1 + lam * lam * tail2
    return total


def thermal_correction_series(
    cfg: PlateConfiguration, lam: float, l_max: Optional[int] = None
) -> float:
    """Thermal correction to the free energy from the coefficient series.

    Parameters
    ----------
    cfg : PlateConfiguration
        Supplies a and T; T = 0 returns exactly 0.
    lam : float
        Expansion parameter Lambda of the configuration.
    l_max : int, optional
        Override for the exactly summed length; the power-law tail is
        always completed with Hurwitz zeta functions.

    Returns
    -------
    float
        Delta_T F in J/m^2, accurate through second order in Lambda.
    """
    if cfg.T == 0.0:
        return 0.0
    st = dimensionless_state(cfg)
    scale = HBAR * C_LIGHT / (16.0 * math.pi ** 2 * cfg.a ** 3)
    return scale * _series_sum(st.t, lam, l_max)


def low_T_free_energy(cfg: PlateConfiguration, lam: float) -> float:
    """Low-temperature closed form of the thermal correction.

    Valid for t = hbar c / (2 a k_B T) > 10; below that the dropped
    exponentially small terms are no longer negligible and a
    ValidityError is raised.

    Returns
    -------
    float
        Delta_T F in J/m^2 through second order in Lambda.
    """
    st = dimensionless_state(cfg)
    t = st.t
    if not t > 10.0:
        raise ValidityError(f"low-temperature form requires t > 10, got {t:.3g}")
    pi = math.pi
    e2pt = math.exp(-2.0 * pi * t)
    bracket = (
        ZETA3 / (2.0 * t ** 3)
        - pi ** 3 / (90.0 * t ** 4)
        + 2.0 * pi * e2pt / (t * t)
        + lam
        * (ZETA3 / t ** 3 - 2.0 * pi ** 3 / (45.0 * t ** 4) + 8.0 * pi ** 2 * e2pt / t)
        - lam * lam * (ZETA5 / t ** 5 - 16.0 * pi ** 3 * e2pt)
    )
    return -HBAR * C_LIGHT / (8.0 * pi * cfg.a ** 3) * bracket


def entropy_asymptotic(cfg: PlateConfiguration, lam: float) -> float:
    """Low-temperature entropy, the negative T derivative of the
    closed-form thermal correction.

    Requires t > 10.  The entropy vanishes like tau^2 as T -> 0, so the
    Nernst heat theorem is satisfied with the leading coefficient
    3 zeta(3) (1/2 + Lambda) and negative subleading tau^3 terms.

    Returns
    -------
    float
        S in J/(K m^2).
    """
    st = dimensionless_state(cfg)
    t = st.t
    if not t > 10.0:
        raise ValidityError(f"low-temperature form requires t > 10, got {t:.3g}")
    tau = st.tau
    pi = math.pi
    bracket = (
        1.5 * ZETA3
        - pi * pi * tau / 45.0
        + lam * (3.0 * ZETA3 - 4.0 * pi * pi * tau / 45.0)
        - lam * lam * 5.0 * ZETA5 * tau * tau / (4.0 * pi * pi)
    )
    return K_B * tau * tau / (16.0 * cfg.a ** 2 * pi ** 3) * bracket
