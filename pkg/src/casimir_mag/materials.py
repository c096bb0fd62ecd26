"""Material models, plate configurations, and dimensionless groups.

A material is described by its plasma frequency omega_p, its static
magnetic permeability mu0, an optional relaxation law for the Drude
dissipation, and an optional Debye law for the frequency dependence of
the permeability.  Plates are a pair of materials at separation a and
temperature T.

All reduced quantities are referred to the characteristic frequency
omega_c = c / (2 a): Matsubara frequencies zeta_l = l tau with
tau = 4 pi a k_B T / (hbar c), reduced plasma frequency
tilde_omega_p = omega_p / omega_c, and the small expansion parameters

    beta_n = c / (2 a omega_p^(n)),   Lambda1 = beta_1 + beta_2,
    Lambda = sqrt(mu0^(1)) beta_1 + sqrt(mu0^(2)) beta_2.

The inverse reduced temperature is t = hbar c / (2 a k_B T) = 2 pi / tau.
"""

import configparser
import math
import os
from dataclasses import dataclass

from .constants import C_LIGHT, HBAR, K_B
from .errors import ConfigError

__all__ = [
    "MaterialModel",
    "PlateConfiguration",
    "DimensionlessState",
    "epsilon_plasma",
    "epsilon_drude",
    "relaxation_frequency",
    "mu_at_frequency",
    "dimensionless_state",
    "load_material",
    "nickel",
]

_RELAXATION_KINDS = ("none", "gamma0", "gamma")
_DISPERSION_KINDS = ("constant", "debye")


@dataclass(frozen=True)
class MaterialModel:
    """Optical and magnetic description of one plate material.

    Attributes
    ----------
    name : str
        Identifier used in output metadata.
    omega_p : float
        Plasma frequency, rad/s.
    mu0 : float
        Static permeability, >= 1.
    relaxation : str
        One of "none" (dissipationless), "gamma0" (perfect crystal
        lattice, gamma(T) = gamma0 T^2), or "gamma" (constant).
    gamma_value : float
        gamma0 in rad/(s K^2) or the constant gamma in rad/s; 0.0 when
        relaxation is "none".
    dispersion : str
        "constant" for a frequency-independent permeability, "debye"
        for mu(i zeta) = 1 + (mu0 - 1) / (1 + zeta omega_c / omega_m).
    omega_m : float
        Debye rolloff frequency, rad/s; 0.0 when dispersion is
        "constant".
    """

    name: str
    omega_p: float
    mu0: float
    relaxation: str = "none"
    gamma_value: float = 0.0
    dispersion: str = "constant"
    omega_m: float = 0.0

    def __post_init__(self):
        if self.omega_p <= 0.0:
            raise ConfigError(f"omega_p must be positive, got {self.omega_p}")
        if self.mu0 < 1.0:
            raise ConfigError(f"mu0 must be >= 1, got {self.mu0}")
        if self.relaxation not in _RELAXATION_KINDS:
            raise ConfigError(f"unknown relaxation kind {self.relaxation!r}")
        if self.relaxation != "none" and self.gamma_value <= 0.0:
            raise ConfigError("relaxation requires a positive gamma value")
        if self.dispersion not in _DISPERSION_KINDS:
            raise ConfigError(f"unknown dispersion kind {self.dispersion!r}")
        if self.dispersion == "debye" and self.omega_m <= 0.0:
            raise ConfigError("debye dispersion requires omega_m > 0")

    @property
    def plasma_wavelength(self) -> float:
        """Plasma wavelength 2 pi c / omega_p in metres."""
        return 2.0 * math.pi * C_LIGHT / self.omega_p


@dataclass(frozen=True)
class PlateConfiguration:
    """Two plate materials at separation a (m) and temperature T (K)."""

    material_1: MaterialModel
    material_2: MaterialModel
    a: float
    T: float

    def __post_init__(self):
        if self.a <= 0.0:
            raise ConfigError(f"separation must be positive, got {self.a}")
        if self.T < 0.0:
            raise ConfigError(f"temperature must be >= 0, got {self.T}")

    @property
    def similar(self) -> bool:
        """True when both plates use the same material parameters."""
        return self.material_1 == self.material_2


@dataclass(frozen=True)
class DimensionlessState:
    """Reduced variables for a plate configuration.

    Attributes
    ----------
    omega_c : float
        Characteristic frequency c / (2 a), rad/s.
    t : float
        Inverse reduced temperature hbar c / (2 a k_B T); math.inf at
        T = 0.
    tau : float
        Matsubara spacing 2 pi / t; 0.0 at T = 0.
    tilde_omega_p : tuple of float
        omega_p / omega_c per plate.
    beta : tuple of float
        1 / tilde_omega_p per plate.
    lam : float
        Lambda = sum_n sqrt(mu0^(n)) beta_n.
    lam1 : float
        Lambda1 = beta_1 + beta_2.
    tilde_gamma : tuple of float
        gamma(T) / omega_c per plate at the configuration temperature.
    ae_m : tuple of float
        omega_c / omega_m per plate; 0.0 for constant permeability.
    """

    omega_c: float
    t: float
    tau: float
    tilde_omega_p: tuple
    beta: tuple
    lam: float
    lam1: float
    tilde_gamma: tuple
    ae_m: tuple

    def zeta_l(self, l: int) -> float:
        """Dimensionless Matsubara frequency zeta_l = l tau."""
        return l * self.tau


def relaxation_frequency(m: MaterialModel, T: float) -> float:
    """Relaxation frequency gamma(T) in rad/s for material m.

    Returns 0 for dissipationless materials, gamma0 T^2 for the perfect
    lattice law, or the configured constant.
    """
    if m.relaxation == "none":
        return 0.0
    if m.relaxation == "gamma0":
        return m.gamma_value * T * T
    return m.gamma_value


def epsilon_plasma(m: MaterialModel, zeta: float, omega_c: float) -> float:
    """Plasma-model permittivity 1 + (tilde_omega_p / zeta)^2.

    Parameters
    ----------
    m : MaterialModel
    zeta : float
        Dimensionless imaginary frequency, must be positive.
    omega_c : float
        Characteristic frequency c / (2 a), rad/s.
    """
    if zeta <= 0.0:
        raise ValueError(f"epsilon_plasma requires zeta > 0, got {zeta}")
    wt = m.omega_p / omega_c
    return 1.0 + (wt / zeta) ** 2


def epsilon_drude(m: MaterialModel, zeta: float, omega_c: float, T: float) -> float:
    """Drude-model permittivity 1 + tilde_omega_p^2 / (zeta (zeta + tilde_gamma)).

    Parameters
    ----------
    m : MaterialModel
    zeta : float
        Dimensionless imaginary frequency, must be positive.
    omega_c : float
        Characteristic frequency c / (2 a), rad/s.
    T : float
        Temperature entering gamma(T), K.
    """
    if zeta <= 0.0:
        raise ValueError(f"epsilon_drude requires zeta > 0, got {zeta}")
    wt = m.omega_p / omega_c
    gt = relaxation_frequency(m, T) / omega_c
    return 1.0 + wt * wt / (zeta * (zeta + gt))


def mu_at_frequency(m: MaterialModel, zeta: float, omega_c: float) -> float:
    """Permeability mu(i zeta) along the imaginary frequency axis.

    Constant dispersion returns mu0 for every zeta.  The Debye form
    returns 1 + (mu0 - 1) / (1 + ae_m zeta) with ae_m = omega_c /
    omega_m, which decays from mu0 at zeta = 0 toward 1.
    """
    if zeta < 0.0:
        raise ValueError(f"mu_at_frequency requires zeta >= 0, got {zeta}")
    if m.dispersion == "constant":
        return m.mu0
    ae = omega_c / m.omega_m
    return 1.0 + (m.mu0 - 1.0) / (1.0 + ae * zeta)


def dimensionless_state(cfg: PlateConfiguration) -> DimensionlessState:
    """Reduce a plate configuration to its dimensionless groups.

    T = 0 is allowed; it yields t = inf and tau = 0 so every quantity
    that does not involve the Matsubara spacing stays usable.
    """
    omega_c = C_LIGHT / (2.0 * cfg.a)
    if cfg.T > 0.0:
        t = HBAR * C_LIGHT / (2.0 * cfg.a * K_B * cfg.T)
        tau = 2.0 * math.pi / t
    else:
        t = math.inf
        tau = 0.0
    mats = (cfg.material_1, cfg.material_2)
    tilde_wp = tuple(m.omega_p / omega_c for m in mats)
    beta = tuple(1.0 / w for w in tilde_wp)
    lam = sum(math.sqrt(m.mu0) * b for m, b in zip(mats, beta))
    lam1 = sum(beta)
    tilde_gamma = tuple(relaxation_frequency(m, cfg.T) / omega_c for m in mats)
    ae_m = tuple(
        omega_c / m.omega_m if m.dispersion == "debye" else 0.0 for m in mats
    )
    return DimensionlessState(
        omega_c=omega_c,
        t=t,
        tau=tau,
        tilde_omega_p=tilde_wp,
        beta=beta,
        lam=lam,
        lam1=lam1,
        tilde_gamma=tilde_gamma,
        ae_m=ae_m,
    )


def load_material(path: str) -> MaterialModel:
    """Read a material description from an INI-style config file.

    The file must contain a [material] section.  The plasma frequency
    is given either as plasma_wavelength_nm or plasma_frequency_rad_s,
    never both.  Example::

        [material]
        name = nickel
        plasma_wavelength_nm = 251.327
        mu0 = 110
        relaxation = gamma0
        gamma0 = 1.0e8
        dispersion = constant

    Raises
    ------
    ConfigError
        On a missing file or section, conflicting or missing plasma
        keys, or values that fail validation.
    """
    if not os.path.exists(path):
        raise ConfigError(f"material file not found: {path}")
    parser = configparser.ConfigParser()
    try:
        parser.read(path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if "material" not in parser:
        raise ConfigError(f"{path} has no [material] section")
    sec = parser["material"]

    def _get_float(key):
        try:
            return sec.getfloat(key)
        except ValueError as exc:
            raise ConfigError(f"{path}: bad numeric value for {key}") from exc

    name = sec.get("name", os.path.splitext(os.path.basename(path))[0])
    has_wl = "plasma_wavelength_nm" in sec
    has_wp = "plasma_frequency_rad_s" in sec
    if has_wl == has_wp:
        raise ConfigError(
            f"{path}: exactly one of plasma_wavelength_nm or "
            "plasma_frequency_rad_s is required"
        )
    if has_wl:
        wl = _get_float("plasma_wavelength_nm")
        if wl is None or wl <= 0.0:
            raise ConfigError(f"{path}: plasma_wavelength_nm must be positive")
        omega_p = 2.0 * math.pi * C_LIGHT / (wl * 1e-9)
    else:
        omega_p = _get_float("plasma_frequency_rad_s")

    mu0 = _get_float("mu0") if "mu0" in sec else 1.0
    relaxation = sec.get("relaxation", "none").strip()
    gamma_value = 0.0
    if relaxation == "gamma0":
        if "gamma0" not in sec:
            raise ConfigError(f"{path}: relaxation gamma0 needs a gamma0 key")
        gamma_value = _get_float("gamma0")
    elif relaxation == "gamma":
        if "gamma" not in sec:
            raise ConfigError(f"{path}: relaxation gamma needs a gamma key")
        gamma_value = _get_float("gamma")
    elif relaxation != "none":
        raise ConfigError(f"{path}: unknown relaxation {relaxation!r}")

    dispersion = sec.get("dispersion", "constant").strip()
    omega_m = _get_float("omega_m") if "omega_m" in sec else 0.0
    if dispersion == "debye" and "omega_m" not in sec:
        raise ConfigError(f"{path}: debye dispersion needs an omega_m key")
    if dispersion not in ("constant", "debye"):
        raise ConfigError(f"{path}: unknown dispersion {dispersion!r}")

    return MaterialModel(
        name=name,
        omega_p=omega_p,
        mu0=mu0,
        relaxation=relaxation,
        gamma_value=gamma_value,
        dispersion=dispersion,
        omega_m=omega_m,
    )


def nickel() -> MaterialModel:
    """Built-in nickel preset.

    Plasma wavelength 2 pi x 40 nm (omega_p = c / 40 nm), static
    permeability 110, perfect-lattice relaxation with an illustrative
    gamma0 = 1e8 rad/(s K^2), frequency-independent permeability.  The
    omega_m value is likewise illustrative, carried so the Debye mode
    can be switched on; it is unused while dispersion stays constant.
    """
    return MaterialModel(
        name="nickel",
        omega_p=C_LIGHT / 40.0e-9,
        mu0=110.0,
        relaxation="gamma0",
        gamma_value=1.0e8,
        dispersion="constant",
        omega_m=1.0e14,
    )
