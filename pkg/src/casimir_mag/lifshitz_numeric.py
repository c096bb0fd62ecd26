"""Direct numerical evaluation of the Casimir free energy between plates.

Two independent representations of the same free energy are provided.

* ``free_energy_matsubara``: the discrete sum over imaginary Matsubara
  frequencies zeta_l = l tau, each term an integral over the transverse
  variable y from zeta_l to infinity.
* ``free_energy_abel_plana``: the zero-temperature energy plus a
  thermal correction written as a contour integral that trades the
  discrete sum for an integral weighted by 1/(e^(2 pi t') - 1).  The
  integrand is the imaginary part of the frequency integral continued
  to imaginary argument, evaluated along a horizontal path in the
  complex y plane.

The two routes share no thermal code, so their agreement is a strong
end-to-end check of both.

Conventions
-----------
Free energies are per unit plate area, J/m^2.  Internally everything is
computed in "bracket" units of k_B T / (8 pi a^2); the zero-temperature
energy carries hbar c / (32 pi^2 a^3).

Reflection coefficients use a form cleared of the permittivity pole at
zero frequency: with e2 = epsilon zeta^2 and q2 = mu e2 - zeta^2,

    r_TM = (e2 y - zeta^2 R) / (e2 y + zeta^2 R),   R = sqrt(y^2 + q2),
    r_TE = (mu y - R) / (mu y + R),

which stays finite and correct down to zeta = 0.
"""

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable, NamedTuple, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .constants import C_LIGHT, HBAR, K_B
from .errors import ConvergenceError, ValidityError
from .materials import (
    MaterialModel,
    PlateConfiguration,
    dimensionless_state,
)

__all__ = [
    "ReflectionPair",
    "FreeEnergyResult",
    "EntropyResult",
    "reflection_coefficients",
    "zero_frequency_coefficients",
    "free_energy_matsubara",
    "free_energy_abel_plana",
    "entropy_fd",
    "pressure_fd",
]

_MODELS = ("plasma", "drude")

# y-integrals: composite Gauss-Legendre rule in s = y - zeta.  The
# integrand decays like e^(-s), so 48 units of s leave a relative tail
# below 1e-20.
_S_EDGES = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 48.0)
# The l = 0 integrand has an integrable log singularity at y = 0;
# geometric panels resolve it.
_S_EDGES_ZERO = (0.0, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 48.0)

_MAX_MATSUBARA_DIRECT = 4096
_SPLINE_DIRECT_TERMS = 64
_SPLINE_KNOTS = 700
_ZETA_CUT = 46.0
_AP_TPRIME_MAX = 12.0
_AP_S_MAX = 55.0


class ReflectionPair(NamedTuple):
    """Reflection coefficients of one interface at one (zeta, y)."""

    r_tm: float
    r_te: float


@dataclass(frozen=True)
class FreeEnergyResult:
    """Free energy per unit area split into zero-T and thermal parts.

    Attributes
    ----------
    total : float
        Free energy, J/m^2.
    zero_T_part : float
        Dissipationless zero-temperature energy E(a), J/m^2.
    thermal_correction : float
        total - zero_T_part, J/m^2.
    terms_used : int
        Matsubara terms summed, or integrand evaluations for the
        contour representation.
    truncation_error_estimate : float
        Combined estimate of truncation and quadrature error, J/m^2.
    representation : str
        "matsubara" or "abel_plana".
    """

    total: float
    zero_T_part: float
    thermal_correction: float
    terms_used: int
    truncation_error_estimate: float
    representation: str


@dataclass(frozen=True)
class EntropyResult:
    """Entropy per unit area from finite differencing the free energy.

    Attributes
    ----------
    S : float
        Entropy, J/(K m^2).
    method : str
        Differencing scheme identifier.
    step : float
        Base temperature step, K.
    error_estimate : float
        Richardson-based error estimate, J/(K m^2).
    """

    S: float
    method: str
    step: float
    error_estimate: float


@lru_cache(maxsize=None)
def _gauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


def _panel_rule(edges, n):
    """Nodes and weights of a composite Gauss-Legendre rule."""
    x, w = _gauss(n)
    nodes = []
    weights = []
    for a, b in zip(edges[:-1], edges[1:]):
        half = 0.5 * (b - a)
        nodes.append(half * (x + 1.0) + a)
        weights.append(half * w)
    return np.concatenate(nodes), np.concatenate(weights)


@lru_cache(maxsize=None)
def _s_rule(order: int, zero_panels: bool):
    edges = _S_EDGES_ZERO if zero_panels else _S_EDGES
    return _panel_rule(edges, order)


# ----------------------------------------------------------------------
# Reflection coefficients and integrands
# ----------------------------------------------------------------------

def reflection_coefficients(
    epsilon: float, mu: float, zeta: float, y: float
) -> ReflectionPair:
    """Reflection coefficients at given material response and (zeta, y).

    Parameters
    ----------
    epsilon, mu : float
        Permittivity and permeability evaluated at the imaginary
        frequency zeta.
    zeta : float
        Dimensionless frequency, >= 0.
    y : float
        Integration variable; must satisfy y >= zeta and y > 0.

    Returns
    -------
    ReflectionPair
    """
    if y < zeta:
        raise ValueError(f"requires y >= zeta, got y={y}, zeta={zeta}")
    if y <= 0.0:
        raise ValueError(f"requires y > 0, got {y}")
    e2 = epsilon * zeta * zeta
    q2 = mu * e2 - zeta * zeta
    root = math.sqrt(y * y + q2)
    z2 = zeta * zeta
    if zeta > 0.0:
        r_tm = (e2 * y - z2 * root) / (e2 * y + z2 * root)
    else:
        r_tm = 1.0
    r_te = (mu * y - root) / (mu * y + root)
    return ReflectionPair(r_tm=r_tm, r_te=r_te)


def zero_frequency_coefficients(
    m: MaterialModel, model: str, tilde_omega_p: float, y: float
) -> ReflectionPair:
    """Zero-frequency reflection coefficients of one plate.

    The TM coefficient is 1 for both models.  The TE coefficient keeps
    its full y dependence in the plasma model but collapses to the
    frequency-free magnetic value (mu0 - 1) / (mu0 + 1) in the Drude
    model, where dissipation wipes out the plasma response at zero
    frequency.  A Debye-dispersive permeability equals mu0 at zero
    frequency, so it changes nothing here.
    """
    if model not in _MODELS:
        raise ValueError(f"unknown model {model!r}")
    if y <= 0.0:
        raise ValueError(f"requires y > 0, got {y}")
    if model == "drude":
        return ReflectionPair(r_tm=1.0, r_te=(m.mu0 - 1.0) / (m.mu0 + 1.0))
    root = math.sqrt(y * y + m.mu0 * tilde_omega_p * tilde_omega_p)
    return ReflectionPair(r_tm=1.0, r_te=(m.mu0 * y - root) / (m.mu0 * y + root))


def _plate_params(cfg: PlateConfiguration, model: str, zero_only: bool = False):
    """Per-plate tuples (tilde_omega_p, mu0, ae_m, tilde_gamma).

    ae_m = 0 encodes a frequency-independent permeability and
    ae_m = inf the static-zero-term-only treatment: the permeability is
    1 at every positive frequency (the inf relaxation kills it) while
    the dedicated zero-frequency path keeps mu0.
    """
    st = dimensionless_state(cfg)
    out = []
    for i, m in enumerate((cfg.material_1, cfg.material_2)):
        gt = st.tilde_gamma[i] if model == "drude" else 0.0
        ae = math.inf if zero_only else st.ae_m[i]
        out.append((st.tilde_omega_p[i], m.mu0, ae, gt))
    return tuple(out)


def _sum_log_integrand(zeta, y, plates, model):
    """Sum over polarizations of ln(1 - r1 r2 e^-y) for arrays zeta, y."""
    emy = np.exp(-y)
    prod_tm = 1.0
    prod_te = 1.0
    z2 = zeta * zeta
    for wt, mu0, ae, gt in plates:
        if model == "plasma":
            e2 = z2 + wt * wt
        else:
            e2 = z2 + wt * wt * zeta / (zeta + gt)
        mu = mu0 if ae == 0.0 else 1.0 + (mu0 - 1.0) / (1.0 + ae * zeta)
        q2 = mu * e2 - z2
        root = np.sqrt(y * y + q2)
        prod_tm = prod_tm * (e2 * y - z2 * root) / (e2 * y + z2 * root)
        prod_te = prod_te * (mu * y - root) / (mu * y + root)
    return np.log1p(-prod_tm * emy) + np.log1p(-prod_te * emy)


def _integrals_over_y(zetas, plates, model, order=64):
    """Vectorised I(zeta) = int_zeta^inf y L(zeta, y) dy for zeta > 0."""
    s, w = _s_rule(order, False)
    z = np.asarray(zetas, dtype=float)[:, None]
    y = z + s[None, :]
    vals = _sum_log_integrand(z, y, plates, model)
    return (y * vals) @ w


def _integral_zero_frequency(cfg, plates, model, order=64):
    """I at zeta = 0, using the model-specific static coefficients."""
    y, w = _s_rule(order, True)
    emy = np.exp(-y)
    prod_te = 1.0
    for wt, mu0, _ae, _gt in plates:
        if model == "drude":
            r = (mu0 - 1.0) / (mu0 + 1.0)
        else:
            root = np.sqrt(y * y + mu0 * wt * wt)
            r = (mu0 * y - root) / (mu0 * y + root)
        prod_te = prod_te * r
    vals = np.log1p(-emy) + np.log1p(-prod_te * emy)
    return float((y * vals) @ w)


# ----------------------------------------------------------------------
# Zero-temperature energy
# ----------------------------------------------------------------------

_E_OUTER_EDGES = (0.0, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0, 96.0)


def _e_bracket(plates, order_outer=64, order_inner=48):
    """Dimensionless double integral for the zero-temperature energy.

    Computes int_0^inf dy y^2 int_0^1 du L(u y, y) with the plasma-model
    permittivity, the common T = 0 limit of both models when the
    relaxation frequency vanishes with temperature.
    """
    ys, wy = _panel_rule(_E_OUTER_EDGES, order_outer)
    xu, wu = _gauss(order_inner)
    u = 0.5 * (xu + 1.0)
    wu = 0.5 * wu
    zet = ys[:, None] * u[None, :]
    yy = np.broadcast_to(ys[:, None], zet.shape)
    vals = _sum_log_integrand(zet, yy, plates, "plasma")
    inner = vals @ wu
    return float((ys * ys * inner) @ wy)


@lru_cache(maxsize=64)
def _e_bracket_cached(plate_key):
    plates = tuple((wt, mu0, ae, 0.0) for wt, mu0, ae in plate_key)
    val = _e_bracket(plates)
    ref = _e_bracket(plates, order_outer=48, order_inner=32)
    return val, abs(val - ref)


def _zero_t_energy(cfg: PlateConfiguration, zero_only: bool = False):
    """Zero-temperature energy E(a) in J/m^2 and its error estimate."""
    plates = _plate_params(cfg, "plasma", zero_only=zero_only)
    key = tuple((wt, mu0, ae) for wt, mu0, ae, _gt in plates)
    bracket, err = _e_bracket_cached(key)
    scale = HBAR * C_LIGHT / (32.0 * math.pi ** 2 * cfg.a ** 3)
    return scale * bracket, scale * err


# ----------------------------------------------------------------------
# Matsubara representation
# ----------------------------------------------------------------------

def _sum_direct(tau, plates, model, tol, cap):
    """Sum I(l tau) for l >= 1 until three consecutive negligible terms.

    Returns (sum, last_l, tail_error_estimate).
    """
    total = 0.0
    small_run = 0
    l = 0
    last_term = 0.0
    chunk = 256
    while l < cap:
        ls = np.arange(l + 1, min(l + chunk, cap) + 1)
        terms = _integrals_over_y(ls * tau, plates, model)
        for i, term in enumerate(terms):
            total += term
            last_term = term
            if abs(term) < tol * max(abs(total), 1e-300):
                small_run += 1
                if small_run >= 3:
                    l_stop = ls[i]
                    tail = abs(term) / max(1.0 - math.exp(-tau), 1e-12)
                    return total, int(l_stop), tail
            else:
                small_run = 0
        l = int(ls[-1])
    raise ConvergenceError(
        f"Matsubara sum not converged after {cap} terms "
        f"(last term {last_term:.3e}, partial {total:.3e})"
    )


def _sum_spline(tau, plates, model):
    """Spline-accelerated sum for very small tau.

    The first _SPLINE_DIRECT_TERMS terms are exact; beyond them the
    smooth, sign-definite term magnitude is interpolated as ln(-I)
    against ln(zeta) on a few hundred exact knots and summed over every
    remaining Matsubara index up to the exponential cutoff.

    Returns (sum, last_l, error_estimate).
    """
    n_dir = _SPLINE_DIRECT_TERMS
    direct = _integrals_over_y(tau * np.arange(1, n_dir + 1), plates, model)
    total = float(direct.sum())
    z_lo = tau * n_dir
    knots = np.geomspace(z_lo, _ZETA_CUT, _SPLINE_KNOTS)
    vals = _integrals_over_y(knots, plates, model)
    if np.any(vals >= 0.0):
        raise ConvergenceError("term magnitudes not sign-definite; cannot spline")
    cs = CubicSpline(np.log(knots), np.log(-vals))
    l_end = int(_ZETA_CUT / tau)
    ls = np.arange(n_dir + 1, l_end + 1, dtype=float)
    interp = -np.exp(cs(np.log(ls * tau)))
    total += float(interp.sum())
    # Error: spline residual at off-knot control points, scaled to the sum.
    mids = np.sqrt(knots[:-1] * knots[1:])
    ctrl = _integrals_over_y(mids, plates, model)
    resid = np.max(np.abs(-np.exp(cs(np.log(mids))) - ctrl) / np.abs(ctrl))
    err = resid * abs(total) + abs(interp[-1]) / max(1.0 - math.exp(-tau), 1e-12)
    return total, l_end, err


def free_energy_matsubara(
    cfg: PlateConfiguration,
    model: str = "plasma",
    tol: float = 1e-10,
    l_max: Optional[int] = None,
    static_mu_zero_only: bool = False,
) -> FreeEnergyResult:
    """Casimir free energy per unit area from the Matsubara sum.

    Parameters
    ----------
    cfg : PlateConfiguration
        Plates, separation, and temperature (T > 0 required).
    model : str
        "plasma" or "drude".
    tol : float
        Relative truncation target for the frequency sum; the sum stops
        after three consecutive terms below tol times the running total.
    l_max : int, optional
        Hard cap on the term count; exhausting it raises
        ConvergenceError.
    static_mu_zero_only : bool
        When True, the permeability enters only the zero-frequency term
        (mu = 1 at every l >= 1, mu0 at l = 0), overriding the materials'
        dispersion settings.  The zero_T_part is then the mu = 1 energy.

    Returns
    -------
    FreeEnergyResult

    Notes
    -----
    Below roughly tau = 0.01 the term count is large and the sum
    switches to a spline-accelerated path: exact first terms plus an
    interpolated tail (see module notes).  The reported zero_T_part is
    always the dissipationless plasma energy, so for the Drude model
    the thermal correction also absorbs the dissipation shift.
    """
    if model not in _MODELS:
        raise ValueError(f"unknown model {model!r}")
    if cfg.T <= 0.0:
        raise ValidityError("the Matsubara representation requires T > 0")
    st = dimensionless_state(cfg)
    tau = st.tau
    plates = _plate_params(cfg, model, zero_only=static_mu_zero_only)
    pref = K_B * cfg.T / (8.0 * math.pi * cfg.a ** 2)

    i_zero = _integral_zero_frequency(cfg, plates, model)
    quad_err = abs(i_zero - _integral_zero_frequency(cfg, plates, model, order=48))

    l_scale = int(_ZETA_CUT / tau) + 1
    if l_scale <= _MAX_MATSUBARA_DIRECT:
        cap = l_max if l_max is not None else 4 * l_scale + 16
        sum_l, l_used, tail_err = _sum_direct(tau, plates, model, tol, cap)
    else:
        if l_max is not None and l_max < l_scale:
            raise ConvergenceError(
                f"needs about {l_scale} Matsubara terms, above l_max={l_max}"
            )
        sum_l, l_used, tail_err = _sum_spline(tau, plates, model)

    bracket = 0.5 * i_zero + sum_l
    e_zero, e_err = _zero_t_energy(cfg, zero_only=static_mu_zero_only)
    total = pref * bracket
    err = pref * (tail_err + quad_err) + e_err
    return FreeEnergyResult(
        total=total,
        zero_T_part=e_zero,
        thermal_correction=total - e_zero,
        terms_used=l_used + 1,
        truncation_error_estimate=err,
        representation="matsubara",
    )


# ----------------------------------------------------------------------
# Contour (Abel-Plana) representation
# ----------------------------------------------------------------------

def _ap_reflection_products(s, x, plates):
    """z_TM(s), z_TE(s) along the horizontal path y = s + i x.

    s is a real array, x a positive scalar below every plate's reduced
    plasma frequency.  Returns the two complex round-trip products
    r1 r2 e^-y per polarization.
    """
    y = s + 1j * x
    phase = np.exp(-y)
    prod_tm = 1.0
    prod_te = 1.0
    for wt, mu0, ae, _gt in plates:
        eps = 1.0 - (wt / x) ** 2
        if ae == 0.0:
            mu = mu0
        elif not math.isfinite(ae):
            mu = 1.0
        else:
            mu = 1.0 + (mu0 - 1.0) / (1.0 + 1j * ae * x)
        q2 = mu * (wt * wt - x * x) + x * x
        root = np.sqrt(y * y + q2)
        prod_tm = prod_tm * (eps * y - root) / (eps * y + root)
        prod_te = prod_te * (mu * y - root) / (mu * y + root)
    return prod_tm * phase, prod_te * phase


def _ap_scan_grid(x, plates):
    """Initial s-grid resolving the reflection boundary layer near 0."""
    scales = []
    for wt, mu0, ae, _gt in plates:
        mu_scale = 1.0 if not math.isfinite(ae) else mu0
        q2 = abs(mu_scale * (wt * wt - x * x) + x * x)
        scales.append(math.sqrt(q2) * x * x / (wt * wt))
    sf = max(min(scales), 1e-10)
    lo = np.geomspace(sf * 1e-3, 4.0, 700)
    hi = np.linspace(4.0, _AP_S_MAX, 500)[1:]
    return np.concatenate([lo, hi])


def _ap_branch_offsets(s, z):
    """Integer branch offsets w(s) making ln(1 - z) continuous, 0 at infinity.

    Returns (w, refined_needed) where refined_needed flags grid cells
    whose phase step is still too coarse to trust.
    """
    u = 1.0 - z
    ph = np.angle(u)
    unw = np.unwrap(ph[::-1])[::-1]
    w = np.round((unw - ph) / (2.0 * math.pi)).astype(int)
    steps = np.abs(np.diff(unw))
    return w, steps


def _ap_polarization_data(x, plates, which):
    """Branch-resolved sampling of one polarization's 1 - z along the path.

    Returns (s_grid, w_offsets, u_values) with the grid refined until
    the unwrapped phase steps are everywhere below 0.6 rad.
    """
    s = _ap_scan_grid(x, plates)
    for _ in range(8):
        z_tm, z_te = _ap_reflection_products(s, x, plates)
        z = z_tm if which == 0 else z_te
        w, steps = _ap_branch_offsets(s, z)
        bad = np.where(steps > 0.6)[0]
        if bad.size == 0:
            return s, w, 1.0 - z
        mids = 0.5 * (s[bad] + s[bad + 1])
        s = np.unique(np.concatenate([s, mids]))
    z_tm, z_te = _ap_reflection_products(s, x, plates)
    z = z_tm if which == 0 else z_te
    w, _steps = _ap_branch_offsets(s, z)
    return s, w, 1.0 - z


def _ap_crossings_and_minima(x, plates, which):
    """Branch crossing points and |1 - z| minima for one polarization.

    Crossing points (where the round-trip product crosses the branch
    cut of ln(1 - z)) are polished to near machine precision by a
    vectorised bisection on Im z over all bracketing cells at once; a
    misplaced panel edge there would leak a 2 pi branch error into the
    integral.
    """
    s, w, u = _ap_polarization_data(x, plates, which)
    jumps = np.where(np.diff(w) != 0)[0]
    edges = []
    if jumps.size:
        lo = s[jumps].copy()
        hi = s[jumps + 1].copy()

        def im_z(sv):
            z_tm, z_te = _ap_reflection_products(sv, x, plates)
            return (z_tm if which == 0 else z_te).imag

        f_lo = im_z(lo)
        ok = f_lo * im_z(hi) < 0.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            f_mid = im_z(mid)
            left = f_lo * f_mid <= 0.0
            hi = np.where(ok & left, mid, hi)
            moved = ok & ~left
            lo = np.where(moved, mid, lo)
            f_lo = np.where(moved, f_mid, f_lo)
            if np.max(hi - lo) < 1e-14 * max(1.0, float(np.max(hi))):
                break
        edges = (0.5 * (lo + hi)).tolist()
    au = np.abs(u)
    small = np.where((au[1:-1] < au[:-2]) & (au[1:-1] < au[2:]) & (au[1:-1] < 0.5))[0]
    minima = [s[i + 1] for i in small]
    return edges, minima, (s, w)


def _ap_phi_im(x, plates):
    """Im Phi(i x): the y-integral continued to imaginary frequency.

    Phi(i x) = int_0^inf (i x + s) sum_pol ln(1 - z_pol) ds along the
    horizontal path.  The principal-branch part is integrated with
    composite Gauss-Legendre panels split at every branch crossing and
    |1 - z| minimum; the 2 pi branch offsets contribute exactly
    pi (b^2 - a^2) w per panel through the s Im ln term.

    Returns (value, error_estimate).
    """
    edges = {0.0, 1.0, 2.0, 4.0, 8.0, 16.0, 26.0, 38.0, _AP_S_MAX}
    sf_lo = _ap_scan_grid(x, plates)[0]
    edges.update(np.geomspace(max(sf_lo, 1e-10), 0.5, 8).tolist())
    offsets = []
    for which in (0, 1):
        cross, minima, scan = _ap_crossings_and_minima(x, plates, which)
        edges.update(cross)
        edges.update(m for m in minima)
        offsets.append(scan)
    edge_arr = np.array(sorted(e for e in edges if 0.0 <= e <= _AP_S_MAX))

    def integrate(order):
        total = 0.0
        for a, b in zip(edge_arr[:-1], edge_arr[1:]):
            xg, wg = _gauss(order)
            half = 0.5 * (b - a)
            sg = half * (xg + 1.0) + a
            z_tm, z_te = _ap_reflection_products(sg, x, plates)
            val = 0.0
            mid = 0.5 * (a + b)
            for which, z in enumerate((z_tm, z_te)):
                s_scan, w_scan = offsets[which]
                k = int(np.searchsorted(s_scan, mid))
                k = min(max(k, 0), len(w_scan) - 1)
                w_off = w_scan[k]
                lp = np.log(1.0 - z)
                contrib = sg * lp.imag + x * lp.real
                val += float((contrib * wg).sum() * half)
                # branch offset enters s * Im ln exactly
                val += 2.0 * math.pi * w_off * 0.5 * (b * b - a * a)
            total += val
        return total

    v1 = integrate(32)
    v2 = integrate(20)
    return v1, abs(v1 - v2)


def _endpoint_products(xs, plates):
    """Round-trip products at the path endpoint s = 0 for an array of x."""
    y = 1j * xs
    phase = np.exp(-y)
    prod_tm = np.ones_like(xs, dtype=complex)
    prod_te = np.ones_like(xs, dtype=complex)
    for wt, mu0, ae, _gt in plates:
        eps = 1.0 - (wt / xs) ** 2
        if ae == 0.0:
            mu = mu0
        elif not math.isfinite(ae):
            mu = 1.0
        else:
            mu = 1.0 + (mu0 - 1.0) / (1.0 + 1j * ae * xs)
        q2 = mu * (wt * wt - xs * xs) + xs * xs
        root = np.sqrt(y * y + q2)
        prod_tm = prod_tm * (eps * y - root) / (eps * y + root)
        prod_te = prod_te * (mu * y - root) / (mu * y + root)
    return prod_tm * phase, prod_te * phase


def _ap_kinks(tau, plates):
    """t' abscissas where a branch crossing enters the path endpoint.

    At s = 0 the round-trip products are unimodular; whenever their
    phase passes zero a branch crossing is born at the endpoint and the
    t' integrand has a kink.  Located by a scan plus vectorised
    bisection on the phase, per polarization.
    """
    x_max = tau * _AP_TPRIME_MAX
    xs = np.linspace(x_max * 1e-4, x_max, 4096)
    products = _endpoint_products(xs, plates)
    kinks = []
    for which in (0, 1):
        ang = np.angle(products[which])
        sign_flip = ang[:-1] * ang[1:] < 0.0
        no_wrap = np.abs(np.diff(ang)) < math.pi
        idx = np.where(sign_flip & no_wrap)[0]
        if idx.size == 0:
            continue
        lo = xs[idx].copy()
        hi = xs[idx + 1].copy()
        f_lo = ang[idx].copy()
        for _ in range(50):
            mid = 0.5 * (lo + hi)
            f_mid = np.angle(_endpoint_products(mid, plates)[which])
            left = f_lo * f_mid <= 0.0
            hi = np.where(left, mid, hi)
            lo = np.where(left, lo, mid)
            f_lo = np.where(left, f_lo, f_mid)
        kinks.extend((0.5 * (lo + hi)).tolist())
    return sorted(k / tau for k in kinks)


def free_energy_abel_plana(
    cfg: PlateConfiguration,
    model: str = "plasma",
    tol: float = 1e-10,
    static_mu_zero_only: bool = False,
) -> FreeEnergyResult:
    """Casimir free energy from the continuous contour representation.

    The thermal correction to the zero-temperature energy is computed
    as -2 times the integral of Im Phi(i tau t') / (e^(2 pi t') - 1)
    over t' > 0, with Phi the analytic continuation of the Matsubara
    frequency integral.  Shares no thermal code with
    ``free_energy_matsubara``; their agreement validates both.

    Parameters
    ----------
    cfg : PlateConfiguration
    model : str
        Only "plasma" is supported; the continuation assumes a real,
        dissipationless permittivity on the real frequency axis.
    tol : float
        Accuracy request recorded against the internal error estimate.
    static_mu_zero_only : bool
        Keep the permeability only in the zero-frequency term.  The
        summand is then discontinuous at l = 0, so the contour part is
        evaluated with mu = 1 and the discontinuity is restored as an
        exact half-weight zero-frequency shift.

    Returns
    -------
    FreeEnergyResult

    Raises
    ------
    ValidityError
        If T = 0, or the temperature is so high that the contour
        samples frequencies at or above a plate's plasma frequency
        (12 tau must stay below the smallest reduced plasma frequency,
        where the real-axis permittivity changes sign).
    """
    if model != "plasma":
        raise ValueError("the contour representation supports only the plasma model")
    if cfg.T <= 0.0:
        raise ValidityError("the contour representation requires T > 0")
    st = dimensionless_state(cfg)
    tau = st.tau
    plates = _plate_params(cfg, "plasma", zero_only=static_mu_zero_only)
    if _AP_TPRIME_MAX * tau >= min(st.tilde_omega_p):
        raise ValidityError(
            "temperature too high for the contour representation: "
            f"12 tau = {_AP_TPRIME_MAX * tau:.3g} exceeds the reduced "
            f"plasma frequency {min(st.tilde_omega_p):.3g}"
        )

    base = [0.0, 0.01, 0.025, 0.05, 0.1, 0.2, 0.35, 0.6, 1.0, 1.6, 2.5, 4.0, 6.0, 8.5, _AP_TPRIME_MAX]
    edges = np.array(sorted(set(base) | set(_ap_kinks(tau, plates))))
    edges = edges[(edges >= 0.0) & (edges <= _AP_TPRIME_MAX)]

    evals = 0

    def outer(order):
        nonlocal evals
        total = 0.0
        err = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            xg, wg = _gauss(order)
            half = 0.5 * (b - a)
            tg = half * (xg + 1.0) + a
            for tv, wv in zip(tg, wg):
                phi, phi_err = _ap_phi_im(tau * tv, plates)
                weight = 1.0 / math.expm1(2.0 * math.pi * tv)
                total += wv * half * phi * weight
                err += wv * half * abs(phi_err) * weight
                evals += 1
        return total, err

    v1, inner_err = outer(14)
    v2, _ = outer(10)
    bracket = -2.0 * v1
    quad_err = 2.0 * (abs(v1 - v2) + inner_err)

    if static_mu_zero_only:
        # The contour ran with mu = 1 everywhere; move its half-weight
        # l = 0 term over to the static-permeability one.
        mu1 = tuple((wt, 1.0, ae, gt) for wt, _mu0, ae, gt in plates)
        bracket += 0.5 * (
            _integral_zero_frequency(cfg, plates, "plasma")
            - _integral_zero_frequency(cfg, mu1, "plasma")
        )

    pref = K_B * cfg.T / (8.0 * math.pi * cfg.a ** 2)
    e_zero, e_err = _zero_t_energy(cfg, zero_only=static_mu_zero_only)
    thermal = pref * bracket
    return FreeEnergyResult(
        total=e_zero + thermal,
        zero_T_part=e_zero,
        thermal_correction=thermal,
        terms_used=evals,
        truncation_error_estimate=pref * quad_err + e_err,
        representation="abel_plana",
    )


def _ap_thermal_only(cfg: PlateConfiguration) -> float:
    """Thermal correction (J/m^2) from the contour route, no E(a)."""
    res = free_energy_abel_plana(cfg, model="plasma")
    return res.thermal_correction


# ----------------------------------------------------------------------
# Drude-plasma difference sum (stable low-temperature Drude thermal part)
# ----------------------------------------------------------------------

def _diff_log_integrand(zeta, y, plates):
    """ln-integrand difference, plasma minus Drude, computed stably.

    Exact algebraic cancellation of the leading parts keeps the result
    accurate even when gamma_tilde / zeta is 1e-12.
    """
    z2 = zeta * zeta
    emy = np.exp(-y)
    r_tm_p, r_tm_d, r_te_p, r_te_d = [], [], [], []
    d_tm, d_te = [], []
    for wt, mu0, ae, gt in plates:
        w2 = wt * wt
        mu = mu0 if ae == 0.0 else 1.0 + (mu0 - 1.0) / (1.0 + ae * zeta)
        e_p = 1.0 + w2 / z2
        e_d = 1.0 + w2 / (zeta * (zeta + gt))
        d_eps = w2 * gt / (z2 * (zeta + gt))
        s_p = y * y + (e_p * mu - 1.0) * z2
        s_d = y * y + (e_d * mu - 1.0) * z2
        rp = np.sqrt(s_p)
        rd = np.sqrt(s_d)
        d_root = mu * z2 * d_eps / (rp + rd)
        # TM difference via the exact factored numerator
        num = d_eps * (y * y * (e_p + e_d) + z2 * (mu * e_p * e_d - e_p - e_d))
        cross = num / (e_p * rd + e_d * rp)
        dtm = 2.0 * y * cross / ((e_p * y + rp) * (e_d * y + rd))
        dte = -2.0 * mu * y * d_root / ((mu * y + rp) * (mu * y + rd))
        r_tm_p.append((e_p * y - rp) / (e_p * y + rp))
        r_tm_d.append((e_d * y - rd) / (e_d * y + rd))
        r_te_p.append((mu * y - rp) / (mu * y + rp))
        r_te_d.append((mu * y - rd) / (mu * y + rd))
        d_tm.append(dtm)
        d_te.append(dte)
    out = []
    for rp1, rp2, rd1, rd2, d1, d2 in (
        (r_tm_p[0], r_tm_p[1], r_tm_d[0], r_tm_d[1], d_tm[0], d_tm[1]),
        (r_te_p[0], r_te_p[1], r_te_d[0], r_te_d[1], d_te[0], d_te[1]),
    ):
        # z_p - z_d without cancellation
        dz = emy * (rp1 * d2 + rd2 * d1)
        zd = rd1 * rd2 * emy
        out.append(np.log1p(-dz / (1.0 - zd)))
    return out


def _diff_integrals_over_y(zetas, plates):
    """I_plasma(zeta) - I_drude(zeta) per polarization channel.

    Returns an (n, 2) array, TM channel first.  The channels carry
    opposite signs (the Drude plasma response weakens TM reflection but
    the magnetic TE term strengthens it), so they are kept apart for
    the sign-definite spline acceleration and summed by calls that only
    need the total.
    """
    s, w = _s_rule(64, False)
    z = np.asarray(zetas, dtype=float)[:, None]
    y = z + s[None, :]
    vals_tm, vals_te = _diff_log_integrand(z, y, plates)
    return np.stack([(y * vals_tm) @ w, (y * vals_te) @ w], axis=1)


def _drude_shift_bracket(cfg: PlateConfiguration) -> float:
    """D(T): Drude minus plasma free energy in bracket units.

    The l = 0 difference swaps the plasma static TE coefficient for the
    magnetic one; every l >= 1 term is a stable difference integral.
    Decays exponentially in l like the terms themselves.
    """
    st = dimensionless_state(cfg)
    tau = st.tau
    plates = _plate_params(cfg, "drude")
    if all(gt == 0.0 for _wt, _mu0, _ae, gt in plates):
        return 0.0
    i0_d = _integral_zero_frequency(cfg, plates, "drude")
    i0_p = _integral_zero_frequency(cfg, plates, "plasma")
    total = 0.5 * (i0_d - i0_p)

    l_scale = int(_ZETA_CUT / tau) + 1
    if l_scale <= _MAX_MATSUBARA_DIRECT:
        diffs = 0.0
        l = 0
        small = 0
        while l < 4 * l_scale + 16:
            ls = np.arange(l + 1, l + 257)
            vals = _diff_integrals_over_y(ls * tau, plates).sum(axis=1)
            for term in vals:
                diffs += term
                if abs(term) < 1e-12 * max(abs(diffs), 1e-300):
                    small += 1
                    if small >= 3:
                        return total - diffs
                else:
                    small = 0
            l = int(ls[-1])
        raise ConvergenceError("difference sum did not converge")
    n_dir = _SPLINE_DIRECT_TERMS
    direct = _diff_integrals_over_y(tau * np.arange(1, n_dir + 1), plates)
    diffs = float(direct.sum())
    scale = max(abs(diffs), abs(total))
    knots = np.geomspace(tau * n_dir, _ZETA_CUT, _SPLINE_KNOTS)
    vals = _diff_integrals_over_y(knots, plates)
    l_end = int(_ZETA_CUT / tau)
    lz = np.arange(n_dir + 1, l_end + 1, dtype=float) * tau
    for ch in range(2):
        v = vals[:, ch]
        sgn = 1.0 if v[0] > 0.0 else -1.0
        flips = np.nonzero(sgn * v <= 0.0)[0]
        # Each channel decays over ~20 orders before it can change sign;
        # everything from the first flip on is dropped, with a hard
        # bound checked against the scale already accumulated.
        cut = int(flips[0]) if flips.size else len(knots)
        if cut < 8:
            raise ConvergenceError(
                "difference channel changes sign too early to spline"
            )
        if flips.size:
            tail_count = l_end - int(knots[cut] / tau) + 1
            tail_bound = float(np.abs(v[cut:]).max()) * max(tail_count, 0)
            if tail_bound > 1e-10 * scale:
                raise ConvergenceError(
                    "sign-indefinite difference tail too large to drop "
                    f"({tail_bound:.2e} vs scale {scale:.2e})"
                )
        cs = CubicSpline(np.log(knots[:cut]), np.log(sgn * v[:cut]))
        sel = lz[lz <= knots[cut - 1]]
        diffs += sgn * float(np.exp(cs(np.log(sel))).sum())
    return total - diffs


def _drude_thermal_J(cfg: PlateConfiguration) -> float:
    """Drude thermal correction: plasma contour part plus the shift."""
    pref = K_B * cfg.T / (8.0 * math.pi * cfg.a ** 2)
    return _ap_thermal_only(cfg) + pref * _drude_shift_bracket(cfg)


# ----------------------------------------------------------------------
# Finite-difference entropy and pressure
# ----------------------------------------------------------------------

def entropy_fd(
    cfg: PlateConfiguration,
    model: str = "plasma",
    dT: Optional[float] = None,
    free_energy_fn: Optional[Callable[[float], float]] = None,
) -> EntropyResult:
    """Entropy per unit area S = -dF/dT by Richardson-extrapolated
    central differences.

    Parameters
    ----------
    cfg : PlateConfiguration
        Evaluation point; requires T > 0.
    model : str
        "plasma" or "drude".
    dT : float, optional
        Base step; defaults to T / 50.  Steps dT and dT/2 are combined
        by one Richardson extrapolation and their disagreement sets the
        error estimate.
    free_energy_fn : callable, optional
        When given, a function T -> free energy (J/m^2) differenced
        as-is; useful for testing and for custom models.

    Notes
    -----
    When differencing internally, only the thermal part of the free
    energy is differenced: the zero-temperature energy is independent
    of T and would only contribute cancellation noise.  The plasma
    thermal part comes from the contour representation; the Drude one
    adds the stable plasma-to-Drude difference sum, so the entropy
    stays accurate at temperatures orders of magnitude below the
    effective temperature.  If the contour route is out of its
    validity window the Matsubara totals are differenced instead.
    """
    if model not in _MODELS:
        raise ValueError(f"unknown model {model!r}")
    if cfg.T <= 0.0:
        raise ValidityError("entropy differencing requires T > 0")
    h = dT if dT is not None else cfg.T / 50.0
    if h <= 0.0 or h >= cfg.T:
        raise ValidityError(f"step must satisfy 0 < dT < T, got {h}")

    if free_energy_fn is not None:
        fn = free_energy_fn
    else:
        st = dimensionless_state(cfg)
        tau_hi = dimensionless_state(replace(cfg, T=cfg.T + h)).tau
        ap_ok = _AP_TPRIME_MAX * tau_hi < min(st.tilde_omega_p)
        if ap_ok and model == "plasma":
            fn = lambda T: _ap_thermal_only(replace(cfg, T=T))
        elif ap_ok and model == "drude":
            fn = lambda T: _drude_thermal_J(replace(cfg, T=T))
        else:
            fn = lambda T: free_energy_matsubara(replace(cfg, T=T), model=model).total

    def diff(step):
        return -(fn(cfg.T + step) - fn(cfg.T - step)) / (2.0 * step)

    d1 = diff(h)
    d2 = diff(0.5 * h)
    s_val = (4.0 * d2 - d1) / 3.0
    return EntropyResult(
        S=float(s_val),
        method="central_difference_richardson",
        step=h,
        error_estimate=float(abs(d2 - d1) / 3.0),
    )


def pressure_fd(
    cfg: PlateConfiguration,
    model: str = "plasma",
    da: Optional[float] = None,
    part: str = "total",
    static_mu_zero_only: bool = False,
) -> float:
    """Casimir pressure P = -dF/da in Pa by central differences.

    Parameters
    ----------
    cfg : PlateConfiguration
    model : str
        "plasma" or "drude".
    da : float, optional
        Base step; defaults to a / 200.  One Richardson extrapolation
        combines steps da and da/2.
    part : str
        "total" differences the full free energy; "thermal" only its
        thermal correction.
    static_mu_zero_only : bool
        Forwarded to the free-energy evaluation; keeps the static
        permeability in the zero-frequency term only.

    Returns
    -------
    float
        Pressure in Pa (negative values mean attraction).
    """
    if part not in ("total", "thermal"):
        raise ValueError(f"unknown part {part!r}")
    h = da if da is not None else cfg.a / 200.0
    if h <= 0.0 or h >= cfg.a:
        raise ValidityError(f"step must satisfy 0 < da < a, got {h}")

    def f_of_a(a):
        res = free_energy_matsubara(
            replace(cfg, a=a), model=model,
            static_mu_zero_only=static_mu_zero_only,
        )
        return res.total if part == "total" else res.thermal_correction

    def diff(step):
        return -(f_of_a(cfg.a + step) - f_of_a(cfg.a - step)) / (2.0 * step)

    d1 = diff(h)
    d2 = diff(0.5 * h)
    return float((4.0 * d2 - d1) / 3.0)
