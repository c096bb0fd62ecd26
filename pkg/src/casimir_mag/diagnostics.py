"""Physics diagnostics built on top of the numeric and analytic routes.

The central question these tools answer is how each dissipation model
behaves as T -> 0: the dissipationless (plasma) entropy must vanish
(Nernst heat theorem), while the Drude entropy tends to a finite,
separation-dependent constant whose sign flips at a threshold
separation for magnetic plates.
"""

import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ValidityError
from .lifshitz_numeric import entropy_fd, free_energy_matsubara
from .materials import MaterialModel, PlateConfiguration, dimensionless_state
from .perturbation_drude import (
    drude_free_energy,
    entropy_at_zero_T,
)
from .perturbation_plasma import thermal_correction_series

__all__ = [
    "NernstReport",
    "DiscrepancyRow",
    "nernst_scan",
    "entropy_sign_map",
    "discrepancy_table",
]

# Validity limit of the perturbation expansions in the magnetic strength
# parameter; rows beyond it are marked rather than dropped.
_LAMBDA_GATE = 0.25


@dataclass(frozen=True)
class NernstReport:
    """Outcome of a low-temperature entropy scan.

    Attributes
    ----------
    model : str
        "plasma" or "drude".
    T_grid : tuple of float
        Temperatures scanned, K, descending.
    tau_grid : tuple of float
        Corresponding reduced temperatures.
    S_values : tuple of float
        Entropy per unit area at each T, J/(K m^2).
    S_errors : tuple of float
        Finite-difference error estimates.
    extrapolated_S0 : float
        Quadratic-in-tau extrapolation of S to T = 0.
    extrapolation_error : float
        Stability estimate of the extrapolation (refit on the lower
        half of the grid plus propagated differencing errors).
    predicted_S0 : float
        Analytic Drude zero-temperature entropy at this separation;
        its magnitude sets the resolution scale of the scan.
    atol : float
        Absolute classification threshold, 1e-4 |predicted_S0|.
    classification : str
        "satisfied" if |extrapolated_S0| lies below the larger of atol
        and three times the extrapolation error, else "violated".
    matches_prediction : bool
        Whether extrapolated_S0 agrees with the model's own prediction
        (0 for plasma, predicted_S0 for Drude) within 5 percent of the
        resolution-or-prediction scale.
    non_monotone_residuals : bool
        True when the fit residuals change sign more than twice, a
        hint that the grid does not resolve the asymptotic regime.
    """

    model: str
    T_grid: tuple
    tau_grid: tuple
    S_values: tuple
    S_errors: tuple
    extrapolated_S0: float
    extrapolation_error: float
    predicted_S0: float
    atol: float
    classification: str
    matches_prediction: bool
    non_monotone_residuals: bool


class DiscrepancyRow(NamedTuple):
    """One analytic-versus-numeric comparison point."""

    a: float
    T: float
    tau: float
    lam: float
    analytic: float
    numeric: float
    abs_diff: float
    rel_diff: float


def nernst_scan(
    cfg: PlateConfiguration, model: str, T_grid: Sequence[float]
) -> NernstReport:
    """Scan the entropy over a temperature grid and extrapolate to T = 0.

    Parameters
    ----------
    cfg : PlateConfiguration
        Supplies plates and separation; its temperature is ignored.
    model : str
        "plasma" or "drude".
    T_grid : sequence of float
        Positive temperatures, strictly descending, at least 4 points.

    Returns
    -------
    NernstReport

    Notes
    -----
    The entropy is fitted with a quadratic in tau; the constant term is
    the T -> 0 extrapolation.  The classification threshold is tied to
    the magnitude of the analytic Drude zero-temperature entropy, which
    is the natural resolution scale of the question being asked.
    """
    ts = [float(T) for T in T_grid]
    if len(ts) < 4:
        raise ValueError(f"need at least 4 grid points, got {len(ts)}")
    if any(T <= 0.0 for T in ts):
        raise ValueError("temperature grid must be positive")
    if any(b >= a for a, b in zip(ts[:-1], ts[1:])):
        raise ValueError("temperature grid must be strictly descending")

    st = dimensionless_state(cfg)
    predicted = entropy_at_zero_T(cfg, st.lam)
    atol = 1e-4 * abs(predicted)

    taus = []
    s_vals = []
    s_errs = []
    for T in ts:
        c = replace(cfg, T=T)
        res = entropy_fd(c, model=model)
        taus.append(dimensionless_state(c).tau)
        s_vals.append(res.S)
        s_errs.append(res.error_estimate)

    x = np.asarray(taus)
    y = np.asarray(s_vals)
    coef = np.polynomial.polynomial.polyfit(x, y, 2)
    fit = np.polynomial.polynomial.polyval(x, coef)
    resid = y - fit
    # Stability refit on the cold half of the grid (grid is descending).
    half = max(4, len(ts) // 2)
    coef_lo = np.polynomial.polynomial.polyfit(x[-half:], y[-half:], 2)
    extrap = float(coef[0])
    extrap_err = abs(float(coef_lo[0]) - extrap) + float(np.mean(s_errs))

    signs = np.sign(resid[np.abs(resid) > 0.0])
    flips = int(np.sum(signs[:-1] != signs[1:])) if signs.size > 1 else 0

    classification = (
        "satisfied" if abs(extrap) <= max(atol, 3.0 * extrap_err) else "violated"
    )
    target = 0.0 if model == "plasma" else predicted
    scale = max(abs(predicted), 1e-300)
    matches = abs(extrap - target) <= 5e-2 * scale

    return NernstReport(
        model=model,
        T_grid=tuple(ts),
        tau_grid=tuple(taus),
        S_values=tuple(s_vals),
        S_errors=tuple(s_errs),
        extrapolated_S0=extrap,
        extrapolation_error=extrap_err,
        predicted_S0=predicted,
        atol=atol,
        classification=classification,
        matches_prediction=matches,
        non_monotone_residuals=flips > 2,
    )


def entropy_sign_map(
    material: MaterialModel, a_grid: Sequence[float]
) -> list:
    """Zero-temperature Drude entropy sign across a separation grid.

    Parameters
    ----------
    material : MaterialModel
        Used for both (similar) plates.
    a_grid : sequence of float
        Positive separations in metres.

    Returns
    -------
    list of tuple
        Rows (a, lam, S0, sign, within_gate) with sign in {-1, 0, +1}.
        within_gate is False where lam >= 0.25, the validity limit of
        the expansion behind S0; such rows are marked, not dropped.
    """
    rows = []
    for a in a_grid:
        cfg = PlateConfiguration(
            material_1=material, material_2=material, a=float(a), T=0.0
        )
        st = dimensionless_state(cfg)
        s0 = entropy_at_zero_T(cfg, st.lam)
        sign = 0 if s0 == 0.0 else int(math.copysign(1.0, s0))
        rows.append((float(a), st.lam, s0, sign, st.lam < _LAMBDA_GATE))
    return rows


def discrepancy_table(
    cfgs: Sequence[PlateConfiguration], model: str
) -> list:
    """Analytic-versus-numeric thermal corrections across configurations.

    Parameters
    ----------
    cfgs : sequence of PlateConfiguration
    model : str
        "plasma" compares the coefficient series against the Matsubara
        thermal correction; "drude" compares the three-part analytic
        decomposition against the Drude Matsubara total; "identity"
        compares the numeric value with itself (a pipeline check whose
        rel_diff must be exactly 0).

    Returns
    -------
    list of DiscrepancyRow
    """
    if model not in ("plasma", "drude", "identity"):
        raise ValueError(f"unknown model {model!r}")
    rows = []
    for cfg in cfgs:
        st = dimensionless_state(cfg)
        if model == "plasma":
            numeric = free_energy_matsubara(cfg, model="plasma").thermal_correction
            analytic = thermal_correction_series(cfg, st.lam)
        elif model == "drude":
            numeric = free_energy_matsubara(cfg, model="drude").total
            analytic = drude_free_energy(cfg).total
        else:
            numeric = free_energy_matsubara(cfg, model="plasma").thermal_correction
            analytic = numeric
        diff = analytic - numeric
        denom = max(abs(numeric), 1e-300)
        rows.append(
            DiscrepancyRow(
                a=cfg.a,
                T=cfg.T,
                tau=st.tau,
                lam=st.lam,
                analytic=analytic,
                numeric=numeric,
                abs_diff=diff,
                rel_diff=diff / denom,
            )
        )
    return rows
