"""Command line interface.

Subcommands
-----------
free-energy
    One configuration, one row: total, zero-T part, thermal correction.
entropy
    Finite-difference entropy at one configuration.
pressure
    Finite-difference pressure at one configuration.
nernst-scan
    Entropy over a temperature grid plus a T -> 0 extrapolation and a
    Nernst-theorem classification.
sign-map
    Sign of the zero-temperature Drude entropy across separations.
validate
    Analytic-versus-numeric discrepancy table over a built-in grid;
    exits nonzero if any row is out of tolerance.

Output is CSV (or JSON with --format json) with `#` metadata lines.
Metadata never includes timestamps, so identical runs produce
byte-identical files.  Files are written atomically via a temp file and
rename.  Exit codes: 0 success, 1 validation failure, 2 configuration
or usage error, 3 validity-domain error, 4 convergence failure.

The environment variable CASIMIR_MAG_THREADS controls row-level
parallelism in grid commands: unset or 1 means serial, 0 means one
thread per CPU, any other integer is used as-is.  Results are collected
in grid order, so the thread count never changes the output.
"""

import argparse
import concurrent.futures
import dataclasses
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from importlib import resources
from typing import Optional

import numpy as np

from . import __version__
from .constants import C_LIGHT, HBAR, K_B
from .diagnostics import discrepancy_table, entropy_sign_map, nernst_scan
from .errors import ConfigError, ConvergenceError, ValidityError
from .lifshitz_numeric import (
    entropy_fd,
    free_energy_abel_plana,
    free_energy_matsubara,
    pressure_fd,
)
from .materials import (
    MaterialModel,
    PlateConfiguration,
    load_material,
    nickel,
)
from .perturbation_drude import positivity_threshold

__all__ = ["RunSpec", "build_parser", "main"]

# Validation bounds for `validate`, by model: maximum |rel_diff| of the
# analytic route against the direct numerics on the built-in grid.
_VALIDATE_BOUNDS = {"plasma": 5e-3, "drude": 5e-3}

_LAMBDA_SOFT_LIMIT = 0.15
_TAU_SOFT_LIMIT = 0.5


@dataclass(frozen=True)
class RunSpec:
    """Fully resolved parameters of one CLI invocation."""

    command: str
    model: str = "plasma"
    mu_mode: Optional[str] = None
    material_1: Optional[MaterialModel] = None
    material_2: Optional[MaterialModel] = None
    a: Optional[float] = None
    T: Optional[float] = None
    dT: Optional[float] = None
    da: Optional[float] = None
    part: str = "total"
    representation: str = "matsubara"
    a_range: Optional[tuple] = None
    t_range: Optional[tuple] = None
    grid: str = "default"
    output: str = "-"
    fmt: str = "csv"
    force: bool = False
    tol: float = 1e-10


def _parse_range(text: str) -> tuple:
    """Parse 'start:stop:kind:count' into a tuple of floats.

    kind is 'linear' or 'log'; count must be an integer >= 1.
    """
    parts = text.split(":")
    if len(parts) != 4:
        raise ConfigError(
            f"range must look like start:stop:kind:count, got {text!r}"
        )
    try:
        start = float(parts[0])
        stop = float(parts[1])
        count = int(parts[3])
    except ValueError as exc:
        raise ConfigError(f"bad number in range {text!r}") from exc
    kind = parts[2]
    if kind not in ("linear", "log"):
        raise ConfigError(f"range kind must be linear or log, got {kind!r}")
    if count < 1:
        raise ConfigError(f"range needs at least 1 point, got {count}")
    if not 0.0 < start <= stop:
        raise ConfigError(f"range needs 0 < start <= stop, got {text!r}")
    if count == 1:
        return (start,)
    if kind == "log":
        values = np.geomspace(start, stop, count)
    else:
        values = np.linspace(start, stop, count)
    return tuple(float(v) for v in values)


def _resolve_material(name: str) -> MaterialModel:
    """Material from a config path or the built-in preset name."""
    if name in ("nickel", "ni"):
        return nickel()
    if os.path.exists(name):
        return load_material(name)
    ref = resources.files("casimir_mag").joinpath("data", name)
    if ref.is_file():
        with resources.as_file(ref) as path:
            return load_material(str(path))
    raise ConfigError(f"material {name!r}: no such file or built-in preset")


def _thread_count() -> int:
    raw = os.environ.get("CASIMIR_MAG_THREADS")
    if raw is None or raw == "":
        return 1
    try:
        n = int(raw)
    except ValueError as exc:
        raise ConfigError(f"CASIMIR_MAG_THREADS must be an integer, got {raw!r}") from exc
    if n < 0:
        raise ConfigError(f"CASIMIR_MAG_THREADS must be >= 0, got {n}")
    if n == 0:
        return os.cpu_count() or 1
    return n


def _grid_map(fn, items):
    """Map fn over items, optionally threaded, always in input order."""
    n = _thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with concurrent.futures.ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _write_output(spec: RunSpec, meta: dict, header: list, rows: list) -> None:
    """Emit CSV or JSON, atomically when writing to a file."""
    buf = io.StringIO()
    if spec.fmt == "csv":
        for key, value in meta.items():
            buf.write(f"# {key}: {value}\n")
        buf.write(",".join(header) + "\n")
        for row in rows:
            buf.write(",".join(_fmt_cell(v) for v in row) + "\n")
    else:
        payload = {
            "meta": meta,
            "columns": header,
            "rows": [[_json_cell(v) for v in row] for row in rows],
        }
        buf.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    text = buf.getvalue()
    if spec.output == "-":
        sys.stdout.write(text)
        return
    out_dir = os.path.dirname(os.path.abspath(spec.output))
    fd, tmp = tempfile.mkstemp(dir=out_dir, prefix=".casimir-mag-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, spec.output)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _fmt_cell(v):
    # repr of a float is the shortest digit string that round-trips,
    # so output stays exact and byte-reproducible without .17g noise.
    # The float() cast strips numpy scalar types.
    if isinstance(v, float):
        return repr(float(v))
    return str(v)


def _json_cell(v):
    if isinstance(v, float) and not math.isfinite(v):
        return str(v)
    return v


def _base_meta(spec: RunSpec) -> dict:
    """Resolved-configuration block every output carries."""
    meta = {
        "casimir_mag_version": __version__,
        "hbar_J_s": _fmt_cell(HBAR),
        "c_m_per_s": _fmt_cell(C_LIGHT),
        "k_B_J_per_K": _fmt_cell(K_B),
        "tol": _fmt_cell(spec.tol),
    }
    if spec.mu_mode is not None:
        meta["mu_mode"] = spec.mu_mode
    for label, m in (("material_1", spec.material_1), ("material_2", spec.material_2)):
        if m is not None:
            m = _apply_mu_mode(spec, m)
            desc = (
                f"{m.name} omega_p={m.omega_p:.9e} rad/s mu0={m.mu0:g} "
                f"relaxation={m.relaxation} gamma_value={m.gamma_value:.9e} "
                f"dispersion={m.dispersion}"
            )
            if m.dispersion == "debye":
                desc += f" omega_m={m.omega_m:.9e} rad/s"
            meta[label] = desc
    return meta


def _apply_mu_mode(spec: RunSpec, m: MaterialModel) -> MaterialModel:
    """Override the material's dispersion per the requested mu-mode."""
    if spec.mu_mode is None or spec.mu_mode == "static-zero-term-only":
        return m
    if spec.mu_mode == "static":
        return dataclasses.replace(m, dispersion="constant")
    if m.omega_m <= 0.0:
        raise ConfigError(
            f"mu-mode debye needs omega_m in the material file for {m.name!r}"
        )
    return dataclasses.replace(m, dispersion="debye")


def _zero_only(spec: RunSpec) -> bool:
    return spec.mu_mode == "static-zero-term-only"


def _config(spec: RunSpec, T: Optional[float] = None, a: Optional[float] = None):
    m1 = _apply_mu_mode(spec, spec.material_1)
    m2 = _apply_mu_mode(spec, spec.material_2 or spec.material_1)
    return PlateConfiguration(
        material_1=m1,
        material_2=m2,
        a=a if a is not None else spec.a,
        T=T if T is not None else spec.T,
    )


# ----------------------------------------------------------------------
# Command implementations
# ----------------------------------------------------------------------

def _cmd_free_energy(spec: RunSpec) -> int:
    cfg = _config(spec)
    zero_only = _zero_only(spec)
    if spec.representation == "abel-plana":
        res = free_energy_abel_plana(
            cfg, model=spec.model, tol=spec.tol, static_mu_zero_only=zero_only
        )
    else:
        res = free_energy_matsubara(
            cfg, model=spec.model, tol=spec.tol, static_mu_zero_only=zero_only
        )
    meta = _base_meta(spec)
    meta.update(command="free-energy", model=spec.model,
                representation=res.representation)
    header = [
        "a_m",
        "T_K",
        "total_J_per_m2",
        "zero_T_part_J_per_m2",
        "thermal_correction_J_per_m2",
        "terms_used",
        "error_estimate_J_per_m2",
    ]
    rows = [[cfg.a, cfg.T, res.total, res.zero_T_part, res.thermal_correction,
             res.terms_used, res.truncation_error_estimate]]
    _write_output(spec, meta, header, rows)
    return 0


def _cmd_entropy(spec: RunSpec) -> int:
    cfg = _config(spec)
    if _zero_only(spec):
        fn = lambda T: free_energy_matsubara(
            dataclasses.replace(cfg, T=T),
            model=spec.model,
            tol=spec.tol,
            static_mu_zero_only=True,
        ).total
        res = entropy_fd(cfg, model=spec.model, dT=spec.dT, free_energy_fn=fn)
    else:
        res = entropy_fd(cfg, model=spec.model, dT=spec.dT)
    meta = _base_meta(spec)
    meta.update(command="entropy", model=spec.model, method=res.method)
    header = ["a_m", "T_K", "S_J_per_K_m2", "step_K", "error_estimate_J_per_K_m2"]
    rows = [[cfg.a, cfg.T, res.S, res.step, res.error_estimate]]
    _write_output(spec, meta, header, rows)
    return 0


def _cmd_pressure(spec: RunSpec) -> int:
    if _zero_only(spec):
        raise ConfigError(
            "mu-mode static-zero-term-only is not available for the "
            "pressure command; use mu_dispersion.pressure_correction"
        )
    cfg = _config(spec)
    p = pressure_fd(cfg, model=spec.model, da=spec.da, part=spec.part)
    meta = _base_meta(spec)
    meta.update(command="pressure", model=spec.model, part=spec.part)
    header = ["a_m", "T_K", "P_Pa"]
    rows = [[cfg.a, cfg.T, p]]
    _write_output(spec, meta, header, rows)
    return 0


def _cmd_nernst_scan(spec: RunSpec) -> int:
    if _zero_only(spec):
        raise ConfigError(
            "mu-mode static-zero-term-only is not available for nernst-scan"
        )
    grid = tuple(sorted(spec.t_range, reverse=True))
    cfg = _config(spec, T=grid[0])
    report = nernst_scan(cfg, spec.model, grid)
    meta = _base_meta(spec)
    meta.update(
        command="nernst-scan",
        model=spec.model,
        a_m=_fmt_cell(cfg.a),
        extrapolated_S0_J_per_K_m2=_fmt_cell(report.extrapolated_S0),
        extrapolation_error_J_per_K_m2=_fmt_cell(report.extrapolation_error),
        predicted_drude_S0_J_per_K_m2=_fmt_cell(report.predicted_S0),
        atol_J_per_K_m2=_fmt_cell(report.atol),
        classification=report.classification,
        matches_prediction=report.matches_prediction,
        non_monotone_residuals=report.non_monotone_residuals,
    )
    header = ["T_K", "tau", "S_J_per_K_m2", "S_error_J_per_K_m2", "flag"]
    rows = []
    for T, tau, s, err in zip(
        report.T_grid, report.tau_grid, report.S_values, report.S_errors
    ):
        flag = "tau_above_half" if tau >= _TAU_SOFT_LIMIT else ""
        rows.append([T, tau, s, err, flag])
    _write_output(spec, meta, header, rows)
    return 0


def _cmd_sign_map(spec: RunSpec) -> int:
    if _zero_only(spec):
        raise ConfigError(
            "mu-mode static-zero-term-only is not available for sign-map"
        )
    material = _apply_mu_mode(spec, spec.material_1)
    rows_raw = entropy_sign_map(material, spec.a_range)
    bad = [a for a, lam, s0, sign, ok in rows_raw if not ok]
    if bad and not spec.force:
        raise ValidityError(
            f"{len(bad)} grid point(s) below a={max(bad):.3g} m exceed the "
            "expansion validity gate; rerun with --force to keep them flagged"
        )
    meta = _base_meta(spec)
    meta["command"] = "sign-map"
    try:
        meta["threshold_m"] = _fmt_cell(positivity_threshold(material))
    except ValidityError as exc:
        meta["threshold_m"] = f"none ({exc})"
    header = ["a_m", "lambda", "S0_J_per_K_m2", "sign", "flag"]
    rows = []
    for a, lam, s0, sign, ok in rows_raw:
        if not ok:
            flag = "lambda_above_gate"
        elif lam > _LAMBDA_SOFT_LIMIT:
            flag = "lambda_large"
        else:
            flag = ""
        rows.append([a, lam, s0, sign, flag])
    _write_output(spec, meta, header, rows)
    return 0


def _default_grid(model: str):
    ni = nickel()
    if model == "plasma":
        points = [(5e-6, 300.0), (5e-6, 150.0), (8e-6, 300.0), (3e-6, 500.0)]
    else:
        # Low temperatures: the analytic Drude route needs tau < 1.
        points = [(5e-6, 10.0), (5e-6, 20.0), (8e-6, 15.0)]
    return [
        PlateConfiguration(material_1=ni, material_2=ni, a=a, T=T)
        for a, T in points
    ]


def _cmd_validate(spec: RunSpec) -> int:
    if spec.grid != "default":
        raise ConfigError(f"unknown grid {spec.grid!r}; only 'default' exists")
    cfgs = _default_grid(spec.model)
    rows_raw = _grid_map(
        lambda cfg: discrepancy_table([cfg], spec.model)[0], cfgs
    )
    bound = _VALIDATE_BOUNDS[spec.model]
    meta = _base_meta(spec)
    meta.update(command="validate", model=spec.model, grid=spec.grid,
                bound_rel=_fmt_cell(bound))
    header = [
        "a_m", "T_K", "tau", "lambda",
        "analytic_J_per_m2", "numeric_J_per_m2", "rel_diff", "within_bound",
    ]
    rows = []
    ok = True
    for r in rows_raw:
        within = abs(r.rel_diff) <= bound
        ok = ok and within
        rows.append([r.a, r.T, r.tau, r.lam, r.analytic, r.numeric,
                     r.rel_diff, within])
    meta["all_within_bound"] = ok
    _write_output(spec, meta, header, rows)
    return 0 if ok else 1


# ----------------------------------------------------------------------
# Parser
# ----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="casimir-mag",
        description="Casimir free energy, entropy, and pressure between "
        "magnetic metal plates",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, material=True):
        if material:
            p.add_argument("--material", required=True,
                           help="material config path or built-in name")
            p.add_argument("--material-2", default=None,
                           help="second plate material (defaults to --material)")
            p.add_argument(
                "--mu-mode",
                choices=("static", "debye", "static-zero-term-only"),
                default=None,
                help="permeability treatment; default follows the material file",
            )
        p.add_argument("--output", default="-",
                       help="output path, or - for stdout")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--force", action="store_true",
                       help="keep going on soft validity flags")
        p.add_argument("--tol", type=float, default=1e-10,
                       help="relative tolerance of the numerics")

    p = sub.add_parser("free-energy", help="free energy at one point")
    common(p)
    p.add_argument("--model", choices=("plasma", "drude"), default="plasma")
    p.add_argument("--a", type=float, required=True, help="separation, m")
    p.add_argument("--T", type=float, required=True, help="temperature, K")
    p.add_argument("--representation", choices=("matsubara", "abel-plana"),
                   default="matsubara")

    p = sub.add_parser("entropy", help="entropy at one point")
    common(p)
    p.add_argument("--model", choices=("plasma", "drude"), default="plasma")
    p.add_argument("--a", type=float, required=True, help="separation, m")
    p.add_argument("--T", type=float, required=True, help="temperature, K")
    p.add_argument("--dT", type=float, default=None, help="difference step, K")

    p = sub.add_parser("pressure", help="pressure at one point")
    common(p)
    p.add_argument("--model", choices=("plasma", "drude"), default="plasma")
    p.add_argument("--a", type=float, required=True, help="separation, m")
    p.add_argument("--T", type=float, required=True, help="temperature, K")
    p.add_argument("--da", type=float, default=None, help="difference step, m")
    p.add_argument("--part", choices=("total", "thermal"), default="total")

    p = sub.add_parser("nernst-scan", help="low-temperature entropy scan")
    common(p)
    p.add_argument("--model", choices=("plasma", "drude"), default="plasma")
    p.add_argument("--a", type=float, required=True, help="separation, m")
    p.add_argument("--t-range", required=True,
                   help="temperature grid start:stop:kind:count (K)")

    p = sub.add_parser("sign-map", help="zero-T Drude entropy sign vs separation")
    common(p)
    p.add_argument("--a-range", required=True,
                   help="separation grid start:stop:kind:count (m)")

    p = sub.add_parser("validate", help="analytic vs numeric discrepancy table")
    common(p, material=False)
    p.add_argument("--model", choices=("plasma", "drude"), default="plasma")
    p.add_argument("--grid", default="default")

    return parser


def _spec_from_args(args: argparse.Namespace) -> RunSpec:
    fields = {"command": args.command}
    if hasattr(args, "material"):
        fields["material_1"] = _resolve_material(args.material)
        if getattr(args, "material_2", None):
            fields["material_2"] = _resolve_material(args.material_2)
    for name, attr in (
        ("model", "model"), ("mu_mode", "mu_mode"), ("a", "a"), ("T", "T"),
        ("dT", "dT"), ("da", "da"),
        ("part", "part"), ("representation", "representation"),
        ("grid", "grid"), ("output", "output"), ("force", "force"),
        ("tol", "tol"),
    ):
        if hasattr(args, attr) and getattr(args, attr) is not None:
            fields[name] = getattr(args, attr)
    if getattr(args, "format", None):
        fields["fmt"] = args.format
    if getattr(args, "t_range", None):
        fields["t_range"] = _parse_range(args.t_range)
    if getattr(args, "a_range", None):
        fields["a_range"] = _parse_range(args.a_range)
    return RunSpec(**fields)


_COMMANDS = {
    "free-energy": _cmd_free_energy,
    "entropy": _cmd_entropy,
    "pressure": _cmd_pressure,
    "nernst-scan": _cmd_nernst_scan,
    "sign-map": _cmd_sign_map,
    "validate": _cmd_validate,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = _spec_from_args(args)
        return _COMMANDS[spec.command](spec)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValidityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
