"""Command-line front end.

Reads an INI run configuration, executes the requested computation or
sweep, and writes a CSV or JSON table.  CSV output starts with a
'#'-prefixed comment block recording the fully resolved configuration, so
a result file is self-describing; values are printed with 17 significant
digits.  Validity diagnostics go to stderr, never into the table.

Exit codes: 0 success, 2 config parse error, 3 physics domain error,
4 convergence failure (partial results are still written, flagged).
"""

import argparse
import dataclasses
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from .config import ConfigError, RunConfig, describe_config, load_config
from .electrostatics import asymmetric_electric_force
from .engine import (casimir_force, casimir_gradient, rotated_force,
                     rotated_gradient, rotation_factor, two_halves_force,
                     two_halves_gradient)
from .geometry import Environment, RotatedLens, TwoHalvesLens, validate_geometry
from .oscillator import frequency_shift_for_variant, frequency_shift_linear
from .specfun import ConvergenceError


def thermal_correction(force_t: float, force_t0: float) -> float:
    """Fractional thermal contribution (F(T) - F(0)) / F(T).

    Normalizing by the full thermal force keeps the measure bounded as the
    thermal part grows to dominate at large separation.
    """
    return (force_t - force_t0) / force_t


def _force_any(geom, env, model, quad):
    if isinstance(geom, TwoHalvesLens):
        return two_halves_force(geom, env, model, quad)
    if isinstance(geom, RotatedLens):
        return rotated_force(geom, env, model, quad)
    return casimir_force(geom, env, model, quad)


def _gradient_any(geom, env, model, quad):
    if isinstance(geom, TwoHalvesLens):
        return two_halves_gradient(geom, env, model, quad)
    if isinstance(geom, RotatedLens):
        return rotated_gradient(geom, env, model, quad)
    return casimir_gradient(geom, env, model, quad)


# ---------------------------------------------------------------------------
# per-command row builders.  Each returns (column names, point list, worker);
# the worker maps one sweep point to one row of plain numbers.

def _substitute(cfg: RunConfig, x: float):
    """Geometry/environment/oscillator/bias with the sweep variable set to x."""
    geom, env, osc, bias = cfg.geometry, cfg.environment, cfg.oscillator, cfg.bias
    var = cfg.sweep.variable
    if var == "a":
        env = Environment(a=float(x), T=env.T)
    elif var == "T":
        env = Environment(a=env.a, T=float(x))
    elif var == "phi":
        geom = dataclasses.replace(geom, phi=float(x))
    elif var == "Az":
        osc = dataclasses.replace(osc, Az=float(x))
    elif var == "V":
        bias = dataclasses.replace(bias, V=float(x))
    return geom, env, osc, bias


def _plan_force(cfg: RunConfig):
    grad = cfg.command == "gradient"
    value_cols = (["gradient_N_per_m", "gradient_T0_N_per_m"] if grad
                  else ["force_N", "force_T0_N"])
    columns = ["a_m", "T_K"] + value_cols + ["thermal_correction",
                                             "est_abs_error", "terms_used"]
    compute = _gradient_any if grad else _force_any

    def worker(x):
        if cfg.sweep is None:
            geom, env = cfg.geometry, cfg.environment
        else:
            geom, env, _, _ = _substitute(cfg, x)
        res = compute(geom, env, cfg.material, cfg.quadrature)
        if env.T == 0.0:
            res_t0 = res
        else:
            res_t0 = compute(geom, Environment(a=env.a, T=0.0), cfg.material,
                             cfg.quadrature)
        corr = thermal_correction(res.value, res_t0.value) if env.T > 0.0 else 0.0
        return [env.a, env.T, res.value, res_t0.value, corr,
                res.est_abs_error, res.terms_used]

    return columns, worker


def _plan_efield(cfg: RunConfig):
    columns = ["a_m", "V_volt", "V0_volt", "force_N"]

    def worker(x):
        if cfg.sweep is None:
            geom, env, bias = cfg.geometry, cfg.environment, cfg.bias
        else:
            geom, env, _, bias = _substitute(cfg, x)
        return [env.a, bias.V, bias.V0,
                asymmetric_electric_force(geom, env, bias)]

    return columns, worker


def _plan_freq_shift(cfg: RunConfig):
    columns = ["a_m", "T_K", "Az_m", "delta_omega2_rad2_per_s2",
               "delta_omega2_linear_rad2_per_s2", "omega_r_linear_rad_per_s"]

    def worker(x):
        if cfg.sweep is None:
            geom, env, osc = cfg.geometry, cfg.environment, cfg.oscillator
        else:
            geom, env, osc, _ = _substitute(cfg, x)
        nonlin = frequency_shift_for_variant(geom, env, cfg.material, osc,
                                             cfg.quadrature)
        lin = frequency_shift_linear(geom, env, cfg.material, osc,
                                     cfg.quadrature)
        return [env.a, env.T, osc.Az, nonlin, lin.delta_omega2, lin.omega_r]

    return columns, worker


def _plan_ratio_sweep(cfg: RunConfig):
    columns = ["phi_rad"] + [f"G_A_over_B_{r:g}" for r in cfg.ratios]

    def worker(phi):
        row = [float(phi)]
        for r in cfg.ratios:
            row.append(rotation_factor(r, 1.0, float(phi)).G)
        return row

    return columns, worker


_PLANS = {
    "force": _plan_force,
    "gradient": _plan_force,
    "efield": _plan_efield,
    "freq-shift": _plan_freq_shift,
    "ratio-sweep": _plan_ratio_sweep,
}


def run_command(cfg: RunConfig, threads: int = 1):
    """Execute the configured command.

    Returns (columns, rows, failure).  failure is None on full success or
    the ConvergenceError that cut the sweep short; rows then hold the points
    completed before it (in sweep order).
    """
    columns, worker = _PLANS[cfg.command](cfg)
    points = cfg.sweep.points() if cfg.sweep is not None else [None]
    rows = []
    failure = None
    if threads > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [pool.submit(worker, x) for x in points]
            for fut in futures:
                try:
                    rows.append(fut.result())
                except ConvergenceError as exc:
                    failure = exc
                    break
    else:
        for x in points:
            try:
                rows.append(worker(x))
            except ConvergenceError as exc:
                failure = exc
                break
    return columns, rows, failure


# ---------------------------------------------------------------------------
# emission

def format_csv(cfg: RunConfig, columns, rows, partial: bool = False) -> str:
    lines = ["# casimir-lens result table"]
    lines += [f"# {line}" for line in describe_config(cfg)]
    if partial:
        lines.append("# partial = true  (convergence failure; rows below are "
                      "the completed sweep prefix)")
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(
            str(v) if isinstance(v, int) else format(v, ".17g") for v in row))
    return "\n".join(lines) + "\n"


def format_json(cfg: RunConfig, columns, rows, partial: bool = False) -> str:
    doc = {
        "config": describe_config(cfg),
        "columns": list(columns),
        "rows": [[v for v in row] for row in rows],
        "partial": partial,
    }
    return json.dumps(doc, indent=2) + "\n"


def _emit(cfg: RunConfig, columns, rows, path, fmt, partial=False) -> None:
    text = (format_json if fmt == "json" else format_csv)(cfg, columns, rows,
                                                          partial)
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _warn_validity(cfg: RunConfig, quiet: bool) -> None:
    if quiet or cfg.geometry is None or cfg.environment is None:
        return
    seen = set()
    envs = [cfg.environment]
    if cfg.sweep is not None and cfg.sweep.variable == "a":
        pts = cfg.sweep.points()
        envs = [Environment(a=float(pts[0]), T=cfg.environment.T),
                Environment(a=float(pts[-1]), T=cfg.environment.T)]
    for env in envs:
        for msg in validate_geometry(cfg.geometry, env).warnings:
            if msg not in seen:
                seen.add(msg)
                print(f"warning: {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# argument handling

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="casimir-lens",
        description="Casimir force, gradient, calibration force and "
                    "oscillator frequency shift for a cylindrical lens "
                    "above a plate.")
    p.add_argument("--config", required=True, help="INI run configuration")
    p.add_argument("--output", help="output file (default: stdout or the "
                                    "config's [output] path)")
    p.add_argument("--format", choices=("csv", "json"),
                   help="override the output format")
    p.add_argument("--tolerance", type=float,
                   help="relative tolerance override for the frequency sums")
    p.add_argument("--threads", type=int, default=1,
                   help="worker threads for sweep points (default 1)")
    p.add_argument("--quiet", action="store_true",
                   help="suppress validity warnings on stderr")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.tolerance is not None:
            cfg = dataclasses.replace(
                cfg, quadrature=dataclasses.replace(cfg.quadrature,
                                                    rel_tol=args.tolerance))
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    path = args.output if args.output is not None else cfg.output_path
    fmt = args.format if args.format is not None else cfg.output_format

    _warn_validity(cfg, args.quiet)
    try:
        columns, rows, failure = run_command(cfg, threads=max(1, args.threads))
    except ValueError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3

    if failure is not None:
        print(f"convergence failure: {failure}", file=sys.stderr)
        _emit(cfg, columns, rows, path, fmt, partial=True)
        return 4
    _emit(cfg, columns, rows, path, fmt)
    return 0


def entry() -> None:
    raise SystemExit(main())
