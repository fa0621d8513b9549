"""Command-line interface.

Subcommands: coeffs, simulate, validate, compare, error-in-time, analyze,
sweep.  A JSON config file supplies defaults; flags override file values.
Exit codes: 0 success, 2 bad configuration, 3 solver failure; failures
print a machine-readable JSON error record to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .banded import SolverError
from .coefficients import BoussinesqParameters, DegenerateRegimeError, FluidRegime
from .config import ExperimentConfig, KNOWN_MODELS, InitialDataSpec
from . import experiments

CONFIG_FLAGS = ("gamma", "delta", "epsilon", "dt", "t_end", "outdir", "workers")


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", type=Path, help="JSON config file")
    p.add_argument("--gamma", type=float, help="density ratio rho1/rho2")
    p.add_argument("--delta", type=float, help="depth ratio d1/d2")
    p.add_argument("--epsilon", type=float, help="long-wave parameter")
    p.add_argument("--length", type=float, help="domain length")
    p.add_argument("--dx", type=float, help="grid spacing")
    p.add_argument("--dt", type=float, help="time step")
    p.add_argument("--t-end", dest="t_end", type=float, help="final time")
    p.add_argument("--outdir", type=Path, default=None, help="output directory")
    p.add_argument("--workers", type=int, help="worker pool size for batch suites")


def _load_config(args) -> ExperimentConfig:
    config = (ExperimentConfig.from_json(args.config)
              if getattr(args, "config", None) else ExperimentConfig())
    overrides = {}
    for name in CONFIG_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            overrides[name] = str(value) if name == "outdir" else value
    if getattr(args, "length", None) is not None or getattr(args, "dx", None) is not None:
        from .config import GridSpec
        overrides["grid"] = GridSpec(
            length=args.length if args.length is not None else config.grid.length,
            dx=args.dx if args.dx is not None else config.grid.dx)
    if getattr(args, "models", None):
        overrides["models"] = tuple(args.models)
    if getattr(args, "snapshot_times", None):
        overrides["snapshot_times"] = tuple(args.snapshot_times)
    if getattr(args, "initial", None):
        overrides["initial_data"] = _parse_initial(args.initial)
    return config.replace(**overrides) if overrides else config


def _parse_initial(text: str) -> InitialDataSpec:
    """Accepts 'soliton:M1,M2,M3,M4', 'bump:M,kappa' or 'rigid_lid:M,kappa'."""
    kind, _, rest = text.partition(":")
    values = [float(v) for v in rest.split(",")] if rest else []
    if kind == "soliton":
        amps = tuple(values) if values else (1.0, 0.0, 0.0, 0.0)
        return InitialDataSpec(kind="soliton", amplitudes=amps)
    if kind in ("bump", "rigid_lid"):
        M = values[0] if values else 1.0
        kappa = values[1] if len(values) > 1 else 1.0
        return InitialDataSpec(kind=kind, amplitude=M, kappa=kappa)
    raise ValueError(f"unknown initial data {text!r}")


def _outdir(args, default: str) -> Path:
    out = args.outdir if args.outdir is not None else Path(default)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_coeffs(args) -> int:
    config = _load_config(args)
    regime = config.regime()
    table = experiments.coefficient_table(regime, config.params)
    if args.json:
        print(json.dumps(table, indent=2))
        return 0
    print(f"regime: gamma={regime.gamma}, delta={regime.delta}, epsilon={regime.epsilon}")
    print(f"wave speeds: c+ = {table['c_plus']:.10f}, c- = {table['c_minus']:.10f}")
    print("modes (speed, nonlinearity, dispersion):")
    for m in table["modes"]:
        vec = ", ".join(f"{v:+.6f}" for v in m["vector"])
        print(f"  c = {m['speed']:+.6f}  lambda = {m['nonlinearity']:+.6f}  "
              f"mu = {m['dispersion']:+.6f}  e = ({vec})")
    rl = table["rigid_lid"]
    print(f"rigid lid: c = {rl['c']:.6f}, lambda = {rl['lambda']:+.6f}, "
          f"mu = {rl['mu']:.6f}, interface nonlinearity = {rl['lambda_interface']:+.6f}")
    print(f"critical depth ratio: {table['delta_critical']:.6f} "
          f"(rigid lid: {table['delta_critical_rigid']:.6f})")
    print(f"slow-mode interface polarity: {table['slow_mode_polarity']}")
    print(f"surface dominates slow mode: {table['surface_dominant_slow']}")
    print(f"fast mode dominates (v0=0): {table['fast_dominates_zero_velocity']}")
    print(f"rigid-lid validity ratios: surface/slow = "
          f"{table['validity_surface_ratio']:.4f}, fast/slow = "
          f"{table['validity_fast_ratio']:.4f}")
    print(f"symmetrizer shift K = {table['K']}")
    return 0


def cmd_simulate(args) -> int:
    config = _load_config(args)
    out = _outdir(args, "out/simulate")
    result = experiments.snapshots(config, out)
    config.save_json(out / "config.json")
    print(f"wrote {len(result['paths'])} files to {out}")
    return 0


def cmd_validate(args) -> int:
    config = _load_config(args)
    out = _outdir(args, "out/validate")
    report = experiments.validate_schemes(config, outdir=out)
    for row in report.rows:
        print(f"dx={row.dx:<6g} T={row.T:<4g} eps={row.epsilon:<5g} "
              f"{row.model_a} vs {row.model_b}: {row.rel_l2_error:.4e}")
    for key in ("kdv_order", "bouss_order"):
        if key in report.summary:
            print(f"{key} = {report.summary[key]:.3f}")
    print(f"report written to {out}")
    return 0


def cmd_compare(args) -> int:
    config = _load_config(args)
    out = _outdir(args, "out/compare")
    epsilons = tuple(args.epsilons) if args.epsilons else (0.1, 0.05, 0.01)
    families = tuple(args.families) if args.families else ("soliton", "bump")
    report = experiments.compare_models(config, outdir=out, epsilons=epsilons,
                                        t_end=args.T, families=families)
    for row in report.rows:
        print(f"eps={row.epsilon:<5g} {row.model_a} vs {row.model_b}: "
              f"{row.rel_l2_error:.4e}")
    for key, val in report.summary.items():
        print(f"{key} = {val:.3f}")
    print(f"report written to {out}")
    return 0


def cmd_error_in_time(args) -> int:
    config = _load_config(args)
    out = _outdir(args, "out/error_in_time")
    epsilons = tuple(args.epsilons) if args.epsilons else (0.1, 0.05, 0.025, 0.01)
    families = tuple(args.families) if args.families else ("soliton", "bump")
    result = experiments.error_in_time(config, outdir=out, epsilons=epsilons,
                                       families=families, cadence=args.cadence)
    for key, val in sorted(result["summary"].items()):
        print(f"{key} = {val:.4g}")
    print(f"series written to {out}")
    return 0


def cmd_analyze(args) -> int:
    config = _load_config(args)
    out = _outdir(args, "out/analyze")
    experiments.analyze_regimes(out, n_gamma=args.n_gamma, epsilon=config.epsilon)
    table = experiments.coefficient_table(config.regime(), config.params)
    (out / "point_analysis.json").write_text(json.dumps(table, indent=2) + "\n")
    if args.rigid_lid:
        report = experiments.rigid_lid_comparison(config, outdir=out)
        for name, dist in report.summary["interface_distances"].items():
            print(f"point {name}: interface distance {dist:.4e}")
    print(f"analysis written to {out}")
    return 0


def cmd_sweep(args) -> int:
    config = _load_config(args)
    out = _outdir(args, "out/sweep")
    import numpy as np

    gammas = np.linspace(args.gamma_min, args.gamma_max, args.n_gamma)
    deltas = np.linspace(args.delta_min, args.delta_max, args.n_delta)
    rows = experiments.sweep(out, gammas=gammas, deltas=deltas,
                             epsilon=config.epsilon, workers=config.workers)
    print(f"swept {len(rows)} parameter points; table in {out}/sweep.csv")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bilayerwaves",
        description="Two-layer long-wave models: coupled Boussinesq-type "
                    "systems and the four-wave KdV approximation.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("coeffs", help="print all regime coefficients")
    _add_common(p)
    p.add_argument("--json", action="store_true", help="JSON output")
    p.set_defaults(fn=cmd_coeffs)

    p = sub.add_parser("simulate", help="one run with snapshot dumps")
    _add_common(p)
    p.add_argument("--models", nargs="+", choices=KNOWN_MODELS)
    p.add_argument("--snapshot-times", dest="snapshot_times", nargs="+", type=float)
    p.add_argument("--initial", help="soliton:M1,M2,M3,M4 | bump:M,kappa | rigid_lid:M,kappa")
    p.set_defaults(fn=cmd_simulate)

    p = sub.add_parser("validate", help="scheme-validation error table")
    _add_common(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("compare", help="model gaps across epsilon")
    _add_common(p)
    p.add_argument("--epsilons", nargs="+", type=float)
    p.add_argument("--families", nargs="+", choices=("soliton", "bump"))
    p.add_argument("--T", type=float, default=1.0, help="comparison time")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("error-in-time", help="error growth over T = 1/epsilon")
    _add_common(p)
    p.add_argument("--epsilons", nargs="+", type=float)
    p.add_argument("--families", nargs="+", choices=("soliton", "bump"))
    p.add_argument("--cadence", type=float, default=0.5, help="sampling interval")
    p.set_defaults(fn=cmd_error_in_time)

    p = sub.add_parser("analyze", help="regime classification and maps")
    _add_common(p)
    p.add_argument("--n-gamma", dest="n_gamma", type=int, default=400)
    p.add_argument("--rigid-lid", dest="rigid_lid", action="store_true",
                   help="also run the rigid-lid comparison at points A-D")
    p.set_defaults(fn=cmd_analyze)

    p = sub.add_parser("sweep", help="parameter-grid classification batch")
    _add_common(p)
    p.add_argument("--gamma-min", type=float, default=0.05)
    p.add_argument("--gamma-max", type=float, default=0.95)
    p.add_argument("--delta-min", type=float, default=0.1)
    p.add_argument("--delta-max", type=float, default=2.5)
    p.add_argument("--n-gamma", dest="n_gamma", type=int, default=19)
    p.add_argument("--n-delta", dest="n_delta", type=int, default=25)
    p.set_defaults(fn=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, DegenerateRegimeError, FileNotFoundError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except (SolverError, FloatingPointError) as exc:
        json.dump({"error": type(exc).__name__, "message": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
