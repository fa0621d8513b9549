"""Experiment drivers: scheme validation against exact solutions, model
intercomparison across epsilon, error growth in time, snapshot dumps, the
rigid-lid versus free-surface comparison, and regime-analysis sweeps.

Every driver emits rows in the fixed report schema (reporting.py), echoes
its full configuration into a provenance JSON, and renders the matching
figures.  All runs are deterministic; batch suites distribute independent
simulations over a bounded worker pool (BILAYERWAVES_WORKERS).
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .boussinesq import ForcingTerm, manufactured_forcing, run_boussinesq
from .coefficients import (
    BoussinesqParameters,
    FluidRegime,
    _matrix_s0,
    build_original_system,
    build_symmetric_system,
    free_surface_modes,
    original_to_transformed,
    rigid_lid_modes,
    rigid_lid_system,
    transformed_to_original,
    wave_speeds,
)
from .config import ExperimentConfig, InitialDataSpec, worker_count
from .decomposition import rigid_lid_initial_data
from .grid import PeriodicGrid, relative_l2_error
from .kdv import KdVCoefficients, mode_coefficients, run_kdv, run_kdv_approximation
from .regimes import classify, critical_ratio, rigid_lid_validity
from .reporting import (
    ExperimentReport,
    fig_convergence,
    fig_critical_ratio,
    fig_epsilon_scaling,
    fig_error_in_time,
    fig_interface_comparison,
    fig_regime_map,
    fig_snapshot,
    write_snapshot_csv,
    write_timeseries_csv,
)
from .waves import (
    algebraic_bump,
    default_soliton_amplitudes,
    flat_surface_zero_velocity,
    four_mode_soliton_data,
    soliton_profile,
)

__all__ = [
    "build_initial_state",
    "run_model",
    "validate_schemes",
    "compare_models",
    "error_in_time",
    "snapshots",
    "rigid_lid_comparison",
    "analyze_regimes",
    "sweep",
    "coefficient_table",
    "PAPER_VALIDATION_ROWS",
    "COMPARISON_POINTS",
]

# (dx, dt, L, T, epsilon) of the published validation table
PAPER_VALIDATION_ROWS = (
    (0.01, 0.01, 120.0, 5.0, 0.2),
    (0.02, 0.02, 120.0, 10.0, 0.1),
    (0.05, 0.05, 120.0, 20.0, 0.05),
)

# named parameter points of the rigid-lid discussion
COMPARISON_POINTS = {
    "A": (0.25, 1.0),
    "B": (0.25, 2.0),
    "C": (0.90, 1.0),
    "D": (0.25, 0.25),
}


def _loglog_slope(x, y) -> float:
    return float(np.polyfit(np.log(np.asarray(x, dtype=float)),
                            np.log(np.asarray(y, dtype=float)), 1)[0])


def _pool_map(fn, jobs, workers: int):
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, jobs))


# ---------------------------------------------------------------------------
# initial data and model runners


def build_initial_state(config: ExperimentConfig, grid: PeriodicGrid | None = None):
    """4-component initial state plus, for soliton data, its exact
    uncoupled trajectory, and for bump/rigid-lid data the (eta0, v0) pair."""
    grid = grid or PeriodicGrid.from_spacing(config.grid.length, config.grid.dx)
    regime = config.regime()
    spec = config.initial_data
    if spec.kind == "soliton":
        U0, exact = four_mode_soliton_data(spec.amplitudes, regime, grid)
        return U0, exact, None
    bump = algebraic_bump(spec.amplitude, spec.kappa, grid)
    U0 = flat_surface_zero_velocity(bump)
    return U0, None, (bump, np.zeros_like(bump))


def _embed_rigid_lid(state2: np.ndarray, regime: FluidRegime) -> np.ndarray:
    """(zeta, v) -> the compatible 4-component free-surface state."""
    return rigid_lid_initial_data(state2[0], state2[1], regime)


def _run_rigid_lid_kdv(eta0, v0, regime, grid, dt, t_end, sample_times):
    ms = rigid_lid_modes(regime)
    s0 = np.diag([1.0 - regime.gamma, 1.0 / (regime.gamma + regime.delta)])
    state0 = np.stack([eta0, v0])
    amps = [ms.e_plus @ s0 @ state0, ms.e_minus @ s0 @ state0]
    coeffs = [
        KdVCoefficients(ms.c, regime.epsilon * ms.lam, regime.epsilon * ms.mu),
        KdVCoefficients(-ms.c, regime.epsilon * ms.lam, -regime.epsilon * ms.mu),
    ]
    trajs = [run_kdv(a, c, grid, dt, t_end, sample_times=sample_times)
             for a, c in zip(amps, coeffs)]
    out = []
    for j in range(len(trajs[0])):
        t = trajs[0][j][0]
        state = np.outer(ms.e_plus, trajs[0][j][1]) + np.outer(ms.e_minus, trajs[1][j][1])
        out.append((t, state))
    return out


def run_model(model: str, config: ExperimentConfig, sample_times=None,
              grid: PeriodicGrid | None = None, check_every: int = 100):
    """Run one model from the configured initial data; rigid-lid and
    original-system states are returned in the shared 4-component
    (transformed) variables so trajectories are directly comparable."""
    grid = grid or PeriodicGrid.from_spacing(config.grid.length, config.grid.dx)
    regime = config.regime()
    U0, _, pair = build_initial_state(config, grid)
    dt, t_end = config.dt, config.t_end

    if model == "kdv_approx":
        return run_kdv_approximation(U0, regime, grid, dt, t_end,
                                     sample_times=sample_times,
                                     check_every=check_every)
    if model == "sym_bouss":
        system = build_symmetric_system(regime, config.params)
        return run_boussinesq(U0, system, grid, dt, t_end,
                              sample_times=sample_times, check_every=check_every)
    if model == "orig_bouss":
        system = build_original_system(regime)
        u0 = transformed_to_original(U0, regime, config.params, grid.dx)
        traj = run_boussinesq(u0, system, grid, dt, t_end,
                              sample_times=sample_times, check_every=check_every)
        return [(t, original_to_transformed(U, regime, config.params, grid.dx))
                for t, U in traj]
    if model in ("rigid_lid_bouss", "rigid_lid_kdv"):
        if pair is None:
            raise ValueError(f"{model} needs bump or rigid_lid initial data")
        eta0, v0 = pair
        if model == "rigid_lid_kdv":
            traj2 = _run_rigid_lid_kdv(eta0, v0, regime, grid, dt, t_end, sample_times)
        else:
            system = rigid_lid_system(regime)
            traj2 = run_boussinesq(np.stack([eta0, v0]), system, grid, dt, t_end,
                                   sample_times=sample_times, check_every=check_every)
        return [(t, _embed_rigid_lid(S, regime)) for t, S in traj2]
    raise ValueError(f"unknown model {model!r}")


# ---------------------------------------------------------------------------
# scheme validation (error table + refinement study)


def validate_schemes(config: ExperimentConfig | None = None,
                     outdir: str | Path | None = None,
                     paper_rows=PAPER_VALIDATION_ROWS,
                     refinements=(0.04, 0.02, 0.01),
                     refinement_t_end: float = 2.0,
                     include_linear_row: bool = True) -> ExperimentReport:
    """KdV scheme against the exact solitary wave and the forced symmetric
    scheme against the exact uncoupled trajectory, on the published
    (dx, dt, T, epsilon) rows plus a dyadic refinement study."""
    config = config or ExperimentConfig()
    report = ExperimentReport(provenance={"config": config.to_dict(),
                                          "paper_rows": [list(r) for r in paper_rows]})
    amplitudes = (config.initial_data.amplitudes
                  if config.initial_data.kind == "soliton" else (1.0, 0.0, 0.0, 0.0))

    def one_case(dx, dt, L, T, eps):
        regime = FluidRegime(config.gamma, config.delta, eps)
        grid = PeriodicGrid.from_spacing(L, dx)
        modes = free_surface_modes(regime)
        # generic KdV solver vs its exact solitary wave (fast mode)
        coeffs = mode_coefficients(modes[0], eps)
        M = amplitudes[0] if amplitudes[0] != 0.0 else 1.0
        from .waves import SolitonSpec
        spec = SolitonSpec(M, 0.0, coeffs)
        t0 = time.perf_counter()
        u_end = run_kdv(soliton_profile(spec, 0.0, grid), coeffs, grid, dt, T)[-1][1]
        kdv_err = relative_l2_error(u_end, soliton_profile(spec, T, grid), grid.dx)
        kdv_wall = time.perf_counter() - t0
        # forced symmetric system vs the exact uncoupled trajectory
        system = build_symmetric_system(regime, config.params)
        U0, exact = four_mode_soliton_data(amplitudes, regime, grid)
        forcing = manufactured_forcing(system, exact)
        t0 = time.perf_counter()
        U_end = run_boussinesq(U0, system, grid, dt, T, forcing=forcing)[-1][1]
        bouss_err = relative_l2_error(U_end, exact.state(T), grid.dx)
        bouss_wall = time.perf_counter() - t0
        return kdv_err, kdv_wall, bouss_err, bouss_wall

    for dx, dt, L, T, eps in paper_rows:
        kdv_err, kdv_wall, bouss_err, bouss_wall = one_case(dx, dt, L, T, eps)
        report.add(dx=dx, dt=dt, L=L, T=T, epsilon=eps, model_a="kdv",
                   model_b="exact_soliton", rel_l2_error=kdv_err,
                   wall_time_s=kdv_wall)
        report.add(dx=dx, dt=dt, L=L, T=T, epsilon=eps, model_a="sym_bouss_forced",
                   model_b="exact_kdv_approximation", rel_l2_error=bouss_err,
                   wall_time_s=bouss_wall)

    if include_linear_row:
        err, wall = _linear_transport_error(config, dx=0.01, dt=0.01, L=120.0, T=5.0)
        report.add(dx=0.01, dt=0.01, L=120.0, T=5.0, epsilon=0.0,
                   model_a="sym_bouss_linear", model_b="exact_transport",
                   rel_l2_error=err, wall_time_s=wall)
        report.summary["linear_row_error"] = err

    if refinements:
        kdv_errs, bouss_errs = [], []
        for h in refinements:
            kdv_err, kdv_wall, bouss_err, bouss_wall = one_case(
                h, h, config.grid.length, refinement_t_end, config.epsilon)
            kdv_errs.append(kdv_err)
            bouss_errs.append(bouss_err)
            report.add(dx=h, dt=h, L=config.grid.length, T=refinement_t_end,
                       epsilon=config.epsilon, model_a="kdv",
                       model_b="exact_soliton", rel_l2_error=kdv_err,
                       wall_time_s=kdv_wall)
            report.add(dx=h, dt=h, L=config.grid.length, T=refinement_t_end,
                       epsilon=config.epsilon, model_a="sym_bouss_forced",
                       model_b="exact_kdv_approximation", rel_l2_error=bouss_err,
                       wall_time_s=bouss_wall)
        # err ~ h^p: positive log-log slope in the spacing
        report.summary["kdv_order"] = _loglog_slope(refinements, kdv_errs)
        report.summary["bouss_order"] = _loglog_slope(refinements, bouss_errs)
        report.summary["kdv_refinement_errors"] = kdv_errs
        report.summary["bouss_refinement_errors"] = bouss_errs
        if outdir is not None:
            fig_convergence(Path(outdir) / "validate_convergence.png", refinements,
                            {"kdv vs exact soliton": kdv_errs,
                             "forced system vs exact trajectory": bouss_errs})
    if outdir is not None:
        report.write(outdir, "validate")
    return report


def _linear_transport_error(config, dx, dt, L, T):
    """epsilon -> 0 sanity run: the scheme on the linear symmetric system
    against exact eigenmode transport (forcing vanishes identically)."""
    import dataclasses

    regime = FluidRegime(config.gamma, config.delta, 0.1)
    grid = PeriodicGrid.from_spacing(L, dx)
    modes = free_surface_modes(regime)
    system = dataclasses.replace(build_symmetric_system(regime, config.params),
                                 epsilon=0.0)
    k_shape = 0.25
    U0 = np.outer(modes[0].vector, 1.0 / np.cosh(k_shape * grid.x) ** 2)
    t0 = time.perf_counter()
    U_end = run_boussinesq(U0, system, grid, dt, T)[-1][1]
    wall = time.perf_counter() - t0
    exact = np.outer(modes[0].vector,
                     1.0 / np.cosh(k_shape * (grid.x - modes[0].speed * T)) ** 2)
    return relative_l2_error(U_end, exact, grid.dx), wall


# ---------------------------------------------------------------------------
# model gaps across epsilon (fixed time)


def _compare_job(args):
    cfg_dict, family, eps, t_end = args
    config = ExperimentConfig.from_dict(cfg_dict)
    regime = FluidRegime(config.gamma, config.delta, eps)
    grid = PeriodicGrid.from_spacing(config.grid.length, config.grid.dx)
    if family == "soliton":
        amps = (config.initial_data.amplitudes
                if config.initial_data.kind == "soliton" else (1.0, 0.0, 0.0, 0.0))
        V0, _ = four_mode_soliton_data(amps, regime, grid)
    else:
        V0 = flat_surface_zero_velocity(
            algebraic_bump(config.initial_data.amplitude,
                           config.initial_data.kappa, grid))
    dt = config.dt
    t0 = time.perf_counter()
    sym = build_symmetric_system(regime, config.params)
    Vs = run_boussinesq(V0, sym, grid, dt, t_end)[-1][1]
    wall_sym = time.perf_counter() - t0

    t0 = time.perf_counter()
    orig = build_original_system(regime)
    u0 = transformed_to_original(V0, regime, config.params, grid.dx)
    Uo = run_boussinesq(u0, orig, grid, dt, t_end)[-1][1]
    Vo = original_to_transformed(Uo, regime, config.params, grid.dx)
    wall_orig = time.perf_counter() - t0

    t0 = time.perf_counter()
    Vk = run_kdv_approximation(V0, regime, grid, dt, t_end)[-1][1]
    wall_kdv = time.perf_counter() - t0

    return {
        "family": family,
        "epsilon": eps,
        "orig_error": relative_l2_error(Vo, Vs, grid.dx),
        "kdv_error": relative_l2_error(Vk, Vs, grid.dx),
        "wall_orig": wall_sym + wall_orig,
        "wall_kdv": wall_sym + wall_kdv,
    }


def compare_models(config: ExperimentConfig | None = None,
                   outdir: str | Path | None = None,
                   epsilons=(0.1, 0.05, 0.01), t_end: float = 1.0,
                   families=("soliton", "bump")) -> ExperimentReport:
    """Relative gaps (at fixed time) between the symmetric system and the
    original system / the uncoupled KdV approximation, with the fitted
    log-log slopes across epsilon."""
    config = config or ExperimentConfig()
    report = ExperimentReport(provenance={"config": config.to_dict(),
                                          "epsilons": list(epsilons),
                                          "t_end": t_end,
                                          "families": list(families)})
    jobs = [(config.to_dict(), family, eps, t_end)
            for family in families for eps in epsilons]
    results = _pool_map(_compare_job, jobs, worker_count(config.workers))
    grid_spec = config.grid
    by_family = {}
    for res in results:
        by_family.setdefault(res["family"], []).append(res)
        report.add(dx=grid_spec.dx, dt=config.dt, L=grid_spec.length, T=t_end,
                   epsilon=res["epsilon"], model_a="sym_bouss", model_b="orig_bouss",
                   rel_l2_error=res["orig_error"], wall_time_s=res["wall_orig"])
        report.add(dx=grid_spec.dx, dt=config.dt, L=grid_spec.length, T=t_end,
                   epsilon=res["epsilon"], model_a="sym_bouss", model_b="kdv_approx",
                   rel_l2_error=res["kdv_error"], wall_time_s=res["wall_kdv"])
    for family, rows in by_family.items():
        rows.sort(key=lambda r: -r["epsilon"])
        eps = [r["epsilon"] for r in rows]
        report.summary[f"{family}_orig_slope"] = _loglog_slope(
            eps, [r["orig_error"] for r in rows])
        report.summary[f"{family}_kdv_slope"] = _loglog_slope(
            eps, [r["kdv_error"] for r in rows])
        if outdir is not None:
            fig_epsilon_scaling(
                Path(outdir) / f"compare_{family}.png", eps,
                {"sym vs original": [r["orig_error"] for r in rows],
                 "sym vs KdV approximation": [r["kdv_error"] for r in rows]},
                slopes={"sym vs original": report.summary[f"{family}_orig_slope"],
                        "sym vs KdV approximation": report.summary[f"{family}_kdv_slope"]})
    if outdir is not None:
        report.write(outdir, "compare")
    return report


# ---------------------------------------------------------------------------
# error growth in time


def _error_in_time_job(args):
    cfg_dict, family, eps, cadence = args
    config = ExperimentConfig.from_dict(cfg_dict)
    regime = FluidRegime(config.gamma, config.delta, eps)
    grid = PeriodicGrid.from_spacing(config.grid.length, config.grid.dx)
    dt = config.dt
    t_end = round(1.0 / eps / dt) * dt
    if family == "soliton":
        amps = (config.initial_data.amplitudes
                if config.initial_data.kind == "soliton" else (1.0, 0.0, 0.0, 0.0))
        V0, _ = four_mode_soliton_data(amps, regime, grid)
    else:
        V0 = flat_surface_zero_velocity(
            algebraic_bump(config.initial_data.amplitude,
                           config.initial_data.kappa, grid))
    samples = [round(t / dt) * dt for t in np.arange(cadence, t_end + cadence / 2, cadence)]
    sym = build_symmetric_system(regime, config.params)
    traj_s = run_boussinesq(V0, sym, grid, dt, t_end, sample_times=samples)
    traj_k = run_kdv_approximation(V0, regime, grid, dt, t_end, sample_times=samples)
    ts, errs = [], []
    for (t1, Us), (t2, Uk) in zip(traj_s, traj_k):
        ts.append(t1)
        errs.append(relative_l2_error(Uk, Us, grid.dx))
    return {"family": family, "epsilon": eps, "t": ts, "err": errs}


def error_in_time(config: ExperimentConfig | None = None,
                  outdir: str | Path | None = None,
                  epsilons=(0.1, 0.05, 0.025, 0.01),
                  families=("soliton", "bump"),
                  cadence: float = 0.5) -> dict:
    """KdV-approximation error against the symmetric system over the
    long-wave horizon T = 1/epsilon, with a t^p growth fit per series."""
    config = config or ExperimentConfig(horizon_factor=4.0)
    jobs = [(config.to_dict(), family, eps, cadence)
            for family in families for eps in epsilons]
    results = _pool_map(_error_in_time_job, jobs, worker_count(config.workers))
    series = {}
    summary = {}
    rows = []
    for res in results:
        family, eps = res["family"], res["epsilon"]
        t = np.asarray(res["t"])
        err = np.asarray(res["err"])
        series.setdefault(family, {})[eps] = (t, err)
        window = (t >= 1.0) & (err > 0)
        p = _loglog_slope(t[window], err[window])
        summary[f"{family}_eps{eps:g}_growth_exponent"] = p
        summary[f"{family}_eps{eps:g}_final_error"] = float(err[-1])
        summary[f"{family}_eps{eps:g}_final_over_eps"] = float(err[-1] / eps)
        rows.extend((family, eps, float(ti), float(ei)) for ti, ei in zip(t, err))
    if outdir is not None:
        outdir = Path(outdir)
        write_timeseries_csv(outdir / "error_in_time.csv", rows)
        fig_error_in_time(outdir / "error_in_time.png", series)
        (outdir / "error_in_time.json").write_text(
            json.dumps({"provenance": {"config": config.to_dict(),
                                       "epsilons": list(epsilons),
                                       "families": list(families)},
                        "summary": summary}, indent=2) + "\n")
    return {"series": series, "summary": summary}


# ---------------------------------------------------------------------------
# snapshots and the rigid-lid comparison


def snapshots(config: ExperimentConfig, outdir: str | Path) -> dict:
    """Run the configured models and dump (x, eta1, eta2, v1, v2, zeta1,
    zeta2) at every snapshot time, with one overlay figure per time."""
    outdir = Path(outdir)
    grid = PeriodicGrid.from_spacing(config.grid.length, config.grid.dx)
    times = sorted(config.snapshot_times)
    if not times:
        raise ValueError("no snapshot times configured")
    config = config.replace(t_end=max(times))
    U0, _, _ = build_initial_state(config, grid)
    by_model = {}
    for model in config.models:
        traj = run_model(model, config, sample_times=times, grid=grid)
        by_model[model] = {int(round(t / config.dt)): U for t, U in traj}
    paths = []
    for t in times:
        step = int(round(t / config.dt))
        states = {m: by_model[m][step] for m in config.models}
        for m, U in states.items():
            paths.append(write_snapshot_csv(
                outdir / f"snapshot_{m}_t{t:g}.csv", grid.x, U))
        paths.append(fig_snapshot(outdir / f"snapshot_t{t:g}.png", grid.x,
                                  states, initial=U0))
    (outdir / "snapshots.json").write_text(
        json.dumps({"provenance": {"config": config.to_dict()}}, indent=2) + "\n")
    return {"paths": paths, "states": by_model, "grid": grid, "initial": U0}


def rigid_lid_comparison(config: ExperimentConfig | None = None,
                         outdir: str | Path | None = None,
                         points=COMPARISON_POINTS, epsilon: float = 0.1,
                         t_end: float = 20.0) -> ExperimentReport:
    """Free-surface versus rigid-lid KdV approximations from shared
    flat-surface zero-velocity data at the named parameter points; the
    interface-trace distance quantifies where the rigid lid is tenable."""
    config = config or ExperimentConfig(initial_data=InitialDataSpec(kind="rigid_lid"))
    report = ExperimentReport(provenance={"config": config.to_dict(),
                                          "points": {k: list(v) for k, v in points.items()},
                                          "epsilon": epsilon, "t_end": t_end})
    grid = PeriodicGrid.from_spacing(config.grid.length, config.grid.dx)
    spec = config.initial_data
    eta0 = algebraic_bump(spec.amplitude, spec.kappa, grid)
    v0 = np.zeros_like(eta0)
    distances = {}
    for name, (g, d) in points.items():
        regime = FluidRegime(g, d, epsilon)
        free_U0 = rigid_lid_initial_data(eta0, v0, regime)
        t0 = time.perf_counter()
        free = run_kdv_approximation(free_U0, regime, grid, config.dt, t_end)[-1][1]
        rigid2 = _run_rigid_lid_kdv(eta0, v0, regime, grid, config.dt, t_end,
                                    sample_times=None)[-1][1]
        rigid = _embed_rigid_lid(rigid2, regime)
        wall = time.perf_counter() - t0
        dist = relative_l2_error(free[1], rigid[1], grid.dx)
        distances[name] = dist
        report.add(dx=config.grid.dx, dt=config.dt, L=config.grid.length,
                   T=t_end, epsilon=epsilon, model_a=f"kdv_approx[{name}]",
                   model_b=f"rigid_lid_kdv[{name}]", rel_l2_error=dist,
                   wall_time_s=wall)
        if outdir is not None:
            write_snapshot_csv(Path(outdir) / f"rigidlid_{name}_free.csv",
                               grid.x, free)
            write_snapshot_csv(Path(outdir) / f"rigidlid_{name}_rigid.csv",
                               grid.x, rigid)
            fig_interface_comparison(
                Path(outdir) / f"rigidlid_{name}.png", grid.x,
                {"free surface interface": free[1],
                 "rigid lid interface": rigid[1],
                 "initial": eta0},
                title=f"point {name}: gamma={g}, delta={d}, t={t_end:g}")
    report.summary["interface_distances"] = distances
    if outdir is not None:
        report.write(outdir, "rigid_lid_comparison")
    return report


# ---------------------------------------------------------------------------
# regime analysis outputs


def coefficient_table(regime: FluidRegime,
                      params: BoussinesqParameters | None = None) -> dict:
    """Every regime-level coefficient: speeds, per-mode KdV coefficients
    and vectors, rigid-lid coefficients, critical ratios and thresholds."""
    params = params or BoussinesqParameters()
    cp, cm = wave_speeds(regime)
    modes = free_surface_modes(regime)
    rl = rigid_lid_modes(regime)
    cls = classify(regime)
    val = rigid_lid_validity(regime)
    system = build_symmetric_system(regime, params)
    return {
        "gamma": regime.gamma, "delta": regime.delta, "epsilon": regime.epsilon,
        "c_plus": cp, "c_minus": cm,
        "modes": [{"speed": m.speed, "nonlinearity": m.nonlinearity,
                   "dispersion": m.dispersion, "theta": m.theta,
                   "vector": m.vector.tolist()} for m in modes],
        "rigid_lid": {"c": rl.c, "lambda": rl.lam, "mu": rl.mu,
                      "lambda_interface": rl.lambda_interface,
                      "e_plus": rl.e_plus.tolist(), "e_minus": rl.e_minus.tolist()},
        "delta_critical": cls.delta_c,
        "delta_critical_rigid": cls.delta_c_rigid,
        "slow_mode_polarity": cls.slow_mode_polarity,
        "fast_mode_polarity": cls.fast_mode_polarity,
        "surface_dominant_slow": cls.surface_dominant_slow,
        "fast_dominates_zero_velocity": cls.fast_dominates_zero_velocity,
        "validity_surface_ratio": val.surface_to_slow_interface,
        "validity_fast_ratio": val.fast_to_slow_interface,
        "K": system.K,
    }


def analyze_regimes(outdir: str | Path, n_gamma: int = 400,
                    epsilon: float = 0.1) -> dict:
    """Critical-ratio curves and the (gamma, delta) regime map."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    gammas = np.linspace(0.005, 0.995, n_gamma)
    delta_c = np.array([critical_ratio(g) for g in gammas])
    rigid = np.sqrt(gammas)
    import csv as _csv

    with open(outdir / "critical_ratio.csv", "w", newline="") as fh:
        w = _csv.writer(fh)
        w.writerow(["gamma", "delta_c", "delta_c_rigid"])
        for g, dc, dr in zip(gammas, delta_c, rigid):
            w.writerow([f"{g:.6f}", f"{dc:.12f}", f"{dr:.12f}"])
    fig_critical_ratio(outdir / "critical_ratio.png", gammas, delta_c, rigid)
    fig_regime_map(outdir / "regime_map.png", gammas, delta_c,
                   marked_points=COMPARISON_POINTS)
    return {"gammas": gammas, "delta_c": delta_c}


def _sweep_job(args):
    points, epsilon = args
    rows = []
    for g, d in points:
        regime = FluidRegime(g, d, epsilon)
        cls = classify(regime)
        val = rigid_lid_validity(regime)
        cp, cm = wave_speeds(regime)
        modes = free_surface_modes(regime)
        rows.append({
            "gamma": g, "delta": d, "delta_c": cls.delta_c,
            "slow_mode_polarity": cls.slow_mode_polarity,
            "surface_dominant_slow": cls.surface_dominant_slow,
            "fast_dominates_zero_velocity": cls.fast_dominates_zero_velocity,
            "c_plus": cp, "c_minus": cm,
            "lambda_plus": modes[0].nonlinearity, "lambda_minus": modes[2].nonlinearity,
            "mu_plus": modes[0].dispersion, "mu_minus": modes[2].dispersion,
            "validity_surface_ratio": val.surface_to_slow_interface,
            "validity_fast_ratio": val.fast_to_slow_interface,
        })
    return rows


def sweep(outdir: str | Path, gammas=None, deltas=None, epsilon: float = 0.1,
          workers: int | None = None) -> list[dict]:
    """Classification and validity diagnostics over a (gamma, delta) grid."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    gammas = np.linspace(0.05, 0.95, 19) if gammas is None else np.asarray(gammas)
    deltas = np.linspace(0.1, 2.5, 25) if deltas is None else np.asarray(deltas)
    points = [(float(g), float(d)) for g in gammas for d in deltas]
    n_workers = worker_count(workers)
    chunks = np.array_split(np.arange(len(points)), max(1, min(n_workers * 4, len(points))))
    jobs = [([points[i] for i in chunk], epsilon) for chunk in chunks if len(chunk)]
    rows = [row for part in _pool_map(_sweep_job, jobs, n_workers) for row in part]
    import csv as _csv

    fields = list(rows[0].keys())
    with open(outdir / "sweep.csv", "w", newline="") as fh:
        w = _csv.DictWriter(fh, fieldnames=fields)
        w.writeheader()
        w.writerows(rows)
    return rows
