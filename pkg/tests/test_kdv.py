import numpy as np
import pytest

from bilayerwaves.coefficients import FluidRegime, _matrix_s0, free_surface_modes
from bilayerwaves.decomposition import project
from bilayerwaves.grid import PeriodicGrid, discrete_l2, relative_l2_error
from bilayerwaves.kdv import (KdVCoefficients, bootstrap, mode_coefficients,
                              run_kdv, run_kdv_approximation, step)
from bilayerwaves.waves import SolitonSpec, soliton_profile

GRID = PeriodicGrid.from_spacing(40.0, 0.05)


def small_soliton(c=0.8, lam=1.5, mu=0.25, M=1.0):
    spec = SolitonSpec(M, 0.0, KdVCoefficients(c, lam, mu))
    return spec, soliton_profile(spec, 0.0, GRID)


def test_bootstrap_stationary_when_coefficients_vanish():
    u0 = np.sin(2 * np.pi * GRID.x / GRID.length)
    st = bootstrap(u0, KdVCoefficients(0.0, 0.0, 0.0), GRID, 0.1)
    assert np.array_equal(st.u_half_prev, u0)
    st0 = bootstrap(np.zeros(GRID.n_points), KdVCoefficients(1.0, 2.0, 0.5), GRID, 0.1)
    assert np.max(np.abs(st0.u_half_prev)) == 0.0
    with pytest.raises(ValueError):
        bootstrap(u0, KdVCoefficients(1, 1, 1), GRID, -0.1)
    with pytest.raises(ValueError):
        bootstrap(u0, KdVCoefficients(1, 1, 1), GRID, 0.1, method="rk9")


def test_bootstrap_first_step_second_order():
    # first full step against an oracle run at dt/10; halving dt should
    # shrink the one-step gap by ~8x (local O(dt^3)), at least 4x
    spec, u0 = small_soliton()
    gaps = []
    for dt in (0.08, 0.04):
        coarse = run_kdv(u0, spec.coeffs, GRID, dt, dt)[-1][1]
        fine = run_kdv(u0, spec.coeffs, GRID, dt / 10, dt)[-1][1]
        gaps.append(discrete_l2(coarse - fine, GRID.dx))
    assert gaps[0] / gaps[1] > 4.0


def test_discrete_l2_exactly_conserved():
    spec, u0 = small_soliton()
    norms = []
    traj = run_kdv(u0, spec.coeffs, GRID, 0.05, 10.0,
                   sample_times=np.arange(0, 10.5, 1.0),
                   observers=[lambda t, u, d: norms.append(d["l2"])])
    drift = max(abs(n - norms[0]) for n in norms) / norms[0]
    assert drift < 1e-12
    assert len(traj) == 11


def test_pure_advection_is_unitary_per_mode():
    # CN on skew-symmetric transport: each Fourier mode keeps magnitude 1
    coeffs = KdVCoefficients(1.3, 0.0, 0.0)
    k = 3 * 2 * np.pi / GRID.length
    u0 = np.cos(k * GRID.x)
    traj = run_kdv(u0, coeffs, GRID, 0.05, 5.0)
    uT = traj[-1][1]
    amp = 2 * np.abs(np.fft.rfft(uT))[3] / GRID.n_points
    assert amp == pytest.approx(1.0, abs=1e-12)
    # and the discrete phase matches the CN factor of the D1 symbol
    ktilde = np.sin(k * GRID.dx) / GRID.dx
    steps = 100
    phase = 2 * np.arctan(coeffs.c * ktilde * 0.05 / 2) * steps
    expected = np.cos(k * GRID.x - phase)   # right-moving
    assert np.max(np.abs(uT - expected)) < 1e-10


def test_translation_equivariance():
    spec, u0 = small_soliton()
    shift = 31
    t1 = run_kdv(u0, spec.coeffs, GRID, 0.05, 1.0)[-1][1]
    t2 = run_kdv(np.roll(u0, shift), spec.coeffs, GRID, 0.05, 1.0)[-1][1]
    assert np.max(np.abs(np.roll(t1, shift) - t2)) < 1e-11


def test_soliton_translate_and_convergence_order():
    spec, _ = small_soliton()
    errs = []
    for h in (0.1, 0.05, 0.025):
        grid = PeriodicGrid.from_spacing(40.0, h)
        u0 = soliton_profile(spec, 0.0, grid)
        uT = run_kdv(u0, spec.coeffs, grid, h, 2.0)[-1][1]
        errs.append(relative_l2_error(uT, soliton_profile(spec, 2.0, grid), grid.dx))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.abs(orders - 2.0) < 0.3)


def test_soliton_peak_speed():
    # peak advances at c' = c + lam*M/3 within 1%
    spec, u0 = small_soliton(c=0.5, lam=2.0, mu=0.2, M=1.2)
    T = 8.0
    uT = run_kdv(u0, spec.coeffs, GRID, 0.02, T)[-1][1]
    peak = GRID.x[np.argmax(uT)]
    assert peak / T == pytest.approx(spec.propagation_speed, rel=0.01)


def test_unconditional_stability_probe():
    # dt = 10*dx stays bounded over T = 10 with conserved L2
    spec, u0 = small_soliton()
    dt = 10 * GRID.dx
    traj = run_kdv(u0, spec.coeffs, GRID, dt, 10.0)
    uT = traj[-1][1]
    assert np.all(np.isfinite(uT))
    assert discrete_l2(uT, GRID.dx) == pytest.approx(discrete_l2(u0, GRID.dx),
                                                     rel=1e-10)


def test_run_kdv_time_handling():
    spec, u0 = small_soliton()
    traj = run_kdv(u0, spec.coeffs, GRID, 0.05, 0.0)
    assert len(traj) == 1 and traj[0][0] == 0.0
    with pytest.raises(ValueError):
        run_kdv(u0, spec.coeffs, GRID, 0.05, 1.03)
    with pytest.raises(ValueError):
        run_kdv(u0, spec.coeffs, GRID, 0.05, 1.0, sample_times=[2.0])


def test_kdv_approximation_zero_data():
    r = FluidRegime(0.25, 1.0, 0.1)
    traj = run_kdv_approximation(np.zeros((4, GRID.n_points)), r, GRID, 0.05, 1.0)
    assert np.max(np.abs(traj[-1][1])) == 0.0


def test_kdv_approximation_linear_limit_transports_modes():
    # tiny eps: reconstruction approaches sum_i u0_i(x - c_i t) e_i
    r = FluidRegime(0.25, 1.0, 1e-6)
    modes = free_surface_modes(r)
    k = 2 * np.pi / GRID.length
    profiles = [np.cos(k * GRID.x), 0.5 * np.sin(k * GRID.x),
                np.cos(2 * k * GRID.x), np.zeros(GRID.n_points)]
    U0 = sum(np.outer(m.vector, p) for m, p in zip(modes, profiles))
    T = 2.0
    UT = run_kdv_approximation(U0, r, GRID, 0.02, T)[-1][1]
    ktilde = np.sin(k * GRID.dx) / GRID.dx
    # compare against exact transport (generous tolerance: CN phase error)
    exact = sum(np.outer(m.vector, np.interp((GRID.x - m.speed * T) % GRID.length,
                                             GRID.x % GRID.length, p, period=GRID.length))
                for m, p in zip(modes, profiles))
    assert relative_l2_error(UT, exact, GRID.dx) < 0.02


def test_kdv_approximation_single_soliton_translates():
    r = FluidRegime(0.25, 1.0, 0.1)
    grid = PeriodicGrid.from_spacing(120.0, 0.05)
    from bilayerwaves.waves import four_mode_soliton_data

    U0, exact = four_mode_soliton_data([1.0, 0, 0, 0], r, grid)
    T = 5.0
    UT = run_kdv_approximation(U0, r, grid, 0.05, T)[-1][1]
    assert relative_l2_error(UT, exact.state(T), grid.dx) < 5e-3
    # single-mode content preserved
    amps = project(UT, free_surface_modes(r), _matrix_s0(r.gamma, r.delta))
    assert np.max(np.abs(amps[1:])) < 1e-10
