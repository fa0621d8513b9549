import numpy as np
import pytest

from bilayerwaves.coefficients import FluidRegime, _matrix_s0, free_surface_modes
from bilayerwaves.decomposition import initial_mode_magnitudes, project
from bilayerwaves.grid import PeriodicGrid
from bilayerwaves.kdv import KdVCoefficients
from bilayerwaves.waves import (SolitonSpec, algebraic_bump,
                                default_soliton_amplitudes,
                                flat_surface_zero_velocity,
                                four_mode_soliton_data, soliton_derivatives,
                                soliton_profile)


def test_soliton_peak_at_center():
    grid = PeriodicGrid.from_spacing(80.0, 0.01)
    spec = SolitonSpec(2.5, 0.0, KdVCoefficients(1.0, 2.0, 0.5))
    u = soliton_profile(spec, 0.0, grid)
    assert u.max() == pytest.approx(2.5, abs=1e-10)
    assert abs(grid.x[np.argmax(u)]) < grid.dx


def test_wavenumber_unit_case():
    spec = SolitonSpec(1.0, 0.0, KdVCoefficients(0.3, 12.0, 1.0))
    assert spec.wavenumber == pytest.approx(1.0, abs=1e-14)
    assert spec.propagation_speed == pytest.approx(0.3 + 4.0, abs=1e-14)


def test_polarity_rule_enforced():
    with pytest.raises(ValueError, match="polarity"):
        SolitonSpec(-1.0, 0.0, KdVCoefficients(1.0, 2.0, 0.5))
    SolitonSpec(-1.0, 0.0, KdVCoefficients(1.0, 2.0, -0.5))  # ok


def test_soliton_satisfies_kdv(rng):
    # residual of ut + c ux + lam u ux + mu uxxx with analytic derivatives,
    # sampled densely; nonzero only through the c', k relations
    x = np.linspace(-30, 30, 10000)
    for _ in range(20):
        c = rng.uniform(-2, 2)
        lam = rng.uniform(0.2, 3) * rng.choice([-1, 1])
        mu = rng.uniform(0.05, 1) * rng.choice([-1, 1])
        M = rng.uniform(0.3, 2) * np.sign(lam * mu)
        spec = SolitonSpec(M, rng.uniform(-2, 2), KdVCoefficients(c, lam, mu))
        t = rng.uniform(0, 3)
        u, ux, _, uxxx = soliton_derivatives(spec, t, x)
        ut = -spec.propagation_speed * ux
        residual = ut + c * ux + lam * u * ux + mu * uxxx
        scale = max(np.max(np.abs(ut)), np.max(np.abs(mu * uxxx)))
        assert np.max(np.abs(residual)) <= 1e-10 * scale


def test_derivatives_match_finite_differences():
    spec = SolitonSpec(1.3, 0.4, KdVCoefficients(0.8, 1.5, 0.3))
    x = np.linspace(-20, 20, 2001)
    h = 1e-5
    u, ux, uxx, uxxx = soliton_derivatives(spec, 0.7, x)
    up = soliton_derivatives(spec, 0.7, x + h)[0]
    um = soliton_derivatives(spec, 0.7, x - h)[0]
    assert np.max(np.abs((up - um) / (2 * h) - ux)) < 1e-6
    assert np.max(np.abs((up - 2 * u + um) / h**2 - uxx)) < 1e-4


def test_thickness_integral_identity():
    # integral of u / (2M) = 1/k within quadrature error
    spec = SolitonSpec(0.7, 0.0, KdVCoefficients(1.0, 1.8, 0.4))
    x = np.linspace(-200, 200, 400001)
    u = spec.amplitude / np.cosh(spec.wavenumber * x) ** 2
    integral = np.trapezoid(u, x)
    assert integral / (2 * spec.amplitude) == pytest.approx(
        1 / spec.wavenumber, abs=1e-8)


def test_four_mode_data_zero_amplitudes():
    r = FluidRegime(0.25, 1.0, 0.1)
    grid = PeriodicGrid.from_spacing(120.0, 0.05)
    U0, traj = four_mode_soliton_data([0.0, 0.0, 0.0, 0.0], r, grid)
    assert np.max(np.abs(U0)) == 0.0
    assert np.max(np.abs(traj.state(3.0))) == 0.0


def test_four_mode_data_single_mode_projection():
    r = FluidRegime(0.25, 1.0, 0.1)
    grid = PeriodicGrid.from_spacing(120.0, 0.05)
    U0, _ = four_mode_soliton_data([1.0, 0.0, 0.0, 0.0], r, grid)
    modes = free_surface_modes(r)
    amps = project(U0, modes, _matrix_s0(r.gamma, r.delta))
    assert np.max(np.abs(amps[1:])) < 1e-12
    assert amps[0].max() == pytest.approx(1.0, abs=1e-10)


def test_four_mode_data_polarity_error_names_mode():
    r = FluidRegime(0.25, 1.0, 0.1)
    grid = PeriodicGrid.from_spacing(120.0, 0.05)
    # slow mode at this point needs M < 0 (lambda_- < 0, mu_- > 0)
    with pytest.raises(ValueError, match="mode 3"):
        four_mode_soliton_data([0.0, 0.0, 1.0, 0.0], r, grid)


def test_default_amplitudes_respect_polarity():
    import warnings

    for g, d in [(0.25, 1.0), (0.25, 2.0), (0.9, 1.0), (0.25, 0.25)]:
        r = FluidRegime(g, d, 0.1)
        amps = default_soliton_amplitudes(r)
        grid = PeriodicGrid.from_spacing(120.0, 0.05)
        with warnings.catch_warnings():
            # wide slow-mode solitons may touch the half-domain tail bound
            warnings.simplefilter("ignore", UserWarning)
            four_mode_soliton_data(amps, r, grid)  # must not raise


def test_periodization_warning_on_small_domain():
    r = FluidRegime(0.25, 1.0, 0.1)
    grid = PeriodicGrid.from_spacing(10.0, 0.05)
    with pytest.warns(UserWarning, match="tail"):
        four_mode_soliton_data([1.0, 0.0, 0.0, 0.0], r, grid)


def test_algebraic_bump_properties():
    grid = PeriodicGrid.from_spacing(120.0, 0.01)
    f = algebraic_bump(2.0, 0.5, grid)
    assert f[np.argmin(np.abs(grid.x))] == pytest.approx(2.0, abs=1e-12)
    # even symmetry on the symmetric part of the grid
    sym = f[1:]
    assert np.max(np.abs(sym - sym[::-1])) < 1e-14
    # (1 + x^2) f grows without bound toward the domain edge
    weighted = (1 + grid.x**2) * f
    assert weighted[0] > 50 * weighted[np.argmin(np.abs(grid.x))]
    with pytest.raises(ValueError):
        algebraic_bump(1.0, -1.0, grid)


def test_flat_surface_zero_velocity_state(rng):
    bump = rng.standard_normal(40)
    U = flat_surface_zero_velocity(bump)
    assert np.max(np.abs(U[0] + U[1])) == 0.0
    assert np.max(np.abs(U[2:])) == 0.0
    assert np.max(np.abs(flat_surface_zero_velocity(np.zeros(7)))) == 0.0


def test_flat_surface_projection_matches_closed_forms():
    r = FluidRegime(0.25, 1.0, 0.1)
    grid = PeriodicGrid.from_spacing(120.0, 0.02)
    bump = algebraic_bump(1.0, 1.0, grid)
    U0 = flat_surface_zero_velocity(bump)
    modes = free_surface_modes(r)
    amps = project(U0, modes, _matrix_s0(r.gamma, r.delta))
    mm = initial_mode_magnitudes(bump, np.zeros_like(bump), r)
    index = {(1, 1): 0, (-1, 1): 1, (1, -1): 2, (-1, -1): 3}
    for key, i in index.items():
        assert np.allclose(amps[i] * modes[i].vector[1], mm.eta[key], atol=1e-12)
