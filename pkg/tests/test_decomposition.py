import numpy as np
import pytest

from bilayerwaves.coefficients import (FluidRegime, _matrix_s0,
                                       free_surface_modes, wave_speeds)
from bilayerwaves.decomposition import (initial_mode_magnitudes, project,
                                        reconstruct, rigid_lid_initial_data)
from bilayerwaves.grid import PeriodicGrid, discrete_l2


def setup_point(g=0.25, d=1.0, eps=0.1):
    r = FluidRegime(g, d, eps)
    return r, free_surface_modes(r), _matrix_s0(g, d)


def test_project_single_basis_vector():
    r, modes, S0 = setup_point()
    n = 16
    U = np.outer(modes[1].vector, np.ones(n))
    amps = project(U, modes, S0)
    assert np.allclose(amps[1], 1.0, atol=1e-13)
    assert np.allclose(amps[[0, 2, 3]], 0.0, atol=1e-13)


def test_project_recovers_random_combination(rng):
    r, modes, S0 = setup_point(0.4, 2.3)
    coeffs = rng.standard_normal(4)
    U = sum(c * np.outer(m.vector, np.ones(8)) for c, m in zip(coeffs, modes))
    amps = project(U, modes, S0)
    for i in range(4):
        assert np.allclose(amps[i], coeffs[i], atol=1e-12)


def test_roundtrip_random_fields(rng):
    r, modes, S0 = setup_point(0.6, 0.8)
    for _ in range(100):
        U = rng.standard_normal((4, 12))
        back = reconstruct(project(U, modes, S0), modes)
        assert np.max(np.abs(back - U)) <= 1e-12 * max(1.0, np.max(np.abs(U)))


def test_reconstruct_zero_and_row_identity(rng):
    r, modes, S0 = setup_point()
    assert np.max(np.abs(reconstruct(np.zeros((4, 9)), modes))) == 0.0
    amps = rng.standard_normal((4, 9))
    U = reconstruct(amps, modes)
    eta2 = sum(amps[i] * modes[i].vector[1] for i in range(4))
    assert np.allclose(U[1], eta2, atol=1e-14)


def test_shape_mismatch_raises():
    r, modes, S0 = setup_point()
    with pytest.raises(ValueError):
        project(np.zeros((3, 5)), modes, S0)
    with pytest.raises(ValueError):
        reconstruct(np.zeros((3, 5)), modes)


def test_rigid_lid_initial_data_structure(rng):
    r = FluidRegime(0.25, 1.0, 0.1)
    eta0 = rng.standard_normal(20)
    v0 = rng.standard_normal(20)
    U = rigid_lid_initial_data(eta0, v0, r)
    s = r.gamma + r.delta
    assert np.allclose(U[0], -eta0)
    assert np.allclose(U[1], eta0)
    # flat surface
    assert np.max(np.abs(U[0] + U[1])) == 0.0
    # shear v = u2 - gamma*u1 recovers v0
    shear = U[3] - r.gamma * U[2]
    assert np.allclose(shear, v0 * (r.delta + r.gamma) / s, atol=1e-14)
    assert np.allclose(shear, v0, atol=1e-14)


def test_initial_magnitudes_reference_point():
    r = FluidRegime(0.25, 1.0, 0.1)
    eta0 = np.array([1.0])
    v0 = np.zeros(1)
    mm = initial_mode_magnitudes(eta0, v0, r)
    # fast pair 0.125, slow pair 0.375 (per unit eta0)
    for j in (1, -1):
        assert mm.eta[(j, 1)][0] == pytest.approx(0.125, abs=1e-12)
        assert mm.eta[(j, -1)][0] == pytest.approx(0.375, abs=1e-12)
    # all four surface parts have equal magnitude when v0 = 0
    mags = [abs(mm.zeta[key][0]) for key in mm.zeta]
    assert np.ptp(mags) < 1e-13


def test_partition_identities_pointwise(rng):
    r = FluidRegime(0.35, 1.8, 0.1)
    eta0 = rng.standard_normal(30)
    v0 = rng.standard_normal(30)
    mm = initial_mode_magnitudes(eta0, v0, r)
    assert np.max(np.abs(mm.eta_total() - eta0)) < 1e-12
    # surface partition reproduces zeta1 = eta1 + eta2 = 0 for rigid-lid data
    assert np.max(np.abs(mm.zeta_total())) < 1e-12


def test_magnitudes_match_projection(rng):
    # closed forms agree with project followed by the interface/surface rows
    r, modes, S0 = setup_point(0.45, 1.3)
    eta0 = rng.standard_normal(25)
    v0 = rng.standard_normal(25)
    U0 = rigid_lid_initial_data(eta0, v0, r)
    amps = project(U0, modes, S0)
    mm = initial_mode_magnitudes(eta0, v0, r)
    index = {(1, 1): 0, (-1, 1): 1, (1, -1): 2, (-1, -1): 3}
    for key, i in index.items():
        eta_part = amps[i] * modes[i].vector[1]
        zeta_part = amps[i] * (modes[i].vector[0] + modes[i].vector[1])
        assert np.allclose(eta_part, mm.eta[key], atol=1e-12)
        assert np.allclose(zeta_part, mm.zeta[key], atol=1e-12)


def test_fast_slow_threshold():
    # |eta_{.,+}| >= |eta_{.,-}| exactly when delta <= 1 - 2 gamma (v0 = 0)
    grid = PeriodicGrid.from_spacing(40.0, 0.1)
    eta0 = np.exp(-grid.x**2)
    v0 = np.zeros_like(eta0)
    for g in (0.1, 0.2, 0.3):
        threshold = 1 - 2 * g
        for d in (0.5 * threshold, threshold, 1.5 * threshold, 2.0):
            if d <= 0:
                continue
            r = FluidRegime(g, d, 0.1)
            mm = initial_mode_magnitudes(eta0, v0, r)
            fast = discrete_l2(mm.eta[(1, 1)], grid.dx)
            slow = discrete_l2(mm.eta[(1, -1)], grid.dx)
            if abs(d - threshold) < 1e-14:
                assert fast == pytest.approx(slow, abs=1e-10)
            elif d < threshold:
                assert fast > slow
            else:
                assert fast < slow
