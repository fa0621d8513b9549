import numpy as np
import pytest

from bilayerwaves.banded import CyclicBlockBanded, SolverError


def test_identity_solve(rng):
    n, d = 32, 3
    op = CyclicBlockBanded(n, d, {0: np.eye(d)})
    b = rng.standard_normal((n, d))
    x = op.solve(b)
    assert np.allclose(x, b, atol=1e-14)


def test_spd_spike_solution_symmetric():
    # A = I - eps*K*D2 with a single spike: solution symmetric about it
    n, dx, epsK = 41, 0.5, 0.3
    c = epsK / dx**2
    op = CyclicBlockBanded(n, 1, {
        0: np.full((n, 1, 1), 1.0 + 2 * c),
        1: np.full((n, 1, 1), -c),
        -1: np.full((n, 1, 1), -c),
    })
    b = np.zeros((n, 1))
    spike = 13
    b[spike, 0] = 1.0
    x = op.solve(b).ravel()
    rolled = np.roll(x, -spike)  # spike now at index 0
    assert np.allclose(rolled[1:], rolled[1:][::-1], atol=1e-12)


@pytest.mark.parametrize("n,d,hw", [(9, 1, 2), (12, 3, 2), (25, 4, 2), (150, 4, 2)])
def test_against_dense_oracle(rng, n, d, hw):
    blocks = {s: rng.standard_normal((n, d, d)) for s in range(-hw, hw + 1)}
    op = CyclicBlockBanded(n, d, blocks)
    b = rng.standard_normal((n, d))
    x = op.solve(b, residual_tol=1e-10)
    dense = np.linalg.solve(op.dense(), b.reshape(-1)).reshape(n, d)
    assert np.allclose(x, dense, atol=1e-9 * max(1.0, np.max(np.abs(dense))))


def test_residual_contract(rng):
    n, d = 300, 4
    blocks = {s: rng.standard_normal((n, d, d)) * 0.2 for s in (-2, -1, 0, 1, 2)}
    blocks[0] = blocks[0] + 4.0 * np.eye(d)
    op = CyclicBlockBanded(n, d, blocks)
    b = rng.standard_normal((n, d))
    x = op.solve(b, residual_tol=1e-10)
    res = np.linalg.norm((op.matvec(x) - b).reshape(-1)) / np.linalg.norm(b)
    assert res <= 1e-10


def test_singular_acyclic_band_falls_back(rng):
    # pure cyclic shift: acyclic band is nilpotent but the operator is a
    # permutation, solvable through the sparse fallback
    n = 16
    op = CyclicBlockBanded(n, 1, {1: np.ones((n, 1, 1))})
    b = rng.standard_normal((n, 1))
    x = op.solve(b, residual_tol=1e-10)
    assert np.allclose(op.matvec(x), b, atol=1e-12)


def test_singular_cyclic_operator_raises():
    # circulant(I + shift) with even n has a zero eigenvalue
    n = 16
    op = CyclicBlockBanded(n, 1, {0: np.ones((n, 1, 1)), 1: np.ones((n, 1, 1))})
    b = np.zeros((n, 1))
    b[0, 0] = 1.0
    with pytest.raises(SolverError):
        op.solve(b, residual_tol=1e-10, context="unit test")


def test_broadcast_constant_blocks(rng):
    n, d = 20, 2
    m0 = rng.standard_normal((d, d)) + 3 * np.eye(d)
    m1 = rng.standard_normal((d, d)) * 0.1
    op = CyclicBlockBanded(n, d, {0: m0, 1: m1, -1: m1.T})
    b = rng.standard_normal((n, d))
    x = op.solve(b)
    dense = np.linalg.solve(op.dense(), b.reshape(-1)).reshape(n, d)
    assert np.allclose(x, dense, atol=1e-10)


def test_too_small_grid_rejected():
    with pytest.raises(ValueError):
        CyclicBlockBanded(5, 1, {2: np.ones((5, 1, 1)), 0: np.ones((5, 1, 1))})
