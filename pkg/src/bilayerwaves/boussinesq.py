"""Predictive Crank-Nicolson stepper for systems

    P_eps(U, dx) dt U + Q_eps(U, dx) dx U = F,
    P_eps = P_const + eps*P1(U) - eps*P_dxx dxx,
    Q_eps = Q_const + eps*Q1(U) - eps*Q_dxx dxx,

covering the symmetric system, the untransformed Boussinesq system and the
rigid-lid family through their OperatorSystem coefficients.  Per step, with
the predictor P^{n+1/2} = 2 U^n - U^{n-1/2} and avg = (U^{n+1}+U^n)/2:

    (P_const + eps P1(U^{n+1/2}_i) - eps P_dxx D2) (U^{n+1}-U^n)/dt
      + Q_const D1 avg - eps Q_dxx D3 avg
      + eps/3 [ Q1(U^{n+1/2}_i + (U^{n+1/2}_{i+1}+U^{n+1/2}_{i-1})/2) D1 avg
                + Q1s(D1 U^{n+1/2}) avg ]  =  F^n_i,

where Q1s is the argument-swapped map with Q1(U)V = Q1s(V)U, so the
unknown always enters linearly.  The forcing is sampled at the midpoint
t^n + dt/2, which keeps the forced scheme second order.

Every step is one cyclic block-banded solve of bandwidth two blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .banded import CyclicBlockBanded
from .coefficients import OperatorSystem, SymmetricSystem, bilinear_swap
from .grid import PeriodicGrid, check_finite, d1, d2, d3, discrete_l2

__all__ = [
    "BoussState",
    "ForcingTerm",
    "sigma1_adjoint",
    "bootstrap_system",
    "bouss_step",
    "run_boussinesq",
    "energy",
    "manufactured_forcing",
]


@dataclass
class BoussState:
    """U^n with the previous half-step value, both of shape (d, N)."""

    U: np.ndarray
    U_half_prev: np.ndarray
    time: float
    step_index: int

    @property
    def predictor(self) -> np.ndarray:
        return 2.0 * self.U - self.U_half_prev


class ForcingTerm:
    """Wraps a sampler (t, x) -> (d, N) array; values must stay finite."""

    def __init__(self, sampler: Callable[[float, np.ndarray], np.ndarray]):
        self.sampler = sampler

    def __call__(self, t: float, x: np.ndarray) -> np.ndarray:
        return check_finite(np.asarray(self.sampler(t, x), dtype=float), "forcing term")


def _as_operator(system) -> OperatorSystem:
    if isinstance(system, SymmetricSystem):
        return system.as_operator_system()
    if isinstance(system, OperatorSystem):
        return system
    raise TypeError(f"unsupported system type {type(system).__name__}")


def sigma1_adjoint(system, V: np.ndarray) -> np.ndarray:
    """Matrix of the swapped first-order nonlinearity: Q1(U) V = sigma1_adjoint(V) U."""
    op = _as_operator(system)
    return np.einsum("kab,k->ab", bilinear_swap(op.Q1_tensor), np.asarray(V, dtype=float))


def _pointwise(tensor: np.ndarray, field: np.ndarray) -> np.ndarray:
    """Linear matrix map applied pointwise: (N, d, d) from field (d, N)."""
    return np.einsum("kab,kn->nab", tensor, field)


def _apply_P(op: OperatorSystem, P1_at_p: np.ndarray | None, U: np.ndarray,
             dx: float) -> np.ndarray:
    out = op.P_const @ U - op.epsilon * (op.P_dxx @ d2(U, dx))
    if P1_at_p is not None:
        out += op.epsilon * np.einsum("nab,bn->an", P1_at_p, U)
    return out


def _apply_Q(op: OperatorSystem, Q1_smooth: np.ndarray, Q1s_dp: np.ndarray,
             U: np.ndarray, dx: float) -> np.ndarray:
    dU = d1(U, dx)
    out = op.Q_const @ dU - op.epsilon * (op.Q_dxx @ d3(U, dx))
    out += op.epsilon / 3.0 * (np.einsum("nab,bn->an", Q1_smooth, dU)
                               + np.einsum("nab,bn->an", Q1s_dp, U))
    return out


def _step_pieces(op: OperatorSystem, state: BoussState, dx: float):
    p = state.predictor
    P1_at_p = None
    if op.P1_tensor.any():
        P1_at_p = _pointwise(op.P1_tensor, p)
    smoothed = p + 0.5 * (np.roll(p, -1, axis=-1) + np.roll(p, 1, axis=-1))
    Q1_smooth = _pointwise(op.Q1_tensor, smoothed)
    Q1s_dp = _pointwise(bilinear_swap(op.Q1_tensor), d1(p, dx))
    return P1_at_p, Q1_smooth, Q1s_dp


def _lhs_blocks(op: OperatorSystem, P1_at_p, Q1_smooth, Q1s_dp, dx: float,
                dt: float, n: int) -> dict[int, np.ndarray]:
    eps = op.epsilon
    d = op.dimension
    m0 = np.broadcast_to((op.P_const + 2.0 * eps / dx**2 * op.P_dxx) / dt,
                         (n, d, d)).copy()
    if P1_at_p is not None:
        m0 += eps / dt * P1_at_p
    m0 += eps / 6.0 * Q1s_dp

    off1 = -eps / (dx**2 * dt) * op.P_dxx
    adv = op.Q_const / (4.0 * dx)
    disp1 = eps / (2.0 * dx**3) * op.Q_dxx
    m_p1 = np.broadcast_to(off1 + adv + disp1, (n, d, d)) + eps / (12.0 * dx) * Q1_smooth
    m_m1 = np.broadcast_to(off1 - adv - disp1, (n, d, d)) - eps / (12.0 * dx) * Q1_smooth
    disp2 = eps / (4.0 * dx**3) * op.Q_dxx
    return {0: m0, 1: m_p1, -1: m_m1, 2: -disp2, -2: disp2}


def bootstrap_system(U0: np.ndarray, system, grid: PeriodicGrid, dt: float,
                     forcing: ForcingTerm | None = None) -> BoussState:
    """Initial state; U^{-1/2} from one explicit backward half-step of
    P dt U = F - Q dx U (a linear solve with the elliptic part P)."""
    op = _as_operator(system)
    U0 = np.asarray(U0, dtype=float)
    d, n = U0.shape
    if d != op.dimension:
        raise ValueError(f"state has {d} components, system expects {op.dimension}")
    dx = grid.dx
    eps = op.epsilon
    P1_at_u0 = _pointwise(op.P1_tensor, U0) if op.P1_tensor.any() else None
    rhs = -(op.Q_const @ d1(U0, dx)) + eps * (op.Q_dxx @ d3(U0, dx))
    if op.Q1_tensor.any():
        rhs -= eps * np.einsum("kab,kn,bn->an", op.Q1_tensor, U0, d1(U0, dx))
    if forcing is not None:
        rhs += forcing(0.0, grid.x)
    blocks = {
        0: np.broadcast_to(op.P_const + 2.0 * eps / dx**2 * op.P_dxx,
                           (n, d, d)).copy(),
        1: -eps / dx**2 * op.P_dxx,
        -1: -eps / dx**2 * op.P_dxx,
    }
    if P1_at_u0 is not None:
        blocks[0] += eps * P1_at_u0
    dtU = CyclicBlockBanded(n, d, blocks).solve(
        rhs.T.copy(), residual_tol=1e-10, context="bootstrap"
    ).T
    return BoussState(U=U0.copy(), U_half_prev=U0 - 0.5 * dt * dtU,
                      time=0.0, step_index=0)


def bouss_step(state: BoussState, system, grid: PeriodicGrid, dt: float,
               forcing: ForcingTerm | None = None,
               residual_tol: float | None = None) -> BoussState:
    """Advance one step; raises SolverError naming the step on failure."""
    op = _as_operator(system)
    dx = grid.dx
    n = grid.n_points
    P1_at_p, Q1_smooth, Q1s_dp = _step_pieces(op, state, dx)
    blocks = _lhs_blocks(op, P1_at_p, Q1_smooth, Q1s_dp, dx, dt, n)
    rhs = (_apply_P(op, P1_at_p, state.U, dx) / dt
           - 0.5 * _apply_Q(op, Q1_smooth, Q1s_dp, state.U, dx))
    if forcing is not None:
        rhs = rhs + forcing(state.time + 0.5 * dt, grid.x)
    U_new = CyclicBlockBanded(n, op.dimension, blocks).solve(
        rhs.T.copy(), residual_tol=residual_tol,
        context=f"system step {state.step_index}, t={state.time:.6g}",
    ).T
    return BoussState(U=U_new, U_half_prev=state.predictor,
                      time=state.time + dt, step_index=state.step_index + 1)


def run_boussinesq(U0: np.ndarray, system, grid: PeriodicGrid, dt: float,
                   t_end: float, forcing: ForcingTerm | None = None,
                   sample_times=None, observers=(), check_every: int = 100
                   ) -> list[tuple[float, np.ndarray]]:
    """March to t_end, recording (t, U) at the sample times (final time
    always included); observers receive (t, U, diagnostics)."""
    from .kdv import _sample_steps  # same time-sampling contract

    op = _as_operator(system)
    U0 = np.asarray(U0, dtype=float)
    if t_end < 0:
        raise ValueError("t_end must be nonnegative")
    if t_end == 0:
        return [(0.0, U0.copy())]
    dx = grid.dx
    n_steps, wanted = _sample_steps(dt, t_end, sample_times)
    state = bootstrap_system(U0, op, grid, dt, forcing=forcing)
    out: list[tuple[float, np.ndarray]] = []

    def record(st: BoussState):
        out.append((st.time, st.U.copy()))
        for obs in observers:
            obs(st.time, st.U, {"l2": discrete_l2(st.U, dx)})

    if 0 in wanted:
        record(state)
    for k in range(1, n_steps + 1):
        tol = 1e-10 if (check_every and k % check_every == 0) else None
        state = bouss_step(state, op, grid, dt, forcing=forcing, residual_tol=tol)
        if k in wanted:
            record(state)
    return out


def energy(U: np.ndarray, system: SymmetricSystem, grid: PeriodicGrid,
           epsilon: float | None = None) -> float:
    """Quadratic-plus-cubic energy diagnostic

        E = 1/2 (S0 U, U) + eps/2 (S1(U) U, U) + eps/2 (S2 dx U, dx U),

    dx-weighted.  Positive for eps*|U| small; a negative value means that
    smallness condition is violated and is reported as an error.
    """
    if not isinstance(system, SymmetricSystem):
        raise TypeError("energy is defined through the symmetric-system matrices")
    eps = system.epsilon if epsilon is None else epsilon
    dx = grid.dx
    quad = np.einsum("an,ab,bn->", U, system.S0, U)
    cubic = np.einsum("kab,kn,an,bn->", system.S1_tensor, U, U, U)
    dU = d1(U, dx)
    grad = np.einsum("an,ab,bn->", dU, system.S2, dU)
    value = 0.5 * dx * (quad + eps * cubic + eps * grad)
    if value < 0.0:
        raise ValueError(
            f"energy {value:.3e} is negative: eps-smallness condition violated"
        )
    return float(value)


def manufactured_forcing(system, exact) -> ForcingTerm:
    """Forcing that makes the given analytic trajectory an exact solution:

        F(t, x) = P_eps(U, dx) dt U + Q_eps(U, dx) dx U

    evaluated with the trajectory's closed-form derivatives."""
    op = _as_operator(system)
    eps = op.epsilon

    def sampler(t: float, x: np.ndarray) -> np.ndarray:
        U = exact.state(t, x)
        Ut = exact.dt_state(t, x)
        Ux = exact.dx_state(t, x)
        F = op.P_const @ Ut - eps * (op.P_dxx @ exact.dxx_dt_state(t, x))
        F += op.Q_const @ Ux - eps * (op.Q_dxx @ exact.dxxx_state(t, x))
        if op.P1_tensor.any():
            F += eps * np.einsum("kab,kn,bn->an", op.P1_tensor, U, Ut)
        if op.Q1_tensor.any():
            F += eps * np.einsum("kab,kn,bn->an", op.Q1_tensor, U, Ux)
        return F

    return ForcingTerm(sampler)
