"""Projection of 4-component states onto the S0-orthonormal eigenbasis,
reconstruction, and the closed-form initial mode magnitudes.

Mode amplitudes are stored as an array of shape (4, N), row i holding
u_i = e_i . S0 U pointwise; mode ordering is (+c+, -c+, +c-, -c-).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import EigenMode, FluidRegime, wave_speeds

__all__ = [
    "project",
    "reconstruct",
    "rigid_lid_initial_data",
    "initial_mode_magnitudes",
    "ModeMagnitudes",
]


def _basis(modes: list[EigenMode]) -> np.ndarray:
    return np.stack([m.vector for m in modes])  # (4, d)


def project(U: np.ndarray, modes: list[EigenMode], S0: np.ndarray) -> np.ndarray:
    """Pointwise contraction u_i = e_i . S0 U; U has shape (d, N)."""
    E = _basis(modes)
    if U.ndim != 2 or U.shape[0] != E.shape[1]:
        raise ValueError(f"state shape {U.shape} does not match {E.shape[1]} components")
    return np.einsum("ia,ab,bn->in", E, S0, U)


def reconstruct(amplitudes: np.ndarray, modes: list[EigenMode]) -> np.ndarray:
    """Sum of u_i e_i; amplitudes has shape (n_modes, N)."""
    E = _basis(modes)
    if amplitudes.ndim != 2 or amplitudes.shape[0] != E.shape[0]:
        raise ValueError(f"amplitude shape {amplitudes.shape} does not match {E.shape[0]} modes")
    return np.einsum("in,ia->an", amplitudes, E)


def rigid_lid_initial_data(eta0: np.ndarray, v0: np.ndarray,
                           regime: FluidRegime) -> np.ndarray:
    """Free-surface state matching rigid-lid data (eta0, v0):

        U0 = (-eta0, eta0, -v0/(gamma+delta), delta*v0/(gamma+delta)),

    so the surface zeta1 = eta1 + eta2 vanishes identically and the shear
    v = u2 - gamma*u1 equals v0.
    """
    eta0 = np.asarray(eta0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    if eta0.shape != v0.shape:
        raise ValueError(f"shape mismatch: {eta0.shape} vs {v0.shape}")
    s = regime.gamma + regime.delta
    return np.stack([-eta0, eta0, -v0 / s, regime.delta * v0 / s])


@dataclass(frozen=True)
class ModeMagnitudes:
    """Interface (eta) and surface (zeta) parts of the four waves, keyed by
    (direction j, mode k) with j, k in {+1, -1}; k = +1 is the fast pair."""

    eta: dict
    zeta: dict

    def eta_total(self) -> np.ndarray:
        return sum(self.eta.values())

    def zeta_total(self) -> np.ndarray:
        return sum(self.zeta.values())


def initial_mode_magnitudes(eta0: np.ndarray, v0: np.ndarray,
                            regime: FluidRegime) -> ModeMagnitudes:
    """Closed-form interface/surface parts of each wave for rigid-lid
    compatible data (eta0, v0):

      eta_{j,k} = k (1-gamma)/(2 delta (c+^2-c-^2)) * (c_k^2-1)/c_k^2
                    * (eta0 + j v0 / ((gamma+delta) c_k))
      zeta_{j,k} = k (1-gamma)/(2 delta (c+^2-c-^2))
                    * (eta0 + j v0 / ((gamma+delta) c_k))

    with k = +1 on the fast pair and -1 on the slow pair.  These are the
    pointwise projections u_i e_{i,2} and u_i (e_{i,1}+e_{i,2}) in closed
    form; the velocity coefficient uses delta c^2 - delta - gamma =
    (1-gamma)(c^2-1)/c^2 (characteristic polynomial of the speeds).  The
    parts partition the data: sums over (j, k) give eta0 and the flat
    surface zeta1 = 0.
    """
    eta0 = np.asarray(eta0, dtype=float)
    v0 = np.asarray(v0, dtype=float)
    g, d = regime.gamma, regime.delta
    cp, cm = wave_speeds(regime)
    gap = cp * cp - cm * cm
    eta, zeta = {}, {}
    for k_sign, c in ((1, cp), (-1, cm)):
        c2 = c * c
        pref = k_sign * (1.0 - g) / (2.0 * d * gap)
        for j_sign in (1, -1):
            shared = eta0 + j_sign * v0 / ((g + d) * c)
            eta[(j_sign, k_sign)] = pref * (c2 - 1.0) / c2 * shared
            zeta[(j_sign, k_sign)] = pref * shared
    return ModeMagnitudes(eta=eta, zeta=zeta)
