"""Closed-form solitary waves and the initial-data families used in the
experiments.

The generic KdV equation dt u + c dx u + lam u dx u + mu dxxx u = 0 has the
traveling-wave solutions

    u(t, x) = M / cosh^2(k (x - x0 - c' t)),
    c' = c + lam M / 3,   k = sqrt(lam M / (12 mu)),

valid whenever lam*M/mu > 0 (the polarity rule).  Building one such wave
per mode and superposing sum_i u_i e_i gives initial data whose uncoupled
KdV evolution is known exactly; that trajectory is the reference for
scheme validation and for manufactured forcing.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .coefficients import EigenMode, FluidRegime, free_surface_modes
from .grid import PeriodicGrid
from .kdv import KdVCoefficients, mode_coefficients

__all__ = [
    "SolitonSpec",
    "soliton_profile",
    "soliton_derivatives",
    "KdVApproximationTrajectory",
    "four_mode_soliton_data",
    "default_soliton_amplitudes",
    "algebraic_bump",
    "flat_surface_zero_velocity",
]

PERIODIZATION_TOL = 1e-12


@dataclass(frozen=True)
class SolitonSpec:
    """A single sech^2 wave; coeffs already carry the long-wave scaling."""

    amplitude: float
    center: float
    coeffs: KdVCoefficients

    def __post_init__(self):
        if self.coeffs.lam * self.amplitude / self.coeffs.mu <= 0.0:
            raise ValueError(
                f"polarity violation: lam*M/mu = "
                f"{self.coeffs.lam * self.amplitude / self.coeffs.mu:.3g} "
                "must be positive for a real wavenumber"
            )

    @property
    def wavenumber(self) -> float:
        return float(np.sqrt(self.coeffs.lam * self.amplitude / (12.0 * self.coeffs.mu)))

    @property
    def propagation_speed(self) -> float:
        return self.coeffs.c + self.coeffs.lam * self.amplitude / 3.0


def _check_periodization(spec: SolitonSpec, grid: PeriodicGrid):
    tail = 1.0 / np.cosh(spec.wavenumber * grid.length / 2.0) ** 2
    if tail > PERIODIZATION_TOL:
        warnings.warn(
            f"soliton tail {tail:.2e} at half-domain exceeds {PERIODIZATION_TOL:.0e}; "
            "periodic wrap will pollute the profile",
            stacklevel=3,
        )


def soliton_profile(spec: SolitonSpec, t: float, grid: PeriodicGrid) -> np.ndarray:
    """Exact traveling wave sampled on the grid at time t."""
    _check_periodization(spec, grid)
    theta = spec.wavenumber * (grid.x - spec.center - spec.propagation_speed * t)
    return spec.amplitude / np.cosh(theta) ** 2


def soliton_derivatives(spec: SolitonSpec, t: float, x: np.ndarray):
    """(u, u_x, u_xx, u_xxx) of the traveling wave, all closed form.

    With s = sech^2(theta), th = tanh(theta):
      s'   = -2 th s
      s''  = -2 s (1 - 3 th^2)
      s''' =  8 th s (2 - 3 th^2)
    """
    k = spec.wavenumber
    theta = k * (x - spec.center - spec.propagation_speed * t)
    th = np.tanh(theta)
    s = 1.0 - th * th
    M = spec.amplitude
    u = M * s
    ux = M * k * (-2.0 * th * s)
    uxx = M * k**2 * (-2.0 * s * (1.0 - 3.0 * th * th))
    uxxx = M * k**3 * (8.0 * th * s * (2.0 - 3.0 * th * th))
    return u, ux, uxx, uxxx


class KdVApproximationTrajectory:
    """Exact uncoupled evolution U(t, x) = sum_i u_i(x - c_i' t) e_i of
    per-mode solitary waves (modes with zero amplitude are skipped).

    Provides the analytic space/time derivatives needed to manufacture a
    forcing term: each mode is a rigid translate, so dt = -c_i' dx."""

    def __init__(self, modes: list[EigenMode], specs: list[SolitonSpec | None],
                 grid: PeriodicGrid):
        if len(specs) != len(modes):
            raise ValueError("one spec (or None) per mode required")
        self.modes = modes
        self.specs = specs
        self.grid = grid

    def _accumulate(self, t: float, x, weight):
        x = self.grid.x if x is None else np.asarray(x, dtype=float)
        out = np.zeros((len(self.modes[0].vector),) + x.shape)
        for mode, spec in zip(self.modes, self.specs):
            if spec is None:
                continue
            parts = soliton_derivatives(spec, t, x)
            out += np.multiply.outer(mode.vector, weight(spec, parts))
        return out

    def state(self, t: float, x=None) -> np.ndarray:
        return self._accumulate(t, x, lambda sp, p: p[0])

    def dx_state(self, t: float, x=None) -> np.ndarray:
        return self._accumulate(t, x, lambda sp, p: p[1])

    def dxxx_state(self, t: float, x=None) -> np.ndarray:
        return self._accumulate(t, x, lambda sp, p: p[3])

    def dt_state(self, t: float, x=None) -> np.ndarray:
        return self._accumulate(t, x, lambda sp, p: -sp.propagation_speed * p[1])

    def dxx_dt_state(self, t: float, x=None) -> np.ndarray:
        return self._accumulate(t, x, lambda sp, p: -sp.propagation_speed * p[3])


def default_soliton_amplitudes(regime: FluidRegime, magnitude: float = 1.0,
                               modes: list[EigenMode] | None = None) -> list[float]:
    """Polarity-corrected amplitudes: |M_i| = magnitude with the sign that
    makes lam_i M_i / mu_i positive for every mode."""
    modes = modes if modes is not None else free_surface_modes(regime)
    return [float(np.copysign(magnitude, m.nonlinearity * m.dispersion)) for m in modes]


def four_mode_soliton_data(amplitudes, regime: FluidRegime, grid: PeriodicGrid,
                           centers=None):
    """Initial state U0 = sum_i u_i(x, 0) e_i of per-mode solitary waves,
    together with its exact uncoupled trajectory.

    amplitudes: one M_i per mode; zero skips the mode.  Raises naming the
    offending mode if a nonzero M_i violates the polarity rule.
    """
    modes = free_surface_modes(regime)
    if len(amplitudes) != 4:
        raise ValueError("expected 4 amplitudes, one per mode")
    centers = [0.0] * 4 if centers is None else list(centers)
    specs: list[SolitonSpec | None] = []
    for i, (mode, M) in enumerate(zip(modes, amplitudes)):
        if M == 0.0:
            specs.append(None)
            continue
        coeffs = mode_coefficients(mode, regime.epsilon)
        try:
            spec = SolitonSpec(amplitude=float(M), center=centers[i], coeffs=coeffs)
        except ValueError as exc:
            raise ValueError(f"mode {i + 1} (speed {mode.speed:+.4f}): {exc}") from exc
        _check_periodization(spec, grid)
        specs.append(spec)
    trajectory = KdVApproximationTrajectory(modes, specs, grid)
    return trajectory.state(0.0), trajectory


def algebraic_bump(M: float, kappa: float, grid: PeriodicGrid) -> np.ndarray:
    """Slowly decaying even profile M / sqrt(1 + (kappa x)^2); deliberately
    violates the quadratic-decay hypothesis behind the O(eps) error bound."""
    if kappa <= 0:
        raise ValueError(f"kappa must be positive, got {kappa}")
    return M / np.sqrt(1.0 + (kappa * grid.x) ** 2)


def flat_surface_zero_velocity(bump: np.ndarray) -> np.ndarray:
    """State (-bump, bump, 0, 0): interface deformation with a flat surface
    and zero velocities."""
    bump = np.asarray(bump, dtype=float)
    zero = np.zeros_like(bump)
    return np.stack([-bump, bump, zero, zero])
