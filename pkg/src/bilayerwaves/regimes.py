"""Regime analysis: critical depth ratio, solitary-wave polarity, thickness
and amplitude comparisons, and the validity diagnostics of the rigid-lid
assumption."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coefficients import FluidRegime, free_surface_modes, wave_speeds

__all__ = [
    "critical_ratio",
    "RegimeClassification",
    "classify",
    "amplitude_ratio",
    "interface_nonlinearity",
    "thickness",
    "RigidLidValidity",
    "rigid_lid_validity",
]


def _critical_cubic(x: float, gamma: float) -> float:
    return x**3 + (gamma**2 + 3.0 * gamma - 3.0) * x**2 + (3.0 - 4.0 * gamma) * x - 1.0


def critical_ratio(gamma: float) -> float:
    """Depth ratio delta_c at which the slow-mode nonlinearity vanishes:
    the unique real root of

        X^3 + (gamma^2 + 3 gamma - 3) X^2 + (3 - 4 gamma) X - 1 = 0,

    found by bisection on [0.5, 2] to 1e-12.  Lies in (1, 5/4] for
    gamma in (0, 1), attaining 5/4 exactly at gamma = 0.1.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0, 1), got {gamma}")
    lo, hi = 0.5, 2.0
    flo = _critical_cubic(lo, gamma)
    fhi = _critical_cubic(hi, gamma)
    if flo * fhi > 0:
        raise RuntimeError(f"root not bracketed on [{lo}, {hi}] for gamma={gamma}")
    # unique real root: cubic discriminant must be negative (it tends to 0
    # in the gamma -> 0 triple-root limit, hence the rounding allowance)
    p = gamma**2 + 3.0 * gamma - 3.0
    q = 3.0 - 4.0 * gamma
    r = -1.0
    disc = (18.0 * p * q * r - 4.0 * p**3 * r + p * p * q * q
            - 4.0 * q**3 - 27.0 * r * r)
    if disc > 1e-8:
        raise RuntimeError(f"cubic has three real roots at gamma={gamma}")
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if flo * _critical_cubic(mid, gamma) <= 0:
            hi = mid
        else:
            lo = mid
            flo = _critical_cubic(lo, gamma)
    root = 0.5 * (lo + hi)
    if abs(_critical_cubic(root, gamma)) > 1e-10:
        raise RuntimeError(f"cubic residual too large at gamma={gamma}")
    return root


def interface_nonlinearity(regime: FluidRegime, mode: str) -> float:
    """Nonlinear coefficient of the interface wave equation for the
    right-moving member of the fast or slow pair: lambda divided by the
    interface component of the eigenvector."""
    modes = free_surface_modes(regime)
    idx = {"fast": 0, "slow": 2}[mode]
    m = modes[idx]
    return m.nonlinearity / m.vector[1]


@dataclass(frozen=True)
class RegimeClassification:
    """Polarity and magnitude thresholds at a parameter point."""

    delta_c: float
    delta_c_rigid: float
    fast_mode_polarity: str          # always "elevation" at the interface
    slow_mode_polarity: str          # "elevation" | "depression" | "critical"
    surface_dominant_slow: bool      # delta <= 2(1 - 2 gamma)
    fast_dominates_zero_velocity: bool   # delta <= 1 - 2 gamma


def classify(regime: FluidRegime, critical_band: float = 1e-8) -> RegimeClassification:
    """Classify the slow-mode interface polarity by the sign of its
    nonlinearity, which flips exactly at delta = delta_c(gamma)."""
    g, d = regime.gamma, regime.delta
    delta_c = critical_ratio(g)
    if abs(d - delta_c) <= critical_band:
        slow = "critical"
    else:
        lam_slow = interface_nonlinearity(regime, "slow")
        # mu_- > 0, so polarity is the sign of the nonlinearity
        slow = "elevation" if lam_slow > 0 else "depression"
    return RegimeClassification(
        delta_c=delta_c,
        delta_c_rigid=float(np.sqrt(g)),
        fast_mode_polarity="elevation",
        slow_mode_polarity=slow,
        surface_dominant_slow=bool(d <= 2.0 * (1.0 - 2.0 * g)),
        fast_dominates_zero_velocity=bool(d <= 1.0 - 2.0 * g),
    )


def amplitude_ratio(regime: FluidRegime, mode: str) -> float:
    """Signed interface-to-surface amplitude ratio (c^2 - 1)/c^2 of one
    mode pair; in (0, 1) for the fast mode, negative for the slow mode."""
    cp, cm = wave_speeds(regime)
    c2 = {"fast": cp * cp, "slow": cm * cm}[mode]
    return (c2 - 1.0) / c2


def thickness(M: float, lam: float, mu: float) -> float:
    """Half-width-at-height scale l = 1/k = sqrt(12 mu / (lam M)) of the
    sech^2 wave; equals integral/(2M)."""
    if lam * M / mu <= 0:
        raise ValueError(f"polarity violation: lam*M/mu = {lam * M / mu:.3g} <= 0")
    return float(np.sqrt(12.0 * mu / (lam * M)))


@dataclass(frozen=True)
class RigidLidValidity:
    """Size of the waves the rigid lid cannot represent, relative to the
    slow-mode interface wave, for flat-surface zero-velocity data."""

    surface_to_slow_interface: float   # |zeta_{.,+}| / |eta_{.,-}| (all four zeta equal)
    fast_to_slow_interface: float      # |eta_{.,+}| / |eta_{.,-}|
    threshold: float
    valid: bool


def rigid_lid_validity(regime: FluidRegime, eta0_norm: float = 1.0,
                       v0_norm: float = 0.0, threshold: float = 0.2) -> RigidLidValidity:
    """Closed-form validity ratios for zero-velocity data; both must be
    small for the rigid-lid assumption to hold over long times."""
    if v0_norm != 0.0:
        raise ValueError("closed-form ratios require the zero-velocity convention")
    if eta0_norm <= 0.0:
        raise ValueError("eta0_norm must be positive")
    cp, cm = wave_speeds(regime)
    cp2, cm2 = cp * cp, cm * cm
    surface = cm2 / (1.0 - cm2)
    fast = ((cp2 - 1.0) / cp2) * (cm2 / (1.0 - cm2))
    return RigidLidValidity(
        surface_to_slow_interface=float(surface),
        fast_to_slow_interface=float(fast),
        threshold=threshold,
        valid=bool(surface < threshold and fast < threshold),
    )
