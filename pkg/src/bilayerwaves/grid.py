"""Uniform periodic grid, centered difference stencils and discrete norms.

D1, D2, D3 are the classical second-order centered discretizations of
d/dx, d2/dx2 and d3/dx3 on a periodic ring of N points:

    (D1 f)_i = (f_{i+1} - f_{i-1}) / (2 dx)
    (D2 f)_i = (f_{i+1} - 2 f_i + f_{i-1}) / dx^2
    (D3 f)_i = (f_{i+2} - 2 f_{i+1} + 2 f_{i-1} - f_{i-2}) / (2 dx^3)

with all indices taken mod N.  Fields are plain ndarrays whose last axis
runs over grid points; multi-component states are stacked along axis 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PeriodicGrid",
    "d1",
    "d2",
    "d3",
    "discrete_l2",
    "relative_l2_error",
    "check_finite",
]


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform grid on [origin, origin + length) with periodic wrap."""

    length: float
    n_points: int
    origin: float = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.length <= 0:
            raise ValueError(f"domain length must be positive, got {self.length}")
        if self.n_points < 7:
            raise ValueError(
                f"need at least 7 points for the widest stencil, got {self.n_points}"
            )
        if self.origin is None:
            object.__setattr__(self, "origin", -0.5 * self.length)

    @classmethod
    def from_spacing(cls, length: float, dx: float, origin: float | None = None) -> "PeriodicGrid":
        """Build a grid with spacing dx; dx must tile the length exactly."""
        n = int(round(length / dx))
        if n < 1 or abs(n * dx - length) > 1e-9 * max(length, 1.0):
            raise ValueError(f"dx={dx} does not divide the domain length {length}")
        return cls(length=length, n_points=n, origin=origin)

    @property
    def dx(self) -> float:
        return self.length / self.n_points

    @property
    def x(self) -> np.ndarray:
        return self.origin + self.dx * np.arange(self.n_points)


def d1(f: np.ndarray, dx: float) -> np.ndarray:
    """Centered first derivative, periodic."""
    return (np.roll(f, -1, axis=-1) - np.roll(f, 1, axis=-1)) / (2.0 * dx)


def d2(f: np.ndarray, dx: float) -> np.ndarray:
    """Centered second derivative, periodic."""
    return (np.roll(f, -1, axis=-1) - 2.0 * f + np.roll(f, 1, axis=-1)) / dx**2


def d3(f: np.ndarray, dx: float) -> np.ndarray:
    """Centered third derivative (5-point), periodic."""
    return (
        np.roll(f, -2, axis=-1)
        - 2.0 * np.roll(f, -1, axis=-1)
        + 2.0 * np.roll(f, 1, axis=-1)
        - np.roll(f, 2, axis=-1)
    ) / (2.0 * dx**3)


def discrete_l2(f: np.ndarray, dx: float) -> float:
    """dx-weighted Euclidean norm, all components stacked."""
    return float(np.sqrt(np.sum(np.abs(f) ** 2) * dx))


def relative_l2_error(f: np.ndarray, g: np.ndarray, dx: float) -> float:
    """|f - g| / |g| in the discrete L2 norm; g is the reference."""
    if f.shape != g.shape:
        raise ValueError(f"shape mismatch: {f.shape} vs {g.shape}")
    ref = discrete_l2(g, dx)
    if ref == 0.0:
        raise ZeroDivisionError("reference field has zero norm")
    return discrete_l2(f - g, dx) / ref


def check_finite(f: np.ndarray, what: str = "field") -> np.ndarray:
    """Raise if the array contains NaN or Inf (used at I/O boundaries)."""
    if not np.all(np.isfinite(f)):
        raise FloatingPointError(f"{what} contains non-finite values")
    return f
