"""Coefficient matrices, eigenmodes and KdV coefficients of the two-layer
long-wave models.

Everything here is a pure function of the density ratio gamma = rho1/rho2,
the depth ratio delta = d1/d2, and the free parameters (a1, a2, b1,
lambda_i, K) of the Boussinesq family.  The state is U = (eta1, eta2, v1,
v2): interface-relative surface deviation, interface deviation, and the
two layer velocity variables.

Model hierarchy (all first order in the long-wave parameter epsilon):

  original     dt U + A0 dx U + eps*(A(U) dx U - Pd dxx dt U) = 0
  bbm family   dt U + A0 dx U + eps*(A(U) dx U - A1 dxxx U - A2 dxx dt U) = 0
  symmetric    (S0 + eps(S1(U) - S2 dxx)) dt U
                   + (Sig0 + eps(Sig1(U) - Sig2 dxx)) dx U = 0
  rigid lid    2-component (zeta, v) family with parameters (theta1,
               theta2, beta)

The symmetric system is obtained by multiplying the bbm-family system on
the left by S0 + eps*S1(U) - eps*(S2t + K*S0) dxx and dropping second
order terms, so that

  Sig0 = S0 A0,   Sig1(U) = S1(U) A0 + S0 A(U),
  S2   = S0 A2 + S2t + K S0,   Sig2 = S0 A1 + (S2t + K S0) A0

are all symmetric, with S0 and S2 positive definite for suitable K.

The linearization S0^-1 Sig0 has four distinct eigenvalues

  c_{1..4} = (c+, -c+, c-, -c-),   c_pm^2 = (1+delta pm sqrt(D)) / (2 delta),
  D = (1-delta)^2 + 4 gamma delta,

and the S0-orthonormal eigenvectors e_i carry the per-mode KdV
nonlinearity lambda_i = e_i.(Sig1(e_i) - c_i S1(e_i)).e_i and dispersion
mu_i = e_i.(-Sig2 + c_i S2).e_i, for which closed forms exist and are used
here directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "DegenerateRegimeError",
    "FluidRegime",
    "BoussinesqParameters",
    "EigenMode",
    "SymmetricSystem",
    "OperatorSystem",
    "RigidLidModes",
    "wave_speeds",
    "free_surface_modes",
    "build_symmetric_system",
    "build_original_system",
    "build_bbm_system",
    "rigid_lid_modes",
    "rigid_lid_system",
    "bilinear_swap",
]

DEGENERACY_TOL = 1e-10
K_CAP = 2.0**10


class DegenerateRegimeError(ValueError):
    """Raised when (gamma, delta) sits too close to a parameter limit where
    the eigenbasis or the KdV coefficients blow up."""


@dataclass(frozen=True)
class FluidRegime:
    """Dimensionless configuration: 0 < gamma < 1, delta > 0, 0 < epsilon < 1."""

    gamma: float
    delta: float
    epsilon: float

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if not self.delta > 0.0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")


@dataclass(frozen=True)
class BoussinesqParameters:
    """Free parameters of the Boussinesq family.

    Defaults (a1 = a2 = b1 = 0, lambda1 = lambda2 = 1, lambda3 = lambda4 = 0)
    keep the change of variables trivial and zero the a, b entries of the
    symmetrizer corrector.  K is the positivity shift of S2; None selects it
    automatically (doubling search).  alpha_scheme is the convex weight of
    the two nonlinear discretizations and must stay at 2/3, the value that
    preserves the semi-discrete L2 norm.
    """

    a1: float = 0.0
    a2: float = 0.0
    b1: float = 0.0
    lambda1: float = 1.0
    lambda2: float = 1.0
    lambda3: float = 0.0
    lambda4: float = 0.0
    K: float | None = None
    alpha_scheme: float = 2.0 / 3.0

    def __post_init__(self):
        if self.a2 < 0 or self.b1 < 0:
            raise ValueError("a2 and b1 must be nonnegative")
        for name in ("lambda1", "lambda2", "lambda3", "lambda4"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1], got {v}")
        if self.K is not None and self.K < 0:
            raise ValueError("K must be nonnegative")
        if abs(self.alpha_scheme - 2.0 / 3.0) > 1e-15:
            raise ValueError("alpha_scheme is fixed at 2/3 (L2-preserving choice)")

    def derived(self, gamma: float, delta: float) -> tuple[float, float, float, float]:
        """(beta1, alpha1, alpha2, beta2) combining the core dispersion with
        the free parameters."""
        return (
            1.0 / 3.0 - self.b1,
            1.0 / (2.0 * delta) - self.a1,
            1.0 / (3.0 * delta**2) - self.a2,
            self.a2 + gamma / delta,
        )


@dataclass(frozen=True)
class EigenMode:
    """One propagation mode: speed c_i, nonlinearity lambda_i, dispersion
    mu_i and the S0-unit eigenvector e_i."""

    speed: float
    nonlinearity: float
    dispersion: float
    vector: np.ndarray
    theta: float


@dataclass(frozen=True)
class OperatorSystem:
    """System P_eps(U, dx) dt U + Q_eps(U, dx) dx U = 0 with

        P_eps = P_const + eps*P1(U) - eps*P_dxx dxx
        Q_eps = Q_const + eps*Q1(U) - eps*Q_dxx dxx

    P1/Q1 are linear matrix maps stored as tensors T of shape (d, d, d)
    with (T(U))_{ab} = sum_k T[k, a, b] U_k.
    """

    dimension: int
    P_const: np.ndarray
    P1_tensor: np.ndarray
    P_dxx: np.ndarray
    Q_const: np.ndarray
    Q1_tensor: np.ndarray
    Q_dxx: np.ndarray
    epsilon: float

    def P1(self, U: np.ndarray) -> np.ndarray:
        return np.einsum("kab,k->ab", self.P1_tensor, U)

    def Q1(self, U: np.ndarray) -> np.ndarray:
        return np.einsum("kab,k->ab", self.Q1_tensor, U)


@dataclass(frozen=True)
class SymmetricSystem:
    """Matrices of the symmetric system; S0, Sig0, S2, Sig2 symmetric, S0
    and S2 positive definite, S1(U) and Sig1(U) symmetric for every U."""

    S0: np.ndarray
    Sigma0: np.ndarray
    S2: np.ndarray
    Sigma2: np.ndarray
    S1_tensor: np.ndarray
    Sigma1_tensor: np.ndarray
    epsilon: float
    K: float
    regime: FluidRegime = field(repr=False, default=None)  # type: ignore[assignment]
    params: BoussinesqParameters = field(repr=False, default=None)  # type: ignore[assignment]

    def S1(self, U: np.ndarray) -> np.ndarray:
        return np.einsum("kab,k->ab", self.S1_tensor, U)

    def Sigma1(self, U: np.ndarray) -> np.ndarray:
        return np.einsum("kab,k->ab", self.Sigma1_tensor, U)

    def as_operator_system(self) -> OperatorSystem:
        return OperatorSystem(
            dimension=4,
            P_const=self.S0,
            P1_tensor=self.S1_tensor,
            P_dxx=self.S2,
            Q_const=self.Sigma0,
            Q1_tensor=self.Sigma1_tensor,
            Q_dxx=self.Sigma2,
            epsilon=self.epsilon,
        )


@dataclass(frozen=True)
class RigidLidModes:
    """Rigid-lid two-wave coefficients and S0-unit vectors."""

    c: float
    lam: float
    mu: float
    lambda_interface: float
    e_plus: np.ndarray
    e_minus: np.ndarray


# ---------------------------------------------------------------------------
# constant matrices

def _matrix_s0(gamma: float, delta: float) -> np.ndarray:
    return np.array([
        [gamma, gamma, 0.0, 0.0],
        [gamma, 1.0, 0.0, 0.0],
        [0.0, 0.0, gamma, 0.0],
        [0.0, 0.0, 0.0, 1.0 / delta],
    ])


def _matrix_a0(gamma: float, delta: float) -> np.ndarray:
    return np.array([
        [0.0, 0.0, 1.0, 0.0],
        [0.0, 0.0, 0.0, 1.0 / delta],
        [1.0, 1.0, 0.0, 0.0],
        [gamma, 1.0, 0.0, 0.0],
    ])


def _s1_tensor(gamma: float) -> np.ndarray:
    """S1(U) = [[0,0,g v1,0],[0,0,0,v2],[g v1,0,g eta1,0],[0,v2,0,eta2]]."""
    T = np.zeros((4, 4, 4))
    T[2, 0, 2] = T[2, 2, 0] = gamma      # gamma*v1 entries
    T[3, 1, 3] = T[3, 3, 1] = 1.0        # v2 entries
    T[0, 2, 2] = gamma                   # gamma*eta1
    T[1, 3, 3] = 1.0                     # eta2
    return T


def _a_tensor() -> np.ndarray:
    """A(U) = [[v1,0,eta1,0],[0,v2,0,eta2],[0,0,v1,0],[0,0,0,v2]]."""
    T = np.zeros((4, 4, 4))
    T[2, 0, 0] = T[2, 2, 2] = 1.0        # v1
    T[3, 1, 1] = T[3, 3, 3] = 1.0        # v2
    T[0, 0, 2] = 1.0                     # eta1
    T[1, 1, 3] = 1.0                     # eta2
    return T


def _matrix_a1(gamma, delta, params: BoussinesqParameters) -> np.ndarray:
    b1, a1 = params.b1, params.a1
    l1, l2, l3, l4 = params.lambda1, params.lambda2, params.lambda3, params.lambda4
    be1, al1, al2, be2 = params.derived(gamma, delta)
    return np.array([
        [0.0, 0.0, -l1 * be1, -l2 * al1],
        [0.0, 0.0, 0.0, -l2 * al2 / delta],
        [-l3 * b1 - l4 * gamma * a1, -l3 * b1 - l4 * a1, 0.0, 0.0],
        [-l4 * gamma * be2 - l3 * gamma / 2, -l4 * be2 - l3 * gamma / 2, 0.0, 0.0],
    ])


def _matrix_a2(gamma, delta, params: BoussinesqParameters) -> np.ndarray:
    b1, a1 = params.b1, params.a1
    l1, l2, l3, l4 = params.lambda1, params.lambda2, params.lambda3, params.lambda4
    be1, al1, al2, be2 = params.derived(gamma, delta)
    return np.array([
        [(1 - l1) * be1, delta * (1 - l2) * al1, 0.0, 0.0],
        [0.0, (1 - l2) * al2, 0.0, 0.0],
        [0.0, 0.0, (1 - l3) * b1, (1 - l4) * a1],
        [0.0, 0.0, (1 - l3) * gamma / 2, (1 - l4) * be2],
    ])


def _matrix_s2_tilde(gamma, delta, params: BoussinesqParameters) -> np.ndarray:
    b1, a1 = params.b1, params.a1
    l1, l2, l3, l4 = params.lambda1, params.lambda2, params.lambda3, params.lambda4
    be1, al1, al2, be2 = params.derived(gamma, delta)
    a = gamma * ((1 - l2) * al2 - (1 - l1) * be1)
    b = gamma * (1 - l2) * al1
    return np.array([
        [a + (delta - 1 + gamma) * b, 0.0, 0.0, 0.0],
        [a + delta * b, 0.0, 0.0, 0.0],
        [0.0, 0.0, a + (delta - 1) * b + gamma * (b1 * l3 - l1 * be1), b + gamma * l4 * a1],
        [0.0, 0.0, gamma * (l3 / (2 * delta) - l2 * al1), (l4 * be2 - l2 * al2) / delta],
    ])


def bilinear_swap(tensor: np.ndarray) -> np.ndarray:
    """Swap the argument slots of a linear matrix map.

    For T with (T(U)V)_a = sum_{k,b} T[k, a, b] U_k V_b, returns Ts with
    Ts(V)U = T(U)V for all U, V.
    """
    # (Ts(V))_{ab} = sum_c T[b, a, c] V_c  ->  Ts[k, a, b] = T[b, a, k]
    return np.transpose(tensor, (2, 1, 0))


# ---------------------------------------------------------------------------
# wave speeds and eigenmodes

def wave_speeds(regime: FluidRegime) -> tuple[float, float]:
    """Fast and slow linear phase speeds c+ > c- > 0.

    c_pm^2 = (1 + delta pm sqrt((1-delta)^2 + 4 gamma delta)) / (2 delta).
    """
    g, d = regime.gamma, regime.delta
    disc = np.sqrt((1.0 - d) ** 2 + 4.0 * g * d)
    cp2 = (1.0 + d + disc) / (2.0 * d)
    cm2 = (1.0 + d - disc) / (2.0 * d)
    _check_degeneracy(cp2, cm2)
    return float(np.sqrt(cp2)), float(np.sqrt(cm2))


def _check_degeneracy(cp2: float, cm2: float, tol: float = DEGENERACY_TOL):
    if cp2 - cm2 < tol:
        raise DegenerateRegimeError(
            f"near-coincident wave speeds: c+^2 - c-^2 = {cp2 - cm2:.3e}"
        )
    if abs(cp2 - 1.0) < tol or abs(cm2 - 1.0) < tol:
        raise DegenerateRegimeError(
            f"wave speed too close to 1: c+^2 = {cp2}, c-^2 = {cm2}"
        )


def free_surface_modes(regime: FluidRegime, tol: float = DEGENERACY_TOL) -> list[EigenMode]:
    """The four propagation modes, ordered (+c+, -c+, +c-, -c-).

    Vectors are S0-orthonormal; lambda repeats per pair and mu flips sign
    with the direction: lambda = (l+, l+, l-, l-), mu = (m+, -m+, m-, -m-).
    """
    g, d = regime.gamma, regime.delta
    cp, cm = wave_speeds(regime)
    cp2, cm2 = cp * cp, cm * cm
    gap = cp2 - cm2
    den_p = cp2 - 2.0 * (1.0 - g) / (d + 1.0)
    den_m = cm2 - 2.0 * (1.0 - g) / (d + 1.0)
    if min(abs(den_p), abs(den_m)) < tol:
        raise DegenerateRegimeError("dispersion coefficient denominator vanishes")
    theta_p = np.sqrt(2.0 * d * gap * abs(cp2 - 1.0))
    theta_m = np.sqrt(2.0 * d * gap * abs(cm2 - 1.0))

    lam_p = 1.5 * ((2.0 - d) * cp2 + d - 1.0 / d - (1.0 - g)) / (theta_p * gap)
    lam_m = 1.5 * ((2.0 - d) * cm2 + d - 1.0 / d - (1.0 - g)) / (theta_m * gap)
    poly = 1.0 + 3.0 * g / d + 1.0 / d**2
    ratio = (1.0 - g) / (d + 1.0)
    mu_p = cp / 6.0 * (poly * (cp2 - ratio) - cp2 / d) / den_p
    mu_m = cm / 6.0 * (poly * (cm2 - ratio) - cm2 / d) / den_m

    e1 = np.array([1 / cp, cp - 1 / cp, 1.0, d * cp2 - d]) / theta_p
    e2 = np.array([-1 / cp, 1 / cp - cp, 1.0, d * cp2 - d]) / theta_p
    e3 = np.array([-1 / cm, 1 / cm - cm, -1.0, d - d * cm2]) / theta_m
    e4 = np.array([1 / cm, cm - 1 / cm, -1.0, d - d * cm2]) / theta_m

    return [
        EigenMode(cp, lam_p, mu_p, e1, theta_p),
        EigenMode(-cp, lam_p, -mu_p, e2, theta_p),
        EigenMode(cm, lam_m, mu_m, e3, theta_m),
        EigenMode(-cm, lam_m, -mu_m, e4, theta_m),
    ]


# ---------------------------------------------------------------------------
# system builders

def build_original_system(regime: FluidRegime) -> OperatorSystem:
    """The untransformed Boussinesq system in (eta1, eta2, u1, u2):

        dt eta1 + dx(h1 u1) = 0,   h1 = 1 + eps eta1
        dt eta2 + dx(h2 u2) = 0,   h2 = 1/delta + eps eta2
        dt u1 + dx(eta1 + eta2)
              + eps(u1 dx u1 - 1/3 dxx dt u1 - 1/(2 delta) dxx dt u2) = 0
        dt u2 + dx(gamma eta1 + eta2)
              + eps(u2 dx u2 - (1+3 gamma delta)/(3 delta^2) dxx dt u2
                    - gamma/2 dxx dt u1) = 0
    """
    g, d = regime.gamma, regime.delta
    p_dxx = np.zeros((4, 4))
    p_dxx[2, 2] = 1.0 / 3.0
    p_dxx[2, 3] = 1.0 / (2.0 * d)
    p_dxx[3, 2] = g / 2.0
    p_dxx[3, 3] = (1.0 + 3.0 * g * d) / (3.0 * d**2)
    return OperatorSystem(
        dimension=4,
        P_const=np.eye(4),
        P1_tensor=np.zeros((4, 4, 4)),
        P_dxx=p_dxx,
        Q_const=_matrix_a0(g, d),
        Q1_tensor=_a_tensor(),
        Q_dxx=np.zeros((4, 4)),
        epsilon=regime.epsilon,
    )


def build_bbm_system(regime: FluidRegime,
                     params: BoussinesqParameters | None = None) -> OperatorSystem:
    """The BBM-trick family in (eta1, eta2, v1, v2):

        dt U + A0 dx U + eps*(A(U) dx U - A1 dxxx U - A2 dxx dt U) = 0.

    Left-multiplied by the symmetrizer this yields the symmetric system.
    """
    params = params or BoussinesqParameters()
    g, d = regime.gamma, regime.delta
    return OperatorSystem(
        dimension=4,
        P_const=np.eye(4),
        P1_tensor=np.zeros((4, 4, 4)),
        P_dxx=_matrix_a2(g, d, params),
        Q_const=_matrix_a0(g, d),
        Q1_tensor=_a_tensor(),
        Q_dxx=_matrix_a1(g, d, params),
        epsilon=regime.epsilon,
    )


def _select_k(s0: np.ndarray, s2_base: np.ndarray) -> float:
    """Smallest K in the doubling sequence 0, 1, 2, 4, ... making S2
    comfortably positive definite."""
    target = 0.01 * np.linalg.eigvalsh(s0).min()
    k = 0.0
    while True:
        smallest = np.linalg.eigvalsh(s2_base + k * s0).min()
        if smallest >= target:
            return k
        k = 1.0 if k == 0.0 else 2.0 * k
        if k > K_CAP:
            raise ValueError(
                f"no K <= {K_CAP} makes S2 positive definite; increase K manually"
            )


def build_symmetric_system(regime: FluidRegime,
                           params: BoussinesqParameters | None = None) -> SymmetricSystem:
    """Assemble the symmetric system from the symmetrizer applied to the
    bbm-family matrices.

    Fails (rather than silently degrading) if S2 is not positive definite
    for the given K.
    """
    params = params or BoussinesqParameters()
    g, d = regime.gamma, regime.delta
    wave_speeds(regime)  # degeneracy guard
    s0 = _matrix_s0(g, d)
    a0 = _matrix_a0(g, d)
    a1 = _matrix_a1(g, d, params)
    a2 = _matrix_a2(g, d, params)
    s2t = _matrix_s2_tilde(g, d, params)

    s2_base = s0 @ a2 + s2t
    if params.K is None:
        K = _select_k(s0, s2_base)
    else:
        K = params.K
        if np.linalg.eigvalsh(s2_base + K * s0).min() <= 0.0:
            raise ValueError(f"S2 not positive definite for K={K}; increase K")

    s1_t = _s1_tensor(g)
    # Sig1(U) = S1(U) A0 + S0 A(U), assembled slot-wise on the tensor
    sig1_t = np.einsum("kac,cb->kab", s1_t, a0) + np.einsum("ac,kcb->kab", s0, _a_tensor())

    return SymmetricSystem(
        S0=s0,
        Sigma0=s0 @ a0,
        S2=s2_base + K * s0,
        Sigma2=s0 @ a1 + (s2t + K * s0) @ a0,
        S1_tensor=s1_t,
        Sigma1_tensor=sig1_t,
        epsilon=regime.epsilon,
        K=K,
        regime=regime,
        params=params,
    )


# ---------------------------------------------------------------------------
# change of variables between the original and the bbm-family systems
#
# The bbm-family velocity variables (v1, v2) relate to the untransformed
# ones (u1, u2) through an O(eps) dispersive map carrying the complementary
# coefficients beta1, alpha1, alpha2:
#
#     v1 = u1 - eps*(beta1 dxx u1 + alpha1 dxx u2) + O(eps^2)
#     v2 = u2 - eps* alpha2 dxx u2                 + O(eps^2)
#
# (The eta components are shared.)  Solutions of the original system agree
# with solutions of the bbm family / symmetric system at order eps^2 only
# after this map; comparing raw states shows an O(eps) gap.  Verified by
# matching the linearized generators of the two systems row by row.


def original_to_transformed(U: np.ndarray, regime: FluidRegime,
                            params: BoussinesqParameters, dx: float) -> np.ndarray:
    """Map a state of the original system into bbm-family variables."""
    from .grid import d2

    be1, al1, al2, _ = params.derived(regime.gamma, regime.delta)
    eps = regime.epsilon
    V = np.array(U, dtype=float, copy=True)
    V[2] -= eps * (be1 * d2(U[2], dx) + al1 * d2(U[3], dx))
    V[3] -= eps * al2 * d2(U[3], dx)
    return V


def transformed_to_original(V: np.ndarray, regime: FluidRegime,
                            params: BoussinesqParameters, dx: float) -> np.ndarray:
    """Inverse of original_to_transformed, to O(eps^2)."""
    from .grid import d2

    be1, al1, al2, _ = params.derived(regime.gamma, regime.delta)
    eps = regime.epsilon
    U = np.array(V, dtype=float, copy=True)
    U[2] += eps * (be1 * d2(V[2], dx) + al1 * d2(V[3], dx))
    U[3] += eps * al2 * d2(V[3], dx)
    return U


# ---------------------------------------------------------------------------
# rigid lid

def rigid_lid_modes(regime: FluidRegime, tol: float = DEGENERACY_TOL) -> RigidLidModes:
    """Two-wave coefficients under a rigid lid:

        c = sqrt((1-gamma)/(gamma+delta))
        lambda = (3c/2) (delta^2-gamma)/(gamma+delta) / sqrt(2(1-gamma))
        mu = (c/6) (1+gamma delta)/(delta (gamma+delta))

    lambda_interface = (3c/2)(delta^2-gamma)/(gamma+delta) drives the
    interface wave equation and changes sign exactly at delta^2 = gamma.
    """
    g, d = regime.gamma, regime.delta
    if 1.0 - g < tol:
        raise DegenerateRegimeError(f"rigid-lid modes degenerate as gamma -> 1 (gamma={g})")
    c = float(np.sqrt((1.0 - g) / (g + d)))
    lam_int = 1.5 * c * (d * d - g) / (g + d)
    lam = lam_int / np.sqrt(2.0 * (1.0 - g))
    mu = c / 6.0 * (1.0 + g * d) / (d * (g + d))
    e_plus = np.array([1.0 / np.sqrt(1.0 - g), np.sqrt(g + d)]) / np.sqrt(2.0)
    e_minus = np.array([-1.0 / np.sqrt(1.0 - g), np.sqrt(g + d)]) / np.sqrt(2.0)
    return RigidLidModes(c=c, lam=float(lam), mu=float(mu),
                         lambda_interface=float(lam_int),
                         e_plus=e_plus, e_minus=e_minus)


def rigid_lid_system(regime: FluidRegime, theta1: float = 0.0, theta2: float = 1.0,
                     beta: float = 0.0) -> OperatorSystem:
    """Three-parameter rigid-lid family in (zeta, v):

        (1 - eps b dxx) dt zeta + 1/(gamma+delta) dx v
            + eps nl dx(zeta v) + eps a dxxx v = 0
        (1 - eps d dxx) dt v + (1-gamma) dx zeta
            + eps nl v dx v + eps c (1-gamma) dxxx zeta = 0

    with nl = (delta^2-gamma)/(gamma+delta)^2 and

        (gamma+delta) a = (1-theta1)(1+gamma delta)/(3 delta (gamma+delta)) - beta
        b = theta1 (1+gamma delta)/(3 delta (gamma+delta)),  c = beta theta2,
        d = beta (1-theta2).

    theta1 = beta = 0 is the pure-dispersion member; theta1 = 1, beta = 0
    moves all dispersion onto the time derivative.
    """
    if theta1 < 0 or theta2 > 1 or beta < 0:
        raise ValueError("require theta1 >= 0, theta2 <= 1, beta >= 0")
    g, d = regime.gamma, regime.delta
    sig = g + d
    core = (1.0 + g * d) / (3.0 * d * sig)
    a = ((1.0 - theta1) * core - beta) / sig
    b = theta1 * core
    c = beta * theta2
    dd = beta * (1.0 - theta2)
    nl = (d * d - g) / sig**2

    q1 = np.zeros((2, 2, 2))
    q1[1, 0, 0] = nl   # v dx zeta
    q1[0, 0, 1] = nl   # zeta dx v
    q1[1, 1, 1] = nl   # v dx v
    return OperatorSystem(
        dimension=2,
        P_const=np.eye(2),
        P1_tensor=np.zeros((2, 2, 2)),
        P_dxx=np.array([[b, 0.0], [0.0, dd]]),
        Q_const=np.array([[0.0, 1.0 / sig], [1.0 - g, 0.0]]),
        Q1_tensor=q1,
        Q_dxx=np.array([[0.0, -a], [-c * (1.0 - g), 0.0]]),
        epsilon=regime.epsilon,
    )
