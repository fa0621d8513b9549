"""Two-layer long-wave models with a free surface: symmetric
Boussinesq-type systems, rigid-lid models, the four-wave KdV
approximation, and predictive Crank-Nicolson solvers for all of them."""

from .banded import CyclicBlockBanded, SolverError
from .boussinesq import (
    BoussState,
    ForcingTerm,
    bouss_step,
    energy,
    manufactured_forcing,
    run_boussinesq,
    sigma1_adjoint,
)
from .coefficients import (
    BoussinesqParameters,
    DegenerateRegimeError,
    EigenMode,
    FluidRegime,
    OperatorSystem,
    RigidLidModes,
    SymmetricSystem,
    build_bbm_system,
    build_original_system,
    build_symmetric_system,
    free_surface_modes,
    original_to_transformed,
    rigid_lid_modes,
    rigid_lid_system,
    transformed_to_original,
    wave_speeds,
)
from .config import ExperimentConfig, GridSpec, InitialDataSpec
from .decomposition import (
    ModeMagnitudes,
    initial_mode_magnitudes,
    project,
    reconstruct,
    rigid_lid_initial_data,
)
from .grid import PeriodicGrid, d1, d2, d3, discrete_l2, relative_l2_error
from .kdv import (
    KdVCoefficients,
    KdVState,
    bootstrap,
    mode_coefficients,
    run_kdv,
    run_kdv_approximation,
    step,
)
from .regimes import (
    RegimeClassification,
    RigidLidValidity,
    amplitude_ratio,
    classify,
    critical_ratio,
    rigid_lid_validity,
    thickness,
)
from .waves import (
    KdVApproximationTrajectory,
    SolitonSpec,
    algebraic_bump,
    default_soliton_amplitudes,
    flat_surface_zero_velocity,
    four_mode_soliton_data,
    soliton_profile,
)

__version__ = "0.1.0"
