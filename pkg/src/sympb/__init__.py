"""Symplectic diagnostics of reaction bottlenecks near index-1 saddles.

Core pieces: Williamson spectra and ellipsoid capacities, normal-form width
and flux scales on the dividing surface, linear evolution of mixed balls with
saddle-plane shadow areas, finite-time transmission ensembles, and symplectic
integration of the Eckart-Morse(-Morse) Hamiltonian.
"""

from .errors import (
    BelowSaddleError,
    DefinitenessError,
    DimensionError,
    DivergenceError,
    LyapunovSignError,
    PreconditionError,
    RootBracketError,
    SamplingError,
    SpectrumError,
    SymmetryError,
    SympbError,
)
from .linalg import (
    ellipsoid_capacity,
    is_symplectic,
    random_symplectic,
    standard_j,
    symmetric_sqrt,
    symplectic_spectrum,
    symplectic_spectrum_blockdiag,
)
from .models import (
    CnfModel,
    EckartMorseParams,
    QuadraticSaddleModel,
    barrier_x,
    builtin_cnf,
    builtin_eckart_morse_2dof,
    builtin_eckart_morse_morse_3dof,
    builtin_quadratic,
    cnf_from_obj,
    default_params,
    eckart_potential,
    effective_lyapunov,
    eval_cnf,
    full_hamiltonian,
    grad_potential,
    kinetic_energy,
    load_cnf_model,
    load_params,
    morse_potential,
    potential,
    velocities,
)
from .bottleneck import (
    FluxReport,
    WidthReport,
    action_volume_mc,
    candidate_width,
    energy_scan,
    flux_quadratic_exact,
    j_max_cnf,
    j_max_quadratic,
)
from .evolution import (
    ProjectionAreaCurve,
    area_curve,
    capacity_after_evolution,
    default_tau_grid,
    evolved_shape_matrix,
    min_projection_area,
    projection_area,
    radius_scan,
    stm,
)
from .ensembles import (
    EnsembleSpec,
    InitialCondition,
    TransmissionResult,
    default_delta_e,
    default_t_max,
    sample_ensemble,
    scan_report,
    transmission_fraction,
    transmission_scan,
    transmit,
)
from .integrators import (
    IntegratorConfig,
    TrajectoryRecord,
    ds_crossing_times,
    finite_difference_jacobian,
    integrate,
    symplecticity_defect,
    verlet_step,
)
from .matio import load_matrix, save_matrix
from .tables import ExperimentReport

__version__ = "0.1.0"
