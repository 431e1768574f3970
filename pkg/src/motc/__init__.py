"""Deterministic quantum multiobservable control.

Propagation of driven N-level systems, control-landscape gradients and
Gramians, gradient flows on the unitary group, and homotopy tracking of
prescribed paths in U(N) or in multiobservable-expectation space.
"""

from . import errors
from .dynamics import (
    ControlField,
    PropagationResult,
    QuantumSystem,
    StateSpec,
    expectations,
    propagate,
    pure_state,
    zero_field,
)
from .integrate import (
    FlowProblem,
    IntegrationReport,
    brent_line_search,
    euler_integrate,
    rkck_adaptive,
)
from .landscape import (
    KinematicFlowResult,
    ObservableSet,
    analytic_purestate_flow,
    distance_derivative,
    f_matrix,
    gradient_field,
    gradient_field_targeted,
    kinematic_flow,
    natural_basis_dimension,
    natural_basis_functions,
    natural_basis_rank,
    objective_targeted,
    objective_weighted,
    unitary_gradient,
)
from .linalg import (
    EigDecomposition,
    condition_number,
    eig_hermitian,
    expi_hermitian,
    herm_to_vec,
    log_unitary_principal,
    solve_linear,
    vec_to_herm,
)
from .tracking import (
    CorrectionSpec,
    GramianReport,
    TrackTarget,
    free_function_min_fluence,
    geodesic_target_observables,
    geodesic_target_unitary,
    gramian_motc,
    gramian_unitary,
    linear_target_observables,
    motc_a_vector,
    motc_rhs,
    unitary_rhs,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "ControlField",
    "PropagationResult",
    "QuantumSystem",
    "StateSpec",
    "expectations",
    "propagate",
    "pure_state",
    "zero_field",
    "FlowProblem",
    "IntegrationReport",
    "brent_line_search",
    "euler_integrate",
    "rkck_adaptive",
    "KinematicFlowResult",
    "ObservableSet",
    "analytic_purestate_flow",
    "distance_derivative",
    "f_matrix",
    "gradient_field",
    "gradient_field_targeted",
    "kinematic_flow",
    "natural_basis_dimension",
    "natural_basis_functions",
    "natural_basis_rank",
    "objective_targeted",
    "objective_weighted",
    "unitary_gradient",
    "EigDecomposition",
    "condition_number",
    "eig_hermitian",
    "expi_hermitian",
    "herm_to_vec",
    "log_unitary_principal",
    "solve_linear",
    "vec_to_herm",
    "CorrectionSpec",
    "GramianReport",
    "TrackTarget",
    "free_function_min_fluence",
    "geodesic_target_observables",
    "geodesic_target_unitary",
    "gramian_motc",
    "gramian_unitary",
    "linear_target_observables",
    "motc_a_vector",
    "motc_rhs",
    "unitary_rhs",
]
