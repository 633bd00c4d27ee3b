"""Finite-dimensional quantum thermodynamics laboratory.

Exact-diagonalization tooling for unitary system-reservoir processes:
entropy/heat ledgers with their balance identity, lower bounds on heat and
entropy production, staged and near-perfect erasure, switched-interaction
dynamics, and Gibbs-marginal inverse problems. Everything works in nats
with k_B = 1; reports can convert to bits.

The harness subpackage (landauer.harness) adds config-driven scenarios,
CSV/JSON reporting, and figures; the `landauer` console script drives it.
"""

from ._version import __version__
from .errors import (
    ConfigError,
    MaxIterationsError,
    NumericalCheckError,
    SingularJacobianError,
)
from .qmat import (
    haar_unitary,
    hermitian_eig,
    matrix_function,
    partial_trace,
    random_density,
    random_hermitian,
    tensor,
    trace_norm,
)
from .entropy import (
    BalanceBound,
    entropy_production,
    improved_bound,
    mutual_information,
    pinsker_floor,
    relative_entropy,
    reservoir_span,
    von_neumann_entropy,
    well_floor,
)
from .gibbs import (
    KuboCheck,
    TargetSolveResult,
    duhamel_derivative,
    gibbs_marginal,
    gibbs_state,
    kubo_identity_check,
    log_partition,
    solve_target_hamiltonian,
    thermodynamic_integration,
)
from .processes import (
    EpsilonErasureResult,
    ProcessLedger,
    ProcessResult,
    ReservoirSpec,
    SaturationReport,
    apply_process,
    epsilon_erasure,
    flip_process,
    remark1_sandwich,
    saturation_diagnostic,
    staged_erasure,
    swap_unitary,
)
from .protocols import (
    InteractionSpec,
    SwitchingProtocol,
    bump,
    bump_deriv,
    constant_protocol,
    erasure_protocol,
    interpolation_protocol,
    random_protocol,
    smooth_ramp,
    smooth_ramp_deriv,
)
from .dynamics import (
    AdiabaticResult,
    AdiabaticSweep,
    InstantStep,
    InstantTrajectory,
    StepHalvingReport,
    adiabatic_sweep,
    composite_simpson,
    evolve_adiabatic,
    evolve_instantaneous,
    heat_flux_observable,
    propagator_convergence,
    propagator_timedep,
)

__all__ = [
    "__version__",
    # errors
    "ConfigError",
    "MaxIterationsError",
    "NumericalCheckError",
    "SingularJacobianError",
    # operators and states
    "haar_unitary",
    "hermitian_eig",
    "matrix_function",
    "partial_trace",
    "random_density",
    "random_hermitian",
    "tensor",
    "trace_norm",
    # entropies and bounds
    "BalanceBound",
    "entropy_production",
    "improved_bound",
    "mutual_information",
    "pinsker_floor",
    "relative_entropy",
    "reservoir_span",
    "von_neumann_entropy",
    "well_floor",
    # thermal states and the inverse problem
    "KuboCheck",
    "TargetSolveResult",
    "duhamel_derivative",
    "gibbs_marginal",
    "gibbs_state",
    "kubo_identity_check",
    "log_partition",
    "solve_target_hamiltonian",
    "thermodynamic_integration",
    # processes
    "EpsilonErasureResult",
    "ProcessLedger",
    "ProcessResult",
    "ReservoirSpec",
    "SaturationReport",
    "apply_process",
    "epsilon_erasure",
    "flip_process",
    "remark1_sandwich",
    "saturation_diagnostic",
    "staged_erasure",
    "swap_unitary",
    # protocols and dynamics
    "InteractionSpec",
    "SwitchingProtocol",
    "bump",
    "bump_deriv",
    "constant_protocol",
    "erasure_protocol",
    "interpolation_protocol",
    "random_protocol",
    "smooth_ramp",
    "smooth_ramp_deriv",
    "AdiabaticResult",
    "AdiabaticSweep",
    "InstantStep",
    "InstantTrajectory",
    "StepHalvingReport",
    "adiabatic_sweep",
    "composite_simpson",
    "evolve_adiabatic",
    "evolve_instantaneous",
    "heat_flux_observable",
    "propagator_convergence",
    "propagator_timedep",
]
