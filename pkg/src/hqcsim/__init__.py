"""Holonomic gate simulation on a circuit-QED lattice.

Layers, bottom to top: `hilbert` (dense composite-space operators),
`models` (lab/rotating/effective Hamiltonians and drive calibration),
`dynamics` (Lindblad propagation and gate fidelities), `holonomy`
(ideal gates and parallel-transport checks), `circuit_em` (resonator
eigenmodes and flux-modulated couplings), `noise_budget` (quasistatic
sensitivity), and `cli` (scenario runner).
"""

from .hilbert import (
    CompositeSpace,
    DensityMatrix,
    DimensionError,
    Operator,
    ValidationError,
    commutator,
    dagger,
    destroy,
    embed,
    herm_expm,
    number_op,
)
from .models import (
    CalibrationError,
    DriveCalibration,
    SingleQubitParams,
    TwoQubitDrive,
    alpha_equal_bessel,
    bessel_j,
    calibrate,
    h_correction,
    h_effective,
    h_lab,
    h_rotating,
    h_two_qubit,
    logical_kets_1q,
    logical_kets_2q,
    single_qubit_space,
    solve_alpha_for_theta,
    standard_single_qubit,
    two_qubit_space,
)
from .dynamics import (
    CollapseChannel,
    IntegrationError,
    LindbladModel,
    StepSizeError,
    Trajectory,
    evolve,
    process_fidelity_1q,
    process_fidelity_2q,
    single_qubit_model,
    state_fidelity,
    two_qubit_model,
)
from .holonomy import (
    HolonomyReport,
    dressed_states,
    u1,
    u2,
    verify_holonomy,
    verify_holonomy_2q,
)
from .circuit_em import (
    Eigenmode,
    FluxTone,
    SQUIDParams,
    SolverError,
    TLRNetwork,
    ValidityError,
    char_det,
    parametric_coupling,
    plasma_guard,
    solve_eigenmodes,
    standard_network,
)
from .noise_budget import (
    NoiseSpec,
    budget_report,
    critical_current_sensitivity,
    flux_sensitivity,
)

__version__ = "0.1.0"
