"""Entanglement dynamics of two two-level atoms coupled to two degenerate
traveling-wave modes, parameterized by the interatomic separation phase."""

__version__ = "0.1.0"

from .errors import (
    BadFactor,
    ConfigError,
    DimensionMismatch,
    ExceedsTruncation,
    InsufficientHorizon,
    NoSwitch,
    NotAState,
    NotHermitian,
    OutOfValidity,
    TruncationTooLarge,
    TruncationTooSmall,
    TwoModeError,
)
from .hilbert import (
    CompositeSpace,
    DensityMatrix,
    HermitianOperator,
    StateVector,
    hermitian_eigen,
    kron,
    mkron,
    partial_trace,
    partial_transpose,
    trace_norm_hermitian,
    unitary_from_hamiltonian,
)
from .fields import (
    AtomicState,
    assemble_initial,
    atomic_state,
    coherent_state,
    eta_state,
    fock_state,
    mode_space,
    rho_nm_state,
    squeezed_vacuum,
    thermal_state,
    two_mode_space,
    two_mode_squeezed,
)
from .model import (
    ModelParams,
    beam_splitter_unitary,
    build_djc_hamiltonian,
    build_hamiltonian,
    build_tc_hamiltonian,
    excitation_number,
    full_space,
    map_ac_to_djc,
    map_sc_to_tc,
    tc_space,
)
from .evolve import (
    Propagator,
    SINGLE_EXCITATION_BASIS,
    atomic_reduced,
    djc_propagator_blocks,
    evolve,
    rabi_frequencies,
    resolvent_propagator,
    tc_propagator_blocks,
)
from .measures import (
    EntanglementSample,
    concurrence,
    concurrence_bell00,
    concurrence_eg00,
    concurrence_gg10,
    eg00_death_times,
    entanglement_of_formation,
    negativity,
    negativity_lowsqueeze_approx,
)
from .classify import DynamicsVerdict, ScanResult, classify, scan_critical
from .scenarios import (
    FieldSpec,
    Scenario,
    build_engine,
    parse_config,
    run_phi_sweep,
    run_scenario,
)
from .tableone import TableOneParams, TableOneReport, table_one_report
from .audit import run_transcription_audit
