"""Quantum dots coupled to a lossy plasmon mode.

Two cross-validated propagation backends (a density-matrix solver with
collapse channels and a cheap non-Hermitian wave-packet solver), pulsed
absorption spectra, two-dot concurrence dynamics, and a single-excitation
manifold engine for many-dot entanglement runs.
"""

__version__ = "0.1.0"

from .basis import BasisDescriptor, build_basis
from .constants import CODATA, HBAR_EV_FS, PhysicalConstants, convert_cross_section
from .drive import DriveSpec, field_at
from .dynamics import (
    DensityMatrix,
    RecordSpec,
    Trajectory,
    WavePacket,
    detect_steady_state,
    fock_truncation_check,
    lindblad_rhs,
    propagate_lindblad,
    propagate_nonhermitian,
)
from .entanglement import (
    average_bipartite_concurrence,
    concurrence_trajectory,
    manifold_pair_concurrence,
    reduce_to_dots,
    wootters_concurrence,
)
from .errors import (
    InsufficientPropagationError,
    InvalidArgumentError,
    PropagationDiagnosticError,
    SchemaError,
)
from .kernels import backend_name
from .manifold import (
    ManifoldHamiltonian,
    build_manifold_hamiltonian,
    eigen_propagate,
    run_fifty_dot_scenario,
    sample_couplings,
)
from .operators import (
    OperatorMatrix,
    build_collapse_operators,
    build_effective_hamiltonian,
    build_system_hamiltonian,
    dipole_operator,
    dot_lowering,
    hamiltonian_parts,
    plasmon_annihilation,
)
from .parameters import ParameterSet, default_parameters
from .spectra import (
    Spectrum,
    default_omega_grid,
    polarizability,
    run_spectrum_scenario,
    spectrum_pipeline,
)

__all__ = [
    "BasisDescriptor",
    "CODATA",
    "DensityMatrix",
    "DriveSpec",
    "HBAR_EV_FS",
    "InsufficientPropagationError",
    "InvalidArgumentError",
    "ManifoldHamiltonian",
    "OperatorMatrix",
    "ParameterSet",
    "PhysicalConstants",
    "PropagationDiagnosticError",
    "RecordSpec",
    "SchemaError",
    "Spectrum",
    "Trajectory",
    "WavePacket",
    "average_bipartite_concurrence",
    "backend_name",
    "build_basis",
    "build_collapse_operators",
    "build_effective_hamiltonian",
    "build_manifold_hamiltonian",
    "build_system_hamiltonian",
    "concurrence_trajectory",
    "convert_cross_section",
    "default_omega_grid",
    "default_parameters",
    "detect_steady_state",
    "dipole_operator",
    "dot_lowering",
    "eigen_propagate",
    "field_at",
    "fock_truncation_check",
    "hamiltonian_parts",
    "lindblad_rhs",
    "manifold_pair_concurrence",
    "plasmon_annihilation",
    "polarizability",
    "propagate_lindblad",
    "propagate_nonhermitian",
    "reduce_to_dots",
    "run_fifty_dot_scenario",
    "run_spectrum_scenario",
    "sample_couplings",
    "spectrum_pipeline",
    "wootters_concurrence",
]
