"""bosefold: number-conserving MPS engine for linearly coupled boson chains.

States given as products of delocalized creation modes on the vacuum are
reduced to a local Fock product by a synthesized sequence of phase gates and
two-site rotations, then rebuilt in Schmidt-explicit MPS form by running the
inverse sequence through the tensor engine.  A dense Fock-basis oracle covers
small systems for verification.
"""

from .errors import BasisSizeError, NonHermitianError, NonOrthonormalModesError
from .modes import ModeSet, random_mode_set, site_modes
from .sbdynamics import (
    EigenSystem,
    hermitian_eigendecompose,
    propagate_modes,
    propagator,
    reference_ring_eigensystem,
    ring_hamiltonian,
    validate_hermitian,
)
from .fock import (
    DenseState,
    FockBasis,
    FockHamiltonian,
    apply_mode_polynomial,
    basis_size,
    basis_state,
    build_hamiltonian,
    energy_expectation,
    enumerate_basis,
    evolve,
    single_site_rdm,
)
from .mps import (
    MpsState,
    TwoSiteGate,
    UpdateInfo,
    apply_single_site,
    apply_two_site,
    bond_entropies,
    entropy,
    load_snapshot,
    mps_from_fock,
    overlap,
    phase_gate,
    rotation_blocks,
    rotation_gate,
    save_snapshot,
    schmidt_spectrum,
    to_dense,
    total_occupation,
)
from .folding import (
    GateSequence,
    PhaseGate,
    RotationGate,
    fold,
    gates_from_json,
    gates_to_json,
    unfold_gate_order,
    unfold_to_mps,
)
from .experiments import (
    ExperimentConfig,
    partition_label,
    partitions,
    run_eigenstates,
    run_quench,
    run_roundtrip,
    run_truncated,
)

__version__ = "0.1.0"
