"""symvqc: particle-number-conserving variational quantum circuits.

Builds U(1)-symmetric two-qubit gate modules bottom-up (fusion gate,
charge-conserving core, splitting gate), composes them into brick-wall
ansatz circuits, simulates them on a dense statevector engine, and drives
fidelity-span and XXZ ground-state experiments.
"""

__version__ = "0.1.0"

from .circuit import (
    Circuit,
    Op,
    Slot,
    build_brickwall,
    build_swap_variant_2on4,
    cnot_count,
    initial_sector_state,
)
from .gatelib import GateKind, a_gate, b_gate, decompose, fusion_gate, v_gate
from .models import (
    Boundary,
    BoseHubbardSpec,
    XXZSpec,
    bose_hubbard_hamiltonian,
    exact_ground,
    magnetization,
    number_operator,
    xxz_hamiltonian,
)
from .numkit import StateVector
from .pauli import PauliString, PauliSum
from .simulator import (
    NoiseSpec,
    apply_circuit,
    apply_circuit_noisy,
    expectation,
    fidelity,
    haar_random_sector_state,
    sampled_expectation,
)
from .symmetry import (
    BlockMatrix,
    ChargeBasisMap,
    ChargeLabel,
    FusionRule,
    embed_block_matrix,
    fusion_tensor,
    sector_basis_indices,
    splitting_tensor,
    subspace_dimension,
)
from .varopt import (
    AggregateResult,
    EstimatorSpec,
    Method,
    OptimizerConfig,
    TrialResult,
    VqeTask,
    maximize_fidelity,
    minimize_energy,
    run_trials,
)

__all__ = [name for name in dir() if not name.startswith("_")]
