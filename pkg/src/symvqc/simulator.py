"""Dense statevector engine: gate application, expectations, sampling, noise.

Gate application uses the little-endian state layout and the gate matrix
convention of :mod:`symvqc.gatelib` (first listed target qubit = most
significant local bit). All stochastic operations take explicit seeds and use
numpy's PCG64 generator, so results are bit-reproducible across runs and
platforms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Op, check_binding
from .gatelib import QUBIT_ARITY, GateKind, gate_matrix
from .numkit import StateVector
from .pauli import PauliString, PauliSum, string_action
from .symmetry import sector_basis_indices

# re-exported: PauliString / PauliSum are part of this module's surface
__all__ = [
    "PauliString",
    "PauliSum",
    "NoiseSpec",
    "apply_circuit",
    "apply_circuit_matrix",
    "apply_circuit_noisy",
    "expectation",
    "sampled_expectation",
    "sampling_stderr",
    "group_by_measurement_basis",
    "haar_random_sector_state",
    "fidelity",
]


def _apply_matrix(amps: np.ndarray, gate: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Apply a 2x2 or 4x4 gate to the listed qubits of a 2^n amplitude array."""
    arr = amps.reshape([2] * n)
    # axis for qubit q is n-1-q (qubit 0 is the least significant bit)
    axes = tuple(n - 1 - q for q in qubits)
    k = len(qubits)
    arr = np.moveaxis(arr, axes, range(k))
    shape = arr.shape
    arr = (gate @ arr.reshape(2**k, -1)).reshape(shape)
    return np.moveaxis(arr, range(k), axes).reshape(-1)


def _resolved_ops(circuit: Circuit, binding: np.ndarray) -> list[tuple[np.ndarray, tuple[int, ...]]]:
    out = []
    for op in circuit.ops:
        params = circuit.bound_params(op, binding)
        out.append((gate_matrix(op.kind, params), op.qubits))
    return out


def apply_circuit(circuit: Circuit, binding, state: StateVector) -> StateVector:
    """Run the circuit on ``state`` with the given parameter binding."""
    binding = check_binding(circuit, binding)
    if state.num_qubits != circuit.num_qubits:
        raise ValueError(
            f"state has {state.num_qubits} qubits, circuit has {circuit.num_qubits}"
        )
    amps = state.amplitudes
    for gate, qubits in _resolved_ops(circuit, binding):
        amps = _apply_matrix(amps, gate, qubits, circuit.num_qubits)
    return StateVector(circuit.num_qubits, amps)


def apply_circuit_matrix(circuit: Circuit, binding) -> np.ndarray:
    """Full 2^L x 2^L circuit unitary, built by explicit index embedding.

    Deliberately independent of :func:`apply_circuit`'s axis gymnastics so the
    two can cross-check each other; O(4^L), intended for small L.
    """
    binding = check_binding(circuit, binding)
    n = circuit.num_qubits
    dim = 1 << n
    total = np.eye(dim, dtype=np.complex128)
    for gate, qubits in _resolved_ops(circuit, binding):
        u = np.zeros((dim, dim), dtype=np.complex128)
        k = len(qubits)
        clear = ~sum(1 << q for q in qubits)
        for col in range(dim):
            # local index: first listed qubit is the high bit
            loc_in = 0
            for q in qubits:
                loc_in = (loc_in << 1) | ((col >> q) & 1)
            base = col & clear
            for loc_out in range(2**k):
                row = base
                bits = loc_out
                for q in reversed(qubits):
                    row |= (bits & 1) << q
                    bits >>= 1
                u[row, col] += gate[loc_out, loc_in]
        total = u @ total
    return total


def expectation(h: PauliSum, psi: StateVector) -> float:
    """Exact <psi|H|psi> by applying each string; never builds the dense matrix."""
    if h.num_qubits != psi.num_qubits:
        raise ValueError(f"operator on {h.num_qubits} qubits, state on {psi.num_qubits}")
    amps = psi.amplitudes
    value = 0j
    for s in h.strings:
        target, factor = string_action(s.letters)
        applied = np.empty_like(amps)
        applied[target] = factor * amps
        value += s.coefficient * np.vdot(amps, applied)
    if abs(value.imag) > 1e-10:
        raise ValueError(f"imaginary residue {value.imag:.3e}; operator not Hermitian?")
    return float(value.real)


# --- shot sampling ----------------------------------------------------------

_H = np.array([[1, 1], [1, -1]], dtype=np.complex128) / np.sqrt(2)
_SDG = np.array([[1, 0], [0, -1j]], dtype=np.complex128)


def group_by_measurement_basis(h: PauliSum) -> list[tuple[str, list[PauliString]]]:
    """Greedy qubit-wise grouping into shared measurement bases.

    Returns (basis, strings) pairs where basis letter ``Z`` also covers
    identity positions. Purely-identity strings come back in a group with an
    all-Z basis; their estimate is exact regardless of shots.
    """
    groups: list[tuple[dict[int, str], list[PauliString]]] = []
    for s in h.strings:
        placed = False
        for pinned, members in groups:
            if all(pinned.get(q, ch) == ch for q, ch in enumerate(s.letters) if ch != "I"):
                pinned.update({q: ch for q, ch in enumerate(s.letters) if ch != "I"})
                members.append(s)
                placed = True
                break
        if not placed:
            groups.append(({q: ch for q, ch in enumerate(s.letters) if ch != "I"}, [s]))
    n = h.num_qubits
    return [
        ("".join(pinned.get(q, "Z") for q in range(n)), members)
        for pinned, members in groups
    ]


def _rotated_probabilities(psi: StateVector, basis: str) -> np.ndarray:
    amps = psi.amplitudes
    for q, ch in enumerate(basis):
        if ch == "X":
            amps = _apply_matrix(amps, _H, (q,), psi.num_qubits)
        elif ch == "Y":
            amps = _apply_matrix(amps, _H @ _SDG, (q,), psi.num_qubits)
    probs = np.abs(amps) ** 2
    return probs / probs.sum()


def _eigenvalue_table(letters: str) -> np.ndarray:
    """(-1)^popcount(outcome & support) for every outcome, as a float table."""
    n = len(letters)
    idx = np.arange(1 << n)
    signs = np.ones(1 << n)
    for q, ch in enumerate(letters):
        if ch != "I":
            signs = signs * np.where((idx >> q) & 1 == 1, -1.0, 1.0)
    return signs


def sampled_expectation(
    h: PauliSum,
    psi: StateVector,
    shots: int,
    seed,
    readout_flip_p: float = 0.0,
) -> float:
    """Shot-based estimate of <psi|H|psi>.

    Strings sharing a qubit-wise measurement basis share one batch of
    ``shots`` samples; each sampled bit is flipped with probability
    ``readout_flip_p`` before eigenvalues are read off. Deterministic for a
    fixed seed.
    """
    if h.num_qubits != psi.num_qubits:
        raise ValueError("operator/state size mismatch")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    rng = np.random.default_rng(seed)
    n = psi.num_qubits
    total = 0.0
    for basis, members in group_by_measurement_basis(h):
        identity_part = sum(m.coefficient for m in members if not m.support())
        sampled = [m for m in members if m.support()]
        total += identity_part
        if not sampled:
            continue
        probs = _rotated_probabilities(psi, basis)
        outcomes = rng.choice(probs.size, size=shots, p=probs)
        if readout_flip_p > 0.0:
            flips = (rng.random((shots, n)) < readout_flip_p).astype(np.int64)
            masks = (flips << np.arange(n)).sum(axis=1)
            outcomes = outcomes ^ masks
        for m in sampled:
            eig = _eigenvalue_table(m.letters)
            total += m.coefficient * eig[outcomes].mean()
    return float(total)


def sampling_stderr(h: PauliSum, psi: StateVector, shots: int) -> float:
    """Predicted shot-noise standard error of :func:`sampled_expectation`.

    Exact per-group variance of the grouped diagonal observable, groups
    independent; no readout noise.
    """
    var = 0.0
    for basis, members in group_by_measurement_basis(h):
        sampled = [m for m in members if m.support()]
        if not sampled:
            continue
        probs = _rotated_probabilities(psi, basis)
        f = np.zeros(probs.size)
        for m in sampled:
            f += m.coefficient * _eigenvalue_table(m.letters)
        mean = float(probs @ f)
        var += float(probs @ f**2) - mean**2
    return float(np.sqrt(var / shots))


# --- random states and fidelity ---------------------------------------------


def haar_random_sector_state(num_sites: int, num_particles: int, seed) -> StateVector:
    """Haar-random state inside the N-particle sector.

    I.i.d. complex Gaussian amplitudes on the sector indices, normalized; the
    global phase is then fixed so the first sector amplitude is real and
    non-negative (Haar is phase invariant, and this makes the one-dimensional
    sectors deterministic).
    """
    rng = np.random.default_rng(seed)
    idx = sector_basis_indices(num_sites, num_particles)
    z = rng.normal(size=idx.size) + 1j * rng.normal(size=idx.size)
    z /= np.linalg.norm(z)
    phase = z[0] / abs(z[0]) if abs(z[0]) > 0 else 1.0
    z = z / phase
    amps = np.zeros(1 << num_sites, dtype=np.complex128)
    amps[idx] = z
    return StateVector(num_sites, amps)


def fidelity(phi: StateVector, psi: StateVector) -> float:
    """|<phi|psi>|^2; invariant under global phases of either argument."""
    if phi.num_qubits != psi.num_qubits:
        raise ValueError("state size mismatch")
    return float(abs(np.vdot(phi.amplitudes, psi.amplitudes)) ** 2)


# --- stochastic Pauli noise --------------------------------------------------

_PAULI_1Q = (
    np.eye(2, dtype=np.complex128),
    np.array([[0, 1], [1, 0]], dtype=np.complex128),
    np.array([[0, -1j], [1j, 0]]),
    np.array([[1, 0], [0, -1]], dtype=np.complex128),
)


@dataclass(frozen=True)
class NoiseSpec:
    """Depolarizing trajectory noise: per-gate error probabilities.

    With probability ``p1`` (``p2``) after each single- (two-) qubit gate, a
    Pauli drawn uniformly from all 4^k k-qubit Paulis (identity included) is
    inserted, which unravels the channel rho -> (1-p) rho + p I/2^k; at p = 1
    the touched qubits are completely depolarized. ``p_ro`` flips each
    measured bit independently during sampling.
    """

    p1: float = 0.0
    p2: float = 0.0
    p_ro: float = 0.0

    def __post_init__(self):
        for name in ("p1", "p2", "p_ro"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")

    def is_noiseless(self) -> bool:
        return self.p1 == 0.0 and self.p2 == 0.0 and self.p_ro == 0.0


def apply_circuit_noisy(
    circuit: Circuit,
    binding,
    state: StateVector,
    noise: NoiseSpec,
    seed,
) -> StateVector:
    """One stochastic Pauli trajectory of the noisy circuit.

    Trajectories stay normalized (Pauli insertions are unitary); averaging
    observables over seeds approximates the depolarizing channel.
    """
    binding = check_binding(circuit, binding)
    if state.num_qubits != circuit.num_qubits:
        raise ValueError("state/circuit size mismatch")
    rng = np.random.default_rng(seed)
    n = circuit.num_qubits
    amps = state.amplitudes
    for op, (gate, qubits) in zip(circuit.ops, _resolved_ops(circuit, binding)):
        amps = _apply_matrix(amps, gate, qubits, n)
        p = noise.p1 if QUBIT_ARITY[op.kind] == 1 else noise.p2
        if p > 0.0 and rng.random() < p:
            for q in qubits:
                pauli = _PAULI_1Q[rng.integers(4)]
                amps = _apply_matrix(amps, pauli, (q,), n)
    return StateVector(n, amps)
