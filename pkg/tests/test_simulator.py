import numpy as np
import pytest

from symvqc.circuit import Circuit, Op, Slot, build_brickwall, initial_sector_state
from symvqc.gatelib import GateKind
from symvqc.models import number_operator, xxz_hamiltonian, XXZSpec
from symvqc.numkit import StateVector
from symvqc.pauli import PauliString, PauliSum, dense_matrix, single_string
from symvqc.simulator import (
    NoiseSpec,
    apply_circuit,
    apply_circuit_matrix,
    apply_circuit_noisy,
    expectation,
    fidelity,
    group_by_measurement_basis,
    haar_random_sector_state,
    sampled_expectation,
    sampling_stderr,
)
from symvqc.symmetry import sector_basis_indices


def random_state(num_qubits, seed):
    rng = np.random.default_rng(seed)
    z = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    return StateVector(num_qubits, z / np.linalg.norm(z))


class TestApplyCircuit:
    def test_empty_circuit(self):
        psi = random_state(3, 0)
        out = apply_circuit(Circuit(3, (), 0), [], psi)
        assert np.array_equal(out.amplitudes, psi.amplitudes)

    def test_x_on_qubit_zero(self):
        c = Circuit(2, (Op(GateKind.X, (0,)),), 0)
        out = apply_circuit(c, [], StateVector.zero_state(2))
        assert out.amplitudes[1] == 1.0

    def test_cnot_orientation(self):
        # control = first listed qubit; here control is qubit 0 (the LSB)
        c = Circuit(2, (Op(GateKind.CNOT, (0, 1)),), 0)
        for src, dst in ((0, 0), (1, 3), (2, 2), (3, 1)):
            out = apply_circuit(c, [], StateVector.basis_state(2, src))
            assert out.amplitudes[dst] == 1.0

    def test_binding_length_checked(self):
        c = build_brickwall(4, 2)
        with pytest.raises(ValueError):
            apply_circuit(c, np.zeros(3), StateVector.zero_state(4))

    def test_state_size_checked(self):
        c = build_brickwall(4, 2)
        with pytest.raises(ValueError):
            apply_circuit(c, np.zeros(10), StateVector.zero_state(3))

    def test_norm_preserved(self):
        c = build_brickwall(4, 2, GateKind.B_GATE)
        psi = apply_circuit(c, np.linspace(-1, 1, 10), StateVector.zero_state(4))
        assert abs(psi.norm() - 1.0) < 1e-10

    @pytest.mark.parametrize("L,N,gate", [(2, 1, GateKind.A_GATE), (3, 1, GateKind.B_GATE), (4, 2, GateKind.A_GATE)])
    def test_against_dense_oracle(self, L, N, gate):
        c = build_brickwall(L, N, gate)
        rng = np.random.default_rng(L + N)
        for _ in range(20):
            binding = rng.uniform(-np.pi, np.pi, c.num_free_parameters)
            psi = random_state(L, rng.integers(1 << 30))
            fast = apply_circuit(c, binding, psi).amplitudes
            slow = apply_circuit_matrix(c, binding) @ psi.amplitudes
            assert np.abs(fast - slow).max() < 1e-10

    def test_oracle_covers_every_gate_kind(self):
        ops = (
            Op(GateKind.X, (2,)),
            Op(GateKind.RX, (0,), (Slot(0),)),
            Op(GateKind.RY, (1,), (0.3,)),
            Op(GateKind.RZ, (2,), (Slot(1),)),
            Op(GateKind.PHASE, (0,), (-0.7,)),
            Op(GateKind.CNOT, (2, 0)),
            Op(GateKind.SWAP, (1, 2)),
            Op(GateKind.CONTROLLED_V, (0, 2), (Slot(2), 0.1)),
            Op(GateKind.A_GATE, (1, 0), (0.4, Slot(3))),
            Op(GateKind.B_GATE, (2, 1), (Slot(4), 1.2)),
        )
        c = Circuit(3, ops, 5)
        rng = np.random.default_rng(9)
        binding = rng.uniform(-np.pi, np.pi, 5)
        psi = random_state(3, 10)
        fast = apply_circuit(c, binding, psi).amplitudes
        slow = apply_circuit_matrix(c, binding) @ psi.amplitudes
        assert np.abs(fast - slow).max() < 1e-10

    def test_charge_conservation_end_to_end(self):
        nop = number_operator(4)
        c = build_brickwall(4, 2, GateKind.B_GATE)
        binding = np.random.default_rng(11).uniform(-np.pi, np.pi, 10)
        before = initial_sector_state(4, 2, [0, 1])
        after = apply_circuit(c, binding, StateVector.zero_state(4))
        assert abs(expectation(nop, after) - expectation(nop, before)) < 1e-10


class TestExpectation:
    def test_zz_on_vacuum(self):
        h = PauliSum((PauliString(1.0, "ZZ"),))
        assert expectation(h, StateVector.zero_state(2)) == 1.0

    def test_identity_norm(self):
        h = PauliSum((PauliString(1.0, "III"),))
        assert abs(expectation(h, random_state(3, 1)) - 1.0) < 1e-12

    def test_xxz_ground_energy(self):
        from symvqc.models import exact_ground

        h = xxz_hamiltonian(XXZSpec(4, 1.0))
        energy, state = exact_ground(h)
        assert abs(expectation(h, state) - (-6.4641)) < 1e-3

    def test_matches_dense_contraction(self):
        h = xxz_hamiltonian(XXZSpec(4, 0.7))
        mat = dense_matrix(h)
        for seed in range(5):
            psi = random_state(4, seed)
            dense = np.vdot(psi.amplitudes, mat @ psi.amplitudes).real
            assert abs(expectation(h, psi) - dense) < 1e-10

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            expectation(PauliSum((PauliString(1.0, "Z"),)), StateVector.zero_state(2))


class TestGrouping:
    def test_xxz_needs_three_bases(self):
        groups = group_by_measurement_basis(xxz_hamiltonian(XXZSpec(4, 1.0)))
        assert len(groups) == 3
        bases = {basis for basis, _ in groups}
        assert bases == {"XXXX", "YYYY", "ZZZZ"}

    def test_disjoint_support_shares_group(self):
        h = PauliSum((single_string(2, {0: "X"}), single_string(2, {1: "Z"})))
        groups = group_by_measurement_basis(h)
        assert len(groups) == 1
        assert groups[0][0] == "XZ"


class TestSampledExpectation:
    def test_diagonal_on_basis_state_is_exact(self):
        h = PauliSum((PauliString(2.5, "ZZ"), PauliString(-1.0, "IZ")))
        psi = StateVector.basis_state(2, 0b01)
        # <01| 2.5 Z0Z1 - Z1 |01> = 2.5*(-1) - 1 = -3.5, zero variance
        for shots in (1, 7, 100):
            assert sampled_expectation(h, psi, shots, seed=3) == -3.5

    def test_seed_reproducibility(self):
        h = xxz_hamiltonian(XXZSpec(4, 1.0))
        psi = haar_random_sector_state(4, 2, seed=4)
        a = sampled_expectation(h, psi, 512, seed=42)
        b = sampled_expectation(h, psi, 512, seed=42)
        c = sampled_expectation(h, psi, 512, seed=43)
        assert a == b
        assert a != c

    def test_unbiased_and_stderr_prediction(self):
        h = xxz_hamiltonian(XXZSpec(4, 1.0))
        psi = haar_random_sector_state(4, 2, seed=5)
        exact = expectation(h, psi)
        predicted = sampling_stderr(h, psi, 1024)
        estimates = np.array(
            [sampled_expectation(h, psi, 1024, seed=s) for s in range(60)]
        )
        assert abs(estimates.mean() - exact) < 4 * predicted / np.sqrt(60)
        assert abs(estimates.std(ddof=1) / predicted - 1.0) < 0.35

    def test_readout_noise_shifts_z(self):
        h = PauliSum((PauliString(1.0, "Z"),))
        psi = StateVector.zero_state(1)
        # each flip with p=0.25: E[Z] = 1 - 2p = 0.5
        estimates = [
            sampled_expectation(h, psi, 2048, seed=s, readout_flip_p=0.25)
            for s in range(20)
        ]
        assert abs(np.mean(estimates) - 0.5) < 0.05

    def test_shots_validated(self):
        h = PauliSum((PauliString(1.0, "Z"),))
        with pytest.raises(ValueError):
            sampled_expectation(h, StateVector.zero_state(1), 0, seed=0)


class TestHaarSectorStates:
    def test_support(self):
        psi = haar_random_sector_state(4, 2, seed=0)
        outside = np.ones(16, dtype=bool)
        outside[sector_basis_indices(4, 2)] = False
        assert np.abs(psi.amplitudes[outside]).max() == 0.0
        assert abs(psi.norm() - 1.0) < 1e-12

    def test_trivial_sector_deterministic(self):
        for L in (1, 3, 5):
            psi = haar_random_sector_state(L, 0, seed=123)
            assert psi.amplitudes[0] == 1.0

    def test_seeded_determinism(self):
        a = haar_random_sector_state(4, 2, seed=7)
        b = haar_random_sector_state(4, 2, seed=7)
        assert np.array_equal(a.amplitudes, b.amplitudes)

    def test_mean_overlap_matches_haar(self):
        # E |<phi|phi'>|^2 = 1/d for independent Haar pairs; d = 6 here.
        # std of the 1000-pair mean is ~0.0045, so 3 sigma ~ 0.0134
        overlaps = [
            fidelity(
                haar_random_sector_state(4, 2, seed=(17, k, 0)),
                haar_random_sector_state(4, 2, seed=(17, k, 1)),
            )
            for k in range(1000)
        ]
        assert abs(np.mean(overlaps) - 1.0 / 6.0) < 0.0134


class TestFidelity:
    def test_self_fidelity(self):
        psi = random_state(3, 2)
        assert abs(fidelity(psi, psi) - 1.0) < 1e-12

    def test_orthogonal(self):
        assert fidelity(StateVector.basis_state(2, 1), StateVector.basis_state(2, 2)) == 0.0

    def test_global_phase_invariance(self):
        psi = random_state(2, 3)
        rotated = StateVector(2, np.exp(0.7j) * psi.amplitudes)
        assert abs(fidelity(psi, rotated) - 1.0) < 1e-12

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            fidelity(StateVector.zero_state(1), StateVector.zero_state(2))


class TestNoise:
    def test_zero_noise_identical(self):
        c = build_brickwall(4, 2)
        binding = np.random.default_rng(6).uniform(-np.pi, np.pi, 10)
        clean = apply_circuit(c, binding, StateVector.zero_state(4))
        noisy = apply_circuit_noisy(
            c, binding, StateVector.zero_state(4), NoiseSpec(0, 0, 0), seed=1
        )
        assert np.array_equal(clean.amplitudes, noisy.amplitudes)

    def test_norm_preserved(self):
        c = build_brickwall(4, 2, GateKind.B_GATE)
        binding = np.random.default_rng(7).uniform(-np.pi, np.pi, 10)
        for seed in range(10):
            psi = apply_circuit_noisy(
                c, binding, StateVector.zero_state(4), NoiseSpec(0.5, 0.5, 0), seed=seed
            )
            assert abs(psi.norm() - 1.0) < 1e-10

    def test_full_depolarization_of_cnot_pair(self):
        # p2 = 1: channel sends rho to I/4, so <Z0> averages to 0
        c = Circuit(2, (Op(GateKind.CNOT, (0, 1)),), 0)
        z0 = PauliSum((single_string(2, {0: "Z"}),))
        psi0 = StateVector.zero_state(2)
        noise = NoiseSpec(p1=0.0, p2=1.0)
        values = [
            expectation(z0, apply_circuit_noisy(c, [], psi0, noise, seed=s))
            for s in range(10_000)
        ]
        assert abs(np.mean(values)) < 0.04  # 4 sigma at 1/sqrt(10000)

    def test_partial_depolarization_matches_density_matrix(self):
        # exact channel: rho -> (1-p) rho + p I/4 per noisy gate on |00>
        p = 0.6
        c = Circuit(2, (Op(GateKind.CNOT, (0, 1)),), 0)
        z0 = PauliSum((single_string(2, {0: "Z"}),))
        psi0 = StateVector.zero_state(2)
        values = [
            expectation(z0, apply_circuit_noisy(c, [], psi0, NoiseSpec(0, p, 0), seed=s))
            for s in range(20_000)
        ]
        assert abs(np.mean(values) - (1.0 - p)) < 0.03

    def test_single_qubit_noise_channel(self):
        # X gate then depolarization with p1: <Z> = -(1 - p1)
        p = 0.3
        c = Circuit(1, (Op(GateKind.X, (0,)),), 0)
        z = PauliSum((PauliString(1.0, "Z"),))
        values = [
            expectation(z, apply_circuit_noisy(c, [], StateVector.zero_state(1), NoiseSpec(p, 0, 0), seed=s))
            for s in range(20_000)
        ]
        assert abs(np.mean(values) + (1.0 - p)) < 0.03

    def test_probability_validation(self):
        with pytest.raises(ValueError):
            NoiseSpec(p1=1.5)
