import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symvqc.gatelib import a_gate, b_gate, fusion_gate, rz_matrix
from symvqc.numkit import (
    StateVector,
    as_matrix,
    dagger,
    hermitian_eigen,
    is_unitary,
    kron,
    matmul,
)

I2 = np.eye(2)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.diag([1.0, -1.0]).astype(complex)


def random_complex(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


class TestMatmul:
    def test_identity(self):
        assert np.array_equal(matmul(I2, X), X)

    def test_involution(self):
        assert np.array_equal(matmul(X, X), I2)

    def test_fusion_gate_involution(self):
        f = fusion_gate()
        assert np.abs(matmul(f, f) - np.eye(4)).max() == 0.0

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            matmul(np.eye(2), np.eye(3))

    def test_associative_on_random_triples(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            a, b, c = (random_complex(rng, (3, 3)) for _ in range(3))
            assert np.abs(matmul(matmul(a, b), c) - matmul(a, matmul(b, c))).max() < 1e-10


class TestKron:
    def test_identities(self):
        assert np.array_equal(kron(I2, I2), np.eye(4))

    def test_phase_times_identity(self):
        phi = 0.37
        d = np.diag([1.0, np.exp(1j * phi)])
        expected = np.diag([1.0, 1.0, np.exp(1j * phi), np.exp(1j * phi)])
        assert np.abs(kron(d, I2) - expected).max() == 0.0

    def test_projector_block_embedding(self):
        # |1><1| (x) X expanded by hand: X sits in the lower-right 2x2 block
        proj = np.array([[0, 0], [0, 1]], dtype=complex)
        expected = np.zeros((4, 4), dtype=complex)
        expected[2:, 2:] = X
        assert np.array_equal(kron(proj, X), expected)

    def test_mixed_product(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            a, b, c, d = (random_complex(rng, (2, 2)) for _ in range(4))
            lhs = matmul(kron(a, b), kron(c, d))
            rhs = kron(matmul(a, c), matmul(b, d))
            assert np.abs(lhs - rhs).max() < 1e-10


class TestDagger:
    def test_identity(self):
        assert np.array_equal(dagger(I2), I2)

    def test_rz_phase_conjugation(self):
        assert np.abs(dagger(rz_matrix(0.9)) - rz_matrix(-0.9)).max() < 1e-15

    def test_a_gate_unitarity_via_dagger(self):
        g = a_gate(0.7, 1.3)
        assert np.abs(matmul(dagger(g), g) - np.eye(4)).max() < 1e-14


class TestIsUnitary:
    def test_pauli_x(self):
        assert is_unitary(X, 1e-12)

    def test_non_unitary_diag(self):
        assert not is_unitary(np.diag([1.0, 2.0]), 1e-12)

    def test_b_gate(self):
        assert is_unitary(b_gate(0.7, 1.3), 1e-12)

    def test_non_square_raises(self):
        with pytest.raises(ValueError):
            is_unitary(np.ones((2, 3)), 1e-12)


class TestHermitianEigen:
    def test_pauli_z(self):
        vals, _ = hermitian_eigen(Z)
        assert np.allclose(vals, [-1.0, 1.0])

    def test_pauli_x(self):
        vals, _ = hermitian_eigen(X)
        assert np.allclose(vals, [-1.0, 1.0])

    def test_xxz_reference_energy(self):
        # dense 4-site XXZ (gamma=1, open) built here by explicit kron chain
        def embed(op, q, L):
            out = np.array([[1.0 + 0j]])
            for k in range(L - 1, -1, -1):
                out = np.kron(out, op if k == q else I2)
            return out

        Y = np.array([[0, -1j], [1j, 0]])
        h = np.zeros((16, 16), dtype=complex)
        for i in range(3):
            for p in (X, Y, Z):
                h += embed(p, i, 4) @ embed(p, i + 1, 4)
        vals, _ = hermitian_eigen(h)
        assert abs(vals[0] - (-6.4641)) < 1e-3

    def test_reconstruction(self):
        rng = np.random.default_rng(3)
        m = random_complex(rng, (6, 6))
        h = m + m.conj().T
        vals, vecs = hermitian_eigen(h)
        assert np.abs(vecs @ np.diag(vals) @ vecs.conj().T - h).max() < 1e-8
        assert np.all(np.diff(vals) >= -1e-12)

    def test_eigenpairs_satisfy_equation(self):
        rng = np.random.default_rng(4)
        m = random_complex(rng, (5, 5))
        h = m + m.conj().T
        vals, vecs = hermitian_eigen(h)
        for k in range(5):
            assert np.abs(h @ vecs[:, k] - vals[k] * vecs[:, k]).max() < 1e-8

    def test_non_hermitian_raises(self):
        with pytest.raises(ValueError):
            hermitian_eigen(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestAsMatrix:
    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            as_matrix(np.array([[np.nan, 0.0], [0.0, 1.0]]))

    def test_rejects_non_2d(self):
        with pytest.raises(ValueError):
            as_matrix(np.zeros(4))


class TestStateVector:
    def test_length_check(self):
        with pytest.raises(ValueError):
            StateVector(2, np.zeros(3, dtype=complex))

    def test_basis_state(self):
        psi = StateVector.basis_state(3, 5)
        assert psi.amplitudes[5] == 1.0
        assert psi.norm() == 1.0

    def test_normalized(self):
        psi = StateVector(1, np.array([3.0, 4.0j]))
        assert abs(psi.normalized().norm() - 1.0) < 1e-12

    @given(st.integers(0, 15), st.integers(0, 15))
    @settings(max_examples=30, deadline=None)
    def test_basis_states_orthonormal(self, i, j):
        a = StateVector.basis_state(4, i)
        b = StateVector.basis_state(4, j)
        overlap = np.vdot(a.amplitudes, b.amplitudes)
        assert overlap == (1.0 if i == j else 0.0)
