"""Dense complex linear algebra shared by every other module.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128; the helpers
here add the shape/finiteness checking the rest of the package relies on.
State vectors carry their qubit count and use the little-endian convention:
qubit ``k`` is bit ``k`` of the basis-state index, so ``|1>`` on qubit 0 of a
two-qubit register is index 1.

Everything in this module is a pure function over immutable inputs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


def as_matrix(entries) -> np.ndarray:
    """Coerce to a 2D complex128 array, rejecting NaN/Inf entries."""
    m = np.asarray(entries, dtype=np.complex128)
    if m.ndim != 2:
        raise ValueError(f"expected a 2D matrix, got ndim={m.ndim}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix entries must be finite")
    return m


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product a @ b with an explicit dimension check."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    return a @ b


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``a`` as the high-order (most significant) factor.

    Under the little-endian state convention, an operator acting as ``g`` on
    qubit 1 and ``h`` on qubit 0 is ``kron(g, h)``.
    """
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return as_matrix(a).conj().T


def is_unitary(a: np.ndarray, tol: float = 1e-12) -> bool:
    """True iff ``max|a†a - I| <= tol``. Raises for non-square input."""
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"unitarity is only defined for square matrices, got {a.shape}")
    return bool(np.abs(a.conj().T @ a - np.eye(a.shape[0])).max() <= tol)


def hermitian_eigen(a: np.ndarray, atol: float = 1e-10) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvector ``k`` in column ``k``. Raises if ``a`` deviates from Hermitian
    by more than ``atol`` in max-norm.
    """
    a = as_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got {a.shape}")
    if np.abs(a - a.conj().T).max() > atol:
        raise ValueError("matrix is not Hermitian within tolerance")
    vals, vecs = np.linalg.eigh(a)
    return vals, vecs


@dataclass(frozen=True)
class StateVector:
    """Dense amplitudes of an ``num_qubits``-qubit pure state (little-endian)."""

    num_qubits: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1 or amps.size != 2**self.num_qubits:
            raise ValueError(
                f"need exactly 2^{self.num_qubits} amplitudes, got shape {amps.shape}"
            )
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def basis_state(cls, num_qubits: int, index: int) -> "StateVector":
        """Computational basis state ``|index>``."""
        if not 0 <= index < 2**num_qubits:
            raise ValueError(f"basis index {index} out of range for {num_qubits} qubits")
        amps = np.zeros(2**num_qubits, dtype=np.complex128)
        amps[index] = 1.0
        return cls(num_qubits, amps)

    @classmethod
    def zero_state(cls, num_qubits: int) -> "StateVector":
        return cls.basis_state(num_qubits, 0)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "StateVector":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return StateVector(self.num_qubits, self.amplitudes / n)
