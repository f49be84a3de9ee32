"""Pauli strings and sums: the Hamiltonian representation used throughout.

A :class:`PauliString` is a real coefficient times a tensor product of
single-qubit Paulis, one letter per qubit (letter ``k`` acts on qubit ``k``).
Sums of strings represent Hermitian observables. Besides dense embedding and
fast statevector application data, this module does exact symbolic algebra
(products, commutators) with the usual phase table, which is what makes the
"commutator is identically zero" checks exact rather than numerical.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

LETTERS = "IXYZ"

# (a, b) -> (phase, c) with sigma_a sigma_b = phase * sigma_c
_PRODUCT: dict[tuple[str, str], tuple[complex, str]] = {
    ("I", "I"): (1, "I"), ("I", "X"): (1, "X"), ("I", "Y"): (1, "Y"), ("I", "Z"): (1, "Z"),
    ("X", "I"): (1, "X"), ("Y", "I"): (1, "Y"), ("Z", "I"): (1, "Z"),
    ("X", "X"): (1, "I"), ("Y", "Y"): (1, "I"), ("Z", "Z"): (1, "I"),
    ("X", "Y"): (1j, "Z"), ("Y", "X"): (-1j, "Z"),
    ("Y", "Z"): (1j, "X"), ("Z", "Y"): (-1j, "X"),
    ("Z", "X"): (1j, "Y"), ("X", "Z"): (-1j, "Y"),
}


@dataclass(frozen=True)
class PauliString:
    coefficient: float
    letters: str

    def __post_init__(self):
        if not np.isfinite(self.coefficient):
            raise ValueError("coefficient must be finite")
        if any(ch not in LETTERS for ch in self.letters):
            raise ValueError(f"bad Pauli letters {self.letters!r}")

    @property
    def num_qubits(self) -> int:
        return len(self.letters)

    def support(self) -> tuple[int, ...]:
        return tuple(q for q, ch in enumerate(self.letters) if ch != "I")


@dataclass(frozen=True)
class PauliSum:
    strings: tuple[PauliString, ...]

    def __post_init__(self):
        if not self.strings:
            raise ValueError("empty Pauli sum; use an explicit identity string instead")
        n = self.strings[0].num_qubits
        if any(s.num_qubits != n for s in self.strings):
            raise ValueError("all strings must share the qubit count")

    @property
    def num_qubits(self) -> int:
        return self.strings[0].num_qubits

    @classmethod
    def from_terms(cls, terms, num_qubits: int | None = None) -> "PauliSum":
        """Build from (coefficient, letters) pairs."""
        strings = tuple(PauliString(float(c), s) for c, s in terms)
        if not strings and num_qubits is not None:
            strings = (PauliString(0.0, "I" * num_qubits),)
        return cls(strings)


def single_string(num_qubits: int, placed: dict[int, str], coefficient: float = 1.0) -> PauliString:
    """String with the given letters at the given qubits, identity elsewhere."""
    letters = ["I"] * num_qubits
    for q, ch in placed.items():
        letters[q] = ch
    return PauliString(coefficient, "".join(letters))


def _string_product(a: str, b: str) -> tuple[complex, str]:
    phase = 1 + 0j
    out = []
    for ca, cb in zip(a, b):
        ph, cc = _PRODUCT[(ca, cb)]
        phase *= ph
        out.append(cc)
    return phase, "".join(out)


def multiply(a: PauliSum, b: PauliSum) -> dict[str, complex]:
    """Symbolic product a*b as a map letters -> complex coefficient."""
    if a.num_qubits != b.num_qubits:
        raise ValueError("qubit count mismatch")
    acc: dict[str, complex] = {}
    for sa in a.strings:
        for sb in b.strings:
            phase, letters = _string_product(sa.letters, sb.letters)
            acc[letters] = acc.get(letters, 0j) + phase * sa.coefficient * sb.coefficient
    return acc


def commutator(a: PauliSum, b: PauliSum) -> dict[str, complex]:
    """Symbolic [a, b]; exact cancellation leaves coefficients at exactly 0.

    Each string pair's forward and reverse products are differenced before
    accumulation, so commuting pairs contribute an exact zero instead of two
    large terms whose rounding depends on summation order.
    """
    if a.num_qubits != b.num_qubits:
        raise ValueError("qubit count mismatch")
    acc: dict[str, complex] = {}
    for sa in a.strings:
        for sb in b.strings:
            fwd_phase, letters = _string_product(sa.letters, sb.letters)
            rev_phase, _ = _string_product(sb.letters, sa.letters)
            diff = (fwd_phase - rev_phase) * sa.coefficient * sb.coefficient
            if diff != 0:
                acc[letters] = acc.get(letters, 0j) + diff
    return {k: v for k, v in acc.items() if v != 0}


def commutes(a: PauliSum, b: PauliSum) -> bool:
    return not commutator(a, b)


def string_action(letters: str) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized action of a Pauli string on amplitudes.

    Returns ``(target_index, factor)`` such that (P psi)[target_index[i]] =
    factor[i] * psi[i] over all little-endian basis indices i.
    """
    n = len(letters)
    dim = 1 << n
    idx = np.arange(dim)
    mask = 0
    factor = np.ones(dim, dtype=np.complex128)
    for q, ch in enumerate(letters):
        if ch == "I":
            continue
        bit = (idx >> q) & 1
        if ch == "X":
            mask |= 1 << q
        elif ch == "Y":
            mask |= 1 << q
            factor = factor * np.where(bit == 1, -1j, 1j)
        else:  # Z
            factor = factor * np.where(bit == 1, -1.0, 1.0)
    return idx ^ mask, factor


def dense_matrix(h: PauliSum) -> np.ndarray:
    """Dense 2^L x 2^L matrix of the sum (column-wise scatter, no kron chain)."""
    dim = 1 << h.num_qubits
    out = np.zeros((dim, dim), dtype=np.complex128)
    cols = np.arange(dim)
    for s in h.strings:
        rows, factor = string_action(s.letters)
        out[rows, cols] += s.coefficient * factor
    return out
