"""Hamiltonians (XXZ chain, hardcore Bose-Hubbard), observables, exact ground states.

The XXZ chain defaults to open boundaries: with gamma = 1 that reproduces the
reference ground energies -6.464102 (L=4) and -9.974309 (L=6) used by the VQE
experiments. The hardcore-boson model is kept entirely in Pauli form through
a + a† = X, -i(a - a†) = Y, n = (I - Z)/2; the affine spectral identity
H_xxz = 2 H_bh + c on fixed-N sectors (with delta = 2 gamma) is exact for
periodic chains, where c = gamma * (L - 4 N). Open chains pick up a
non-constant edge term 2 gamma (n_1 + n_L), so the mapping oracle runs on
periodic chains.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .numkit import StateVector, hermitian_eigen
from .pauli import PauliString, PauliSum, dense_matrix, single_string
from .symmetry import sector_basis_indices

MAX_DENSE_QUBITS = 8


class Boundary(enum.Enum):
    OPEN = "open"
    PERIODIC = "periodic"


def _bonds(num_sites: int, boundary: Boundary) -> list[tuple[int, int]]:
    bonds = [(i, i + 1) for i in range(num_sites - 1)]
    if boundary is Boundary.PERIODIC:
        bonds.append((num_sites - 1, 0))
    return bonds


@dataclass(frozen=True)
class XXZSpec:
    num_sites: int
    gamma: float
    boundary: Boundary = Boundary.OPEN

    def __post_init__(self):
        if self.num_sites < 2:
            raise ValueError("need at least two sites")


@dataclass(frozen=True)
class BoseHubbardSpec:
    num_sites: int
    delta: float
    boundary: Boundary = Boundary.OPEN

    def __post_init__(self):
        if self.num_sites < 2:
            raise ValueError("need at least two sites")


def xxz_hamiltonian(spec: XXZSpec) -> PauliSum:
    """H = sum over bonds of X X + Y Y + gamma Z Z."""
    L = spec.num_sites
    strings = []
    for i, j in _bonds(L, spec.boundary):
        strings.append(single_string(L, {i: "X", j: "X"}))
        strings.append(single_string(L, {i: "Y", j: "Y"}))
        strings.append(single_string(L, {i: "Z", j: "Z"}, spec.gamma))
    return PauliSum(tuple(strings))


def magnetization(num_sites: int) -> PauliSum:
    """Total magnetization M = sum_i Z_i."""
    return PauliSum(tuple(single_string(num_sites, {i: "Z"}) for i in range(num_sites)))


def number_operator(num_sites: int) -> PauliSum:
    """Total particle number N = sum_i (I - Z_i)/2, i.e. (L I - M)/2."""
    strings = [PauliString(num_sites / 2.0, "I" * num_sites)]
    strings += [single_string(num_sites, {i: "Z"}, -0.5) for i in range(num_sites)]
    return PauliSum(tuple(strings))


def bose_hubbard_hamiltonian(spec: BoseHubbardSpec) -> PauliSum:
    """Hardcore H = sum over bonds of (a† a + h.c.) + delta n n, in Pauli form.

    Hopping maps to (X X + Y Y)/2 and n_i n_j expands to
    (I - Z_i - Z_j + Z_i Z_j)/4; like terms are not merged, so the string
    list mirrors the bond sum.
    """
    L = spec.num_sites
    strings = []
    for i, j in _bonds(L, spec.boundary):
        strings.append(single_string(L, {i: "X", j: "X"}, 0.5))
        strings.append(single_string(L, {i: "Y", j: "Y"}, 0.5))
        d4 = spec.delta / 4.0
        strings.append(PauliString(d4, "I" * L))
        strings.append(single_string(L, {i: "Z"}, -d4))
        strings.append(single_string(L, {j: "Z"}, -d4))
        strings.append(single_string(L, {i: "Z", j: "Z"}, d4))
    return PauliSum(tuple(strings))


def mapping_shift(gamma: float, num_sites: int, num_particles: int) -> float:
    """Sector constant c with H_xxz = 2 H_bh(delta = 2 gamma) + c, periodic chains."""
    return gamma * (num_sites - 4 * num_particles)


def exact_ground(
    h: PauliSum, sector: tuple[int, int] | None = None
) -> tuple[float, StateVector]:
    """Lowest eigenpair by dense diagonalization, optionally sector-restricted.

    ``sector`` is (L, N); the returned state is embedded back in the full
    2^L space with zeros outside the sector. Refuses more than
    ``MAX_DENSE_QUBITS`` qubits.
    """
    n = h.num_qubits
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense diagonalization capped at {MAX_DENSE_QUBITS} qubits, got {n}")
    mat = dense_matrix(h)
    if sector is None:
        vals, vecs = hermitian_eigen(mat)
        return float(vals[0]), StateVector(n, vecs[:, 0])
    num_sites, num_particles = sector
    if num_sites != n:
        raise ValueError(f"sector is for {num_sites} sites but operator has {n}")
    idx = sector_basis_indices(num_sites, num_particles)
    vals, vecs = hermitian_eigen(mat[np.ix_(idx, idx)])
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[idx] = vecs[:, 0]
    return float(vals[0]), StateVector(n, amps)


def sector_spectrum(h: PauliSum, num_particles: int) -> np.ndarray:
    """All eigenvalues of the N-sector block, ascending."""
    n = h.num_qubits
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense diagonalization capped at {MAX_DENSE_QUBITS} qubits")
    idx = sector_basis_indices(n, num_particles)
    vals, _ = hermitian_eigen(dense_matrix(h)[np.ix_(idx, idx)])
    return vals
