"""Charge bookkeeping: fusion rules, fusion/splitting tensors, block matrices.

Two abelian fusion rules are supported on a pair of two-level sites: plain
particle-number addition (U(1)) and addition mod 2 (Z2, i.e. number parity).
A :class:`ChargeBasisMap` records the bijection between the two-qubit product
basis and the coupled (charge, degeneracy) basis; the coupled basis is always
ordered charge-major, degeneracy-minor.

Product-basis bitstrings here are written site-first: ``"01"`` means site 1
(circuit top wire, qubit 0) empty and site 2 (qubit 1) occupied.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import comb

import numpy as np

from .numkit import as_matrix


class FusionRule(enum.Enum):
    U1_ADDITION = "u1"
    Z2_MOD2 = "z2"

    def fuse(self, n1: int, n2: int) -> int:
        if self is FusionRule.U1_ADDITION:
            return n1 + n2
        return (n1 + n2) % 2


@dataclass(frozen=True, order=True)
class ChargeLabel:
    """A coupled-basis label ``|charge, degeneracy_index>``; indices start at 1."""

    charge: int
    degeneracy_index: int

    def __post_init__(self):
        if self.charge < 0:
            raise ValueError("charge must be non-negative")
        if self.degeneracy_index < 1:
            raise ValueError("degeneracy index starts at 1")


# Degeneracy assignment for the Z2 parity map. The single-CNOT fusion gate
# realizes |01> -> |1,2>, |10> -> |1,1> (not the other way around), and the
# gate matrices downstream depend on that choice.
_Z2_PAIRS = (
    ("00", ChargeLabel(0, 1)),
    ("01", ChargeLabel(1, 2)),
    ("10", ChargeLabel(1, 1)),
    ("11", ChargeLabel(0, 2)),
)

_U1_PAIRS = (
    ("00", ChargeLabel(0, 1)),
    ("01", ChargeLabel(1, 1)),
    ("10", ChargeLabel(1, 2)),
    ("11", ChargeLabel(2, 1)),
)


@dataclass(frozen=True)
class ChargeBasisMap:
    """Bijection between two-qubit product states and coupled charge labels."""

    fusion_rule: FusionRule
    pairs: tuple[tuple[str, ChargeLabel], ...]

    def __post_init__(self):
        bitstrings = [b for b, _ in self.pairs]
        labels = [lab for _, lab in self.pairs]
        if sorted(bitstrings) != ["00", "01", "10", "11"]:
            raise ValueError("map must cover every two-qubit product state exactly once")
        if len(set(labels)) != 4:
            raise ValueError("map must be one-to-one")
        for bits, lab in self.pairs:
            expect = self.fusion_rule.fuse(int(bits[0]), int(bits[1]))
            if lab.charge != expect:
                raise ValueError(f"label {lab} inconsistent with fusion of |{bits}>")

    def coupled_basis(self) -> tuple[ChargeLabel, ...]:
        """Coupled-basis labels in charge-major, degeneracy-minor order."""
        return tuple(sorted(lab for _, lab in self.pairs))

    def charges(self) -> tuple[int, ...]:
        return tuple(sorted({lab.charge for _, lab in self.pairs}))

    def degeneracy(self, charge: int) -> int:
        return sum(1 for _, lab in self.pairs if lab.charge == charge)

    def coupled_index(self, label: ChargeLabel) -> int:
        return self.coupled_basis().index(label)

    def label_of(self, bits: str) -> ChargeLabel:
        for b, lab in self.pairs:
            if b == bits:
                return lab
        raise KeyError(bits)


def two_qubit_basis_map(rule: FusionRule) -> ChargeBasisMap:
    """The product <-> symmetry basis correspondence for a pair of qubits."""
    if rule is FusionRule.U1_ADDITION:
        return ChargeBasisMap(rule, _U1_PAIRS)
    if rule is FusionRule.Z2_MOD2:
        return ChargeBasisMap(rule, _Z2_PAIRS)
    raise ValueError(f"unsupported fusion rule {rule!r}")


def fusion_tensor(rule: FusionRule) -> np.ndarray:
    """0/1 tensor ``F[a, b, c]`` mapping product pair (a, b) to coupled index c.

    ``a``/``b`` are the site-1/site-2 occupations and ``c`` indexes the coupled
    basis in charge-major order. Exactly one entry per (a, b) column is 1.
    """
    basis_map = two_qubit_basis_map(rule)
    coupled = basis_map.coupled_basis()
    t = np.zeros((2, 2, 4))
    for bits, lab in basis_map.pairs:
        t[int(bits[0]), int(bits[1]), coupled.index(lab)] = 1.0
    return t


def splitting_tensor(rule: FusionRule) -> np.ndarray:
    """Dual tensor ``S[c, a, b]``; the arrow-reversed fusion tensor."""
    return fusion_tensor(rule).transpose(2, 0, 1).copy()


@dataclass(frozen=True)
class BlockMatrix:
    """Charge-indexed direct sum of dense blocks (one square block per charge)."""

    blocks: tuple[tuple[int, np.ndarray], ...]

    def __post_init__(self):
        seen = set()
        normalized = []
        for charge, block in self.blocks:
            if charge in seen:
                raise ValueError(f"duplicate block for charge {charge}")
            seen.add(charge)
            block = as_matrix(block)
            if block.shape[0] != block.shape[1]:
                raise ValueError(f"block for charge {charge} is not square: {block.shape}")
            normalized.append((charge, block))
        object.__setattr__(self, "blocks", tuple(normalized))

    @classmethod
    def from_dict(cls, blocks: dict[int, np.ndarray]) -> "BlockMatrix":
        return cls(tuple(sorted(blocks.items())))

    def block(self, charge: int) -> np.ndarray:
        for c, b in self.blocks:
            if c == charge:
                return b
        raise KeyError(charge)


def embed_block_matrix(m: BlockMatrix, basis_map: ChargeBasisMap) -> np.ndarray:
    """Dense 4x4 matrix of ``m`` in the coupled symmetry-basis ordering."""
    charges = basis_map.charges()
    if tuple(c for c, _ in sorted(m.blocks)) != charges:
        raise ValueError(f"blocks {[c for c, _ in m.blocks]} do not match charges {charges}")
    ordered = []
    for charge in charges:
        block = m.block(charge)
        deg = basis_map.degeneracy(charge)
        if block.shape != (deg, deg):
            raise ValueError(
                f"block for charge {charge} has shape {block.shape}, expected ({deg}, {deg})"
            )
        ordered.append(block)
    dim = sum(b.shape[0] for b in ordered)
    out = np.zeros((dim, dim), dtype=np.complex128)
    pos = 0
    for block in ordered:
        k = block.shape[0]
        out[pos : pos + k, pos : pos + k] = block
        pos += k
    return out


def subspace_dimension(num_sites: int, num_particles: int) -> int:
    """Dimension C(L, N) of the N-particle sector on L sites."""
    if not 0 <= num_particles <= num_sites:
        raise ValueError(f"need 0 <= N <= L, got N={num_particles}, L={num_sites}")
    return comb(num_sites, num_particles)


def sector_basis_indices(num_sites: int, num_particles: int) -> np.ndarray:
    """Ascending basis indices (little-endian) with popcount ``num_particles``."""
    if not 0 <= num_particles <= num_sites:
        raise ValueError(f"need 0 <= N <= L, got N={num_particles}, L={num_sites}")
    idx = np.arange(2**num_sites)
    pop = np.zeros_like(idx)
    for q in range(num_sites):
        pop += (idx >> q) & 1
    return idx[pop == num_particles]
