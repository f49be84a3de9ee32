"""Elementary gates, charge-conserving cores, and the composed A/B modules.

Matrix conventions
------------------
Single-qubit gates are 2x2. Two-qubit gates are 4x4 over the basis ordering
``|ab>`` = (first qubit a, second qubit b) with the FIRST qubit as the most
significant local bit; for gates drawn on adjacent wires the first qubit is
the top wire. CNOT's first qubit is the control, so ``CNOT`` on (second,
first) is the reflected CNOT that doubles as the parity fusion gate.

The particle-conserving modules are available both in closed form
(:func:`a_gate`, :func:`b_gate`) and bottom-up as
``splitting_gate() @ core @ fusion_gate()`` where the core is a charge-indexed
direct sum; the two routes agree to machine precision and the test-suite pins
that.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .numkit import as_matrix, dagger, is_unitary


class GateKind(str, enum.Enum):
    X = "x"
    RX = "rx"
    RY = "ry"
    RZ = "rz"
    PHASE = "phase"
    CNOT = "cnot"
    SWAP = "swap"
    CONTROLLED_V = "cv"
    A_GATE = "a"
    B_GATE = "b"


PARAM_ARITY: dict[GateKind, int] = {
    GateKind.X: 0,
    GateKind.CNOT: 0,
    GateKind.SWAP: 0,
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.PHASE: 1,
    GateKind.CONTROLLED_V: 2,
    GateKind.A_GATE: 2,
    GateKind.B_GATE: 2,
}

QUBIT_ARITY: dict[GateKind, int] = {
    GateKind.X: 1,
    GateKind.RX: 1,
    GateKind.RY: 1,
    GateKind.RZ: 1,
    GateKind.PHASE: 1,
    GateKind.CNOT: 2,
    GateKind.SWAP: 2,
    GateKind.CONTROLLED_V: 2,
    GateKind.A_GATE: 2,
    GateKind.B_GATE: 2,
}

_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
_CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=np.complex128
)
_SWAP = np.array(
    [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=np.complex128
)


def rx_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]])


def ry_matrix(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=np.complex128)


def rz_matrix(phi: float) -> np.ndarray:
    return np.array([[np.exp(-1j * phi / 2), 0], [0, np.exp(1j * phi / 2)]])


def phase_matrix(phi: float) -> np.ndarray:
    return np.array([[1, 0], [0, np.exp(1j * phi)]])


_ELEMENTARY = {
    GateKind.X: lambda: _X.copy(),
    GateKind.RX: rx_matrix,
    GateKind.RY: ry_matrix,
    GateKind.RZ: rz_matrix,
    GateKind.PHASE: phase_matrix,
    GateKind.CNOT: lambda: _CNOT.copy(),
    GateKind.SWAP: lambda: _SWAP.copy(),
}


def elementary_matrix(kind: GateKind, params: tuple[float, ...] = ()) -> np.ndarray:
    """Standard matrix of an elementary gate; checks parameter arity."""
    if kind not in _ELEMENTARY:
        raise ValueError(f"{kind} is not an elementary gate")
    if len(params) != PARAM_ARITY[kind]:
        raise ValueError(f"{kind.name} takes {PARAM_ARITY[kind]} parameter(s), got {len(params)}")
    return _ELEMENTARY[kind](*params)


def v_gate(theta: float, phi: float) -> np.ndarray:
    """Generating unitary of the single-particle sector on two sites."""
    s, c = np.sin(theta), np.cos(theta)
    return np.array([[-s, np.exp(-1j * phi) * c], [np.exp(1j * phi) * c, s]])


def controlled_core(q0_op: np.ndarray, q1_op: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Two-qubit controlled operation |0><0| (x) q0_op + |1><1| (x) q1_op.

    This is the charge-conserving core: the control (first) qubit carries the
    charge, the target carries the degeneracy. Both blocks must be unitary.
    """
    q0_op, q1_op = as_matrix(q0_op), as_matrix(q1_op)
    for name, op in (("q0_op", q0_op), ("q1_op", q1_op)):
        if op.shape != (2, 2):
            raise ValueError(f"{name} must be 2x2, got {op.shape}")
        if not is_unitary(op, tol):
            raise ValueError(f"{name} is not unitary within {tol}")
    out = np.zeros((4, 4), dtype=np.complex128)
    out[:2, :2] = q0_op
    out[2:, 2:] = q1_op
    return out


def fusion_gate() -> np.ndarray:
    """Parity fusion gate: the reflected CNOT (control on the second qubit).

    Maps the product basis into the Z2 symmetry basis ordered
    {|0,1>, |0,2>, |1,1>, |1,2>}; it is an involution, so it doubles as the
    splitting gate.
    """
    return np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0], [0, 1, 0, 0]], dtype=np.complex128
    )


def splitting_gate() -> np.ndarray:
    """Inverse of the fusion gate (the same matrix: F is an involution)."""
    return fusion_gate()


def double_cnot_fusion_gate() -> np.ndarray:
    """Alternative parity fusion map (|01> -> |1,1>, |10> -> |1,2>).

    Costs two CNOTs instead of one; kept for reference, not used by the
    builders.
    """
    return np.array(
        [[1, 0, 0, 0], [0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0]], dtype=np.complex128
    )


def u_core(theta: float, phi: float) -> np.ndarray:
    """Hopping/interaction core P(phi) ⊕ Rx†(theta) in the symmetry basis."""
    return controlled_core(phase_matrix(phi), dagger(rx_matrix(theta)))


def a_gate(theta: float, phi: float) -> np.ndarray:
    """Particle-conserving exchange gate from the charge-1 parameterization."""
    s, c = np.sin(theta), np.cos(theta)
    return np.array(
        [
            [1, 0, 0, 0],
            [0, s, np.exp(1j * phi) * c, 0],
            [0, np.exp(-1j * phi) * c, -s, 0],
            [0, 0, 0, 1],
        ]
    )


def b_gate(theta: float, phi: float) -> np.ndarray:
    """Particle-conserving gate from the model-inspired parameterization."""
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return np.array(
        [
            [1, 0, 0, 0],
            [0, c, 1j * s, 0],
            [0, 1j * s, c, 0],
            [0, 0, 0, np.exp(1j * phi)],
        ]
    )


def zyz_angles(u: np.ndarray) -> tuple[float, float, float, float]:
    """Euler angles (alpha, beta, gamma, delta) with u = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta).

    Valid for any 2x2 unitary; the degenerate gamma = 0 or pi cases pick
    delta = 0 or beta = -delta respectively.
    """
    u = as_matrix(u)
    if u.shape != (2, 2) or not is_unitary(u, 1e-10):
        raise ValueError("zyz_angles needs a 2x2 unitary")
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    alpha = 0.5 * np.angle(det)
    su = u * np.exp(-1j * alpha)
    gamma = 2.0 * np.arctan2(abs(su[1, 0]), abs(su[0, 0]))
    if abs(su[0, 0]) >= abs(su[1, 0]):
        if abs(su[1, 0]) < 1e-14:
            beta, delta = -2.0 * np.angle(su[0, 0]), 0.0
        else:
            bpd = -2.0 * np.angle(su[0, 0])
            bmd = 2.0 * np.angle(su[1, 0])
            beta, delta = (bpd + bmd) / 2.0, (bpd - bmd) / 2.0
    else:
        if abs(su[0, 0]) < 1e-14:
            beta = np.angle(su[1, 0])
            delta = -beta
        else:
            bpd = -2.0 * np.angle(su[0, 0])
            bmd = 2.0 * np.angle(su[1, 0])
            beta, delta = (bpd + bmd) / 2.0, (bpd - bmd) / 2.0
    return float(alpha), float(beta), float(gamma), float(delta)


@dataclass(frozen=True)
class GateStep:
    """One elementary operation inside a decomposition (local qubit indices)."""

    kind: GateKind
    params: tuple[float, ...]
    qubits: tuple[int, ...]


@dataclass(frozen=True)
class GateDecomposition:
    """Temporally ordered elementary realization of a composite two-qubit gate."""

    steps: tuple[GateStep, ...]

    def matrix(self) -> np.ndarray:
        """4x4 product of the steps (last step leftmost)."""
        out = np.eye(4, dtype=np.complex128)
        for step in self.steps:
            out = _step_matrix(step) @ out
        return out

    def cnot_count(self) -> int:
        return sum(1 for s in self.steps if s.kind is GateKind.CNOT)


def _step_matrix(step: GateStep) -> np.ndarray:
    g = elementary_matrix(step.kind, step.params)
    if QUBIT_ARITY[step.kind] == 1:
        if step.qubits == (0,):
            return np.kron(g, np.eye(2))
        if step.qubits == (1,):
            return np.kron(np.eye(2), g)
        raise ValueError(f"bad local qubit {step.qubits}")
    if step.qubits == (0, 1):
        return g
    if step.qubits == (1, 0):
        return _SWAP @ g @ _SWAP
    raise ValueError(f"bad local qubit pair {step.qubits}")


def _controlled_u_steps(u: np.ndarray) -> tuple[GateStep, ...]:
    # ABC construction: with u = e^{ia} Rz(b) Ry(g) Rz(d), the gates
    # C = Rz((d-b)/2), B = Ry(-g/2) Rz(-(d+b)/2), A = Rz(b) Ry(g/2) satisfy
    # ABC = I and A X B X C = e^{-ia} u; a Phase(a) on the control fixes the
    # leftover controlled phase.
    alpha, beta, gamma, delta = zyz_angles(u)
    steps = [
        GateStep(GateKind.RZ, ((delta - beta) / 2.0,), (1,)),
        GateStep(GateKind.CNOT, (), (0, 1)),
        GateStep(GateKind.RZ, (-(delta + beta) / 2.0,), (1,)),
        GateStep(GateKind.RY, (-gamma / 2.0,), (1,)),
        GateStep(GateKind.CNOT, (), (0, 1)),
        GateStep(GateKind.RY, (gamma / 2.0,), (1,)),
        GateStep(GateKind.RZ, (beta,), (1,)),
        GateStep(GateKind.PHASE, (alpha,), (0,)),
    ]
    return tuple(steps)


def decompose(kind: GateKind, params: tuple[float, ...] = ()) -> GateDecomposition:
    """Elementary realization of ``kind`` whose product equals its matrix.

    CNOT counts: A gate 3 (fusion + 1-CNOT controlled-V + splitting), B gate 4
    (fusion + 2-CNOT controlled core + splitting), swap 3, controlled-V 1.
    """
    if len(params) != PARAM_ARITY.get(kind, 0):
        raise ValueError(f"{kind.name} takes {PARAM_ARITY.get(kind, 0)} parameter(s)")
    if kind is GateKind.SWAP:
        return GateDecomposition(
            (
                GateStep(GateKind.CNOT, (), (0, 1)),
                GateStep(GateKind.CNOT, (), (1, 0)),
                GateStep(GateKind.CNOT, (), (0, 1)),
            )
        )
    if kind is GateKind.CONTROLLED_V:
        # C1(V) = (I (x) U) CNOT (I (x) U†) with U = Rz(phi) Ry(theta).
        theta, phi = params
        return GateDecomposition(
            (
                GateStep(GateKind.RZ, (-phi,), (1,)),
                GateStep(GateKind.RY, (-theta,), (1,)),
                GateStep(GateKind.CNOT, (), (0, 1)),
                GateStep(GateKind.RY, (theta,), (1,)),
                GateStep(GateKind.RZ, (phi,), (1,)),
            )
        )
    if kind is GateKind.A_GATE:
        fuse = GateStep(GateKind.CNOT, (), (1, 0))
        return GateDecomposition(
            (fuse,) + decompose(GateKind.CONTROLLED_V, params).steps + (fuse,)
        )
    if kind is GateKind.B_GATE:
        # Core P(phi) ⊕ Rx†(theta) = C1(W) (I (x) P(phi)) with W = Rx(-theta) P(-phi).
        theta, phi = params
        fuse = GateStep(GateKind.CNOT, (), (1, 0))
        w = rx_matrix(-theta) @ phase_matrix(-phi)
        steps = (
            (fuse, GateStep(GateKind.PHASE, (phi,), (1,)))
            + _controlled_u_steps(w)
            + (fuse,)
        )
        return GateDecomposition(steps)
    raise ValueError(f"no decomposition for gate kind {kind}")


def gate_matrix(kind: GateKind, params: tuple[float, ...] = ()) -> np.ndarray:
    """Matrix of any gate kind, composite or elementary."""
    if kind is GateKind.A_GATE:
        return a_gate(*params)
    if kind is GateKind.B_GATE:
        return b_gate(*params)
    if kind is GateKind.CONTROLLED_V:
        return controlled_core(np.eye(2), v_gate(*params))
    return elementary_matrix(kind, params)


def cnot_cost(kind: GateKind, params: tuple[float, ...] = ()) -> int:
    """CNOTs contributed by one gate of ``kind`` after decomposition."""
    if kind is GateKind.CNOT:
        return 1
    if QUBIT_ARITY[kind] == 1:
        return 0
    return decompose(kind, params).cnot_count()
