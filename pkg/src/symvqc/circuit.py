"""Circuit intermediate representation and the particle-conserving builders.

A circuit is an ordered list of gate applications. Gate parameters are either
free slots (indices into a flat binding vector) or inline constants; the
brick-wall builder fixes two parameters by inlining constants, which is how
the free-parameter count lands at 2*C(L, N) - 2.

Qubits are numbered top wire = 0; two-qubit gates list (top, bottom) and the
matrix convention follows :mod:`symvqc.gatelib` (first listed qubit = most
significant local bit).
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .gatelib import PARAM_ARITY, QUBIT_ARITY, GateKind, cnot_cost
from .numkit import StateVector
from .symmetry import subspace_dimension


@dataclass(frozen=True)
class Slot:
    """Reference to one entry of the free-parameter binding vector."""

    index: int


ParamRef = Slot | float


@dataclass(frozen=True)
class Op:
    kind: GateKind
    qubits: tuple[int, ...]
    params: tuple[ParamRef, ...] = ()


@dataclass(frozen=True)
class Circuit:
    """Immutable gate list with a flat free-parameter table."""

    num_qubits: int
    ops: tuple[Op, ...]
    num_free_parameters: int

    def __post_init__(self):
        slots = set()
        for op in self.ops:
            if len(op.qubits) != QUBIT_ARITY[op.kind]:
                raise ValueError(f"{op.kind.name} acts on {QUBIT_ARITY[op.kind]} qubit(s)")
            if len(set(op.qubits)) != len(op.qubits):
                raise ValueError(f"duplicate target qubits in {op}")
            if any(not 0 <= q < self.num_qubits for q in op.qubits):
                raise ValueError(f"target out of range in {op}")
            if len(op.params) != PARAM_ARITY[op.kind]:
                raise ValueError(f"{op.kind.name} takes {PARAM_ARITY[op.kind]} parameter(s)")
            for p in op.params:
                if isinstance(p, Slot):
                    slots.add(p.index)
        if slots and (min(slots) != 0 or max(slots) != len(slots) - 1):
            raise ValueError("parameter slots must be numbered 0..P-1 without gaps")
        if len(slots) != self.num_free_parameters:
            raise ValueError(
                f"declared {self.num_free_parameters} free parameters, found {len(slots)}"
            )

    def bound_params(self, op: Op, binding: np.ndarray) -> tuple[float, ...]:
        """Resolve an op's parameter references against a binding vector."""
        return tuple(binding[p.index] if isinstance(p, Slot) else p for p in op.params)


def check_binding(circuit: Circuit, binding) -> np.ndarray:
    """Validate a binding vector's length and return it as a float array."""
    vec = np.asarray(binding, dtype=float)
    if vec.shape != (circuit.num_free_parameters,):
        raise ValueError(
            f"binding has shape {vec.shape}, circuit needs ({circuit.num_free_parameters},)"
        )
    return vec


def default_placement(num_sites: int, num_particles: int) -> tuple[int, ...]:
    """N occupied qubits centered in the chain."""
    start = (num_sites - num_particles) // 2
    return tuple(range(start, start + num_particles))


def initial_sector_state(
    num_sites: int, num_particles: int, placement=None
) -> StateVector:
    """Basis state with ``|1>`` on the placement qubits, ``|0>`` elsewhere."""
    if placement is None:
        placement = default_placement(num_sites, num_particles)
    placement = tuple(placement)
    if len(placement) != num_particles or len(set(placement)) != len(placement):
        raise ValueError(f"placement must list {num_particles} distinct qubits")
    if any(not 0 <= q < num_sites for q in placement):
        raise ValueError("placement qubit out of range")
    index = sum(1 << q for q in placement)
    return StateVector.basis_state(num_sites, index)


def brickwall_coupling_sequence(num_sites: int, num_particles: int) -> list[tuple[int, int]]:
    """Qubit pairs of the brick-wall pattern, truncated at C(L, N) gates.

    Layers alternate between odd-site couplings (0,1), (2,3), ... and
    even-site couplings (1,2), (3,4), ...; a partial final layer is cut
    left to right.
    """
    d = subspace_dimension(num_sites, num_particles)
    odd = [(i, i + 1) for i in range(0, num_sites - 1, 2)]
    even = [(i, i + 1) for i in range(1, num_sites - 1, 2)]
    if not odd:
        raise ValueError("need at least two sites")
    seq: list[tuple[int, int]] = []
    use_odd = True
    while len(seq) < d:
        for pair in odd if use_odd else even:
            if len(seq) == d:
                break
            seq.append(pair)
        use_odd = not use_odd
    return seq


FIX_POLICIES = ("first_two_phis", "none")


def build_brickwall(
    num_sites: int,
    num_particles: int,
    gate: GateKind = GateKind.A_GATE,
    placement=None,
    fix_policy: str = "first_two_phis",
) -> Circuit:
    """Brick-wall ansatz: N initial X gates, then C(L, N) two-qubit modules.

    With the default policy the phase parameter of the first two modules is
    pinned to 0, leaving 2*C(L, N) - 2 free slots.
    """
    if gate not in (GateKind.A_GATE, GateKind.B_GATE):
        raise ValueError("brick-wall builder takes the A or B gate kind")
    if num_sites < 2 or not 1 <= num_particles <= num_sites - 1:
        raise ValueError(f"need L >= 2 and 1 <= N <= L-1, got L={num_sites}, N={num_particles}")
    if fix_policy not in FIX_POLICIES:
        raise ValueError(f"unknown fix policy {fix_policy!r}")
    if placement is None:
        placement = default_placement(num_sites, num_particles)
    ops = [Op(GateKind.X, (q,)) for q in sorted(placement)]
    if len(ops) != num_particles:
        raise ValueError("placement must contain N distinct qubits")
    next_slot = 0
    for g, pair in enumerate(brickwall_coupling_sequence(num_sites, num_particles)):
        theta = Slot(next_slot)
        next_slot += 1
        if fix_policy == "first_two_phis" and g < 2:
            phi: ParamRef = 0.0
        else:
            phi = Slot(next_slot)
            next_slot += 1
        ops.append(Op(gate, pair, (theta, phi)))
    return Circuit(num_sites, tuple(ops), next_slot)


def build_swap_variant_2on4(gate: GateKind = GateKind.A_GATE) -> Circuit:
    """Five-module circuit for (L, N) = (4, 2) using swaps for extra couplings.

    Swaps bring qubits (0,3) and then (0,2) adjacent so five parameterized
    gates cover five distinct couplings; reverse swaps restore the wire order.
    All ten parameters stay free.
    """
    if gate not in (GateKind.A_GATE, GateKind.B_GATE):
        raise ValueError("swap variant takes the A or B gate kind")
    s = [Slot(i) for i in range(10)]
    ops = (
        Op(GateKind.X, (1,)),
        Op(GateKind.X, (2,)),
        Op(gate, (0, 1), (s[0], s[1])),
        Op(gate, (2, 3), (s[2], s[3])),
        Op(gate, (1, 2), (s[4], s[5])),
        Op(GateKind.SWAP, (0, 1)),
        Op(GateKind.SWAP, (1, 2)),
        Op(gate, (2, 3), (s[6], s[7])),
        Op(gate, (1, 2), (s[8], s[9])),
        Op(GateKind.SWAP, (1, 2)),
        Op(GateKind.SWAP, (0, 1)),
    )
    return Circuit(4, ops, 10)


def parameterized_gate_count(circuit: Circuit) -> int:
    """Number of parameter-carrying two-qubit modules in the circuit."""
    return sum(1 for op in circuit.ops if PARAM_ARITY[op.kind] > 0 and QUBIT_ARITY[op.kind] == 2)


def cnot_count(circuit: Circuit) -> int:
    """Total CNOTs after decomposing every op into elementary gates."""
    total = 0
    for op in circuit.ops:
        params = tuple(0.0 if isinstance(p, Slot) else p for p in op.params)
        total += cnot_cost(op.kind, params)
    return total


def sector_of(circuit: Circuit) -> tuple[int, int]:
    """(L, N) implied by the circuit's initial X layer."""
    n = sum(1 for op in circuit.ops if op.kind is GateKind.X)
    return circuit.num_qubits, n


# --- JSON wire format ------------------------------------------------------


def _param_to_json(p: ParamRef) -> dict:
    if isinstance(p, Slot):
        return {"slot": p.index}
    return {"value": p}


def to_json_dict(circuit: Circuit) -> dict:
    fixed = [
        {"op": i, "param": j, "value": p}
        for i, op in enumerate(circuit.ops)
        for j, p in enumerate(op.params)
        if not isinstance(p, Slot)
    ]
    return {
        "num_qubits": circuit.num_qubits,
        "ops": [
            {
                "kind": op.kind.value,
                "qubits": list(op.qubits),
                "params": [_param_to_json(p) for p in op.params],
            }
            for op in circuit.ops
        ],
        "fixed_params": fixed,
    }


def to_json(circuit: Circuit) -> str:
    return json.dumps(to_json_dict(circuit), indent=2, sort_keys=True) + "\n"


def from_json_dict(doc: dict) -> Circuit:
    ops = []
    for entry in doc["ops"]:
        params: list[ParamRef] = []
        for p in entry.get("params", []):
            if "slot" in p:
                params.append(Slot(int(p["slot"])))
            else:
                params.append(float(p["value"]))
        ops.append(Op(GateKind(entry["kind"]), tuple(entry["qubits"]), tuple(params)))
    num_free = len({p.index for op in ops for p in op.params if isinstance(p, Slot)})
    return Circuit(int(doc["num_qubits"]), tuple(ops), num_free)


def from_json(text: str) -> Circuit:
    return from_json_dict(json.loads(text))
