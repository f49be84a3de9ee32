"""User-facing verification suites: gate identities, symmetry data, model mapping.

Each suite returns (check name, passed, detail) triples so both the CLI and
the test-suite can drive them. These are the library's self-checks; they are
deterministic and take a few seconds in total.
"""
from __future__ import annotations

import numpy as np

from . import gatelib, models, symmetry
from .circuit import build_brickwall, build_swap_variant_2on4, cnot_count
from .gatelib import GateKind
from .numkit import StateVector, dagger
from .pauli import commutator
from .simulator import apply_circuit
from .symmetry import FusionRule

CheckResult = tuple[str, bool, str]

# two-site particle number diag(0, 1, 1, 2) in the (top, bottom) product basis
_N2 = np.diag([0.0, 1.0, 1.0, 2.0]).astype(np.complex128)


def _grid(n: int = 10):
    thetas = np.linspace(-np.pi, np.pi, n, endpoint=False)
    phis = np.linspace(-np.pi, np.pi, n, endpoint=False)
    return [(t, p) for t in thetas for p in phis]


def verify_gates() -> list[CheckResult]:
    results: list[CheckResult] = []
    fuse = gatelib.fusion_gate()
    split = gatelib.splitting_gate()
    z2 = symmetry.two_qubit_basis_map(FusionRule.Z2_MOD2)

    worst_a = worst_b = worst_comm = worst_uni = 0.0
    for theta, phi in _grid():
        core_a = symmetry.embed_block_matrix(
            symmetry.BlockMatrix.from_dict({0: np.eye(2), 1: gatelib.v_gate(theta, phi)}), z2
        )
        core_b = gatelib.u_core(theta, phi)
        a = gatelib.a_gate(theta, phi)
        b = gatelib.b_gate(theta, phi)
        worst_a = max(worst_a, np.abs(split @ core_a @ fuse - a).max())
        worst_b = max(worst_b, np.abs(split @ core_b @ fuse - b).max())
        for g in (a, b):
            worst_comm = max(worst_comm, np.abs(g @ _N2 - _N2 @ g).max())
            worst_uni = max(worst_uni, np.abs(dagger(g) @ g - np.eye(4)).max())
    results.append(("A gate bottom-up equals closed form", worst_a <= 1e-12, f"max dev {worst_a:.2e}"))
    results.append(("B gate bottom-up equals closed form", worst_b <= 1e-12, f"max dev {worst_b:.2e}"))
    results.append(("gates commute with two-site number op", worst_comm <= 1e-12, f"max dev {worst_comm:.2e}"))
    results.append(("gates unitary", worst_uni <= 1e-12, f"max dev {worst_uni:.2e}"))

    worst_dec = 0.0
    for kind in (GateKind.A_GATE, GateKind.B_GATE, GateKind.CONTROLLED_V):
        for theta, phi in _grid(5):
            dec = gatelib.decompose(kind, (theta, phi))
            worst_dec = max(
                worst_dec, np.abs(dec.matrix() - gatelib.gate_matrix(kind, (theta, phi))).max()
            )
    swap_dec = gatelib.decompose(GateKind.SWAP)
    worst_dec = max(worst_dec, np.abs(swap_dec.matrix() - gatelib.elementary_matrix(GateKind.SWAP)).max())
    results.append(("decompositions reproduce composites", worst_dec <= 1e-12, f"max dev {worst_dec:.2e}"))

    counts_ok = (
        gatelib.decompose(GateKind.A_GATE, (0.3, 0.4)).cnot_count() == 3
        and gatelib.decompose(GateKind.SWAP).cnot_count() == 3
        and gatelib.decompose(GateKind.CONTROLLED_V, (0.3, 0.4)).cnot_count() == 1
    )
    results.append(("CNOT counts (A=3, swap=3, CV=1)", counts_ok, ""))
    return results


def verify_symmetry() -> list[CheckResult]:
    results: list[CheckResult] = []
    for rule in FusionRule:
        f = symmetry.fusion_tensor(rule)
        s = symmetry.splitting_tensor(rule)
        prod = np.einsum("abc,dec->abde", f, f)  # splitting then fusion, product side
        eye_prod = np.einsum("ad,be->abde", np.eye(2), np.eye(2))
        coup = np.einsum("abc,abd->cd", f, f)  # fusion then splitting, coupled side
        ok = np.array_equal(prod, eye_prod) and np.array_equal(coup, np.eye(4))
        ok = ok and np.array_equal(s, f.transpose(2, 0, 1))
        results.append((f"fusion/splitting identities ({rule.value})", ok, ""))

    z2 = symmetry.two_qubit_basis_map(FusionRule.Z2_MOD2)
    m = symmetry.embed_block_matrix(
        symmetry.BlockMatrix.from_dict(
            {0: np.diag([1.0, 2.0]), 1: np.array([[0.0, 1.0], [1.0, 0.0]])}
        ),
        z2,
    )
    cross_zero = m[:2, 2:].any() or m[2:, :2].any()
    results.append(("block embedding has no cross-charge entries", not cross_zero, ""))

    dims_ok = all(
        symmetry.subspace_dimension(L, N) == symmetry.sector_basis_indices(L, N).size
        for L in range(1, 11)
        for N in range(L + 1)
    )
    results.append(("sector dimension equals basis count (L<=10)", dims_ok, ""))
    return results


def verify_mapping(gamma: float = 0.8) -> list[CheckResult]:
    results: list[CheckResult] = []
    worst = 0.0
    for L in (2, 3, 4):
        hx = models.xxz_hamiltonian(models.XXZSpec(L, gamma, models.Boundary.PERIODIC))
        hb = models.bose_hubbard_hamiltonian(
            models.BoseHubbardSpec(L, 2 * gamma, models.Boundary.PERIODIC)
        )
        for N in range(L + 1):
            sx = models.sector_spectrum(hx, N)
            sb = 2.0 * models.sector_spectrum(hb, N) + models.mapping_shift(gamma, L, N)
            worst = max(worst, np.abs(np.sort(sx) - np.sort(sb)).max())
    results.append(
        ("XXZ vs 2*BH + c sector spectra (periodic, L=2..4)", worst <= 1e-9, f"max dev {worst:.2e}")
    )

    for L in (3, 5):
        hx = models.xxz_hamiltonian(models.XXZSpec(L, gamma))
        hb = models.bose_hubbard_hamiltonian(models.BoseHubbardSpec(L, 2 * gamma))
        c1 = commutator(hx, models.magnetization(L))
        c2 = commutator(hb, models.number_operator(L))
        results.append((f"[H_xxz, M] = 0 (L={L})", not c1, f"{len(c1)} residual terms"))
        results.append((f"[H_bh, N] = 0 (L={L})", not c2, f"{len(c2)} residual terms"))
    return results


def verify_circuits() -> list[CheckResult]:
    results: list[CheckResult] = []
    bw = build_brickwall(4, 2, GateKind.A_GATE)
    sw = build_swap_variant_2on4(GateKind.A_GATE)
    ok = (
        bw.num_free_parameters == 10
        and cnot_count(bw) == 18
        and sw.num_free_parameters == 10
        and cnot_count(sw) == 27
    )
    results.append(("(4,2) gate/parameter/CNOT counts", ok, ""))

    worst = 0.0
    for L, N in ((2, 1), (3, 1), (4, 2), (6, 3)):
        c = build_brickwall(L, N, GateKind.B_GATE)
        binding = np.random.default_rng(L * 10 + N).uniform(-np.pi, np.pi, c.num_free_parameters)
        psi = apply_circuit(c, binding, StateVector.zero_state(L))
        outside = np.ones(1 << L, dtype=bool)
        outside[symmetry.sector_basis_indices(L, N)] = False
        worst = max(worst, float(np.abs(psi.amplitudes[outside]).max(initial=0.0)))
    results.append(("brick-wall circuits stay in their sector", worst <= 1e-12, f"max leak {worst:.2e}"))
    return results


SUITES = {
    "gates": verify_gates,
    "symmetry": verify_symmetry,
    "mapping": verify_mapping,
    "circuits": verify_circuits,
}


def run_suites(names) -> list[tuple[str, CheckResult]]:
    out = []
    for name in names:
        for check in SUITES[name]():
            out.append((name, check))
    return out
