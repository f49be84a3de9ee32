import numpy as np
import pytest

from symvqc.models import (
    BoseHubbardSpec,
    XXZSpec,
    bose_hubbard_hamiltonian,
    magnetization,
    number_operator,
    xxz_hamiltonian,
)
from symvqc.pauli import (
    PauliString,
    PauliSum,
    commutator,
    commutes,
    dense_matrix,
    multiply,
    single_string,
    string_action,
)

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.diag([1.0, -1.0]).astype(complex),
}


def kron_oracle(letters):
    # little-endian: qubit 0 is the least significant kron factor
    out = np.array([[1.0 + 0j]])
    for ch in reversed(letters):
        out = np.kron(out, PAULI[ch])
    return out


class TestStringAction:
    @pytest.mark.parametrize(
        "letters", ["X", "Y", "Z", "IX", "XY", "ZZ", "YIX", "XYZ", "IZYX"]
    )
    def test_matches_kron_oracle(self, letters):
        h = PauliSum((PauliString(1.0, letters),))
        assert np.abs(dense_matrix(h) - kron_oracle(letters)).max() == 0.0

    def test_random_strings_against_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(25):
            letters = "".join(rng.choice(list("IXYZ"), size=4))
            target, factor = string_action(letters)
            psi = rng.normal(size=16) + 1j * rng.normal(size=16)
            applied = np.zeros(16, dtype=complex)
            applied[target] = factor * psi
            assert np.abs(applied - kron_oracle(letters) @ psi).max() < 1e-12


class TestAlgebra:
    def test_xy_product(self):
        a = PauliSum((PauliString(1.0, "X"),))
        b = PauliSum((PauliString(1.0, "Y"),))
        assert multiply(a, b) == {"Z": 1j}
        assert multiply(b, a) == {"Z": -1j}

    def test_commutator_xz(self):
        a = PauliSum((PauliString(1.0, "X"),))
        b = PauliSum((PauliString(1.0, "Z"),))
        c = commutator(a, b)
        assert c == {"Y": -2j}

    def test_commuting_strings(self):
        a = PauliSum((PauliString(2.0, "XX"),))
        b = PauliSum((PauliString(3.0, "YY"),))
        assert commutes(a, b)

    def test_xxz_magnetization_commutator_is_exact_zero(self):
        for L in (2, 3, 6):
            h = xxz_hamiltonian(XXZSpec(L, 0.37))
            assert commutator(h, magnetization(L)) == {}

    def test_bose_hubbard_number_commutator_is_exact_zero(self):
        for L in (2, 3, 6):
            h = bose_hubbard_hamiltonian(BoseHubbardSpec(L, 1.234))
            assert commutator(h, number_operator(L)) == {}

    def test_noncommuting_hamiltonians_detected(self):
        h = xxz_hamiltonian(XXZSpec(3, 1.0))
        x0 = PauliSum((single_string(3, {0: "X"}),))
        assert not commutes(h, x0)


class TestValidation:
    def test_bad_letters(self):
        with pytest.raises(ValueError):
            PauliString(1.0, "XQ")

    def test_nan_coefficient(self):
        with pytest.raises(ValueError):
            PauliString(float("nan"), "X")

    def test_mixed_lengths(self):
        with pytest.raises(ValueError):
            PauliSum((PauliString(1.0, "X"), PauliString(1.0, "XX")))

    def test_size_mismatch_in_product(self):
        with pytest.raises(ValueError):
            multiply(
                PauliSum((PauliString(1.0, "X"),)),
                PauliSum((PauliString(1.0, "XX"),)),
            )
