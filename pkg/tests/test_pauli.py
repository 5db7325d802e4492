import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adapt_forge.adapt import csf_state
from adapt_forge.pauli import (
    PauliString,
    QubitOperator,
    anticommutes,
    commutator,
    conjugate_by_pauli,
    multiply,
    number_operator,
    s_squared_operator,
    sz_operator,
)
from adapt_forge.statevector import apply_operator, expectation, reference_state

N = 3
LETTERS = {"I": np.eye(2), "X": np.array([[0, 1], [1, 0]]), "Y": np.array([[0, -1j], [1j, 0]]), "Z": np.diag([1, -1])}


def dense_string(letters):
    m = np.array([[1.0 + 0j]])
    for ch in letters:
        m = np.kron(LETTERS[ch], m)
    return m


pauli_letters = st.text(alphabet="IXYZ", min_size=N, max_size=N)
coeff = st.complex_numbers(max_magnitude=3, allow_nan=False, allow_infinity=False)
operators = st.dictionaries(pauli_letters, coeff, max_size=6)


def build(d):
    return QubitOperator.from_terms(N, {PauliString.from_letters(k): v for k, v in d.items()})


def dense(d):
    return sum((v * dense_string(k) for k, v in d.items()), np.zeros((1 << N, 1 << N), dtype=complex))


def test_letters_and_labels():
    p = PauliString.from_letters("XIZY")
    assert (p.x, p.z) == (0b1001, 0b1100)
    assert p.label() == "X0 Z2 Y3"
    assert PauliString.from_label("X0 Z2 Y3", 4) == p
    assert PauliString.from_label("I", 4).is_identity
    with pytest.raises(ValueError):
        PauliString.from_label("X7", 4)


def test_qubit_zero_is_least_significant():
    x0 = QubitOperator.single("X0", 2)
    assert np.array_equal(x0.to_dense(), np.kron(np.eye(2), LETTERS["X"]))


@settings(max_examples=60, deadline=None)
@given(operators, operators)
def test_products_and_commutators_match_dense(a, b):
    A, B = build(a), build(b)
    assert np.allclose(multiply(A, B).to_dense(), dense(a) @ dense(b), atol=1e-9)
    assert np.allclose(commutator(A, B).to_dense(), dense(a) @ dense(b) - dense(b) @ dense(a), atol=1e-9)
    assert np.allclose((A + B).to_dense(), dense(a) + dense(b), atol=1e-9)
    assert np.allclose(A.adjoint().to_dense(), dense(a).conj().T, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(operators, pauli_letters)
def test_conjugation_by_pauli(a, p):
    P = dense_string(p)
    got = conjugate_by_pauli(build(a), PauliString.from_letters(p)).to_dense()
    assert np.allclose(got, P @ dense(a) @ P, atol=1e-9)


@settings(max_examples=40, deadline=None)
@given(pauli_letters, pauli_letters)
def test_anticommutes(p, q):
    P, Q = dense_string(p), dense_string(q)
    assert anticommutes(PauliString.from_letters(p), PauliString.from_letters(q)) == np.allclose(P @ Q, -Q @ P)


@settings(max_examples=30, deadline=None)
@given(operators)
def test_text_round_trip_and_term_action(a):
    A = build(a)
    assert QubitOperator.parse(str(A), N).allclose(A, atol=1e-10)
    psi = np.arange(1, 1 + (1 << N)).astype(complex)
    assert np.allclose(apply_operator(A, psi), A.sparse @ psi)


def test_duplicates_merge_and_cancel():
    op = QubitOperator(2, [1, 1, 2], [0, 0, 0], [0.5, -0.5, 1.0])
    assert len(op) == 1 and op.coefficient(PauliString(2, 2, 0)) == 1.0
    assert QubitOperator.zero(2).is_zero()
    with pytest.raises(ValueError):
        multiply(QubitOperator.identity(2), QubitOperator.identity(3))


def test_hermiticity_flags():
    h = QubitOperator.single("Z0 X1", 2, 0.3)
    assert h.is_hermitian() and not h.is_antihermitian()
    assert (1j * h).is_antihermitian()


def test_spin_operators_on_determinants():
    n = 6
    N, Sz, S2 = number_operator(n), sz_operator(n), s_squared_operator(n)
    closed = reference_state(n, [0, 1, 2, 3])
    assert expectation(N, closed) == pytest.approx(4)
    assert expectation(Sz, closed) == pytest.approx(0, abs=1e-14)
    assert expectation(S2, closed) == pytest.approx(0, abs=1e-14)
    high = reference_state(n, [0, 2])  # two alpha electrons
    assert expectation(Sz, high) == pytest.approx(1)
    assert expectation(S2, high) == pytest.approx(2)


def test_open_shell_singlet_and_triplet():
    n = 4
    S2 = s_squared_operator(n)
    singlet = csf_state(n, [], (0, 1))
    triplet = (reference_state(n, [0, 3]) + reference_state(n, [1, 2])) / np.sqrt(2)
    assert expectation(S2, singlet) == pytest.approx(0, abs=1e-14)
    assert expectation(S2, triplet) == pytest.approx(2)


def test_odd_register_rejected():
    with pytest.raises(ValueError):
        s_squared_operator(3)
