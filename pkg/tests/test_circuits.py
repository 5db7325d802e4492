import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from adapt_forge import circuits as C
from adapt_forge.pools import PoolOperator
from adapt_forge.statevector import Ansatz, reference_state

Y = np.array([[0, -1j], [1j, 0]])


def ry_matrix(a):
    return expm(-0.5j * a * Y)


def test_cnot_truth_table():
    c = C.Circuit(2).add(C.cnot(0, 1))
    u = C.circuit_unitary(c)
    # basis index bit 0 is qubit 0 (the control)
    for b in range(4):
        out = b ^ (2 if b & 1 else 0)
        assert u[out, b] == 1


def test_single_qubit_rotations_follow_qasm_convention():
    for name, pauli in (("RX", [[0, 1], [1, 0]]), ("RY", Y), ("RZ", [[1, 0], [0, -1]])):
        u = C.circuit_unitary(C.Circuit(1).add(C.Gate(name, 0, (), 0.7)))
        assert np.allclose(u, expm(-0.35j * np.asarray(pauli, dtype=complex)))


@pytest.mark.parametrize("pols", list(itertools.product((0, 1), repeat=2)))
def test_mcry_semantics(pols):
    a = 0.9
    g = C.mcry(2, [(0, pols[0]), (1, pols[1])], a)
    u = C.circuit_unitary(C.Circuit(3).add(g))
    active = pols[0] | (pols[1] << 1)
    for low in range(4):
        block = u[np.ix_([low, low | 4], [low, low | 4])]
        want = ry_matrix(a) if low == active else np.eye(2)
        assert np.allclose(block, want)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.tuples(st.sampled_from([0, 1]), st.floats(-7, 7, allow_nan=False)), min_size=1, max_size=3),
       st.permutations([0, 1, 2, 3]))
def test_mcry_lowering(ctrl_pols, perm):
    n = 4
    target = perm[0]
    controls = [(perm[1 + k], pol) for k, (pol, _) in enumerate(ctrl_pols)]
    angle = ctrl_pols[0][1]
    c = C.Circuit(n).add(C.mcry(target, controls, angle))
    d = C.decompose(c)
    assert all(g.name in ("CNOT", "RX", "RY", "RZ") for g in d.gates)
    assert C.equivalent_up_to_phase(C.circuit_unitary(d), C.circuit_unitary(c))


def test_empty_circuit():
    c = C.Circuit(3)
    assert c.cnot_count == 0 and c.depth == 0 and c.cnot_depth == 0
    assert np.allclose(C.circuit_unitary(c), np.eye(8))
    assert C.read_qasm(C.export_qasm(c)).gates == []


def test_depth_metrics():
    c = C.Circuit(3).add(C.cnot(0, 1), C.rz(2, 0.1), C.cnot(1, 2), C.rx(0, 0.2), C.cnot(0, 1))
    assert c.cnot_count == 3
    assert c.cnot_depth == 3
    assert c.depth == 3


def test_gate_validation():
    with pytest.raises(ValueError):
        C.Gate("SWAP", 0)
    with pytest.raises(ValueError):
        C.cnot(1, 1)
    with pytest.raises(ValueError):
        C.Gate("RX", 0, ((1, 1),), 0.1)
    with pytest.raises(ValueError):
        C.Circuit(2).add(C.cnot(0, 2))
    with pytest.raises(ValueError):
        C.circuit_unitary(C.Circuit(13))


def test_equivalence_up_to_phase():
    u = expm(-0.3j * np.diag([1.0, -1.0]))
    assert C.equivalent_up_to_phase(np.exp(0.4j) * u, u)
    assert not C.equivalent_up_to_phase(u.conj(), u)
    with pytest.raises(ValueError):
        C.equivalent_up_to_phase(np.eye(2), np.eye(4))


@pytest.mark.parametrize("kind, idx, cnots", [("QEB1", (2, 0), 2), ("QEB2", (4, 1, 0, 3), 13), ("SQEB2", (3, 0, 1, 4), 9)])
def test_element_circuits_on_wider_register(kind, idx, cnots):
    op = PoolOperator.make(kind, idx, 5)
    for theta in (0.37, -2.1):
        c = C.element_circuit(op, theta, 5)
        assert c.cnot_count == cnots
        assert C.equivalent_up_to_phase(C.circuit_unitary(c), expm(theta * op.generator.to_dense()))


def test_feb_elements_have_no_gate_layout():
    with pytest.raises(ValueError):
        C.element_circuit(PoolOperator.make("FEB2", (0, 1, 2, 3), 4), 0.1, 4)


def test_ansatz_circuit_reproduces_state():
    ops = [PoolOperator.make("QEB1", (0, 2), 4), PoolOperator.make("SQEB2", (0, 1, 2, 3), 4),
           PoolOperator.make("QEB2", (0, 1, 2, 3), 4)]
    ans = Ansatz(ops, [0.2, -0.5, 1.1])
    psi0 = reference_state(4, [0, 1])
    out = C.simulate(C.ansatz_to_circuit(ans, 4), psi0)
    want = ans.prepare(psi0)
    assert abs(abs(np.vdot(want, out)) - 1) < 1e-12


def test_qasm_round_trip():
    c = C.decompose(C.sqeb2_circuit(0, 1, 2, 3, 0.123456789012345, n_qubits=5))
    text = C.export_qasm(c)
    assert text.startswith('OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[5];\n')
    back = C.read_qasm(text)
    assert back.n_qubits == 5 and back.gates == c.gates
    with pytest.raises(ValueError):
        C.export_qasm(C.Circuit(3).add(C.mcry(0, [(1, 1)], 0.2)))
    with pytest.raises(ValueError):
        C.read_qasm("OPENQASM 2.0;\nqreg q[2];\nh q[0];\n")


@pytest.mark.parametrize("kind", ["QEB2", "SQEB2"])
def test_variant_layouts(kind):
    variants = C.variant_circuits(kind)
    assert len(variants) >= 3
    mats = [C.circuit_unitary(fn(0, 1, 2, 3, 0.61, n_qubits=4)) for _, fn in variants]
    for u, v in itertools.combinations(mats, 2):
        assert C.equivalent_up_to_phase(u, v)
    want = 13 if kind == "QEB2" else 9
    for name, fn in variants:
        assert C.decompose(fn(0, 1, 2, 3, 0.61, n_qubits=4)).cnot_count == want, name


def test_cleanup_drops_full_turns():
    c = C.Circuit(1).add(C.rz(0, math.pi), C.rz(0, math.pi), C.ry(0, 0.0))
    assert len(C.decompose(c)) == 0
