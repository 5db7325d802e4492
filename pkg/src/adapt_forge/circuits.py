"""Gate-level excitation circuits, multi-controlled-Ry decomposition and QASM I/O.

Rotation angles follow the OpenQASM convention ``RY(a) = exp(-i a Y / 2)``,
so an excitation parameter ``theta`` appears as a gate angle ``2 theta``.
``MCRY`` is a controlled ``RY``; each control carries a polarity (1 fires on
``|1>``, 0 on ``|0>``). ``CZ`` only exists inside :func:`decompose`.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass, field

import numpy as np

GATE_NAMES = ("CNOT", "RX", "RY", "RZ", "MCRY", "CZ")
ROTATIONS = ("RX", "RY", "RZ")
MAX_DENSE_QUBITS = 12
PHASE_TOL = 1e-10


@dataclass(frozen=True)
class Gate:
    name: str
    target: int
    controls: tuple = ()
    angle: float = 0.0

    def __post_init__(self):
        if self.name not in GATE_NAMES:
            raise ValueError(f"unknown gate {self.name!r}")
        ctrl = tuple((int(q), int(pol)) for q, pol in self.controls)
        object.__setattr__(self, "controls", ctrl)
        qubits = [self.target] + [q for q, _ in ctrl]
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"repeated qubit in {self.name} gate: {qubits}")
        if self.name in ("CNOT", "CZ") and len(ctrl) != 1:
            raise ValueError(f"{self.name} takes exactly one control")
        if self.name == "MCRY" and not ctrl:
            raise ValueError("MCRY needs at least one control")
        if self.name in ROTATIONS and ctrl:
            raise ValueError(f"{self.name} is a single-qubit gate")

    @property
    def qubits(self):
        return (self.target,) + tuple(q for q, _ in self.controls)

    def __str__(self):
        ctrl = " ".join(f"{q}" if pol else f"~{q}" for q, pol in self.controls)
        parts = [self.name, str(self.target)]
        if ctrl:
            parts.append(f"[{ctrl}]")
        if self.name in ROTATIONS or self.name == "MCRY":
            parts.append(repr(float(self.angle)))
        return " ".join(parts)


def cnot(control, target):
    return Gate("CNOT", target, ((control, 1),))


def cz(a, b):
    return Gate("CZ", b, ((a, 1),))


def rx(q, a):
    return Gate("RX", q, (), a)


def ry(q, a):
    return Gate("RY", q, (), a)


def rz(q, a):
    return Gate("RZ", q, (), a)


def mcry(target, controls, a):
    return Gate("MCRY", target, tuple(controls), a)


@dataclass
class Circuit:
    n_qubits: int
    gates: list = field(default_factory=list)

    def add(self, *gates):
        for g in gates:
            if any(not 0 <= q < self.n_qubits for q in g.qubits):
                raise ValueError(f"gate {g} outside a {self.n_qubits}-qubit register")
            self.gates.append(g)
        return self

    def __iadd__(self, other):
        return self.add(*other.gates)

    def __len__(self):
        return len(self.gates)

    @property
    def cnot_count(self) -> int:
        return sum(g.name == "CNOT" for g in self.gates)

    def _layers(self, keep):
        frontier = [0] * self.n_qubits
        depth = 0
        for g in self.gates:
            if not keep(g):
                continue
            layer = max(frontier[q] for q in g.qubits) + 1
            for q in g.qubits:
                frontier[q] = layer
            depth = max(depth, layer)
        return depth

    @property
    def depth(self) -> int:
        """Greedy ASAP layering of all gates."""
        return self._layers(lambda g: True)

    @property
    def cnot_depth(self) -> int:
        """Number of CNOT layers; single-qubit gates are ignored."""
        return self._layers(lambda g: g.name == "CNOT")

    def dump(self) -> str:
        return "".join(f"{g}\n" for g in self.gates)


# -- dense simulation ---------------------------------------------------

def _single_matrix(name, a):
    c, s = math.cos(a / 2), math.sin(a / 2)
    if name == "RX":
        return np.array([[c, -1j * s], [-1j * s, c]])
    if name == "RY":
        return np.array([[c, -s], [s, c]], dtype=complex)
    if name == "RZ":
        return np.array([[np.exp(-0.5j * a), 0], [0, np.exp(0.5j * a)]])
    raise ValueError(name)


_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Z = np.diag([1.0 + 0j, -1.0])


def _gate_action(g):
    if g.name == "CNOT":
        return _X
    if g.name == "CZ":
        return _Z
    if g.name == "MCRY":
        return _single_matrix("RY", g.angle)
    return _single_matrix(g.name, g.angle)


def apply_gate(tensor, g, n_qubits):
    """Apply ``g`` to an array of shape ``(2,)*n + rest`` (qubit k on axis n-1-k)."""
    ax = lambda q: n_qubits - 1 - q
    idx = [slice(None)] * tensor.ndim
    for q, pol in g.controls:
        idx[ax(q)] = pol
    idx = tuple(idx)
    sub = tensor[idx]
    pos = ax(g.target) - sum(ax(q) < ax(g.target) for q, _ in g.controls)
    new = np.moveaxis(np.tensordot(_gate_action(g), sub, axes=([1], [pos])), 0, pos)
    out = tensor.copy()
    out[idx] = new
    return out


def simulate(c: Circuit, psi) -> np.ndarray:
    n = c.n_qubits
    t = np.asarray(psi, dtype=complex).reshape((2,) * n)
    for g in c.gates:
        t = apply_gate(t, g, n)
    return t.reshape(-1)


def circuit_unitary(c: Circuit, n_qubits: int | None = None) -> np.ndarray:
    n = c.n_qubits if n_qubits is None else n_qubits
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense unitary capped at {MAX_DENSE_QUBITS} qubits, got {n}")
    if n < c.n_qubits:
        raise ValueError("register smaller than circuit")
    dim = 1 << n
    t = np.eye(dim, dtype=complex).reshape((2,) * n + (dim,))
    for g in c.gates:
        t = apply_gate(t, g, n)
    return t.reshape(dim, dim)


def equivalent_up_to_phase(u, v, tol=PHASE_TOL) -> bool:
    u, v = np.asarray(u), np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"shape mismatch {u.shape} vs {v.shape}")
    k = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(v[k]) == 0:
        return bool(np.max(np.abs(u)) <= tol)
    phase = u[k] / v[k]
    if abs(abs(phase) - 1) > tol:
        return False
    return bool(np.max(np.abs(u - phase * v)) <= tol)


def phase_distance(u, v) -> float:
    """``max |U - e^{i phi} V|`` with ``phi`` from the largest element of V."""
    k = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    phase = u[k] / v[k]
    phase /= abs(phase)
    return float(np.max(np.abs(u - phase * v)))


# -- excitation circuits ------------------------------------------------

def _distinct(*qs):
    if len(set(qs)) != len(qs):
        raise ValueError(f"qubits must be distinct, got {qs}")


def qeb1_circuit(p, q, theta, n_qubits=None) -> Circuit:
    """``exp(theta (Q+_p Q_q - Q+_q Q_p))`` with two CNOTs."""
    _distinct(p, q)
    c = Circuit(n_qubits or max(p, q) + 1)
    h = math.pi / 2
    c.add(rz(p, h), rx(p, h), rx(q, h), cnot(p, q))
    c.add(rx(p, -theta), rz(q, -theta))
    c.add(cnot(p, q), rx(p, -h), rx(q, -h), rz(p, -h))
    return c


def qeb2_circuit(p, q, r, s, theta, n_qubits=None) -> Circuit:
    """``exp(theta kappa^{pq}_{rs})``: CNOT ladder around an Ry with controls (~p, r, s)."""
    _distinct(p, q, r, s)
    c = Circuit(n_qubits or max(p, q, r, s) + 1)
    c.add(cnot(p, r), cnot(q, s), cnot(q, p))
    c.add(mcry(q, [(p, 0), (r, 1), (s, 1)], 2 * theta))
    c.add(cnot(q, p), cnot(q, s), cnot(p, r))
    return c


def sqeb2_circuit(p, q, r, s, theta, n_qubits=None) -> Circuit:
    """``exp(theta tau^{pq}_{rs})``: the QEB layout without the open control on p."""
    _distinct(p, q, r, s)
    c = Circuit(n_qubits or max(p, q, r, s) + 1)
    c.add(cnot(p, r), cnot(q, s), cnot(q, p))
    c.add(mcry(q, [(r, 1), (s, 1)], 2 * theta))
    c.add(cnot(q, p), cnot(q, s), cnot(p, r))
    return c


def _sandwich(ladder, ry_gate, n_qubits):
    n = n_qubits or max(q for g in ladder for q in g.qubits) + 1
    return Circuit(n).add(*ladder, ry_gate, *reversed(ladder))


# (name, CNOT ladder, Ry target, Ry controls); roles are positions in (p, q, r, s)
_QEB2_VARIANTS = [
    ("exchange_pq_rs_target_p", [(0, 1), (2, 3), (0, 2)], 0, [(1, 0), (2, 1), (3, 0)]),
    ("exchange_pq_rs_target_q", [(1, 0), (3, 2), (1, 3)], 1, [(0, 0), (2, 0), (3, 1)]),
    ("all_filled_target_p", [(3, 1), (0, 2), (0, 3)], 0, [(1, 1), (2, 1), (3, 1)]),
    ("open_r_target_p", [(3, 2), (3, 1), (0, 3)], 0, [(1, 1), (2, 0), (3, 1)]),
    ("chain_target_p", [(2, 3), (1, 2), (0, 1)], 0, [(1, 0), (2, 1), (3, 0)]),
]
_SQEB2_VARIANTS = [
    ("s_to_p", [(0, 2), (3, 0), (1, 3)], 1, [(2, 1), (3, 1)]),
    ("q_to_p_first", [(0, 2), (1, 0), (1, 3)], 1, [(2, 1), (3, 1)]),
]


def _variant_builder(ladder, target, controls):
    def build(p, q, r, s, theta, n_qubits=None):
        qs = (p, q, r, s)
        _distinct(*qs)
        gates = [cnot(qs[a], qs[b]) for a, b in ladder]
        rot = mcry(qs[target], [(qs[c], pol) for c, pol in controls], 2 * theta)
        return _sandwich(gates, rot, n_qubits)

    return build


def variant_circuits(kind: str):
    """Alternative layouts realising the same two-body excitation.

    Returns ``(name, builder)`` pairs; ``builder(p, q, r, s, theta, n_qubits=None)``
    gives a circuit equal, up to global phase, to ``exp(theta * generator)``.
    """
    kind = kind.upper()
    if kind == "QEB2":
        return [("ladder_target_q", qeb2_circuit)] + [
            (name, _variant_builder(*layout)) for name, *layout in _QEB2_VARIANTS
        ]
    if kind == "SQEB2":
        return [("ladder_target_q", sqeb2_circuit)] + [
            (name, _variant_builder(*layout)) for name, *layout in _SQEB2_VARIANTS
        ]
    raise ValueError(f"no circuit variants for {kind!r}")


# -- decomposition ------------------------------------------------------

def _gray(k):
    return k ^ (k >> 1)


def _lower_mcry(g: Gate) -> list:
    """MCRY -> single-qubit Ry's interleaved with CZ's in Gray-code order.

    The k-th rotation carries ``angle / 2^m`` with sign
    ``(-1)^popcount(gray(k) & on)``, ``on`` marking the controls that fire on
    ``|1>``; open controls therefore cost nothing extra. The CZ after rotation
    k couples the control whose Gray bit flips next, so the last CZ always
    uses the last listed control.
    """
    t = g.target
    ctrls = [q for q, _ in g.controls]
    on = sum(1 << j for j, (_, pol) in enumerate(g.controls) if pol)
    n = 1 << len(ctrls)
    out = []
    for k in range(n):
        sign = -1 if bin(_gray(k) & on).count("1") % 2 else 1
        flip = (_gray(k) ^ _gray((k + 1) % n)).bit_length() - 1
        out += [ry(t, sign * g.angle / n), cz(t, ctrls[flip])]
    return out


def _commutes_with_cz(g: Gate, a: int, b: int) -> bool:
    pair = {a, b}
    if not pair & set(g.qubits):
        return True
    if g.name == "RZ" or g.name == "CZ":
        return True
    if g.name == "CNOT":
        ctrl = g.controls[0][0]
        return ctrl in pair and g.target not in pair
    return False


def _merge_cz_into_cnot(gates: list) -> list:
    """Absorb ``CZ(a, b)`` into a later ``CNOT`` on the same pair.

    ``CNOT(c->t) . CZ(c, t)`` equals, up to global phase, ``RZ(-pi/2)_c`` and
    ``RZ(pi/2)_t CNOT(c->t) RZ(-pi/2)_t``.
    """
    gates = list(gates)
    i = 0
    while i < len(gates):
        g = gates[i]
        if g.name != "CZ":
            i += 1
            continue
        a, b = g.controls[0][0], g.target
        for j in range(i + 1, len(gates)):
            h = gates[j]
            if h.name == "CNOT" and {h.target, h.controls[0][0]} == {a, b}:
                c, t = h.controls[0][0], h.target
                merged = [rz(t, -math.pi / 2), h, rz(t, math.pi / 2), rz(c, -math.pi / 2)]
                gates[j : j + 1] = merged
                del gates[i]
                break
            if not _commutes_with_cz(h, a, b):
                i += 1
                break
        else:
            i += 1
    return gates


def _lower_cz(gates: list) -> list:
    out = []
    for g in gates:
        if g.name == "CZ":
            a, b = g.controls[0][0], g.target
            out += [ry(b, math.pi / 2), cnot(a, b), ry(b, -math.pi / 2)]
        else:
            out.append(g)
    return out


def _cleanup(gates: list, n_qubits: int) -> list:
    """Fuse adjacent same-axis rotations per qubit and drop trivial ones."""
    out: list = []
    last = {}
    for g in gates:
        if g.name in ROTATIONS:
            j = last.get(g.target)
            if j is not None and out[j] is not None and out[j].name == g.name:
                out[j] = Gate(g.name, g.target, (), out[j].angle + g.angle)
                continue
            out.append(g)
            last[g.target] = len(out) - 1
        else:
            out.append(g)
            for q in g.qubits:
                last[q] = None
    two_pi = 2 * math.pi
    keep = []
    for g in out:
        if g.name in ROTATIONS:
            r = math.remainder(g.angle, two_pi)
            if abs(r) < 1e-14:
                continue
        keep.append(g)
    return keep


def _finish(gates, n_qubits):
    return _cleanup(_lower_cz(_merge_cz_into_cnot(gates)), n_qubits)


def decompose(c: Circuit) -> Circuit:
    """Lower every MCRY to CNOT and single-qubit rotations.

    For each MCRY the control order (which fixes the Gray-code walk) is the
    one giving the fewest CNOTs after merging; ties keep the listed order.
    """
    gates = list(c.gates)
    i = 0
    while i < len(gates):
        g = gates[i]
        if g.name != "MCRY":
            i += 1
            continue
        best = None
        for order in itertools.permutations(g.controls):
            trial = _lower_mcry(Gate("MCRY", g.target, order, g.angle))
            full = gates[:i] + trial + gates[i + 1 :]
            lowered = Circuit(c.n_qubits, [h for h in _finish(full, c.n_qubits) if h.name != "MCRY"])
            score = (lowered.cnot_count, lowered.cnot_depth)
            if best is None or score < best[0]:
                best = (score, trial)
        gates[i : i + 1] = best[1]
        i += len(best[1])
    return Circuit(c.n_qubits, _finish(gates, c.n_qubits))


def element_circuit(op, theta, n_qubits) -> Circuit:
    """Decomposed circuit of one pool element (QEB1, QEB2, SQEB2 only)."""
    kind, idx = op.kind, op.indices
    if kind == "QEB1":
        return decompose(qeb1_circuit(*idx, theta, n_qubits=n_qubits))
    if kind == "QEB2":
        return decompose(qeb2_circuit(*idx, theta, n_qubits=n_qubits))
    if kind == "SQEB2":
        return decompose(sqeb2_circuit(*idx, theta, n_qubits=n_qubits))
    raise ValueError(f"no gate-level circuit for {kind} (cost formula only)")


def ansatz_to_circuit(ansatz, n_qubits) -> Circuit:
    c = Circuit(n_qubits)
    for op, theta in ansatz.elements:
        c += element_circuit(op, theta, n_qubits)
    return c


# -- QASM ---------------------------------------------------------------

def export_qasm(c: Circuit) -> str:
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{c.n_qubits}];"]
    for g in c.gates:
        if g.name == "CNOT":
            lines.append(f"cx q[{g.controls[0][0]}],q[{g.target}];")
        elif g.name in ROTATIONS:
            lines.append(f"{g.name.lower()}({g.angle:.17g}) q[{g.target}];")
        else:
            raise ValueError(f"gate {g.name} has no QASM export; decompose first")
    return "\n".join(lines) + "\n"


_QASM_GATE = re.compile(r"^(cx|rx|ry|rz)\s*(?:\(([^)]*)\))?\s*(.+);$")


def read_qasm(text: str) -> Circuit:
    """Reader for the subset written by :func:`export_qasm`."""
    n = None
    gates = []
    for raw in text.splitlines():
        line = raw.split("//")[0].strip()
        if not line or line.startswith(("OPENQASM", "include")):
            continue
        m = re.match(r"qreg\s+\w+\[(\d+)\];", line)
        if m:
            n = int(m.group(1))
            continue
        m = _QASM_GATE.match(line)
        if not m:
            raise ValueError(f"unsupported QASM statement: {line!r}")
        name, arg, qargs = m.groups()
        qs = [int(v) for v in re.findall(r"\[(\d+)\]", qargs)]
        if name == "cx":
            gates.append(cnot(qs[0], qs[1]))
        else:
            gates.append(Gate(name.upper(), qs[0], (), float(arg)))
    if n is None:
        raise ValueError("QASM text declares no qreg")
    return Circuit(n, gates)
