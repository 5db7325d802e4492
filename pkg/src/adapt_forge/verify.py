"""Structural self-checks: circuit equivalences, the sQEB combination identity, basis-state actions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from . import circuits as C
from .pools import PoolOperator, build_generator, cnot_cost
from .statevector import apply_exponential, reference_state

ANGLES = (0.0, 0.3, -1.1, 2.4, math.pi / 2)
QUARTETS = ((0, 1, 2, 3), (2, 0, 3, 1), (3, 1, 0, 2))


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str = ""


def _dense(build, kind, idx, n, theta):
    return expm(theta * build(kind, idx, n).to_dense())


def _equiv(build, kind, circuit_fn, n=4):
    worst = 0.0
    for idx in QUARTETS if kind != "QEB1" else ((0, 1), (2, 0), (1, 3)):
        for t in ANGLES:
            u = C.circuit_unitary(C.decompose(circuit_fn(*idx, t, n_qubits=n)))
            worst = max(worst, C.phase_distance(u, _dense(build, kind, idx, n, t)))
    return worst <= C.PHASE_TOL, f"max deviation {worst:.2e}"


def _variants(build, kind):
    worst = 0.0
    for idx in QUARTETS:
        for t in ANGLES[1:3]:
            ref = _dense(build, kind, idx, 4, t)
            for _, fn in C.variant_circuits(kind):
                worst = max(worst, C.phase_distance(C.circuit_unitary(fn(*idx, t, n_qubits=4)), ref))
    return worst <= C.PHASE_TOL, f"max deviation {worst:.2e}"


def _combination(build):
    worst = 0.0
    for p, q, r, s in QUARTETS:
        for t in ANGLES:
            lhs = _dense(build, "SQEB2", (p, q, r, s), 4, t / 2) @ _dense(build, "SQEB2", (q, p, s, r), 4, t / 2)
            worst = max(worst, float(np.max(np.abs(lhs - _dense(build, "QEB2", (p, q, r, s), 4, t)))))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


# (occupied roles, result roles, sign): U|in> = cos|in> + sign sin|out>
_TABLE = {
    "QEB2": [((2, 3), (0, 1), 1), ((0, 1), (2, 3), -1)],
    "SQEB2": [((2, 3), (0, 1), 1), ((0, 1), (2, 3), -1), ((0, 3), (1, 2), 1), ((1, 2), (0, 3), -1)],
}


def _table(build, kind):
    idx = (0, 1, 2, 3)
    op = PoolOperator(kind, idx, build(kind, idx, 4), cnot_cost(kind, idx))
    moved = {tuple(sorted(i)) for row in _TABLE[kind] for i in row[:1]}
    worst = 0.0
    for t in ANGLES:
        c, s = math.cos(t), math.sin(t)
        for src, dst, sign in _TABLE[kind]:
            want = c * reference_state(4, src) + sign * s * reference_state(4, dst)
            worst = max(worst, float(np.max(np.abs(apply_exponential(op, t, reference_state(4, src)) - want))))
        for b in range(16):
            occ = tuple(i for i in range(4) if b >> i & 1)
            if occ in moved:
                continue
            psi = reference_state(4, occ)
            worst = max(worst, float(np.max(np.abs(apply_exponential(op, t, psi) - psi))))
    return worst <= 1e-12, f"max amplitude error {worst:.2e}"


def _counts():
    s = C.decompose(C.sqeb2_circuit(0, 1, 2, 3, 0.4))
    return s.cnot_count == 9, f"cnot_count={s.cnot_count}"


def _depth():
    s = C.decompose(C.sqeb2_circuit(0, 1, 2, 3, 0.4))
    return s.cnot_depth == 7, f"cnot_depth={s.cnot_depth}"


def _qeb2_count():
    s = C.decompose(C.qeb2_circuit(0, 1, 2, 3, 0.4))
    return s.cnot_count == 13, f"cnot_count={s.cnot_count}"


def _qeb1_count():
    s = C.decompose(C.qeb1_circuit(0, 1, 0.4))
    return s.cnot_count == 2, f"cnot_count={s.cnot_count}"


def run_checks(build=build_generator) -> list:
    """All checks; ``build`` replaces the generator constructor (mutation testing)."""
    checks = [
        ("sqeb2 CNOT count == 9", _counts),
        ("sqeb2 CNOT depth == 7", _depth),
        ("qeb2 CNOT count == 13", _qeb2_count),
        ("qeb1 CNOT count == 2", _qeb1_count),
        ("qeb1 circuit == exp(theta QEB1)", lambda: _equiv(build, "QEB1", C.qeb1_circuit)),
        ("qeb2 circuit == exp(theta kappa)", lambda: _equiv(build, "QEB2", C.qeb2_circuit)),
        ("sqeb2 circuit == exp(theta tau)", lambda: _equiv(build, "SQEB2", C.sqeb2_circuit)),
        ("qeb2 variants equivalent", lambda: _variants(build, "QEB2")),
        ("sqeb2 variants equivalent", lambda: _variants(build, "SQEB2")),
        ("combination identity", lambda: _combination(build)),
        ("qeb2 basis-state table", lambda: _table(build, "QEB2")),
        ("sqeb2 basis-state table", lambda: _table(build, "SQEB2")),
    ]
    out = []
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail))
    return out
