"""Exact statevector engine.

States are plain complex numpy vectors of length ``2**n``; bit ``i`` of a
basis index is the occupation of qubit ``i`` (qubit 0 least significant).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .pauli import QubitOperator, _I_POW, _popcount

IMAG_TOL = 1e-10


def n_qubits_of(psi) -> int:
    n = int(len(psi)).bit_length() - 1
    if len(psi) != 1 << n:
        raise ValueError(f"state length {len(psi)} is not a power of two")
    return n


def reference_state(n_qubits: int, occupied=()) -> np.ndarray:
    occupied = list(occupied)
    if any(not 0 <= i < n_qubits for i in occupied):
        raise ValueError(f"occupied index out of range for {n_qubits} qubits: {occupied}")
    psi = np.zeros(1 << n_qubits, dtype=complex)
    psi[sum(1 << i for i in set(occupied))] = 1.0
    return psi


def basis_index(occupied) -> int:
    return sum(1 << i for i in set(occupied))


def _check_dim(n_qubits, psi):
    if np.shape(psi)[0] != 1 << n_qubits:
        raise ValueError(f"dimension mismatch: operator on {n_qubits} qubits, state of length {len(psi)}")


def apply_operator(op: QubitOperator, psi) -> np.ndarray:
    """``sum_mu c_mu P_mu |psi>`` evaluated one Pauli term at a time."""
    psi = np.asarray(psi, dtype=complex)
    _check_dim(op.n_qubits, psi)
    basis = np.arange(len(psi), dtype=np.uint64)
    out = np.zeros_like(psi)
    for x, z, c in zip(op.x, op.z, op.coeffs):
        phase = c * _I_POW[int(_popcount(x & z)) % 4]
        sign = 1 - 2 * (_popcount(basis & z) & 1)
        out[(basis ^ x).astype(np.int64)] += phase * sign * psi
    return out


def act(op, psi) -> np.ndarray:
    """Fast action of a QubitOperator (cached sparse matrix) or any object with ``apply``."""
    if isinstance(op, QubitOperator):
        _check_dim(op.n_qubits, psi)
        return op.sparse @ psi
    if hasattr(op, "generator"):
        return act(op.generator, psi)
    return op.apply(psi)


def apply_exponential(tau, theta: float, psi) -> np.ndarray:
    """``exp(theta tau)|psi>`` for generators with ``tau^3 = -tau``.

    Uses ``1 + sin(theta) tau + (1 - cos(theta)) tau^2``: two applications of tau.
    """
    t1 = act(tau, psi)
    t2 = act(tau, t1)
    return psi + np.sin(theta) * t1 + (1.0 - np.cos(theta)) * t2


def expectation(op, psi) -> float:
    val = np.vdot(psi, act(op, psi))
    if abs(val.imag) > IMAG_TOL * max(1.0, abs(val.real)):
        raise ValueError(f"non-real expectation {val}: operator is not Hermitian")
    return float(val.real)


def overlap(psi_a, psi_b) -> complex:
    if len(psi_a) != len(psi_b):
        raise ValueError("dimension mismatch in overlap")
    return complex(np.vdot(psi_a, psi_b))


@dataclass
class Ansatz:
    """Ordered product ``U = prod_k exp(theta_k tau_k)``; element 0 acts first."""

    operators: list = field(default_factory=list)
    parameters: list = field(default_factory=list)

    def __post_init__(self):
        if len(self.operators) != len(self.parameters):
            raise ValueError("one parameter per operator is required")
        self.parameters = [float(t) for t in self.parameters]

    def __len__(self):
        return len(self.operators)

    @property
    def elements(self):
        return list(zip(self.operators, self.parameters))

    def append(self, op, theta=0.0):
        return Ansatz(self.operators + [op], self.parameters + [float(theta)])

    def with_parameters(self, thetas):
        return Ansatz(list(self.operators), list(np.asarray(thetas, dtype=float)))

    def prepare(self, psi0, thetas=None) -> np.ndarray:
        thetas = self.parameters if thetas is None else thetas
        psi = np.asarray(psi0, dtype=complex)
        for op, th in zip(self.operators, thetas):
            psi = apply_exponential(op, th, psi)
        return psi


def ansatz_energy_and_gradient(ansatz: Ansatz, objective, psi0, thetas=None):
    """Objective value and its exact gradient by one forward and one reverse sweep."""
    thetas = np.asarray(ansatz.parameters if thetas is None else thetas, dtype=float)
    psi = ansatz.prepare(psi0, thetas)
    lam = act(objective, psi)
    energy = np.vdot(psi, lam)
    if abs(energy.imag) > IMAG_TOL * max(1.0, abs(energy.real)):
        raise ValueError(f"non-real objective value {energy}")
    grad = np.zeros(len(thetas))
    # psi and lambda travel backwards together as two columns
    both = np.column_stack([psi, lam])
    for k in range(len(thetas) - 1, -1, -1):
        op = ansatz.operators[k]
        t1 = act(op, both)
        grad[k] = 2.0 * np.vdot(both[:, 1], t1[:, 0]).real
        if k:
            both = both - np.sin(thetas[k]) * t1 + (1.0 - np.cos(thetas[k])) * act(op, t1)
    return float(energy.real), grad


def dump_amplitudes(psi, path) -> None:
    """Little-endian (re, im) float64 pairs in basis-index order."""
    Path(path).write_bytes(np.asarray(psi, dtype="<c16").tobytes())


def load_amplitudes(path) -> np.ndarray:
    psi = np.frombuffer(Path(path).read_bytes(), dtype="<c16").astype(complex)
    n_qubits_of(psi)
    return psi
