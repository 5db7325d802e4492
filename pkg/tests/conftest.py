import functools
import itertools

import numpy as np
import pytest

from adapt_forge.datasets import fixture_info, load_fixture
from adapt_forge.integrals import molecular_qubit_hamiltonian


@functools.lru_cache(maxsize=None)
def molecule(name):
    ints = load_fixture(name)
    return ints, molecular_qubit_hamiltonian(ints), fixture_info(name)


@pytest.fixture(scope="session")
def h2():
    return molecule("h2_0.74")


@pytest.fixture(scope="session")
def h4():
    return molecule("h4_1.0")


@pytest.fixture(scope="session")
def lih():
    return molecule("lih_1.5")


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return v / np.linalg.norm(v)


def kron_ladder(n):
    """Dense annihilators built directly with Kronecker products (qubit 0 least significant)."""
    lower = np.array([[0, 1], [0, 0]], dtype=complex)
    z = np.diag([1.0 + 0j, -1.0])
    eye = np.eye(2, dtype=complex)
    ops = []
    for j in range(n):
        factors = [z] * j + [lower] + [eye] * (n - j - 1)
        m = np.array([[1.0 + 0j]])
        for f in factors:
            m = np.kron(f, m)
        ops.append(m)
    return ops


def dense_molecular_hamiltonian(ints):
    """Independent dense build from chemists' integrals (pq|rs)."""
    n = ints.n_qubits
    a = kron_ladder(n)
    ad = [m.conj().T for m in a]
    H = ints.e_core * np.eye(1 << n, dtype=complex)
    no = ints.norb
    for p, q in itertools.product(range(no), repeat=2):
        for s in (0, 1):
            H += ints.one_body[p, q] * ad[2 * p + s] @ a[2 * q + s]
    for p, q, r, s in itertools.product(range(no), repeat=4):
        v = ints.two_body[p, q, r, s]
        if v == 0:
            continue
        for sig, tau in itertools.product((0, 1), repeat=2):
            H += 0.5 * v * ad[2 * p + sig] @ ad[2 * r + tau] @ a[2 * s + tau] @ a[2 * q + sig]
    return H


ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def record():
    """``record(number, name, ok, detail)`` logs one acceptance line and returns ``ok``."""

    def _record(number, name, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {name} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
