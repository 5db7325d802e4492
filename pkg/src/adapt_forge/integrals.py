"""FCIDUMP parsing and second-quantized molecular Hamiltonians.

Spatial orbital ``p`` maps to spin-orbitals ``2p`` (alpha) and ``2p + 1``
(beta). Two-electron integrals are kept in chemists' notation ``(pq|rs)``
exactly as the file stores them.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

INTEGRAL_TOL = 1e-12
DUPLICATE_TOL = 1e-10


class FCIDumpError(ValueError):
    """Malformed FCIDUMP content."""


@dataclass(frozen=True)
class MolecularIntegrals:
    norb: int
    nelec: int
    ms2: int
    e_core: float
    one_body: np.ndarray
    two_body: np.ndarray

    def __post_init__(self):
        if not 0 < self.nelec <= 2 * self.norb:
            raise ValueError(f"nelec={self.nelec} incompatible with norb={self.norb}")
        if self.one_body.shape != (self.norb,) * 2 or self.two_body.shape != (self.norb,) * 4:
            raise ValueError("integral array shapes do not match norb")

    @property
    def n_qubits(self) -> int:
        return 2 * self.norb

    @property
    def hf_occupation(self) -> list:
        """Lowest ``nelec`` spin-orbitals (aufbau on the HF orbitals)."""
        n_alpha = (self.nelec + self.ms2) // 2
        n_beta = self.nelec - n_alpha
        return sorted([2 * p for p in range(n_alpha)] + [2 * p + 1 for p in range(n_beta)])


def _two_body_slots(i, j, k, l):
    return {
        (i, j, k, l), (j, i, k, l), (i, j, l, k), (j, i, l, k),
        (k, l, i, j), (l, k, i, j), (k, l, j, i), (l, k, j, i),
    }


def _parse_header(header: str) -> dict:
    fields = {}
    body = re.sub(r"^\s*&FCI", "", header, flags=re.IGNORECASE)
    for m in re.finditer(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([^=]*?)(?=,?\s*[A-Za-z_][A-Za-z0-9_]*\s*=|$)", body, re.S):
        fields[m.group(1).upper()] = m.group(2).strip().rstrip(",")
    return fields


def parse_fcidump(text: str) -> MolecularIntegrals:
    """Parse FCIDUMP text (1-based indices in the file, 0-based afterwards)."""
    lines = text.splitlines()
    header_lines, body_start = [], None
    for n, line in enumerate(lines):
        stripped = line.strip()
        if re.match(r"^(&END|/)\s*$", stripped, re.IGNORECASE):
            body_start = n + 1
            break
        m = re.search(r"(&END|/)\s*$", stripped, re.IGNORECASE)
        header_lines.append(stripped[: m.start()] if m else stripped)
        if m:
            body_start = n + 1
            break
    if body_start is None:
        raise FCIDumpError("namelist header is not terminated by &END or /")
    fields = _parse_header(" ".join(header_lines))
    missing = [k for k in ("NORB", "NELEC", "MS2") if k not in fields]
    if missing:
        raise FCIDumpError(f"header lacks required keys: {', '.join(missing)}")
    try:
        norb, nelec, ms2 = (int(fields[k].split(",")[0]) for k in ("NORB", "NELEC", "MS2"))
    except ValueError as exc:
        raise FCIDumpError(f"non-integer header value: {exc}") from None

    h1 = np.zeros((norb, norb))
    h2 = np.zeros((norb,) * 4)
    seen1, seen2 = {}, {}
    e_core = None

    def store(table, slots, value, where):
        for slot in slots:
            prev = table.get(slot)
            if prev is not None and abs(prev - value) > DUPLICATE_TOL:
                raise FCIDumpError(f"conflicting values for {where}: {prev!r} vs {value!r}")
            table[slot] = value

    for n, line in enumerate(lines[body_start:], start=body_start + 1):
        parts = line.split()
        if not parts:
            continue
        if len(parts) != 5:
            raise FCIDumpError(f"line {n}: expected 'value i j k l', got {line!r}")
        value = float(parts[0].replace("D", "E").replace("d", "e"))
        idx = [int(p) for p in parts[1:]]
        if any(not 0 <= v <= norb for v in idx):
            raise IndexError(f"line {n}: index out of range [0, {norb}] in {idx}")
        i, j, k, l = idx
        if i == j == k == l == 0:
            if e_core is not None and abs(e_core - value) > DUPLICATE_TOL:
                raise FCIDumpError(f"conflicting core energies {e_core!r} vs {value!r}")
            e_core = value
        elif k == l == 0:
            if i == 0 or j == 0:
                # orbital energies (i 0 0 0) carry no Hamiltonian information
                continue
            store(seen1, {(i - 1, j - 1), (j - 1, i - 1)}, value, f"h[{i},{j}]")
        else:
            if 0 in idx:
                raise FCIDumpError(f"line {n}: malformed two-electron indices {idx}")
            store(seen2, _two_body_slots(i - 1, j - 1, k - 1, l - 1), value, f"({i}{j}|{k}{l})")

    for (p, q), v in seen1.items():
        h1[p, q] = v
    for slot, v in seen2.items():
        h2[slot] = v
    return MolecularIntegrals(norb, nelec, ms2, float(e_core or 0.0), h1, h2)


def read_fcidump(path) -> MolecularIntegrals:
    return parse_fcidump(Path(path).read_text())


def write_fcidump(ints: MolecularIntegrals, tol=INTEGRAL_TOL) -> str:
    """Serialize with unique 8-fold representatives (1-based)."""
    out = [f" &FCI NORB={ints.norb},NELEC={ints.nelec},MS2={ints.ms2},", " &END"]
    n = ints.norb
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if (i, j, k, l) != min(_two_body_slots(i, j, k, l)):
            continue
        v = ints.two_body[i, j, k, l]
        if abs(v) > tol:
            out.append(f"{float(v)!r} {i + 1} {j + 1} {k + 1} {l + 1}")
    for i in range(n):
        for j in range(i + 1):
            v = ints.one_body[i, j]
            if abs(v) > tol:
                out.append(f"{float(v)!r} {i + 1} {j + 1} 0 0")
    out.append(f"{float(ints.e_core)!r} 0 0 0 0")
    return "\n".join(out) + "\n"


class FermionOperator:
    """Sum of products of ladder operators.

    Keys are tuples of ``(spin_orbital, is_creation)`` pairs read left to
    right; values are complex coefficients. The empty tuple is the identity.
    """

    def __init__(self, terms=None):
        self.terms = {}
        for k, v in dict(terms or {}).items():
            k = tuple((int(i), int(bool(d))) for i, d in k)
            self.terms[k] = self.terms.get(k, 0) + complex(v)

    @classmethod
    def identity(cls, coeff=1.0):
        return cls({(): coeff})

    def __add__(self, other):
        out = FermionOperator(self.terms)
        for k, v in other.terms.items():
            out.terms[k] = out.terms.get(k, 0) + v
        return out

    def __sub__(self, other):
        return self + other * -1

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return FermionOperator({k: v * other for k, v in self.terms.items()})
        out = FermionOperator()
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                k = k1 + k2
                out.terms[k] = out.terms.get(k, 0) + v1 * v2
        return out

    __rmul__ = __mul__

    def adjoint(self):
        return FermionOperator(
            {tuple((i, 1 - d) for i, d in reversed(k)): np.conj(v) for k, v in self.terms.items()}
        )

    def normal_ordered(self, tol=1e-14):
        """Creation operators left, each block sorted by descending index."""
        out: dict = {}
        stack = [(k, v) for k, v in self.terms.items()]
        while stack:
            term, coeff = stack.pop()
            term = list(term)
            done = False
            while not done:
                done = True
                for j in range(len(term) - 1):
                    (i1, d1), (i2, d2) = term[j], term[j + 1]
                    if d1 == d2 and i1 == i2:
                        coeff = 0
                        break
                    if (d1, i1) < (d2, i2):
                        if d1 == 0 and d2 == 1 and i1 == i2:
                            stack.append((tuple(term[:j] + term[j + 2:]), coeff))
                        term[j], term[j + 1] = term[j + 1], term[j]
                        coeff = -coeff
                        done = False
                if coeff == 0:
                    break
            if coeff != 0:
                key = tuple(term)
                out[key] = out.get(key, 0) + coeff
        return FermionOperator({k: v for k, v in out.items() if abs(v) > tol})

    def is_hermitian(self, tol=1e-12):
        diff = (self - self.adjoint()).normal_ordered()
        return all(abs(v) <= tol for v in diff.terms.values())

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"FermionOperator(n_terms={len(self.terms)})"


def build_fermionic_hamiltonian(ints: MolecularIntegrals, tol=INTEGRAL_TOL) -> FermionOperator:
    """``E_core + sum h_pq a+_p a_q + 1/2 sum h_pqrs a+_p a+_q a_r a_s`` over spin-orbitals.

    The physicists'-order coefficient is ``h_pqrs = (ps|qr)`` with spin
    conservation ``sigma_p = sigma_s`` and ``sigma_q = sigma_r``.
    """
    terms = {}
    if abs(ints.e_core) > tol:
        terms[()] = ints.e_core
    n = ints.norb
    for p, q in itertools.product(range(n), repeat=2):
        v = ints.one_body[p, q]
        if abs(v) > tol:
            for s in (0, 1):
                terms[((2 * p + s, 1), (2 * q + s, 0))] = v
    for p, q, r, s in itertools.product(range(n), repeat=4):
        v = ints.two_body[p, s, q, r]
        if abs(v) <= tol:
            continue
        for a, b in itertools.product((0, 1), repeat=2):
            P, Q, R, S = 2 * p + a, 2 * q + b, 2 * r + b, 2 * s + a
            if P == Q or R == S:
                continue
            terms[((P, 1), (Q, 1), (R, 0), (S, 0))] = 0.5 * v
    return FermionOperator(terms)


def molecular_qubit_hamiltonian(ints: MolecularIntegrals):
    """Convenience: JW image of :func:`build_fermionic_hamiltonian`."""
    from .pauli import jordan_wigner

    return jordan_wigner(build_fermionic_hamiltonian(ints), ints.n_qubits)
