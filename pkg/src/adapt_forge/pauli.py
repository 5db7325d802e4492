"""Pauli-string algebra, Jordan-Wigner mapping and spin/number operators.

A Pauli string on ``n`` qubits is stored as two bit masks ``(x, z)``:
bit ``k`` of ``x`` (``z``) is set when the letter on qubit ``k`` carries an
X (Z) component, so ``Y = i X Z`` has both bits set. Operators are
immutable, numpy-backed sums of such strings.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.sparse as sp

SIMPLIFY_TOL = 1e-14
MAX_QUBITS = 32

_LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_BITS_LETTER = {v: k for k, v in _LETTER_BITS.items()}


@dataclass(frozen=True)
class PauliString:
    n_qubits: int
    x: int = 0
    z: int = 0

    @classmethod
    def from_letters(cls, letters: str) -> "PauliString":
        """Build from a per-qubit string such as ``"XIZY"`` (qubit 0 first)."""
        x = z = 0
        for k, ch in enumerate(letters.upper()):
            bx, bz = _LETTER_BITS[ch]
            x |= bx << k
            z |= bz << k
        return cls(len(letters), x, z)

    @classmethod
    def from_label(cls, label: str, n_qubits: int) -> "PauliString":
        """Parse the sparse form used in text dumps, e.g. ``"X0 Y3 Z5"``."""
        x = z = 0
        for tok in label.split():
            if tok == "I":
                continue
            ch, q = tok[0].upper(), int(tok[1:])
            if not 0 <= q < n_qubits:
                raise ValueError(f"qubit {q} out of range for {n_qubits} qubits")
            bx, bz = _LETTER_BITS[ch]
            x |= bx << q
            z |= bz << q
        return cls(n_qubits, x, z)

    @property
    def letters(self) -> str:
        return "".join(
            _BITS_LETTER[((self.x >> k) & 1, (self.z >> k) & 1)] for k in range(self.n_qubits)
        )

    @property
    def is_identity(self) -> bool:
        return self.x == 0 and self.z == 0

    def label(self) -> str:
        parts = [f"{ch}{k}" for k, ch in enumerate(self.letters) if ch != "I"]
        return " ".join(parts) if parts else "I"

    def __str__(self) -> str:
        return self.label()


def _popcount(a):
    return np.bitwise_count(np.asarray(a, dtype=np.uint64)).astype(np.int64)


def _product_phase(x1, z1, x2, z2):
    """Power of ``i`` picked up when multiplying string 1 by string 2 (arrays)."""
    X1, Y1, Z1 = x1 & ~z1, x1 & z1, ~x1 & z1
    X2, Y2, Z2 = x2 & ~z2, x2 & z2, ~x2 & z2
    plus = _popcount((X1 & Y2) | (Y1 & Z2) | (Z1 & X2))
    minus = _popcount((Y1 & X2) | (Z1 & Y2) | (X1 & Z2))
    return (plus - minus) % 4


_I_POW = np.array([1, 1j, -1, -1j])


class QubitOperator:
    """Weighted sum of Pauli strings, ``sum_mu c_mu P_mu``.

    Instances are treated as immutable. Construction merges duplicate strings
    and drops coefficients with magnitude below ``tol``.
    """

    def __init__(self, n_qubits, x=(), z=(), coeffs=(), tol=SIMPLIFY_TOL):
        if not 0 < n_qubits <= MAX_QUBITS:
            raise ValueError(f"n_qubits must be in 1..{MAX_QUBITS}, got {n_qubits}")
        x = np.asarray(x, dtype=np.uint64).ravel()
        z = np.asarray(z, dtype=np.uint64).ravel()
        coeffs = np.asarray(coeffs, dtype=complex).ravel()
        if not (len(x) == len(z) == len(coeffs)):
            raise ValueError("x, z and coeffs must have equal length")
        if len(x):
            keys = (x << np.uint64(32)) | z
            uniq, inv = np.unique(keys, return_inverse=True)
            summed = np.bincount(inv, weights=coeffs.real, minlength=len(uniq)) + 1j * np.bincount(
                inv, weights=coeffs.imag, minlength=len(uniq)
            )
            keep = np.abs(summed) > tol
            uniq, summed = uniq[keep], summed[keep]
            x, z, coeffs = uniq >> np.uint64(32), uniq & np.uint64(0xFFFFFFFF), summed
        self.n_qubits = n_qubits
        self.x, self.z, self.coeffs = x, z, coeffs
        for arr in (self.x, self.z, self.coeffs):
            arr.flags.writeable = False

    # -- construction -------------------------------------------------
    @classmethod
    def zero(cls, n_qubits):
        return cls(n_qubits)

    @classmethod
    def identity(cls, n_qubits, coeff=1.0):
        return cls(n_qubits, [0], [0], [coeff])

    @classmethod
    def from_terms(cls, n_qubits, terms, tol=SIMPLIFY_TOL):
        """``terms`` maps PauliString or letter/label strings to coefficients."""
        xs, zs, cs = [], [], []
        for key, c in dict(terms).items():
            if isinstance(key, str):
                key = (
                    PauliString.from_letters(key)
                    if len(key) == n_qubits and set(key.upper()) <= set("IXYZ")
                    else PauliString.from_label(key, n_qubits)
                )
            if key.n_qubits != n_qubits:
                raise ValueError("Pauli string size does not match operator")
            xs.append(key.x)
            zs.append(key.z)
            cs.append(c)
        return cls(n_qubits, xs, zs, cs, tol=tol)

    @classmethod
    def single(cls, label, n_qubits, coeff=1.0):
        return cls.from_terms(n_qubits, {label: coeff})

    # -- inspection ---------------------------------------------------
    def __len__(self):
        return len(self.coeffs)

    @property
    def terms(self) -> dict:
        return {
            PauliString(self.n_qubits, int(a), int(b)): complex(c)
            for a, b, c in zip(self.x, self.z, self.coeffs)
        }

    @property
    def keys(self) -> np.ndarray:
        """Packed uint64 keys ``x << 32 | z``, sorted and unique."""
        return (self.x << np.uint64(32)) | self.z

    def support(self) -> set:
        return set(self.terms)

    def is_zero(self, tol=1e-12):
        return not len(self) or float(np.max(np.abs(self.coeffs))) <= tol

    def is_hermitian(self, tol=1e-12):
        return bool(np.all(np.abs(self.coeffs.imag) <= tol))

    def is_antihermitian(self, tol=1e-12):
        return bool(np.all(np.abs(self.coeffs.real) <= tol))

    def coefficient(self, pauli) -> complex:
        if isinstance(pauli, str):
            pauli = PauliString.from_label(pauli, self.n_qubits)
        hit = (self.x == pauli.x) & (self.z == pauli.z)
        return complex(self.coeffs[hit][0]) if hit.any() else 0j

    # -- algebra ------------------------------------------------------
    def _check(self, other):
        if not isinstance(other, QubitOperator):
            return NotImplemented
        if other.n_qubits != self.n_qubits:
            raise ValueError(f"qubit-count mismatch: {self.n_qubits} vs {other.n_qubits}")
        return other

    def __add__(self, other):
        if isinstance(other, (int, float, complex)):
            other = QubitOperator.identity(self.n_qubits, other)
        if self._check(other) is NotImplemented:
            return NotImplemented
        return QubitOperator(
            self.n_qubits,
            np.concatenate([self.x, other.x]),
            np.concatenate([self.z, other.z]),
            np.concatenate([self.coeffs, other.coeffs]),
        )

    __radd__ = __add__

    def __neg__(self):
        return QubitOperator(self.n_qubits, self.x, self.z, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return QubitOperator(self.n_qubits, self.x, self.z, self.coeffs * other)
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, float, complex, np.number)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        return self * (1.0 / other)

    def adjoint(self):
        return QubitOperator(self.n_qubits, self.x, self.z, self.coeffs.conj())

    def simplify(self, tol=SIMPLIFY_TOL):
        return QubitOperator(self.n_qubits, self.x, self.z, self.coeffs, tol=tol)

    def allclose(self, other, atol=1e-12):
        diff = self - other
        return diff.is_zero(atol)

    def __eq__(self, other):
        if not isinstance(other, QubitOperator) or other.n_qubits != self.n_qubits:
            return NotImplemented
        return self.allclose(other, 0.0)

    __hash__ = None

    # -- matrices -----------------------------------------------------
    def _columns(self):
        """Group terms by X mask; yields ``(xmask, diag)`` with
        ``(P psi)[b ^ xmask] = diag[b] * psi[b]`` summed over the group."""
        dim = 1 << self.n_qubits
        basis = np.arange(dim, dtype=np.uint64)
        order = np.argsort(self.x, kind="stable")
        xs, zs, cs = self.x[order], self.z[order], self.coeffs[order]
        bounds = np.flatnonzero(np.diff(xs)) + 1
        for lo, hi in zip(np.r_[0, bounds], np.r_[bounds, len(xs)]):
            xm = xs[lo]
            diag = np.zeros(dim, dtype=complex)
            for zm, c in zip(zs[lo:hi], cs[lo:hi]):
                phase = _I_POW[int(_popcount(xm & zm)) % 4]
                sign = 1 - 2 * (_popcount(basis & zm) & 1)
                diag += (c * phase) * sign
            yield int(xm), diag

    @cached_property
    def sparse(self) -> sp.csr_matrix:
        """Cached CSR matrix in the qubit-0-least-significant basis."""
        dim = 1 << self.n_qubits
        if not len(self):
            return sp.csr_matrix((dim, dim), dtype=complex)
        basis = np.arange(dim, dtype=np.int64)
        rows, cols, vals = [], [], []
        for xm, diag in self._columns():
            nz = np.abs(diag) > 0
            rows.append((basis ^ xm)[nz])
            cols.append(basis[nz])
            vals.append(diag[nz])
        mat = sp.csr_matrix(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(dim, dim)
        )
        mat.sum_duplicates()
        return mat

    def to_sparse(self):
        return self.sparse

    def to_dense(self):
        return self.sparse.toarray()

    # -- text ---------------------------------------------------------
    def __str__(self):
        lines = []
        for p, c in self.terms.items():
            lines.append(f"({c.real:+.12g}{c.imag:+.12g}j) * {p.label()}")
        return "\n".join(lines) if lines else "0"

    def __repr__(self):
        return f"QubitOperator(n_qubits={self.n_qubits}, n_terms={len(self)})"

    @classmethod
    def parse(cls, text, n_qubits):
        """Inverse of ``str()``: one ``coeff * X0 Y3`` record per line."""
        xs, zs, cs = [], [], []
        for line in text.strip().splitlines():
            line = line.strip()
            if not line or line == "0":
                continue
            coeff, label = line.split("*", 1)
            p = PauliString.from_label(label, n_qubits)
            xs.append(p.x)
            zs.append(p.z)
            cs.append(complex(coeff.strip().replace(" ", "")))
        return cls(n_qubits, xs, zs, cs)


def multiply(a: QubitOperator, b: QubitOperator) -> QubitOperator:
    """Operator product ``a @ b`` with exact Pauli phase tracking."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit-count mismatch: {a.n_qubits} vs {b.n_qubits}")
    if not len(a) or not len(b):
        return QubitOperator.zero(a.n_qubits)
    x1, z1 = a.x[:, None], a.z[:, None]
    x2, z2 = b.x[None, :], b.z[None, :]
    phase = _I_POW[_product_phase(x1, z1, x2, z2)]
    coeffs = a.coeffs[:, None] * b.coeffs[None, :] * phase
    return QubitOperator(a.n_qubits, (x1 ^ x2).ravel(), (z1 ^ z2).ravel(), coeffs.ravel())


def commutator(a: QubitOperator, b: QubitOperator) -> QubitOperator:
    """``[a, b] = ab - ba``; only anticommuting string pairs survive."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit-count mismatch: {a.n_qubits} vs {b.n_qubits}")
    if not len(a) or not len(b):
        return QubitOperator.zero(a.n_qubits)
    x1, z1 = a.x[:, None], a.z[:, None]
    x2, z2 = b.x[None, :], b.z[None, :]
    anti = (_popcount((x1 & z2) ^ (z1 & x2)) & 1).astype(bool)
    phase = _I_POW[_product_phase(x1, z1, x2, z2)]
    coeffs = 2.0 * a.coeffs[:, None] * b.coeffs[None, :] * phase
    x, z = np.broadcast_arrays(x1 ^ x2, z1 ^ z2)
    return QubitOperator(a.n_qubits, x[anti], z[anti], coeffs[anti])


def anticommutes(p: PauliString, q: PauliString) -> bool:
    return bool((bin((p.x & q.z) ^ (p.z & q.x)).count("1")) & 1)


def conjugate_by_pauli(op: QubitOperator, p: PauliString) -> QubitOperator:
    """``P op P`` for a single Pauli string: same strings, anticommuting ones negated."""
    anti = (_popcount((op.x & np.uint64(p.z)) ^ (op.z & np.uint64(p.x))) & 1).astype(bool)
    return QubitOperator(op.n_qubits, op.x, op.z, np.where(anti, -op.coeffs, op.coeffs))


# -- Jordan-Wigner ----------------------------------------------------

def _ladder_terms(index, dagger):
    """JW image of a single ladder operator as ``[(x, z, coeff), ...]``.

    ``a_j^dagger -> 1/2 (X_j - i Y_j) Z_{<j}`` and ``a_j -> 1/2 (X_j + i Y_j) Z_{<j}``.
    """
    zs = (1 << index) - 1
    bit = 1 << index
    sgn = -1 if dagger else 1
    return [(bit, zs, 0.5), (bit, zs | bit, 0.5 * sgn * 1j)]


def _mul_strings(x1, z1, x2, z2):
    X1, Y1, Z1 = x1 & ~z1, x1 & z1, ~x1 & z1
    X2, Y2, Z2 = x2 & ~z2, x2 & z2, ~x2 & z2
    plus = bin((X1 & Y2) | (Y1 & Z2) | (Z1 & X2)).count("1")
    minus = bin((Y1 & X2) | (Z1 & Y2) | (X1 & Z2)).count("1")
    return x1 ^ x2, z1 ^ z2, _I_POW[(plus - minus) % 4]


def jordan_wigner(f, n_qubits: int) -> QubitOperator:
    """Map a :class:`~adapt_forge.integrals.FermionOperator` onto qubits."""
    acc: dict = {}
    for term, coeff in f.terms.items():
        if any(not 0 <= idx < n_qubits for idx, _ in term):
            raise ValueError(f"spin-orbital index out of range in term {term}")
        partial = {(0, 0): complex(coeff)}
        for idx, dag in term:
            nxt: dict = {}
            for (x1, z1), c1 in partial.items():
                for x2, z2, c2 in _ladder_terms(idx, dag):
                    x, z, ph = _mul_strings(x1, z1, x2, z2)
                    nxt[(x, z)] = nxt.get((x, z), 0) + c1 * c2 * ph
            partial = nxt
        for key, c in partial.items():
            acc[key] = acc.get(key, 0) + c
    if not acc:
        return QubitOperator.zero(n_qubits)
    keys = list(acc)
    return QubitOperator(
        n_qubits, [k[0] for k in keys], [k[1] for k in keys], [acc[k] for k in keys]
    )


def _require_even(n_qubits):
    if n_qubits % 2:
        raise ValueError(f"spin operators need an even qubit count, got {n_qubits}")


def number_operator(n_qubits: int) -> QubitOperator:
    _require_even(n_qubits)
    zs = [1 << j for j in range(n_qubits)]
    return QubitOperator(
        n_qubits, [0] * (n_qubits + 1), [0] + zs, [0.5 * n_qubits] + [-0.5] * n_qubits
    )


def sz_operator(n_qubits: int) -> QubitOperator:
    # alpha on even qubits, beta on odd; the identity parts cancel pairwise
    _require_even(n_qubits)
    zs = [1 << j for j in range(n_qubits)]
    cs = [-0.25 if j % 2 == 0 else 0.25 for j in range(n_qubits)]
    return QubitOperator(n_qubits, [0] * n_qubits, zs, cs)


def s_squared_operator(n_qubits: int) -> QubitOperator:
    """Total spin ``S^2 = S- S+ + Sz (Sz + 1)``."""
    from .integrals import FermionOperator

    _require_even(n_qubits)
    norb = n_qubits // 2
    s_plus = FermionOperator(
        {((2 * p, 1), (2 * p + 1, 0)): 1.0 for p in range(norb)}
    )
    sp_q = jordan_wigner(s_plus, n_qubits)
    sm_q = sp_q.adjoint()
    sz = sz_operator(n_qubits)
    return (sm_q * sp_q + sz * sz + sz).simplify()
