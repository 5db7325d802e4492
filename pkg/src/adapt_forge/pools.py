"""FEB / QEB / sQEB / sFEB excitation generators and operator pools."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .integrals import FermionOperator
from .pauli import QubitOperator, jordan_wigner

ONE_BODY = ("FEB1", "QEB1")
TWO_BODY = ("FEB2", "QEB2", "SQEB2", "SFEB2")
KINDS = ONE_BODY + TWO_BODY

# pool name -> (single kind, double kind)
POOL_KINDS = {
    "feb": ("FEB1", "FEB2"),
    "qeb": ("QEB1", "QEB2"),
    "sqeb": ("QEB1", "SQEB2"),
    "sfeb": ("FEB1", "SFEB2"),
}


def _spin(i):
    return i % 2


def _qubit_ladder(n_qubits, ops):
    """Product of qubit ladder operators ``Q^dagger = (X - iY)/2``, ``Q = (X + iY)/2``.

    ``ops`` is a sequence of ``(qubit, is_creation)``; no parity strings.
    """
    out = QubitOperator.identity(n_qubits)
    for q, dag in ops:
        bit = 1 << q
        out = out * QubitOperator(n_qubits, [bit, bit], [0, bit], [0.5, -0.5j if dag else 0.5j])
    return out


def _kappa(n_qubits, p, q, r, s):
    fwd = _qubit_ladder(n_qubits, [(p, 1), (q, 1), (r, 0), (s, 0)])
    return fwd - fwd.adjoint()


def _fermi_double(p, q, r, s):
    fwd = FermionOperator({((p, 1), (q, 1), (r, 0), (s, 0)): 1.0})
    return fwd - fwd.adjoint()


def build_generator(kind: str, indices, n_qubits: int) -> QubitOperator:
    """Anti-Hermitian generator of one pool element."""
    kind = kind.upper()
    indices = tuple(int(i) for i in indices)
    want = 2 if kind in ONE_BODY else 4 if kind in TWO_BODY else None
    if want is None:
        raise ValueError(f"unknown generator kind {kind!r}")
    if len(indices) != want or len(set(indices)) != want:
        raise ValueError(f"{kind} needs {want} distinct indices, got {indices}")
    if any(not 0 <= i < n_qubits for i in indices):
        raise ValueError(f"index out of range for {n_qubits} qubits: {indices}")

    if kind == "QEB1":
        p, q = indices
        fwd = _qubit_ladder(n_qubits, [(p, 1), (q, 0)])
        return fwd - fwd.adjoint()
    if kind == "FEB1":
        p, q = indices
        fwd = FermionOperator({((p, 1), (q, 0)): 1.0})
        return jordan_wigner(fwd - fwd.adjoint(), n_qubits)
    p, q, r, s = indices
    if kind == "QEB2":
        return _kappa(n_qubits, p, q, r, s)
    if kind == "SQEB2":
        return _kappa(n_qubits, p, q, r, s) + _kappa(n_qubits, q, r, s, p)
    if kind == "FEB2":
        return jordan_wigner(_fermi_double(p, q, r, s), n_qubits)
    return jordan_wigner(_fermi_double(p, q, r, s) + _fermi_double(q, r, s, p), n_qubits)


def symmetry_admissible(kind: str, indices) -> bool:
    """Particle-number and Sz conservation check with ``sigma_i = i mod 2``."""
    kind = kind.upper()
    sig = [_spin(i) for i in indices]
    if kind in ONE_BODY:
        return sig[0] == sig[1]
    sp, sq, sr, ss = sig
    first = sp + sq == sr + ss
    if kind in ("QEB2", "FEB2"):
        return first
    both = first and (sp + ss == sq + sr)
    # the conjunction reduces to matching spins at (p, r) and (q, s)
    assert both == (sp == sr and sq == ss)
    return both


def equivalent_indices(kind: str, indices) -> list:
    """Index tuples naming the same generator up to sign."""
    kind = kind.upper()
    if kind in ONE_BODY:
        p, q = indices
        return [(p, q), (q, p)]
    p, q, r, s = indices
    if kind in ("QEB2", "FEB2"):
        return [
            (p, q, r, s), (q, p, r, s), (p, q, s, r), (q, p, s, r),
            (r, s, p, q), (s, r, p, q), (r, s, q, p), (s, r, q, p),
        ]
    return [(p, q, r, s), (r, q, p, s), (p, s, r, q), (r, s, p, q)]


def canonical_indices(kind: str, indices) -> tuple:
    return min(equivalent_indices(kind, tuple(indices)))


def cnot_cost(kind: str, indices) -> int:
    """CNOT count of the circuit implementing ``exp(theta * generator)``.

    FEB costs depend on the Jordan-Wigner parity strings: qubits strictly
    between the two lowest and between the two highest indices.
    """
    kind = kind.upper()
    if kind == "QEB1":
        return 2
    if kind == "QEB2":
        return 13
    if kind == "SQEB2":
        return 9
    if kind == "FEB1":
        p, q = indices
        return 2 * abs(p - q) + 1
    a, b, c, d = sorted(indices)
    feb2 = 2 * abs((b - a) + (d - c)) + 9
    if kind == "FEB2":
        return feb2
    if kind == "SFEB2":
        return feb2 - 4
    raise ValueError(f"unknown generator kind {kind!r}")


@dataclass(frozen=True)
class PoolOperator:
    kind: str
    indices: tuple
    generator: QubitOperator = field(compare=False, repr=False)
    cnot_cost: int = 0

    @classmethod
    def make(cls, kind, indices, n_qubits):
        kind = kind.upper()
        indices = tuple(int(i) for i in indices)
        return cls(kind, indices, build_generator(kind, indices, n_qubits), cnot_cost(kind, indices))

    @property
    def n_qubits(self):
        return self.generator.n_qubits

    @property
    def label(self):
        return f"{self.kind}({','.join(map(str, self.indices))})"

    def dump_line(self):
        return " ".join([self.kind, *map(str, self.indices), str(self.cnot_cost)])


@dataclass(frozen=True)
class OperatorPool:
    elements: tuple
    mode: str
    kind: str = ""

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __getitem__(self, i):
        return self.elements[i]

    def dump(self) -> str:
        return "".join(op.dump_line() + "\n" for op in self.elements)


def _singles(kind, occ, virt, n, mode):
    if mode == "restricted":
        cands = [(i, a) for i in occ for a in virt]
    else:
        cands = list(itertools.combinations(range(n), 2))
    out = []
    for idx in cands:
        if symmetry_admissible(kind, idx):
            out.append(canonical_indices(kind, idx))
    return out


def _doubles(kind, occ, virt, n, mode):
    if mode == "restricted":
        cands = [
            (i, j, a, b)
            for i, j in itertools.permutations(occ, 2)
            for a, b in itertools.permutations(virt, 2)
        ]
    else:
        cands = itertools.permutations(range(n), 4)
    seen = {}
    for idx in cands:
        if symmetry_admissible(kind, idx):
            seen.setdefault(canonical_indices(kind, idx), None)
    return sorted(seen)


def generate_pool(kind: str, norb: int, nelec: int, mode: str = "restricted") -> OperatorPool:
    """Deterministic, symmetry-filtered pool; singles first, then doubles."""
    kind = kind.lower()
    if kind not in POOL_KINDS:
        raise ValueError(f"unknown pool kind {kind!r}; expected one of {sorted(POOL_KINDS)}")
    if mode not in ("restricted", "generalized"):
        raise ValueError(f"mode must be 'restricted' or 'generalized', got {mode!r}")
    if not 0 <= nelec <= 2 * norb:
        raise ValueError(f"nelec={nelec} incompatible with norb={norb}")
    n = 2 * norb
    occ, virt = list(range(nelec)), list(range(nelec, n))
    single, double = POOL_KINDS[kind]
    elements = [PoolOperator.make(single, idx, n) for idx in _singles(single, occ, virt, n, mode)]
    elements += [PoolOperator.make(double, idx, n) for idx in _doubles(double, occ, virt, n, mode)]
    return OperatorPool(tuple(elements), mode, kind)


def parse_pool_dump(text: str, n_qubits: int) -> OperatorPool:
    elements = []
    for line in text.splitlines():
        parts = line.split()
        if parts:
            elements.append(PoolOperator.make(parts[0], [int(v) for v in parts[1:-1]], n_qubits))
    return OperatorPool(tuple(elements), "custom")
