"""
How many Pauli strings does one screening step need?
====================================================

Counts the distinct Pauli strings in the commutators [H, tau] over each pool,
plus the extra strings the energy-drop criterion asks for.
"""
import sys

from adapt_forge.adapt import measurement_cost
from adapt_forge.datasets import load_fixture
from adapt_forge.integrals import molecular_qubit_hamiltonian
from adapt_forge.pauli import QubitOperator
from adapt_forge.pools import generate_pool

name = sys.argv[1] if len(sys.argv) > 1 else "lih_1.5"
ints = load_fixture(name)
H = molecular_qubit_hamiltonian(ints)
print(f"{name}: H has {len(H)} strings")

for kind in ("feb", "sfeb", "qeb", "sqeb"):
    pool = generate_pool(kind, ints.norb, ints.nelec)
    rep = measurement_cost(pool, H)
    print(f"{kind:5s} {len(pool):4d} operators  |M| = {rep.union_size:6d}  (sum of |M_tau| {sum(rep.sizes)})")

rep = measurement_cost(generate_pool("sqeb", ints.norb, ints.nelec), H, "delta_e")
print(f"energy-drop criterion on sqeb: {len(rep.overhead_union)} extra strings")

# %% single Pauli generators need nothing beyond the strings of H itself
strings = sorted({p for op in generate_pool("qeb", ints.norb, ints.nelec) for p in op.generator.terms},
                 key=lambda p: (p.x, p.z))
paulis = [QubitOperator(H.n_qubits, [p.x], [p.z], [1j]) for p in strings[:20]]
rep = measurement_cost(paulis, H, "delta_e")
h_keys = {p.x << 32 | p.z for p in H.support()}
print("overhead within supp(H):", all(extra <= h_keys for extra in rep.delta_e_overhead))
