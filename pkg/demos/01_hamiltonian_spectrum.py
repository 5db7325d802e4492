"""
From an FCIDUMP file to an exact spectrum
=========================================

Reads a bundled STO-3G fixture, maps it to qubits and diagonalises it inside
the (N, Sz) sector of the neutral molecule.
"""
import sys

from adapt_forge.datasets import fixture_info, load_fixture
from adapt_forge.integrals import molecular_qubit_hamiltonian
from adapt_forge.reference import exact_spectrum, first_excited_singlet
from adapt_forge.statevector import expectation, reference_state

name = sys.argv[1] if len(sys.argv) > 1 else "h4_1.0"
ints = load_fixture(name)
print(f"{name}: {ints.norb} spatial orbitals, {ints.nelec} electrons, {ints.n_qubits} qubits")

# %% Jordan-Wigner image of the electronic Hamiltonian
H = molecular_qubit_hamiltonian(ints)
print(f"{len(H)} Pauli strings")

# %% Hartree-Fock determinant: the lowest spin-orbitals, alpha on even qubits
hf = reference_state(ints.n_qubits, ints.hf_occupation)
print(f"E_HF  = {expectation(H, hf):.10f}  (stored {fixture_info(name)['e_hf']:.10f})")

# %% lowest states of the sector, with spin labels
for i, e in enumerate(exact_spectrum(H, 5, (ints.nelec, 0))):
    print(f"  state {i}: E = {e.eigenvalue:.10f}  <S^2> = {e.s_squared:.4f}")
print(f"E_FCI = {fixture_info(name)['e_fci']:.10f} (stored)")
print(f"first excited singlet: {first_excited_singlet(H, (ints.nelec, 0), k=10).eigenvalue:.10f}")
