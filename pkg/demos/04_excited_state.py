"""
First excited singlet from a configuration state function
=========================================================

The objective adds a projector onto the ground state and an S^2 penalty to
the Hamiltonian. Starting from an open-shell singlet and selecting operators
by their single-parameter energy drop reaches the excited singlet; the
gradient criterion started from the Hartree-Fock determinant does not.
"""
import numpy as np

from adapt_forge.adapt import AdaptConfig, adapt_run, csf_state, excited_objective, excited_state_run
from adapt_forge.datasets import load_fixture
from adapt_forge.integrals import molecular_qubit_hamiltonian
from adapt_forge.pauli import s_squared_operator
from adapt_forge.pools import generate_pool
from adapt_forge.reference import first_excited_singlet
from adapt_forge.statevector import expectation, reference_state

ints = load_fixture("h2_0.74")
H = molecular_qubit_hamiltonian(ints)
target = first_excited_singlet(H, (2, 0)).eigenvalue
print(f"exact first excited singlet: {target:.10f}")

# %% energy-drop selection from the open-shell singlet (sigma_g -> sigma_u)
cfg = AdaptConfig(pool_kind="sqeb", criterion="delta_e", target="excited", alpha=3.0, beta=1.0)
trace, ground = excited_state_run(ints, cfg, csf_state(4, [], (0, 1)), H)
psi = trace.state
print(f"CSF start:  E = {expectation(H, psi):.10f}, |<g|psi>|^2 = {abs(np.vdot(ground, psi))**2:.1e},"
      f" <S^2> = {expectation(s_squared_operator(4), psi):.1e}, {len(trace.rows)} iterations")

# %% gradient selection from Hartree-Fock: the singles vanish by symmetry
obj = excited_objective(H, ground, 3.0, 1.0)
hf = reference_state(4, ints.hf_occupation)
stuck = adapt_run(AdaptConfig(pool_kind="sqeb", target="excited", max_iterations=30), obj, hf, generate_pool("sqeb", 2, 2))
print(f"HF start:   E = {expectation(H, stuck.state):.10f} ({stuck.status} after {len(stuck.rows)} iterations)")
