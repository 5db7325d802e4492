"""Exact-statevector ADAPT-VQE with fermionic and qubit excitation pools."""
from .adapt import (
    AdaptConfig,
    AdaptTrace,
    MeasurementReport,
    ThetaEnergyCoeffs,
    adapt_run,
    excited_objective,
    measurement_cost,
    minimize_theta,
    pauli_theta_energy_coeffs,
    residual_gradient,
    select_operator,
    theta_energy_coeffs,
    vqe_optimize,
)
from .circuits import Circuit, Gate, circuit_unitary, decompose, equivalent_up_to_phase, export_qasm
from .integrals import FermionOperator, MolecularIntegrals, parse_fcidump, read_fcidump
from .pauli import PauliString, QubitOperator, jordan_wigner
from .pools import OperatorPool, PoolOperator, generate_pool
from .reference import exact_spectrum, first_excited_singlet
from .statevector import Ansatz, apply_exponential, expectation, reference_state

__version__ = "0.1.0"
