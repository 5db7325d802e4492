"""
Excitation circuits and their CNOT counts
=========================================

Builds the single-qubit-excitation, QEB and simplified QEB circuits, lowers
the multi-controlled rotations to CNOTs and single-qubit rotations, checks
them against the matrix exponentials and writes one of them as OpenQASM.
"""
import numpy as np
from scipy.linalg import expm

from adapt_forge import circuits as C
from adapt_forge.pools import build_generator

theta = 0.4

# %% the three element circuits on four qubits
for kind, builder, idx in [
    ("QEB1", C.qeb1_circuit, (0, 2)),
    ("QEB2", C.qeb2_circuit, (0, 1, 2, 3)),
    ("SQEB2", C.sqeb2_circuit, (0, 1, 2, 3)),
]:
    raw = builder(*idx, theta, n_qubits=4)
    low = C.decompose(raw)
    exact = expm(theta * build_generator(kind, idx, 4).to_dense())
    dev = C.phase_distance(C.circuit_unitary(low), exact)
    print(f"{kind:6s} {low.cnot_count:2d} CNOTs, CNOT depth {low.cnot_depth:2d}, deviation {dev:.1e}")

# %% alternative layouts of the same unitaries
for kind in ("QEB2", "SQEB2"):
    for name, fn in C.variant_circuits(kind):
        low = C.decompose(fn(0, 1, 2, 3, theta, n_qubits=4))
        print(f"{kind} variant {name:26s} {low.cnot_count} CNOTs")

# %% the simplified two-body rotation as OpenQASM
print(C.export_qasm(C.decompose(C.sqeb2_circuit(0, 1, 2, 3, theta))))

# %% combining two simplified rotations gives back the full QEB rotation
t1 = build_generator("SQEB2", (0, 1, 2, 3), 4).to_dense()
t2 = build_generator("SQEB2", (1, 0, 3, 2), 4).to_dense()
k = build_generator("QEB2", (0, 1, 2, 3), 4).to_dense()
print("combination deviation:", np.abs(expm(theta / 2 * t1) @ expm(theta / 2 * t2) - expm(theta * k)).max())
