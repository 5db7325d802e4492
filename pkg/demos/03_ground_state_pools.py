"""
Ground-state ADAPT-VQE with four operator pools
===============================================

Runs every pool on a fixture and compares iterations, parameters and
cumulative CNOTs. H4 takes seconds; ``lih_1.5`` takes about a minute per pool.
"""
import sys
import time

from adapt_forge.adapt import AdaptConfig, cnot_reduction_ratio, cnots_to_accuracy, ground_state_run
from adapt_forge.datasets import fixture_info, load_fixture
from adapt_forge.integrals import molecular_qubit_hamiltonian

name = sys.argv[1] if len(sys.argv) > 1 else "h4_1.0"
eps = float(sys.argv[2]) if len(sys.argv) > 2 else 1e-5
ints = load_fixture(name)
H = molecular_qubit_hamiltonian(ints)
e_fci = fixture_info(name)["e_fci"]

traces = {}
for kind in ("feb", "sfeb", "qeb", "sqeb"):
    t0 = time.perf_counter()
    tr = ground_state_run(ints, AdaptConfig(pool_kind=kind, epsilon=eps), H)
    traces[kind] = tr
    print(f"{kind:5s} {tr.status:10s} {len(tr.rows):3d} iterations  error {tr.final_energy - e_fci:.2e} Ha"
          f"  CNOTs {tr.total_cnots:5d}  ({time.perf_counter() - t0:.1f}s)")

# %% CNOTs needed to first reach a given accuracy
for target in (1e-3, 1e-6):
    row = {k: cnots_to_accuracy(t, e_fci, target) for k, t in traces.items()}
    print(f"to {target:g} Ha:", row)
    if row["sqeb"] and row["qeb"]:
        print(f"  sQEB vs QEB reduction: {cnot_reduction_ratio(row['sqeb'], row['qeb']):.3f}")

# %% the sQEB trace, one line per iteration
print(traces["sqeb"].to_csv())
