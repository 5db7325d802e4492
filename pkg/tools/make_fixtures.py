"""Regenerate the FCIDUMP fixtures shipped in ``src/adapt_forge/data``.

Needs pyscf, which is *not* a runtime dependency of the package::

    pip install pyscf
    python tools/make_fixtures.py

Besides the FCIDUMP files this writes ``fixtures.json`` with the RHF and
pyscf-FCI energies of each system; the test-suite uses those numbers as an
oracle that is independent of the package's own Hamiltonian assembly.
"""
import json
from pathlib import Path

from pyscf import fci, gto, scf
from pyscf.tools import fcidump

OUT = Path(__file__).resolve().parents[1] / "src" / "adapt_forge" / "data"

SYSTEMS = {
    "h2_0.74": "H 0 0 0; H 0 0 0.74",
    "h4_1.0": "H 0 0 0; H 0 0 1.0; H 0 0 2.0; H 0 0 3.0",
    "lih_1.5": "Li 0 0 0; H 0 0 1.5",
    "lih_3.0": "Li 0 0 0; H 0 0 3.0",
    "beh2_1.25": "Be 0 0 0; H 0 0 -1.25; H 0 0 1.25",
    "h6_1.0": "; ".join(f"H 0 0 {i * 1.0:.1f}" for i in range(6)),
}


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    meta = {}
    for name, atom in SYSTEMS.items():
        mol = gto.M(atom=atom, basis="sto-3g", unit="Angstrom", symmetry=False, verbose=0)
        mf = scf.RHF(mol)
        mf.conv_tol = 1e-12
        mf.kernel()
        fcidump.from_scf(mf, str(OUT / f"{name}.fcidump"), tol=1e-14)
        e_fci, _ = fci.FCI(mf).kernel()
        meta[name] = {
            "geometry": atom,
            "basis": "sto-3g",
            "norb": mol.nao,
            "nelec": mol.nelectron,
            "e_hf": mf.e_tot,
            "e_fci": e_fci,
        }
        print(f"{name:10s} norb={mol.nao:2d} nelec={mol.nelectron} E_HF={mf.e_tot:.10f} E_FCI={e_fci:.10f}")
    (OUT / "fixtures.json").write_text(json.dumps(meta, indent=2) + "\n")


if __name__ == "__main__":
    main()
