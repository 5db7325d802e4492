import numpy as np
import pytest

from adapt_forge.pauli import QubitOperator
from adapt_forge.reference import (
    exact_spectrum,
    first_excited_singlet,
    ground_energy,
    sector_indices,
    spectrum_csv,
)


def test_single_z_spectrum():
    levels = exact_spectrum(QubitOperator.single("Z0", 2), 4)
    assert [round(e.eigenvalue, 12) for e in levels] == [-1, -1, 1, 1]
    assert all(abs(np.linalg.norm(e.vector) - 1) < 1e-12 for e in levels)


def test_sector_indices():
    idx = sector_indices(4, 2, 0)
    assert idx.tolist() == [0b0011, 0b0110, 0b1001, 0b1100]
    assert len(sector_indices(6, 3)) == 20
    assert len(sector_indices(12, 4, 0)) == 15 * 15


def test_sector_agrees_with_full_space(h4):
    ints, H, info = h4
    full = np.linalg.eigvalsh(H.to_dense())
    sec = exact_spectrum(H, 3, (4, 0))
    assert sec[0].eigenvalue == pytest.approx(info["e_fci"], abs=1e-10)
    assert sec[0].n == pytest.approx(4) and sec[0].sz == pytest.approx(0, abs=1e-10)
    # degenerate full-space vectors mix sectors, so compare eigenvalues only
    for e in sec:
        assert np.min(np.abs(full - e.eigenvalue)) < 1e-10


def test_lanczos_path_matches_fixture(lih):
    ints, H, info = lih
    # the full 12-qubit space exceeds the dense cutoff and goes through eigsh
    e = exact_spectrum(H, 2, (4, None), observables=False)
    assert e[0].eigenvalue == pytest.approx(info["e_fci"], abs=1e-9)
    assert ground_energy(H, (4, 0)) == pytest.approx(info["e_fci"], abs=1e-9)


def test_first_excited_singlet_h2(h2):
    H = h2[1]
    ex = first_excited_singlet(H, (2, 0))
    assert abs(ex.s_squared) < 1e-8
    assert ex.eigenvalue == pytest.approx(-0.16835243297, abs=1e-9)


def test_degenerate_identity_has_no_excited_singlet():
    with pytest.raises(ValueError):
        first_excited_singlet(QubitOperator.identity(4), (2, 0))


def test_k_out_of_range_and_qubit_cap(h2):
    with pytest.raises(ValueError):
        exact_spectrum(h2[1], 5, (2, 0))
    with pytest.raises(ValueError):
        exact_spectrum(h2[1], 0)


def test_csv_layout(h2):
    text = spectrum_csv(exact_spectrum(h2[1], 2, (2, 0)))
    lines = text.splitlines()
    assert lines[0] == "index,eigenvalue,N,Sz,S2" and len(lines) == 3
    assert lines[1].startswith("0,-1.13728383449,2,")
