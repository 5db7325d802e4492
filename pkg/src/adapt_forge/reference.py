"""Exact-diagonalisation oracle: FCI energies, (N, Sz) sectors, singlet lookup."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import eigsh

from .pauli import QubitOperator, number_operator, s_squared_operator, sz_operator

MAX_QUBITS = 14
DENSE_DIM = 4096
RESIDUAL_TOL = 1e-10
SINGLET_TOL = 1e-6
GAP_TOL = 1e-9


@dataclass(frozen=True)
class SpectrumEntry:
    eigenvalue: float
    n: float
    sz: float
    s_squared: float
    vector: np.ndarray


def sector_indices(n_qubits: int, n_particles: int, sz: float | None = None) -> np.ndarray:
    """Basis indices with the given popcount and, optionally, ``(n_alpha - n_beta) / 2``."""
    idx = np.arange(1 << n_qubits, dtype=np.uint64)
    alpha_mask = np.uint64(int("01" * (n_qubits // 2 + 1), 2) & ((1 << n_qubits) - 1))
    n_tot = np.bitwise_count(idx)
    keep = n_tot == n_particles
    if sz is not None:
        n_alpha = np.bitwise_count(idx & alpha_mask).astype(int)
        keep &= (2 * n_alpha - n_tot.astype(int)) == round(2 * sz)
    return idx[keep].astype(np.int64)


def _lanczos(mat, k, tol=RESIDUAL_TOL):
    """Lowest ``k`` eigenpairs via ARPACK's restarted Lanczos, residuals checked."""
    if not np.any(mat.data.imag):
        mat = mat.real
    v0 = np.full(mat.shape[0], 1.0 / np.sqrt(mat.shape[0]))
    ncv = min(mat.shape[0], max(4 * k + 1, 40))
    vals, vecs = eigsh(mat, k=k, which="SA", tol=tol * 1e-2, ncv=ncv, v0=v0, maxiter=100000)
    order = np.argsort(vals)
    vals, vecs = vals[order], vecs[:, order]
    res = np.linalg.norm(mat @ vecs - vecs * vals, axis=0)
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.any(res > tol * scale):
        raise RuntimeError(f"Lanczos residual {res.max():.2e} above {tol:g}")
    return vals, vecs.astype(complex)


def exact_spectrum(H: QubitOperator, k: int = 1, sector=None, observables=True) -> list:
    """Lowest ``k`` eigenpairs, optionally inside an ``(N, Sz)`` sector.

    ``sector`` is ``(N, Sz)`` or ``(N, None)``. Each entry carries the
    expectations of N, Sz and S^2 of its eigenvector (embedded in the full
    register).
    """
    n = H.n_qubits
    if n > MAX_QUBITS:
        raise ValueError(f"exact diagonalisation capped at {MAX_QUBITS} qubits, got {n}")
    full = 1 << n
    if sector is None:
        idx = np.arange(full)
    else:
        idx = sector_indices(n, *sector)
    dim = len(idx)
    if not 1 <= k <= dim:
        raise ValueError(f"k={k} outside [1, {dim}] for this sector")
    mat = H.sparse[idx][:, idx] if sector is not None else H.sparse
    if dim <= DENSE_DIM:
        vals, vecs = np.linalg.eigh(mat.toarray())
        vals, vecs = vals[:k], vecs[:, :k]
    else:
        vals, vecs = _lanczos(mat.tocsr(), k)
    entries = []
    ops = None
    if observables and n % 2 == 0:
        ops = (number_operator(n), sz_operator(n), s_squared_operator(n))
    for j in range(k):
        v = np.zeros(full, dtype=complex)
        v[idx] = vecs[:, j]
        if ops is None:
            nn = sz = s2 = float("nan")
        else:
            nn, sz, s2 = (float(np.vdot(v, o.sparse @ v).real) for o in ops)
        entries.append(SpectrumEntry(float(vals[j]), nn, sz, s2, v))
    return entries


def ground_energy(H: QubitOperator, sector=None) -> float:
    return exact_spectrum(H, 1, sector, observables=False)[0].eigenvalue


def first_excited_singlet(H: QubitOperator, sector=None, k: int = 8, s_squared=None) -> SpectrumEntry:
    """Lowest singlet strictly above the lowest singlet; ``k`` is capped at the sector size."""
    dim = (1 << H.n_qubits) if sector is None else len(sector_indices(H.n_qubits, *sector))
    levels = exact_spectrum(H, min(k, dim), sector)
    if s_squared is not None:
        levels = [
            SpectrumEntry(e.eigenvalue, e.n, e.sz, float(np.vdot(e.vector, s_squared.sparse @ e.vector).real), e.vector)
            for e in levels
        ]
    singlets = [e for e in levels if abs(e.s_squared) <= SINGLET_TOL]
    if not singlets:
        raise ValueError(f"no singlet among the lowest {k} states")
    ground = singlets[0].eigenvalue
    for e in singlets[1:]:
        if e.eigenvalue - ground > GAP_TOL:
            return e
    raise ValueError(f"no singlet above the ground singlet within the lowest {k} states")


def spectrum_csv(entries) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "eigenvalue", "N", "Sz", "S2"])
    for i, e in enumerate(entries):
        w.writerow([i, f"{e.eigenvalue:.12g}", f"{e.n:.12g}", f"{e.sz:.12g}", f"{e.s_squared:.12g}"])
    return buf.getvalue()
