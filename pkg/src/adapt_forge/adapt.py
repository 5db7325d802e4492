"""ADAPT-VQE driver: screening, ansatz growth, inner optimisation, penalties, measurement counts."""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .pauli import PauliString, QubitOperator, commutator, conjugate_by_pauli, multiply, s_squared_operator
from .pools import OperatorPool, PoolOperator, generate_pool
from .statevector import (
    Ansatz,
    act,
    ansatz_energy_and_gradient,
    apply_exponential,
    reference_state,
)

CRITERIA = ("gradient", "delta_e")
STATUSES = ("converged", "iteration_cap", "optimizer_failure")
SCAN_POINTS = 720
NEWTON_TOL = 1e-12
# BFGS sometimes stops on "precision loss" right at the optimum; below this
# gradient norm such an exit still counts as converged.
PRECISION_LOSS_GRAD = 1e-6


@dataclass
class AdaptConfig:
    pool_kind: str = "sqeb"
    mode: str = "restricted"
    criterion: str = "gradient"
    epsilon: float = 1e-5
    max_iterations: int = 200
    gtol: float = 1e-8
    max_evaluations: int = 10000
    target: str = "ground"
    alpha: float = 3.0
    beta: float = 1.0
    workers: int = 1

    def __post_init__(self):
        if self.criterion not in CRITERIA:
            raise ValueError(f"criterion must be one of {CRITERIA}, got {self.criterion!r}")
        if self.mode not in ("restricted", "generalized"):
            raise ValueError(f"mode must be restricted or generalized, got {self.mode!r}")
        if not self.epsilon > 0:
            raise ValueError("epsilon must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.target not in ("ground", "excited"):
            raise ValueError(f"target must be ground or excited, got {self.target!r}")
        if self.target == "excited" and not (self.alpha > 0 and self.beta >= 0):
            raise ValueError("excited target needs alpha > 0 and beta >= 0")


# -- objectives ----------------------------------------------------------

class PenaltyObjective:
    """``op + alpha * sum_g |g><g|`` where ``op`` is usually ``H + beta S^2``."""

    def __init__(self, operator: QubitOperator, states=(), alpha=0.0):
        self.operator = operator
        self.n_qubits = operator.n_qubits
        self.alpha = float(alpha)
        self.states = [np.asarray(g, dtype=complex) for g in states]
        for g in self.states:
            if len(g) != 1 << self.n_qubits:
                raise ValueError("penalised state has the wrong dimension")
            if abs(np.linalg.norm(g) - 1) > 1e-8:
                raise ValueError(f"penalised state is not normalised (norm {np.linalg.norm(g)})")

    def apply(self, psi):
        out = act(self.operator, psi)
        for g in self.states:
            out = out + self.alpha * np.vdot(g, psi) * g
        return out


def excited_objective(H: QubitOperator, ground, alpha=3.0, beta=1.0, s_squared=None) -> PenaltyObjective:
    """Objective ``H + alpha |g><g| + beta S^2``; ``ground`` may be one state or a list."""
    if not alpha > 0:
        raise ValueError("alpha must be positive")
    if beta < 0:
        raise ValueError("beta must be non-negative")
    if s_squared is None:
        s_squared = s_squared_operator(H.n_qubits)
    states = [ground] if np.ndim(ground) == 1 else list(ground)
    return PenaltyObjective(H + beta * s_squared, states, alpha)


# -- single-parameter energy landscape -----------------------------------

@dataclass(frozen=True)
class ThetaEnergyCoeffs:
    """``E(theta) = f0 + f1 sin t + f2 sin 2t + f3 cos t + f4 cos 2t``."""

    f0: float
    f1: float
    f2: float
    f3: float
    f4: float

    def energy(self, theta):
        t = np.asarray(theta, dtype=float)
        return (self.f0 + self.f1 * np.sin(t) + self.f2 * np.sin(2 * t)
                + self.f3 * np.cos(t) + self.f4 * np.cos(2 * t))

    def derivative(self, theta):
        t = np.asarray(theta, dtype=float)
        return (self.f1 * np.cos(t) + 2 * self.f2 * np.cos(2 * t)
                - self.f3 * np.sin(t) - 2 * self.f4 * np.sin(2 * t))

    def curvature(self, theta):
        t = np.asarray(theta, dtype=float)
        return (-self.f1 * np.sin(t) - 4 * self.f2 * np.sin(2 * t)
                - self.f3 * np.cos(t) - 4 * self.f4 * np.cos(2 * t))

    @property
    def at_zero(self) -> float:
        return self.f0 + self.f3 + self.f4


def _generator(tau):
    return tau.generator if isinstance(tau, PoolOperator) else tau


def _check_antihermitian(tau):
    gen = _generator(tau)
    if isinstance(gen, QubitOperator) and not gen.is_antihermitian():
        raise ValueError("generator is not anti-Hermitian")


def residual_gradient(tau, objective, psi) -> float:
    """``<psi|[O, tau]|psi> = 2 Re <O psi | tau psi>``."""
    return _residual_gradient(tau, act(objective, psi), psi)


def _residual_gradient(tau, o_psi, psi):
    if len(o_psi) != len(psi):
        raise ValueError("dimension mismatch")
    return 2.0 * float(np.vdot(o_psi, act(tau, psi)).real)


def theta_energy_coeffs(tau, objective, psi, o_psi=None) -> ThetaEnergyCoeffs:
    """Closed-form coefficients of ``<psi|exp(-t tau) O exp(t tau)|psi>``.

    With ``v_j = tau^j psi`` and ``h_ij = <v_i|O v_j>`` the trigonometric
    expansion of the exponential gives the five coefficients below.
    """
    _check_antihermitian(tau)
    if o_psi is None:
        o_psi = act(objective, psi)
    v1 = act(tau, psi)
    v2 = act(tau, v1)
    o_v1 = act(objective, v1)
    o_v2 = act(objective, v2)
    h00 = np.vdot(psi, o_psi).real
    h01 = np.vdot(o_psi, v1).real
    h02 = np.vdot(o_psi, v2).real
    h11 = np.vdot(v1, o_v1).real
    h12 = np.vdot(o_v1, v2).real
    h22 = np.vdot(v2, o_v2).real
    return ThetaEnergyCoeffs(
        f0=float(h00 + 2 * h02 + 0.5 * h11 + 1.5 * h22),
        f1=float(2 * h01 + 2 * h12),
        f2=float(-h12),
        f3=float(-2 * h02 - 2 * h22),
        f4=float(-0.5 * h11 + 0.5 * h22),
    )


def _as_pauli(p, n_qubits=None):
    if isinstance(p, PauliString):
        return p, 1.0
    if isinstance(p, QubitOperator):
        if len(p) != 1:
            raise ValueError(f"expected a single Pauli string, got {len(p)} terms")
        (ps, c), = p.terms.items()
        return ps, c
    if isinstance(p, str):
        return PauliString.from_label(p, n_qubits), 1.0
    raise ValueError(f"not a Pauli string: {p!r}")


def pauli_theta_energy_coeffs(P, H: QubitOperator, psi) -> ThetaEnergyCoeffs:
    """Coefficients for ``tau = i P`` with a single Pauli string ``P``.

    ``f1 = f3 = 0`` by construction and ``tau H tau = -P H P`` has exactly
    the Pauli support of ``H``.
    """
    ps, c = _as_pauli(P, H.n_qubits)
    if abs(abs(c) - 1) > 1e-12:
        raise ValueError("single-Pauli generator must have unit weight")
    tau = QubitOperator(H.n_qubits, [ps.x], [ps.z], [1j])
    h_psi = act(H, psi)
    e_h = np.vdot(psi, h_psi).real
    e_tht = -np.vdot(psi, act(conjugate_by_pauli(H, ps), psi)).real
    # <H tau - tau H> = 2 Re <H psi | tau psi>
    e_comm = 2 * np.vdot(h_psi, act(tau, psi)).real
    return ThetaEnergyCoeffs(
        f0=float(0.5 * e_h - 0.5 * e_tht),
        f1=0.0,
        f2=float(0.5 * e_comm),
        f3=0.0,
        f4=float(0.5 * e_tht + 0.5 * e_h),
    )


def _wrap(theta):
    return (theta + math.pi) % (2 * math.pi) - math.pi


def minimize_theta(c: ThetaEnergyCoeffs):
    """Global minimum of ``E(theta)`` on ``[-pi, pi)``: grid scan, then safeguarded Newton."""
    h = 2 * math.pi / SCAN_POINTS
    grid = -math.pi + h * np.arange(SCAN_POINTS)
    vals = c.energy(grid)
    lo = vals.min()
    near = np.flatnonzero(vals <= lo + 1e-14 * max(1.0, abs(lo)))
    k = near[np.argmin(np.abs(grid[near]))]
    theta = float(grid[k])
    a, b = theta - h, theta + h
    for _ in range(100):
        d = float(c.derivative(theta))
        if abs(d) <= NEWTON_TOL:
            break
        if d > 0:
            b = theta
        else:
            a = theta
        cur = float(c.curvature(theta))
        step = theta - d / cur if cur > 0 else None
        theta = step if step is not None and a < step < b else 0.5 * (a + b)
        if b - a < 1e-15:
            break
    theta = _wrap(theta)
    e = float(c.energy(theta))
    e0 = c.at_zero
    if e > e0:
        return 0.0, float(e0)
    return theta, e


# -- screening -----------------------------------------------------------

def _map(fn, items, workers):
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


def screen_pool(pool, objective, psi, criterion="gradient", workers=1):
    """Screening values and suggested initial angles for every pool element."""
    if not len(pool):
        raise ValueError("empty operator pool")
    o_psi = act(objective, psi)
    if criterion == "gradient":
        vals = _map(lambda op: _residual_gradient(op, o_psi, psi), list(pool), workers)
        return np.asarray(vals), np.zeros(len(pool))
    if criterion == "delta_e":
        def one(op):
            c = theta_energy_coeffs(op, objective, psi, o_psi)
            t, e = minimize_theta(c)
            return max(c.at_zero - e, 0.0), t

        out = _map(one, list(pool), workers)
        return np.array([v for v, _ in out]), np.array([t for _, t in out])
    raise ValueError(f"unknown criterion {criterion!r}")


def select_operator(pool, objective, psi, criterion="gradient", workers=1):
    """``(index, screening vector)``; ties go to the smallest pool index."""
    vals, _ = screen_pool(pool, objective, psi, criterion, workers)
    return int(np.argmax(np.abs(vals))), vals


# -- inner optimisation ---------------------------------------------------

@dataclass
class VQEResult:
    ansatz: Ansatz
    energy: float
    n_evaluations: int
    success: bool
    message: str
    grad_norm: float


class _EvalBudget(Exception):
    pass


def vqe_optimize(ansatz: Ansatz, objective, psi0, gtol=1e-8, max_evaluations=10000) -> VQEResult:
    """BFGS on the adjoint gradient, warm-started at the current parameters.

    Returns the best point seen, so the energy never exceeds the start.
    """
    x0 = np.asarray(ansatz.parameters, dtype=float)
    e0, g0 = ansatz_energy_and_gradient(ansatz, objective, psi0, x0)
    best = {"x": x0.copy(), "e": e0, "g": g0, "n": 1}
    if not len(x0):
        return VQEResult(ansatz, e0, 1, True, "empty ansatz", 0.0)

    def fun(x):
        if best["n"] >= max_evaluations:
            raise _EvalBudget
        e, g = ansatz_energy_and_gradient(ansatz, objective, psi0, x)
        best["n"] += 1
        if e < best["e"]:
            best.update(x=np.array(x), e=e, g=g)
        return e, g

    try:
        res = minimize(fun, x0, jac=True, method="BFGS", options={"gtol": gtol, "maxiter": max_evaluations})
        ok, msg = bool(res.success), str(res.message)
    except _EvalBudget:
        ok, msg = False, f"evaluation budget of {max_evaluations} exhausted"
    gnorm = float(np.linalg.norm(best["g"], np.inf))
    if not ok and gnorm <= PRECISION_LOSS_GRAD and "budget" not in msg:
        ok = True
    return VQEResult(ansatz.with_parameters(best["x"]), best["e"], best["n"], ok, msg, gnorm)


# -- driver ---------------------------------------------------------------

@dataclass(frozen=True)
class TraceRow:
    iteration: int
    kind: str
    indices: tuple
    screen_value: float
    energy: float
    params: int
    cnots: int
    grad_norm: float


@dataclass
class AdaptTrace:
    rows: list = field(default_factory=list)
    status: str = "converged"
    final_norm: float = float("nan")
    ansatz: Ansatz = field(default_factory=Ansatz)
    state: np.ndarray | None = None
    initial_energy: float = float("nan")
    message: str = ""

    @property
    def energies(self):
        return [r.energy for r in self.rows]

    @property
    def final_energy(self) -> float:
        return self.rows[-1].energy if self.rows else self.initial_energy

    @property
    def total_cnots(self) -> int:
        return self.rows[-1].cnots if self.rows else 0

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "kind", "indices", "screen_value", "energy", "params", "cnots", "grad_norm"])
        for r in self.rows:
            w.writerow([
                r.iteration, r.kind, " ".join(map(str, r.indices)), f"{r.screen_value:.12g}",
                f"{r.energy:.12g}", r.params, r.cnots, f"{r.grad_norm:.12g}",
            ])
        return buf.getvalue()


def read_trace_csv(text: str) -> list:
    rows = []
    for rec in csv.DictReader(io.StringIO(text)):
        rows.append(TraceRow(
            int(rec["iter"]), rec["kind"], tuple(int(v) for v in rec["indices"].split()),
            float(rec["screen_value"]), float(rec["energy"]), int(rec["params"]),
            int(rec["cnots"]), float(rec["grad_norm"]),
        ))
    return rows


def adapt_run(config: AdaptConfig, objective, psi0, pool: OperatorPool, callback=None) -> AdaptTrace:
    """Grow an ansatz one pool element per iteration until the screening norm drops below epsilon."""
    psi0 = np.asarray(psi0, dtype=complex)
    if not len(pool):
        raise ValueError("empty operator pool")
    ansatz = Ansatz()
    psi = psi0
    energy = float(np.vdot(psi, act(objective, psi)).real)
    trace = AdaptTrace(initial_energy=energy, state=psi)
    cnots = 0
    for it in range(1, config.max_iterations + 2):
        vals, thetas = screen_pool(pool, objective, psi, config.criterion, config.workers)
        norm = float(np.linalg.norm(vals))
        trace.final_norm = norm
        if norm < config.epsilon:
            trace.status = "converged"
            break
        if it > config.max_iterations:
            trace.status = "iteration_cap"
            break
        k = int(np.argmax(np.abs(vals)))
        op = pool[k]
        ansatz = ansatz.append(op, float(thetas[k]))
        res = vqe_optimize(ansatz, objective, psi0, config.gtol, config.max_evaluations)
        ansatz = res.ansatz
        psi = ansatz.prepare(psi0)
        energy = res.energy
        cnots += op.cnot_cost
        row = TraceRow(it, op.kind, op.indices, float(vals[k]), energy, len(ansatz), cnots, norm)
        trace.rows.append(row)
        trace.ansatz, trace.state = ansatz, psi
        if callback is not None:
            callback(row)
        if not res.success:
            trace.status = "optimizer_failure"
            trace.message = res.message
            break
    trace.ansatz, trace.state = ansatz, psi
    return trace


# -- molecule-level conveniences -------------------------------------------

def csf_state(n_qubits, occupied=(), open_shell=None) -> np.ndarray:
    """Determinant, or open-shell singlet ``(|i^ a_v> - |i_v a^>)/sqrt 2`` over spatial ``(i, a)``.

    ``occupied`` lists doubly/singly occupied spin-orbitals outside the open pair.
    """
    occupied = list(occupied)
    if open_shell is None:
        return reference_state(n_qubits, occupied)
    i, a = open_shell
    if i == a:
        raise ValueError("open-shell orbitals must differ")
    clash = {2 * i, 2 * i + 1, 2 * a, 2 * a + 1} & set(occupied)
    if clash:
        raise ValueError(f"open-shell orbitals overlap the occupied list: {sorted(clash)}")
    up_dn = reference_state(n_qubits, occupied + [2 * i, 2 * a + 1])
    dn_up = reference_state(n_qubits, occupied + [2 * i + 1, 2 * a])
    return (up_dn - dn_up) / math.sqrt(2)


def ground_state_run(ints, config: AdaptConfig, H=None, callback=None):
    from .integrals import molecular_qubit_hamiltonian

    H = molecular_qubit_hamiltonian(ints) if H is None else H
    pool = generate_pool(config.pool_kind, ints.norb, ints.nelec, config.mode)
    psi0 = reference_state(ints.n_qubits, ints.hf_occupation)
    return adapt_run(config, H, psi0, pool, callback)


def excited_state_run(ints, config: AdaptConfig, psi0, H=None, ground=None, callback=None):
    """Penalty-objective run; the ground state defaults to a gradient run at epsilon / 10."""
    from dataclasses import replace

    from .integrals import molecular_qubit_hamiltonian

    H = molecular_qubit_hamiltonian(ints) if H is None else H
    if ground is None:
        gcfg = replace(config, criterion="gradient", epsilon=config.epsilon / 10, target="ground")
        ground = ground_state_run(ints, gcfg, H).state
    ground = np.asarray(ground) / np.linalg.norm(ground)
    obj = excited_objective(H, ground, config.alpha, config.beta)
    pool = generate_pool(config.pool_kind, ints.norb, ints.nelec, config.mode)
    trace = adapt_run(config, obj, psi0, pool, callback)
    return trace, ground


def cnots_to_accuracy(trace: AdaptTrace, e_ref: float, threshold: float):
    """Cumulative CNOTs at the first iteration with ``|E - e_ref| <= threshold`` (None if never)."""
    for r in trace.rows:
        if abs(r.energy - e_ref) <= threshold:
            return r.cnots
    if not trace.rows and abs(trace.initial_energy - e_ref) <= threshold:
        return 0
    return None


def cnot_reduction_ratio(n_sqeb: int, n_qeb: int) -> float:
    return 1.0 - n_sqeb / n_qeb


# -- measurement accounting -------------------------------------------------

@dataclass
class MeasurementReport:
    per_operator: list
    union: set
    criterion: str = "gradient"
    delta_e_overhead: list = field(default_factory=list)
    overhead_union: set = field(default_factory=set)

    @property
    def sizes(self):
        return [len(m) for m in self.per_operator]

    @property
    def union_size(self) -> int:
        return len(self.union)

    @property
    def total_size(self) -> int:
        return len(self.union | self.overhead_union)


def _support(op: QubitOperator, tol=1e-12):
    keep = np.abs(op.coeffs) > tol
    return set(op.keys[keep].tolist())


def measurement_cost(pool, H: QubitOperator, criterion="gradient") -> MeasurementReport:
    """Pauli strings needed for screening, as packed ``x << 32 | z`` keys.

    ``M_tau`` is the support of ``[H, tau]``. The energy-descent criterion also
    needs ``tau^2 H + H tau^2``, ``tau H tau``, ``tau H tau^2 - tau^2 H tau`` and
    ``tau^2 H tau^2``; strings beyond ``M_tau`` are the overhead.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"unknown criterion {criterion!r}")
    per, extra = [], []
    for op in pool:
        tau = _generator(op)
        m = _support(commutator(H, tau))
        per.append(m)
        if criterion == "delta_e":
            tau2 = multiply(tau, tau)
            h_t2 = multiply(H, tau2)
            t2_h = multiply(tau2, H)
            t_h_t = multiply(tau, multiply(H, tau))
            parts = [
                t2_h + h_t2,
                t_h_t,
                multiply(t_h_t, tau) - multiply(tau, t_h_t),
                multiply(tau2, h_t2),
            ]
            extra.append(set().union(*(_support(p) for p in parts)) - m)
    union = set().union(*per) if per else set()
    over = (set().union(*extra) - union) if extra else set()
    return MeasurementReport(per, union, criterion, extra, over)
