"""``adapt-forge`` command line: run, verify, spectrum."""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import numpy as np

from .adapt import (
    AdaptConfig,
    adapt_run,
    cnot_reduction_ratio,
    cnots_to_accuracy,
    csf_state,
    excited_objective,
    measurement_cost,
)
from .circuits import Circuit, ansatz_to_circuit, export_qasm
from .integrals import FCIDumpError, molecular_qubit_hamiltonian, read_fcidump
from .pools import POOL_KINDS, generate_pool
from .reference import exact_spectrum, first_excited_singlet, spectrum_csv
from .statevector import load_amplitudes, reference_state
from .verify import run_checks

EXIT_OK, EXIT_ERROR, EXIT_CAP = 0, 1, 2
ACCURACY_TARGETS = (1e-3, 1e-6)
RUN_KEYS = {
    "fcidump", "pool", "mode", "criterion", "epsilon", "max_iterations", "output",
    "seed", "target", "excited", "gtol", "max_evaluations",
}


class ConfigError(ValueError):
    pass


def load_config(path) -> dict:
    """Read a TOML run file; relative paths resolve against its directory."""
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"bad TOML in {path}: {exc}") from None
    unknown = set(raw) - RUN_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    if "fcidump" not in raw:
        raise ConfigError("config needs an 'fcidump' path")
    base = path.parent
    cfg = dict(raw)
    cfg["fcidump"] = base / raw["fcidump"]
    cfg["output"] = base / raw.get("output", "adapt_forge_out")
    pools = raw.get("pool", "sqeb")
    cfg["pool"] = [pools] if isinstance(pools, str) else list(pools)
    for p in cfg["pool"]:
        if p not in POOL_KINDS:
            raise ConfigError(f"unknown pool {p!r}; expected one of {sorted(POOL_KINDS)}")
    excited = raw.get("excited")
    cfg["target"] = raw.get("target", "excited" if excited is not None else "ground")
    cfg["excited"] = dict(excited or {})
    if "ground_state" in cfg["excited"]:
        cfg["excited"]["ground_state"] = base / cfg["excited"]["ground_state"]
    return cfg


def _adapt_config(cfg, pool_kind, workers) -> AdaptConfig:
    ex = cfg["excited"]
    kw = dict(
        pool_kind=pool_kind,
        mode=cfg.get("mode", "restricted"),
        criterion=cfg.get("criterion", "gradient"),
        epsilon=float(cfg.get("epsilon", 1e-5)),
        max_iterations=int(cfg.get("max_iterations", 200)),
        target=cfg["target"],
        alpha=float(ex.get("alpha", 3.0)),
        beta=float(ex.get("beta", 1.0)),
        workers=workers,
    )
    if "gtol" in cfg:
        kw["gtol"] = float(cfg["gtol"])
    if "max_evaluations" in cfg:
        kw["max_evaluations"] = int(cfg["max_evaluations"])
    try:
        return AdaptConfig(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _workers():
    raw = os.environ.get("ADAPT_FORGE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ConfigError(f"ADAPT_FORGE_THREADS must be an integer, got {raw!r}") from None


def _sector(ints):
    return (ints.nelec, ints.ms2 / 2)


def _sector_dim(ints):
    n_alpha = (ints.nelec + ints.ms2) // 2
    return math.comb(ints.norb, n_alpha) * math.comb(ints.norb, ints.nelec - n_alpha)


def _execute(cfg, ints, H, acfg):
    """One pool: returns (trace, reference energy, artifacts dict)."""
    n = ints.n_qubits
    pool = generate_pool(acfg.pool_kind, ints.norb, ints.nelec, acfg.mode)
    if acfg.target == "ground":
        objective = H
        psi0 = reference_state(n, ints.hf_occupation)
        e_ref = exact_spectrum(H, 1, _sector(ints), observables=False)[0].eigenvalue
    else:
        ex = cfg["excited"]
        if "ground_state" in ex:
            ground = load_amplitudes(ex["ground_state"])
        else:
            gcfg = replace(acfg, criterion="gradient", epsilon=acfg.epsilon / 10, target="ground")
            ground = adapt_run(gcfg, H, reference_state(n, ints.hf_occupation), pool).state
        ground = ground / np.linalg.norm(ground)
        objective = excited_objective(H, ground, acfg.alpha, acfg.beta)
        open_shell = ex.get("open_shell")
        psi0 = csf_state(n, ex.get("occupied", ints.hf_occupation if open_shell is None else []), open_shell)
        e_ref = first_excited_singlet(H, _sector(ints), k=min(12, _sector_dim(ints))).eigenvalue
    trace = adapt_run(acfg, objective, psi0, pool)
    report = measurement_cost(pool, H, acfg.criterion)
    try:
        circuit = ansatz_to_circuit(trace.ansatz, n)
        qasm = export_qasm(circuit)
    except ValueError:
        # fermionic elements have a CNOT cost but no gate-level layout here
        qasm = export_qasm(Circuit(n)) + "".join(
            f"// {op.kind} {' '.join(map(str, op.indices))} theta={t!r}\n" for op, t in trace.ansatz.elements
        )
    final = float(np.vdot(trace.state, H.sparse @ trace.state).real)
    summary = {
        "pool": acfg.pool_kind,
        "mode": acfg.mode,
        "criterion": acfg.criterion,
        "target": acfg.target,
        "status": trace.status,
        "iterations": len(trace.rows),
        "final_energy": final,
        "objective_value": trace.final_energy,
        "reference_energy": e_ref,
        "error": final - e_ref,
        "total_cnots": trace.total_cnots,
        "parameters": len(trace.ansatz),
        "screening_norm": trace.final_norm,
        "measurements": {
            "union": report.union_size,
            "per_operator_total": int(sum(report.sizes)),
            "delta_e_overhead": len(report.overhead_union),
        },
        "cnots_to_accuracy": {f"{t:g}": cnots_to_accuracy(trace, e_ref, t) for t in ACCURACY_TARGETS},
    }
    if trace.message:
        summary["message"] = trace.message
    return trace, summary, qasm


def _write_run(outdir: Path, trace, summary, qasm):
    outdir.mkdir(parents=True, exist_ok=True)
    (outdir / "trace.csv").write_text(trace.to_csv())
    (outdir / "summary.json").write_text(json.dumps(summary, indent=2) + "\n")
    (outdir / "ansatz.qasm").write_text(qasm)


def cmd_run(args) -> int:
    cfg = load_config(args.config)
    if args.pool:
        cfg["pool"] = list(args.pool)
    if args.output:
        cfg["output"] = Path(args.output)
    if not Path(cfg["fcidump"]).is_file():
        raise ConfigError(f"FCIDUMP not found: {cfg['fcidump']}")
    workers = _workers()
    ints = read_fcidump(cfg["fcidump"])
    H = molecular_qubit_hamiltonian(ints)
    results = {}
    for kind in cfg["pool"]:
        acfg = _adapt_config(cfg, kind, workers)
        results[kind] = _execute(cfg, ints, H, acfg)
    out = Path(cfg["output"])
    compare = len(results) > 1
    for kind, (trace, summary, qasm) in results.items():
        _write_run(out / kind if compare else out, trace, summary, qasm)
        print(f"{kind}: {summary['status']} after {summary['iterations']} iterations, "
              f"E = {summary['final_energy']:.12g} Ha, error {summary['error']:.3e}, "
              f"CNOTs {summary['total_cnots']}")
    if compare and {"sqeb", "qeb"} <= set(results):
        s, q = results["sqeb"][1], results["qeb"][1]
        comp = {"final": _ratio(s["total_cnots"], q["total_cnots"])}
        for t in ACCURACY_TARGETS:
            key = f"{t:g}"
            comp[key] = _ratio(s["cnots_to_accuracy"][key], q["cnots_to_accuracy"][key])
        (out / "comparison.json").write_text(json.dumps({"cnot_reduction": comp}, indent=2) + "\n")
        for key, v in comp.items():
            print(f"CNOT reduction 1 - n_sQEB/n_QEB [{key}]: {'n/a' if v is None else f'{v:.4f}'}")
    statuses = [r[0].status for r in results.values()]
    if any(s == "optimizer_failure" for s in statuses):
        return EXIT_ERROR
    if any(s == "iteration_cap" for s in statuses):
        return EXIT_CAP
    return EXIT_OK


def _ratio(a, b):
    if a is None or not b:
        return None
    return cnot_reduction_ratio(a, b)


def cmd_verify(args) -> int:
    results = run_checks()
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}  ({r.detail})")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print(f"{len(failed)} check(s) failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_OK


def cmd_spectrum(args) -> int:
    cfg = load_config(args.config)
    if not Path(cfg["fcidump"]).is_file():
        raise ConfigError(f"FCIDUMP not found: {cfg['fcidump']}")
    ints = read_fcidump(cfg["fcidump"])
    H = molecular_qubit_hamiltonian(ints)
    entries = exact_spectrum(H, args.k, None if args.full else _sector(ints))
    sys.stdout.write(spectrum_csv(entries))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="adapt-forge", description="ADAPT-VQE on exact statevectors")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run ADAPT-VQE from a TOML config")
    run.add_argument("--config", required=True)
    run.add_argument("--pool", action="append", choices=sorted(POOL_KINDS),
                     help="override the pool; repeat for a comparison run")
    run.add_argument("--output", help="override the output directory")
    run.set_defaults(func=cmd_run)
    ver = sub.add_parser("verify", help="circuit and identity self-checks")
    ver.set_defaults(func=cmd_verify)
    spectrum_p = sub.add_parser("spectrum", help="lowest eigenvalues of the fixture Hamiltonian")
    spectrum_p.add_argument("--config", required=True)
    spectrum_p.add_argument("-k", type=int, default=4)
    spectrum_p.add_argument("--full", action="store_true", help="whole Fock space instead of the (N, Sz) sector")
    spectrum_p.set_defaults(func=cmd_spectrum)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, FCIDumpError, OSError, ValueError, IndexError) as exc:
        print(f"adapt-forge: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
