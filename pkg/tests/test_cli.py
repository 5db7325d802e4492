import json
import shutil

import pytest

import adapt_forge.cli as cli
from adapt_forge.datasets import fixture_path
from adapt_forge.pools import _kappa, build_generator
from adapt_forge.verify import run_checks


@pytest.fixture
def h2_config(tmp_path):
    shutil.copy(fixture_path("h2_0.74"), tmp_path / "h2.fcidump")
    cfg = tmp_path / "run.toml"
    cfg.write_text('fcidump = "h2.fcidump"\npool = "sqeb"\nepsilon = 1e-5\noutput = "out"\n')
    return cfg


def test_run_writes_artifacts(h2_config, capsys):
    assert cli.main(["run", "--config", str(h2_config)]) == 0
    out = h2_config.parent / "out"
    summary = json.loads((out / "summary.json").read_text())
    assert summary["status"] == "converged" and abs(summary["error"]) < 1e-8
    assert summary["total_cnots"] == 9
    assert (out / "trace.csv").read_text().splitlines()[0].startswith("iter,kind,indices")
    assert (out / "ansatz.qasm").read_text().count("cx ") == 9
    assert "converged" in capsys.readouterr().out


def test_run_is_deterministic(h2_config, tmp_path):
    cli.main(["run", "--config", str(h2_config), "--output", str(tmp_path / "a")])
    cli.main(["run", "--config", str(h2_config), "--output", str(tmp_path / "b")])
    assert (tmp_path / "a" / "trace.csv").read_bytes() == (tmp_path / "b" / "trace.csv").read_bytes()


def test_comparison_mode(h2_config):
    out = h2_config.parent / "cmp"
    code = cli.main(["run", "--config", str(h2_config), "--pool", "sqeb", "--pool", "qeb", "--pool", "feb",
                     "--output", str(out)])
    assert code == 0
    comp = json.loads((out / "comparison.json").read_text())["cnot_reduction"]
    assert comp["final"] == pytest.approx(4 / 13)
    assert (out / "feb" / "ansatz.qasm").read_text().splitlines()[3].startswith("// FEB2")


def test_iteration_cap_exit_code(h2_config):
    h2_config.write_text(h2_config.read_text() + "max_iterations = 0\n")
    assert cli.main(["run", "--config", str(h2_config)]) == 2


def test_excited_run(h2_config):
    h2_config.write_text('fcidump = "h2.fcidump"\ncriterion = "delta_e"\n[excited]\nopen_shell = [0, 1]\n')
    assert cli.main(["run", "--config", str(h2_config), "--output", str(h2_config.parent / "ex")]) == 0
    summary = json.loads((h2_config.parent / "ex" / "summary.json").read_text())
    assert summary["target"] == "excited" and abs(summary["error"]) < 1.59e-3


def test_missing_fcidump_leaves_no_output(tmp_path, capsys):
    cfg = tmp_path / "run.toml"
    cfg.write_text('fcidump = "absent.fcidump"\noutput = "out"\n')
    assert cli.main(["run", "--config", str(cfg)]) == 1
    assert not (tmp_path / "out").exists()
    assert "not found" in capsys.readouterr().err


@pytest.mark.parametrize("body", ['pool = "sqeb"\n', 'fcidump = "x"\ncolour = 1\n', 'fcidump = "x"\npool = "abc"\n', "fcidump = [\n"])
def test_bad_configs(tmp_path, body):
    cfg = tmp_path / "run.toml"
    cfg.write_text(body)
    assert cli.main(["run", "--config", str(cfg)]) == 1


def test_thread_override(h2_config, monkeypatch):
    monkeypatch.setenv("ADAPT_FORGE_THREADS", "many")
    assert cli.main(["run", "--config", str(h2_config)]) == 1
    monkeypatch.setenv("ADAPT_FORGE_THREADS", "3")
    assert cli.main(["run", "--config", str(h2_config)]) == 0


def test_spectrum_command(h2_config, capsys):
    assert cli.main(["spectrum", "--config", str(h2_config), "-k", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "index,eigenvalue,N,Sz,S2" and lines[1].startswith("0,-1.13728383449")


def test_verify_command(capsys):
    assert cli.main(["verify"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 12 and "FAIL" not in out


def test_verify_detects_a_broken_generator():
    def mutated(kind, idx, n):
        if kind == "SQEB2":
            p, q, r, s = idx
            return 1.01 * _kappa(n, p, q, r, s) + _kappa(n, q, r, s, p)
        return build_generator(kind, idx, n)

    failed = {r.name for r in run_checks(build=mutated) if not r.passed}
    assert "combination identity" in failed
    assert "sqeb2 circuit == exp(theta tau)" in failed
