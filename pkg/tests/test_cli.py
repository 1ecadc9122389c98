import json

import pytest

from nodalburgers import cli


def run_cli(args):
    return cli.main(args)


def read_nontimestamp(path):
    with open(path) as fh:
        return [ln for ln in fh if not ln.startswith("#")]


def test_run_zero_example_writes_zero_field(tmp_path):
    out = tmp_path / "zero.csv"
    code = run_cli(["run", "--example", "zero", "--nx", "8", "--dt", "0.05",
                    "--t-final", "0.2", "-o", str(out)])
    assert code == 0
    rows = [ln.split(",") for ln in read_nontimestamp(out)[1:]]
    field = [r for r in rows if r[9] == "field"]
    assert len(field) == 8
    assert all(float(r[12]) == 0.0 for r in field)


def test_run_deterministic_output(tmp_path):
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    args = ["run", "--example", "sine", "--re", "10", "--nx", "8",
            "--dt", "0.05", "--t-final", "0.1"]
    assert run_cli(args + ["-o", str(a)]) == 0
    assert run_cli(args + ["-o", str(b)]) == 0
    assert read_nontimestamp(a) == read_nontimestamp(b)


def test_run_json_format(tmp_path):
    out = tmp_path / "run.json"
    code = run_cli(["run", "--example", "sine", "--re", "10", "--nx", "8",
                    "--dt", "0.05", "--t-final", "0.1", "--format", "json",
                    "-o", str(out)])
    assert code == 0
    doc = json.loads(out.read_text())
    assert doc["config"]["example"] == "sine"
    records = [r[0] for r in doc["rows"]]
    assert "rms" in records and "krylov_total" in records


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("example=sine\nre=10\nnx=16\ndt=0.05\nt-final=0.1\n")
    out1 = tmp_path / "o1.csv"
    assert run_cli(["run", "--config", str(cfg), "-o", str(out1)]) == 0
    rows = [ln.split(",") for ln in read_nontimestamp(out1)[1:]]
    assert sum(r[9] == "field" for r in rows) == 16  # nx from file
    out2 = tmp_path / "o2.csv"
    assert run_cli(["run", "--config", str(cfg), "--nx", "8", "-o", str(out2)]) == 0
    rows = [ln.split(",") for ln in read_nontimestamp(out2)[1:]]
    assert sum(r[9] == "field" for r in rows) == 8  # flag overrides file


def test_bad_config_exit_code(tmp_path):
    code = run_cli(["run", "--example", "sine", "--nx", "8",
                    "--dt", "0.03", "--t-final", "0.1"])
    assert code == cli.EXIT_CONFIG


def test_divergence_exit_code():
    code = run_cli(["run", "--example", "shock1d", "--re", "1e6", "--nx", "40",
                    "--dt", "0.0125", "--t-final", "0.05", "--closure", "modified"])
    assert code == cli.EXIT_DIVERGED


def test_sweep_reports_second_order(tmp_path):
    out = tmp_path / "sweep.csv"
    code = run_cli(["sweep", "--example", "sine", "--re", "10", "--nx", "8",
                    "--dt", "0.001", "--t-final", "0.05", "--axis", "dx",
                    "--levels", "3", "-o", str(out)])
    assert code == 0
    lines = read_nontimestamp(out)
    slope = float(lines[-1].split(",")[-1])
    assert slope == pytest.approx(2.0, abs=0.25)


def test_sweep_needs_three_levels():
    assert run_cli(["sweep", "--levels", "2"]) == cli.EXIT_CONFIG


def test_reproduce_tolerance_failure(monkeypatch, tmp_path):
    monkeypatch.setitem(cli.TABLE_T1, (50.0, 1.0, "modified"), 1.0)  # absurd ref
    monkeypatch.delitem(cli.TABLE_T1, (50.0, 3.0, "modified"))
    monkeypatch.delitem(cli.TABLE_T1, (100.0, 1.0, "modified"))
    monkeypatch.delitem(cli.TABLE_T1, (100.0, 3.0, "modified"))
    monkeypatch.delitem(cli.TABLE_T1, (50.0, 1.0, "simple"))
    monkeypatch.delitem(cli.TABLE_T1, (50.0, 3.0, "simple"))
    monkeypatch.delitem(cli.TABLE_T1, (100.0, 1.0, "simple"))
    monkeypatch.delitem(cli.TABLE_T1, (100.0, 3.0, "simple"))
    out = tmp_path / "t1.csv"
    code = run_cli(["reproduce", "t1", "-o", str(out)])
    assert code == cli.EXIT_TOLERANCE
    verdicts = [ln.rsplit(",", 1)[-1].strip() for ln in read_nontimestamp(out)[1:]]
    assert "FAIL" in verdicts


def test_shock_velocity_command(tmp_path):
    out = tmp_path / "sv.csv"
    code = run_cli(["shock-velocity", "--re", "1e9", "--nx", "80",
                    "--dt", "0.0125", "--t-final", "0.5", "--closure", "simple",
                    "-o", str(out)])
    assert code == 0
    rows = {r.split(",")[9]: r.split(",") for r in read_nontimestamp(out)[1:]}
    assert "s_num" in rows and "s_theory" in rows


def test_energy_command(tmp_path):
    out = tmp_path / "en.csv"
    code = run_cli(["energy", "--re", "10", "--nx", "20", "--dt", "0.01",
                    "--t-final", "0.1", "-o", str(out)])
    assert code == 0
    rows = [r.split(",") for r in read_nontimestamp(out)[1:]]
    energies = [float(r[11]) for r in rows if r[9] == "level"]
    assert len(energies) == 11
    assert energies[0] > 0
