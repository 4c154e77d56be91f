import csv
import io
import json
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meanforge.cli import load_matrix_file, main, parse_complex, read_matrix
from meanforge.harness import (CSV_COLUMNS, TrialConfig, emit_report, generate_pd, render_report,
                               run_suite, trial_seed)


def test_generate_pd_deterministic():
    a, b = generate_pd(42, 4), generate_pd(42, 4)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, generate_pd(43, 4))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2 ** 63), st.integers(1, 8), st.sampled_from([1.0, 1.5, 10.0, 1e4, 1e8]),
       st.sampled_from(["real", "complex"]))
def test_generate_pd_contract(seed, dim, cap, field):
    m = generate_pd(seed, dim, cap, field)
    assert np.array_equal(m, m.conj().T)
    lam = np.linalg.eigvalsh(m)
    assert lam[0] > 0
    assert lam[-1] / lam[0] <= cap * (1 + 1e-9)
    assert np.iscomplexobj(m) == (field == "complex")


def test_generate_pd_rejects_bad_dim():
    with pytest.raises(ValueError):
        generate_pd(0, 0)


def test_trial_seed_stable():
    assert trial_seed(7, 3) == trial_seed(7, 3)
    assert len({trial_seed(7, i) for i in range(100)}) == 100
    assert trial_seed(7, 3) != trial_seed(8, 3)


def test_config_validation():
    for bad in ({"tol": 0.0}, {"condition_cap": 0.5}, {"dim": 0}, {"field": "quaternion"},
                {"trials": -1}, {"nu_list": ("3/2",)}):
        with pytest.raises(ValueError):
            TrialConfig(**bad)


def test_scalar_dyadic_equality_count():
    rep = run_suite(TrialConfig(trials=100, nu_list=("1/4",)), "scalar")
    assert rep["summary"]["failure_count"] == 0
    assert rep["summary"]["equality_case_count"] == 100


def test_empty_report():
    rep = run_suite(TrialConfig(trials=0), "all")
    assert rep["trials"] == [] and rep["summary"]["failure_count"] == 0
    doc = json.loads(render_report(rep))
    assert doc["summary"]["trials"] == 0
    rows = list(csv.reader(io.StringIO(render_report(rep, "csv"))))
    assert rows == [list(CSV_COLUMNS)]


def test_scalar_row_ids():
    rep = run_suite(TrialConfig(trials=1, nu_list=("1/3",)), "scalar")
    ids = {r["inequality"] for r in rep["trials"][0]["verdicts"]}
    assert {"y1", "y2", "y3", "y4", "y5", "y6", "heinz-lower", "heinz-upper"} <= ids
    assert {"re1-lower", "re1-upper", "re2-lower", "re2-upper"} <= ids
    assert any(i.startswith(("e10", "e11")) for i in ids)


def test_all_levels_deterministic_and_clean():
    cfg = TrialConfig(master_seed=123, trials=12, dim=3)
    a, b = render_report(run_suite(cfg, "all")), render_report(run_suite(cfg, "all"))
    assert a == b
    doc = json.loads(a)
    assert doc["summary"]["failure_count"] == 0
    assert [t["trial"] for t in doc["trials"]] == list(range(12))
    assert doc["config"]["master_seed"] == 123
    assert {r["level"] for r in doc["trials"][0]["verdicts"]} == {"scalar", "operator", "hsnorm"}


def test_complex_field_runs_clean():
    rep = run_suite(TrialConfig(trials=6, dim=5, field="complex"), "all")
    assert rep["summary"]["failure_count"] == 0


def test_emit_roundtrip(tmp_path):
    rep = run_suite(TrialConfig(trials=3, dim=2), "operator")
    path = tmp_path / "r.json"
    emit_report(rep, path)
    assert json.loads(path.read_text())["summary"] == json.loads(json.dumps(rep["summary"]))
    emit_report(rep, tmp_path / "r.csv", "csv")
    rows = list(csv.DictReader(open(tmp_path / "r.csv")))
    assert len(rows) == sum(len(t["verdicts"]) for t in rep["trials"])
    assert set(rows[0]) == set(CSV_COLUMNS)
    with pytest.raises(OSError):
        emit_report(rep, tmp_path / "missing" / "r.json")


def test_parse_complex():
    assert parse_complex("1.5-2i") == 1.5 - 2j
    assert parse_complex("3") == 3
    assert parse_complex("-i") == -1j
    assert parse_complex("2+i") == 2 + 1j
    assert parse_complex(4.0) == 4
    with pytest.raises(ValueError):
        parse_complex("abc")


def test_read_matrix_real_and_complex():
    assert read_matrix([["1", "2"], ["2", "1"]]).dtype == np.float64
    assert read_matrix([["1", "2-i"], ["2+i", "1"]])[0, 1] == 2 - 1j


@pytest.fixture
def matrix_file(tmp_path):
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"A": [["4", "0"], ["0", "1"]], "B": [["1", "0"], ["0", "1"]],
                                "X": [["1", "1"], ["1", "1"]]}))
    return path


def test_load_matrix_file(matrix_file, tmp_path):
    m = load_matrix_file(matrix_file)
    assert m["A"].shape == (2, 2) and "X" in m
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"A": [[1]]}))
    with pytest.raises(ValueError):
        load_matrix_file(bad)


def test_cli_matrix_file(matrix_file, capsys):
    assert main(["all", "--matrix-file", str(matrix_file), "--nu", "1/2", "--nu", "1/4"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["summary"]["trials"] == 2
    assert doc["config"]["matrix_file"] is True


def test_cli_out_and_summary(tmp_path, capsys):
    out = tmp_path / "r.csv"
    assert main(["scalar", "--trials", "5", "--out", str(out), "--format", "csv"]) == 0
    assert "5 trials, 0 failures" in capsys.readouterr().out
    assert out.read_text().startswith(",".join(CSV_COLUMNS))


def test_cli_errors(tmp_path, capsys):
    assert main(["scalar", "--nu", "2"]) == 2
    assert main(["scalar", "--matrix-file", str(tmp_path / "nope.json")]) == 2
    assert main(["scalar", "--trials", "1", "--out", str(tmp_path / "x" / "y.json")]) == 2
    assert "error" in capsys.readouterr().err


def test_cli_schedule(capsys):
    assert main(["schedule", "--nu", "3/8", "--depth", "4"]) == 0
    out = capsys.readouterr().out
    assert "3/8" in out


def test_cli_seed_env_override(monkeypatch, capsys):
    main(["scalar", "--trials", "2", "--seed", "5"])
    plain = json.loads(capsys.readouterr().out)
    monkeypatch.setenv("MEANFORGE_SEED", "99")
    main(["scalar", "--trials", "2", "--seed", "5"])
    env = json.loads(capsys.readouterr().out)
    assert env["config"]["master_seed"] == 99
    assert env["trials"][0]["seed"] != plain["trials"][0]["seed"]


def test_cli_exit_status_on_failure(monkeypatch, capsys):
    from meanforge import harness
    from meanforge.verdict import compare

    def broken(rng, nu, config):
        return [compare("forced", 1.0, 0.0, 1.0, 1e-10)], {}, ""

    monkeypatch.setitem(harness._RUNNERS, "scalar", broken)
    assert main(["scalar", "--trials", "1"]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["summary"]["failures"][0]["inequality"] == "scalar:forced"


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "meanforge", "schedule", "--nu", "1/4"],
                         capture_output=True, text=True, env=dict(os.environ), check=True)
    assert "1/4" in out.stdout
