import csv
import json
import os
import subprocess
import sys

import pytest

from lamprate.cli import main
from lamprate.config import ConfigError, config_from_dict, load_config, preset, preset_names
from lamprate.estimators import RateEstimates


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj, indent=2))
    return str(p)


def small_f2(tmp_path, **kw):
    doc = {
        "name": "small",
        "backend": {"kind": "free_group", "rank": 2},
        "measure": {"type": "walk-switch", "mu0": "uniform"},
        "horizon": 100,
        "trials": 4,
        "seed": 5,
        "return_trials": 20,
        "output": str(tmp_path / "out"),
    }
    doc.update(kw)
    return write(tmp_path, "cfg.json", doc)


def test_simulate_writes_outputs_and_round_trips(tmp_path, capsys):
    cfg = small_f2(tmp_path)
    assert main(["simulate", "--config", cfg]) == 0
    out = tmp_path / "out"
    doc = json.loads((out / "estimates.json").read_text())
    est = RateEstimates.from_dict(doc["estimates"])
    assert RateEstimates.from_dict(json.loads(json.dumps(est.to_dict()))) == est
    assert est.trials == 4 and est.horizon == 100
    lines = (out / "checkpoints.jsonl").read_text().splitlines()
    first = json.loads(lines[0])
    assert {"trial", "seed", "n", "distance", "support", "range", "dts", "mode"} <= set(first)
    rows = list(csv.DictReader((out / "summary.csv").open()))
    assert rows[0]["name"] == "small"
    assert "identity" in capsys.readouterr().out


def test_simulate_overrides_and_jobs(tmp_path):
    cfg = small_f2(tmp_path)
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", cfg, "--seed", "9", "--trials", "3", "--horizon", "120",
                 "--out", str(a)]) == 0
    assert main(["simulate", "--config", cfg, "--seed", "9", "--trials", "3", "--horizon", "120",
                 "--jobs", "2", "--out", str(b)]) == 0
    assert (a / "checkpoints.jsonl").read_text() == (b / "checkpoints.jsonl").read_text()
    est = json.loads((a / "estimates.json").read_text())["estimates"]
    assert est["seed"] == 9 and est["trials"] == 3 and est["horizon"] == 120


@pytest.mark.parametrize("name", preset_names())
def test_every_preset_runs_small(tmp_path, name):
    args = ["simulate", "--preset", name, "--trials", "2", "--horizon", "100", "--out", str(tmp_path)]
    assert main(args) == 0


def test_malformed_config_exit_2(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", '{\n  "backend": {"kind": "free_group"},\n  "horizon": 10,\n}')
    assert main(["simulate", "--config", bad]) == 2
    assert "line" in capsys.readouterr().err
    cfg = small_f2(tmp_path, measure={"type": "walk-switch", "mu0": {"a": "1/2", "b": "1/3"}})
    assert main(["simulate", "--config", cfg]) == 2
    assert "mu0" in capsys.readouterr().err
    assert main(["simulate"]) == 2
    assert main(["simulate", "--config", str(tmp_path / "missing.json")]) == 2


def test_config_error_points_at_field_and_line():
    text = '{\n  "backend": {"kind": "free_group", "rank": 2},\n  "measure": {"type": "walk-switch", "mu0": "uniform"},\n  "trials": "many"\n}'
    with pytest.raises(ConfigError) as err:
        config_from_dict(json.loads(text), text)
    assert err.value.field_name == "trials"
    assert "line 4" in str(err.value)


def test_simulation_error_exit_1(tmp_path, capsys):
    cfg = small_f2(
        tmp_path,
        backend={"kind": "lattice", "generators": [{"vector": [1, 0], "length": "1"},
                                                   {"vector": [0, 1], "length": "1"}]},
        tsp={"mode": "exact", "cap": 2},
        return_trials=0,
    )
    assert main(["simulate", "--config", cfg]) == 1
    err = capsys.readouterr().err
    assert "trial" in err and "checkpoint" in err


def test_presets_are_immutable_and_dumpable(capsys):
    p = preset("f2-walk-switch")
    p["horizon"] = 1
    assert preset("f2-walk-switch")["horizon"] == 2000
    assert main(["presets", "--dump", "z-counterexample-p075"]) == 0
    dumped = json.loads(capsys.readouterr().out)
    assert len(dumped["measure"]["atoms"]) == 12
    assert main(["presets"]) == 0
    assert "c2c2-drift" in capsys.readouterr().out
    assert main(["presets", "--dump", "nope"]) == 2


def test_dumped_preset_loads_as_config(tmp_path, capsys):
    main(["presets", "--dump", "z-srw-walk-switch"])
    path = write(tmp_path, "p.json", capsys.readouterr().out)
    cfg = load_config(path)
    assert cfg.horizon == 10000 and cfg.measure.kind == "walk-switch"


def test_verify_lemmas_pass(capsys):
    assert main(["verify-lemmas"]) == 0
    out = capsys.readouterr().out
    assert "RESULT: PASS" in out
    assert "[degenerate]" in out and "linear metric" in out


def test_verify_lemmas_fault_injection(tmp_path, capsys):
    cfg = write(tmp_path, "v.json", {"assignments": 5,
                                     "fault": {"case": "I", "row": 1, "column": "diff", "scale": 3}})
    assert main(["verify-lemmas", "--config", cfg]) == 1
    out = capsys.readouterr().out
    assert "RESULT: FAIL" in out and "'row': 1" in out


def test_verify_lemmas_linear_backend_only(tmp_path, capsys):
    cfg = write(tmp_path, "v.json", {"assignments": 3, "backends": [
        {"kind": "lattice", "generators": [{"vector": [1], "length": "1"}, {"vector": [2], "length": "3"},
                                           {"vector": [3], "length": "5"}]}]})
    assert main(["verify-lemmas", "--config", cfg]) == 0
    assert "[degenerate]" in capsys.readouterr().out


def tsp_instance(tmp_path, support, target, backend=None, **kw):
    backend = backend or {"kind": "lattice", "generators": [{"vector": [1], "length": "1"}]}
    return write(tmp_path, "inst.json", {"backend": backend, "support": support, "target": target, **kw})


def test_tsp_line_example(tmp_path, capsys):
    assert main(["tsp", tsp_instance(tmp_path, ["-1"], "2")]) == 0
    out = capsys.readouterr().out
    assert "value: 4" in out and "mode: exact-line" in out


def test_tsp_empty_support_is_geodesic(tmp_path, capsys):
    f2 = {"kind": "free_group", "rank": 2}
    assert main(["tsp", tsp_instance(tmp_path, [], "abA", backend=f2)]) == 0
    assert "value: 3" in capsys.readouterr().out


def test_tsp_check_size_seven(tmp_path, capsys):
    z2 = {"kind": "lattice", "generators": [{"vector": [1, 0], "length": "1"},
                                            {"vector": [0, 1], "length": "3/2"}]}
    supp = ["(1,2)", "(-1,0)", "(3,1)", "(0,-2)", "(2,2)", "(-2,1)", "(1,-1)"]
    path = tsp_instance(tmp_path, supp, "(1,1)", backend=z2)
    assert main(["tsp", path, "--check"]) == 0
    assert "oracle agreement" in capsys.readouterr().out
    assert main(["tsp", "--config", path, "--tsp-mode", "heuristic", "--check"]) == 0
    assert "oracle comparison" in capsys.readouterr().out


def test_tsp_cap_error(tmp_path, capsys):
    z2 = {"kind": "lattice", "generators": [{"vector": [1, 0], "length": "1"},
                                            {"vector": [0, 1], "length": "1"}]}
    supp = [f"({i},{i % 3})" for i in range(1, 8)]
    assert main(["tsp", tsp_instance(tmp_path, supp, "(0,0)", backend=z2, cap=3),
                 "--tsp-mode", "exact"]) == 1
    assert "hint" in capsys.readouterr().err


def test_tsp_bad_instance(tmp_path):
    assert main(["tsp", write(tmp_path, "x.json", {"support": []})]) == 2
    assert main(["tsp"]) == 2


def test_console_script_and_log_env(tmp_path):
    env = {**os.environ, "LAMPRATE_LOG": "INFO"}
    cfg = small_f2(tmp_path, return_trials=0)
    r = subprocess.run([sys.executable, "-m", "lamprate.cli", "simulate", "--config", cfg],
                       capture_output=True, text=True, env=env)
    assert r.returncode == 0
    assert "INFO lamprate" in r.stderr
    env["LAMPRATE_LOG"] = "ERROR"
    r = subprocess.run([sys.executable, "-m", "lamprate.cli", "presets"],
                       capture_output=True, text=True, env=env)
    assert r.returncode == 0 and r.stderr == ""
