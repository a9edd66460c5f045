"""Command-line interface tests."""
import csv
import json

import numpy as np
import pytest

import losform as lf
from losform import cli


def _read_csv(path):
    with open(path) as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    data = np.array([[float(v) for v in row] for row in rows[1:]])
    return header, data


def test_run_preset_writes_outputs(tmp_path, capsys):
    out = tmp_path / "results"
    rc = cli.main(["run", "--preset", "two-spacecraft", "--tf", "0.5",
                   "--out", str(out)])
    assert rc == 0
    assert "two-spacecraft" in capsys.readouterr().out
    for name in ("states.csv", "errors.csv", "controls.csv",
                 "lyapunov.csv", "summary.json"):
        assert (out / name).exists()

    header, data = _read_csv(out / "states.csv")
    assert header[0] == "t"
    assert "R1_11" in header and "x2_3" in header and "Omega1_1" in header
    assert len(header) == 1 + 2 * (9 + 9)
    assert np.all(np.isfinite(data))
    assert np.all(np.diff(data[:, 0]) > 0.0)

    header, data = _read_csv(out / "errors.csv")
    assert "norm_e_R1" in header and "norm_e_Q21" in header
    assert "Psi_R1" in header and "norm_e_x_Q21" in header
    assert np.all(np.isfinite(data))

    header, data = _read_csv(out / "controls.csv")
    assert "u1_1" in header and "f2_3" in header

    header, data = _read_csv(out / "lyapunov.csv")
    assert header[:2] == ["t", "V_total"]
    assert "Vr_R1" in header and "min_eig_N_Q21" in header

    summary = json.loads((out / "summary.json").read_text())
    assert summary["scenario"] == "two-spacecraft"
    assert summary["t_final"] == 0.5


def test_csv_values_round_trip_exactly(tmp_path):
    out = tmp_path / "r"
    log = lf.run(lf.two_spacecraft_tracking(), t_final=0.2)
    cli.write_outputs(log, out)
    _, data = _read_csv(out / "states.csv")
    # .17g formatting round-trips IEEE doubles bit-exactly.
    assert np.array_equal(data[:, 0], log.t)
    assert np.array_equal(data[:, 1], log.R[:, 0, 0, 0])
    _, lyap = _read_csv(out / "lyapunov.csv")
    assert np.array_equal(lyap[:, 1], log.V_total)


def test_run_unknown_preset(tmp_path, capsys):
    rc = cli.main(["run", "--preset", "bogus", "--out", str(tmp_path / "x")])
    assert rc == 2
    assert "unknown preset" in capsys.readouterr().err


def test_run_missing_scenario_file(tmp_path):
    rc = cli.main(["run", "--scenario", str(tmp_path / "missing.yaml"),
                   "--out", str(tmp_path / "x")])
    assert rc == 4


def test_run_geometry_failure(tmp_path, capsys):
    # Common object on the line joining the pair at t = 0.
    d = lf.scenario_to_dict(lf.two_spacecraft_tracking())
    x1 = np.array(d["initial_states"][0]["x"])
    x2 = np.array(d["initial_states"][1]["x"])
    mid = [float(c) for c in 0.5 * (x1 + x2)]
    d["pairs"][0]["common"] = {
        "type": "world",
        "position": {"x": mid[0], "y": mid[1], "z": mid[2]}}
    path = tmp_path / "degenerate.yaml"
    lf.save_scenario(lf.scenario_from_dict(d), path)
    rc = cli.main(["run", "--scenario", str(path),
                   "--out", str(tmp_path / "x")])
    assert rc == 3
    assert "pair (2,1)" in capsys.readouterr().err


def test_run_unwritable_output(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    rc = cli.main(["run", "--preset", "two-spacecraft", "--tf", "0.1",
                   "--out", str(blocker / "sub")])
    assert rc == 4


def test_validate_presets(capsys):
    for preset in ("two-spacecraft", "four-spacecraft"):
        rc = cli.main(["validate", "--preset", preset])
        out = capsys.readouterr().out
        assert rc == 0
        assert "OK invariants" in out
        assert "FAIL" not in out


def test_validate_bad_scenario(tmp_path, capsys):
    d = lf.scenario_to_dict(lf.two_spacecraft_tracking())
    del d["leader"]["gains"]["k_bA"]
    path = tmp_path / "bad.yaml"
    import yaml
    path.write_text(yaml.safe_dump(d))
    rc = cli.main(["validate", "--scenario", str(path)])
    assert rc == 2
    assert "k_bA" in capsys.readouterr().err


def test_validate_indefinite_gains(tmp_path, capsys):
    # A tiny angular-rate gain makes the rotational check fail structurally.
    d = lf.scenario_to_dict(lf.two_spacecraft_tracking())
    d["leader"]["gains"]["k_Omega"] = 0.1
    path = tmp_path / "weak.yaml"
    import yaml
    path.write_text(yaml.safe_dump(d))
    rc = cli.main(["validate", "--scenario", str(path)])
    assert rc == 2
    assert "FAIL loop R1" in capsys.readouterr().out


def test_export_round_trip(tmp_path, capsys):
    path = tmp_path / "exported.yaml"
    rc = cli.main(["export", "--preset", "four-spacecraft",
                   "--out", str(path)])
    assert rc == 0
    loaded = lf.load_scenario(path)
    assert lf.scenario_to_dict(loaded) == lf.scenario_to_dict(
        lf.four_spacecraft_sync())
    rc = cli.main(["export", "--preset", "bogus", "--out", str(path)])
    assert rc == 2


def test_run_verbose_prints_summary(tmp_path, capsys):
    rc = cli.main(["run", "--preset", "two-spacecraft", "--tf", "0.1",
                   "--out", str(tmp_path / "r"), "--verbose"])
    assert rc == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["scenario"] == "two-spacecraft"
