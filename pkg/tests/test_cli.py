"""CLI tests: subcommands, output formats, exit codes, and run manifests.

All invocations go through ``main(argv)`` in-process; stdout/stderr are
captured with capsys, artifacts with tmp_path.
"""

import csv
import json
import math

import pytest

from sharpmart import __version__
from sharpmart.cli import OUT_ENV, main
from sharpmart.constants import kp


# ---------------------------------------------------------------- constants


def test_constants_json_stdout(capsys):
    assert main(["constants", "--p", "1.5", "--p", "3"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["p"] for r in rows] == [1.5, 3.0]
    assert rows[0]["kp"] == pytest.approx(kp(1.5).value, rel=1e-14)
    assert rows[0]["weak_nonneg"] is None  # undefined in 1 <= p < 2
    assert rows[1]["weak_nonneg"] == pytest.approx(1.5 / 2 ** (1 / 3), rel=1e-12)


def test_constants_default_grid(capsys):
    assert main(["constants"]) == 0
    rows = json.loads(capsys.readouterr().out)
    assert [r["p"] for r in rows] == [0.5, 1.0, 1.5, 2.0, 3.0]
    assert all(r["ok"] for r in rows)


def test_constants_csv_format(capsys):
    assert main(["constants", "--p", "2", "--format", "csv"]) == 0
    reader = csv.DictReader(capsys.readouterr().out.splitlines())
    (row,) = list(reader)
    assert float(row["kp"]) == pytest.approx(1.0, abs=1e-12)
    assert row["errors"] == ""


def test_constants_negative_p_fails(capsys):
    assert main(["constants", "--p", "-1"]) == 1
    rows = json.loads(capsys.readouterr().out)
    assert not rows[0]["ok"]
    assert rows[0]["errors"]


# ----------------------------------------------------------------- verify


def test_verify_suite_exit_codes(capsys):
    assert main(["verify", "ode"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["ok"] is True


def test_verify_unknown_suite_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["verify", "nope"])
    assert exc.value.code == 2


def test_verify_forwards_sampling_options(capsys):
    assert main(["verify", "mc-strip", "--n", "40000", "--seed", "5"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["n"] == 40000
    assert report["seed"] == 5


# ----------------------------------------------------------------- figures


def test_figures_regions_to_dir(tmp_path, capsys):
    assert main(["figures", "regions", "--p", "3", "--out", str(tmp_path)]) == 0
    path = tmp_path / "regions_p3.csv"
    assert str(path) in capsys.readouterr().out
    rows = list(csv.DictReader(path.read_text().splitlines()))
    assert {"region_a", "region_b", "x", "y"} <= set(rows[0])
    assert len(rows) > 100
    manifest = json.loads((tmp_path / "regions_p3.csv.manifest.json").read_text())
    assert manifest["command"] == "figures"
    assert manifest["artifact_version"] == __version__
    assert manifest["parameters"]["p"] == 3.0


def test_figures_trajectories_default_parameters(tmp_path):
    assert main(["figures", "trajectories", "--out", str(tmp_path)]) == 0
    rows = list(csv.DictReader((tmp_path / "trajectories_p3.csv").read_text().splitlines()))
    trajectories = {r["trajectory"] for r in rows}
    assert len(trajectories) == 4
    first = [r for r in rows if r["trajectory"] == "0"]
    assert float(first[0]["X"]) == pytest.approx(1 / 24, rel=1e-12)
    assert float(first[0]["Y"]) == pytest.approx(2 / 24, rel=1e-12)


def test_figures_missing_out_dir(tmp_path, capsys):
    missing = tmp_path / "does-not-exist"
    assert main(["figures", "regions", "--out", str(missing)]) == 1
    assert "does not exist" in capsys.readouterr().err


def test_out_env_variable(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(OUT_ENV, str(tmp_path))
    assert main(["constants", "--p", "2"]) == 0
    assert (tmp_path / "constants.json").exists()
    assert (tmp_path / "constants.json.manifest.json").exists()


def test_artifact_reproducibility(tmp_path, monkeypatch):
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "1700000000")
    out1, out2 = tmp_path / "a", tmp_path / "b"
    out1.mkdir(), out2.mkdir()
    for out in (out1, out2):
        assert main(["constants", "--p", "1.5", "--out", str(out)]) == 0
    for name in ("constants.json", "constants.json.manifest.json"):
        assert (out1 / name).read_text() == (out2 / name).read_text()


# ------------------------------------------------------------------ usage


def test_no_command_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["constants", "--bogus"])
    assert exc.value.code == 2
