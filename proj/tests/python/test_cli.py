"""End-to-end behavior of the curvop command-line tool (exit codes, formats,
diagnostics). The binary path comes from the CURVOP_BIN environment variable."""

import json
import os
import subprocess

import pytest

BIN = os.environ.get("CURVOP_BIN")

pytestmark = pytest.mark.skipif(BIN is None, reason="CURVOP_BIN not set")


def run(*args, cwd=None):
    return subprocess.run([BIN, *args], capture_output=True, text=True, cwd=cwd)


def test_geometry_writes_csv_files(tmp_path):
    r = run("geometry", "--surface", "cone", "--set", "R=1,phi=0.5235988,l=2",
            "--grid", "8x8", "--out", str(tmp_path))
    assert r.returncode == 0
    names = {p.name for p in tmp_path.iterdir()}
    assert {"M.csv", "K.csv", "Vg.csv", "f.csv", "g.csv", "g1.csv"} <= names
    header = (tmp_path / "M.csv").read_text().splitlines()[0]
    assert header == "u,v,M"


def test_geometry_json_format(tmp_path):
    r = run("geometry", "--surface", "cone", "--grid", "4x4", "--format", "json",
            "--out", str(tmp_path))
    assert r.returncode == 0
    doc = json.loads((tmp_path / "geometry.json").read_text())
    assert doc["nu"] == 4
    assert "M" in doc["fields"]


def test_syntax_error_exits_2_with_caret(tmp_path):
    bad = tmp_path / "bad.surf"
    bad.write_text("x = (R + v")
    r = run("geometry", "--surface-file", str(bad), "--out", str(tmp_path))
    assert r.returncode == 2
    first = r.stderr.splitlines()[0]
    assert first.startswith("error:")
    assert ":1:" in first  # line:column diagnostic
    assert "^" in r.stderr


def test_unknown_surface_exits_2(tmp_path):
    r = run("geometry", "--surface", "nosuch", "--out", str(tmp_path))
    assert r.returncode == 2
    assert r.stderr.startswith("error:")


def test_degenerate_metric_exits_3(tmp_path):
    bad = tmp_path / "disk.surf"
    bad.write_text(
        "x = v*cos(u); y = v*sin(u); z = 0; domain u in [0, 2*pi) periodic, v in [0, 1];")
    r = run("geometry", "--surface-file", str(bad), "--grid", "4x4", "--out", str(tmp_path))
    assert r.returncode == 3
    assert "degenerate metric" in r.stderr


def test_operators_dump_json(tmp_path):
    r = run("operators", "--surface", "cylinder", "--alpha", "1", "--beta", "1",
            "--grid", "4x4", "--out", str(tmp_path))
    assert r.returncode == 0
    doc = json.loads((tmp_path / "rashba.json").read_text())
    assert doc["value_kind"] == "spin"
    assert all({"dmu", "dnu", "provenance", "field"} <= set(t) for t in doc["terms"])
    ham = json.loads((tmp_path / "hamiltonian.json").read_text())
    assert ham["value_kind"] == "scalar"


def test_spectrum_csv_shift_column(tmp_path):
    r = run("spectrum", "--surface", "cylinder", "--set", "R=1,l=3.1415926535897932",
            "--modes", "0..1", "--nodes", "500", "--out", str(tmp_path))
    assert r.returncode == 0
    lines = (tmp_path / "spectrum.csv").read_text().splitlines()
    assert lines[0] == "m,n,eigenvalue_without_Vg,eigenvalue_with_Vg,shift"
    for line in lines[1:]:
        shift = float(line.split(",")[4])
        assert abs(shift + 0.25) < 1e-6


def test_verify_passes_and_reports(tmp_path):
    r = run("verify", "--set", "phi=0.6", "--grid", "6x6", "--out", str(tmp_path))
    assert r.returncode == 0
    doc = json.loads((tmp_path / "verify_report.json").read_text())
    assert doc["summary"]["pass"] is True
    assert doc["summary"]["n_known_print_discrepancies"] == 2
    flagged = [c for c in doc["checks"] if c.get("known_print_discrepancy")]
    notes = " ".join(c["note"] for c in flagged)
    assert "cone-rashba/row3-curvature" in notes
    assert "cone-dresselhaus/row2-metric-derivative" in notes


def test_verify_rejects_non_cone(tmp_path):
    r = run("verify", "--surface", "sphere", "--out", str(tmp_path))
    assert r.returncode == 2


def test_identical_config_gives_identical_bytes(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        r = run("geometry", "--surface", "cone", "--grid", "6x6", "--out", str(out))
        assert r.returncode == 0
    assert (a / "M.csv").read_bytes() == (b / "M.csv").read_bytes()
    assert (a / "g1.csv").read_bytes() == (b / "g1.csv").read_bytes()
