import csv
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from conftest import mimo_channel
from mimoic.asymptotics import gdof_nrc
from mimoic.channel import from_json, siso_from_scalars, to_json
from mimoic.cli import main

SKIP_CUT = ["--skip", "guaranteed_in_achievable"]


def run(*argv):
    return main([str(a) for a in argv])


def strip_wall_time(path):
    doc = json.loads(path.read_text())
    doc.pop("wall_time", None)
    return doc


@pytest.fixture
def mimo_file(tmp_path):
    p = tmp_path / "mimo.json"
    p.write_text(to_json(mimo_channel()))
    return p


def test_gen_channel_reproducible(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for out in (a, b):
        assert run("gen-channel", "--m1", 1, "--n1", 1, "--m2", 1, "--n2", 1, "--seed", 7, "--out", out) == 0
    assert a.read_bytes() == b.read_bytes()
    assert from_json(a.read_text()).h11.shape == (1, 1)


def test_gen_channel_siso(tmp_path):
    out = tmp_path / "siso.json"
    assert run("gen-channel", "--siso", 5, 5, 2, 2, "--c12", 1.1, "--c21", 1.1, "--out", out) == 0
    assert from_json(out.read_text()) == siso_from_scalars(5, 5, 2, 2, 1.1, 1.1)


def test_gen_channel_from_snr(tmp_path):
    out = tmp_path / "s.json"
    assert run("gen-channel", "--m1", 2, "--n1", 2, "--m2", 2, "--n2", 2, "--snr", 100, "--alpha", 0.5, "--beta", 1, "--out", out) == 0
    ch = from_json(out.read_text())
    assert ch.rho12 == pytest.approx(10.0) and ch.c21 == pytest.approx(2 * 3.321928094887362)


@pytest.mark.parametrize(
    "argv",
    [
        ["gen-channel", "--m1", "1", "--n1", "1", "--m2", "1", "--n2", "1"],
        ["gen-channel", "--m1", "0", "--n1", "1", "--m2", "1", "--n2", "1", "--out", "x"],
        ["gdof", "--m", "1", "--alpha", "-1", "--out", "x"],
        ["validate", "--trials", "-3", "--out", "x"],
    ],
)
def test_bad_flags_exit_two(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_semantic_usage_errors_exit_two(tmp_path):
    assert run("gen-channel", "--m1", 1, "--n1", 1, "--out", tmp_path / "x.json") == 2
    assert run("gen-channel", "--siso", 1, 1, 1, 1, "--snr", 3, "--out", tmp_path / "x.json") == 2
    assert run("gdof-curve", "--m", 1, "--step", 0, "--out", tmp_path / "c.csv") == 2
    assert run("gdof-curve", "--m", 1, "--alpha-min", 2, "--alpha-max", 1, "--out", tmp_path / "c.csv") == 2
    assert run("validate", "--skip", "no_such_property", "--out", tmp_path / "v.json") == 2


def test_corrupt_channel_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"m1": 1, "n1": ')
    assert run("gap", "--channel", bad, "--out", tmp_path / "g.json") == 2
    assert run("region", "--channel", tmp_path / "missing.json", "--out", tmp_path / "r.json") == 2
    bad.write_bytes(b"\xff\xfe")
    assert run("region", "--channel", bad, "--out", tmp_path / "r.json") == 2


def test_region_outer_mimo(tmp_path, mimo_file):
    out = tmp_path / "r.json"
    assert run("region", "--channel", mimo_file, "--which", "outer", "--out", out) == 0
    doc = json.loads(out.read_text())
    assert not doc["empty"] and len(doc["vertices"]) == 5
    assert doc["vertices"][1][0] == pytest.approx(78.146037, abs=1e-5)


def test_region_all_zero_is_empty(tmp_path):
    ch_file = tmp_path / "z.json"
    ch_file.write_text(to_json(siso_from_scalars(0, 0, 0, 0, 0, 0)))
    out = tmp_path / "r.json"
    assert run("region", "--channel", ch_file, "--which", "all", "--out", out) == 0
    doc = json.loads(out.read_text())
    assert set(doc) == {"outer", "inner-guaranteed", "achievable"}
    assert all(doc[k]["vertices"] == [[0, 0]] for k in doc)
    # outer and achievable collapse to the origin; the displaced inner bounds are all negative
    assert doc["inner-guaranteed"]["empty"]
    assert not doc["outer"]["empty"] and not doc["achievable"]["empty"]


def test_svg_one_polygon_per_region(tmp_path, mimo_file):
    svg = tmp_path / "r.svg"
    assert run("region", "--channel", mimo_file, "--out", tmp_path / "r.json", "--svg", svg) == 0
    root = ET.fromstring(svg.read_text())
    assert root.get("width") == "800" and root.get("height") == "600"
    polys = [e for e in root.iter() if e.tag.endswith("polygon")]
    assert sorted(e.get("data-region") for e in polys) == ["achievable", "inner-guaranteed", "outer"]
    assert run("region", "--channel", mimo_file, "--which", "outer", "--out", tmp_path / "o.json", "--svg", svg) == 0
    root = ET.fromstring(svg.read_text())
    assert len([e for e in root.iter() if e.tag.endswith("polygon")]) == 1


def test_gap_siso_weak_passes(tmp_path):
    ch_file = tmp_path / "a.json"
    ch_file.write_text(to_json(siso_from_scalars(5, 5, 2, 2, 1.1, 1.1)))
    out = tmp_path / "g.json"
    assert run("gap", "--channel", ch_file, "--out", out) == 0
    doc = json.loads(out.read_text())
    assert doc["pass"] and doc["outputs"]["bound"] == 2
    assert doc["outputs"]["gap_achievable"] == pytest.approx(1.0, abs=1e-6)


def test_gap_mimo_passes(tmp_path, mimo_file):
    out = tmp_path / "g.json"
    assert run("gap", "--channel", mimo_file, "--out", out) == 0
    doc = json.loads(out.read_text())
    assert doc["outputs"]["bound"] == 7
    assert doc["outputs"]["gap_achievable"] <= 7
    assert doc["inputs"] == {"mimo.json": doc["inputs"]["mimo.json"]}


def test_gap_digest_excludes_wall_time(tmp_path, mimo_file):
    import hashlib

    out = tmp_path / "g.json"
    run("gap", "--channel", mimo_file, "--out", out)
    doc = strip_wall_time(out)
    digest = doc.pop("digest")
    body = json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n"
    assert hashlib.sha256(body.encode()).hexdigest() == digest


def test_dof_pentagon(tmp_path):
    out = tmp_path / "d.json"
    assert run("dof", "--m1", 2, "--n1", 2, "--m2", 2, "--n2", 2, "--beta12", 1, "--beta21", 1, "--out", out) == 0
    doc = json.loads(out.read_text())
    assert doc["region"]["vertices"] == [[0, 0], [2, 0], [2, 1], [1, 2], [0, 2]]


def test_gdof_w_curve_point(tmp_path):
    out = tmp_path / "g.json"
    assert run("gdof", "--m", 1, "--alpha", 1, "--beta", 0, "--out", out) == 0
    assert json.loads(out.read_text())["gdof"] == pytest.approx(0.5, abs=1e-12)


def test_gdof_curve_matches_no_cooperation(tmp_path):
    out = tmp_path / "c.csv"
    assert run("gdof-curve", "--m", 1, "--beta", 0, "--out", out) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 301
    for row in rows:
        a = float(row["alpha"])
        assert float(row["gdof"]) == pytest.approx(gdof_nrc(1, a), abs=1e-11)


def test_validate_zero_trials_vacuous(tmp_path, caplog):
    out = tmp_path / "v.json"
    assert run("validate", "--trials", 0, "--out", out) == 0
    assert json.loads(out.read_text())["pass"]
    assert "vacuous" in caplog.text


def test_validate_small_run_passes(tmp_path):
    out = tmp_path / "v.json"
    assert run("validate", "--trials", 12, "--seed", 3, *SKIP_CUT, "--out", out) == 0
    props = json.loads(out.read_text())["outputs"]
    assert all(p["failed"] == 0 for p in props.values())
    assert props["guaranteed_in_achievable"]["checked"] == 0


def test_validate_injected_fault_exit_one(tmp_path, monkeypatch):
    monkeypatch.setenv("MIMOIC_INJECT_FAULT", "1")
    assert run("validate", "--trials", 3, *SKIP_CUT, "--out", tmp_path / "v.json") == 1


def test_validate_thread_count_does_not_change_output(tmp_path, monkeypatch):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    monkeypatch.setenv("MIMOIC_THREADS", "1")
    run("validate", "--trials", 8, "--seed", 5, "--out", a)
    monkeypatch.setenv("MIMOIC_THREADS", "4")
    run("validate", "--trials", 8, "--seed", 5, "--out", b)
    assert strip_wall_time(a) == strip_wall_time(b)


def test_module_entry_point_subprocess(tmp_path):
    out = tmp_path / "g.json"
    proc = subprocess.run(
        [sys.executable, "-m", "mimoic.cli", "gdof", "--m", "2", "--alpha", "0.5", "--out", str(out)],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["gdof"] == pytest.approx(gdof_nrc(2, 0.5))
