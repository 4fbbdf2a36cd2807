import csv
import io
import json
import math

import pytest

from shintani.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture(scope="module")
def built(tmp_path_factory, fixture_dir):
    out = tmp_path_factory.mktemp("domains")
    paths = {}
    for name in ("sqrt5", "cbrt2"):
        p = out / f"{name}.json"
        assert main(["build", str(fixture_dir / f"{name}.json"), "--out", str(p)]) == 0
        paths[name] = p
    return paths


def test_build_outputs(built):
    s5 = json.loads(built["sqrt5"].read_text(encoding="utf-8"))
    assert len(s5["cones"]) == 1 and s5["cones"][0]["mu"] == 1
    c2 = json.loads(built["cbrt2"].read_text(encoding="utf-8"))
    assert len(c2["cones"]) == 6
    assert c2["build"]["seed"] == 0


def test_build_is_deterministic(capsys, fixture_dir, built):
    code, out, _ = run(capsys, "build", fixture_dir / "cbrt2.json")
    assert code == 0
    assert out == built["cbrt2"].read_text(encoding="utf-8")


def test_totally_complex(capsys, tmp_path):
    p = tmp_path / "tc.json"
    p.write_text(json.dumps({"min_poly": [1, 0, 0, 0, 1], "units": [["1", "0", "0", "0"]],
                             "N": [3, 3]}))
    code, _, err = run(capsys, "build", p)
    assert code == 2
    assert "field must have a real place" in err


def test_malformed_spec(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = run(capsys, "build", p)
    assert code == 2 and "[parse]" in err
    code, _, err = run(capsys, "build", tmp_path / "missing.json")
    assert code == 2


def test_verify_ok(capsys, built):
    code, out, _ = run(capsys, "verify", built["sqrt5"], "--samples", 1000, "--seed", 42,
                       "--lambda-samples", 1000)
    assert code == 0
    rep = json.loads(out)
    assert rep["passed"] and rep["count_histogram"] == {"1": 1000}


def test_verify_flipped_mu(capsys, built, tmp_path):
    data = json.loads(built["sqrt5"].read_text(encoding="utf-8"))
    data["cones"][0]["mu"] = -1
    p = tmp_path / "flip.json"
    p.write_text(json.dumps(data))
    code, out, err = run(capsys, "verify", p, "--samples", 50, "--lambda-samples", 100)
    assert code == 1
    assert "signed_count" in err


def test_verify_schema_errors(capsys, built, tmp_path):
    data = json.loads(built["sqrt5"].read_text(encoding="utf-8"))
    data["schema_version"] = "something-else"
    p = tmp_path / "old.json"
    p.write_text(json.dumps(data))
    assert run(capsys, "verify", p)[0] == 2
    empty = tmp_path / "empty.json"
    empty.write_text("")
    assert run(capsys, "verify", empty)[0] == 2
    assert run(capsys, "plot", empty, "--place", 1)[0] == 2
    assert run(capsys, "verify", built["sqrt5"], "--bound", "many")[0] == 2


def test_plot_sqrt5(capsys, built):
    code, out, _ = run(capsys, "plot", built["sqrt5"], "--real-slice")
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 2
    assert all(float(r["x0"]) > 0 and float(r["x1"]) > 0 for r in rows)


def test_plot_cbrt2_place2(capsys, built):
    code, out, _ = run(capsys, "plot", built["cbrt2"], "--place", 2)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 18
    groups = {}
    for r in rows:
        groups.setdefault(r["cone"], []).append(math.atan2(float(r["im"]), float(r["re"])))
    assert len(groups) == 6
    for angles in groups.values():
        # rotate so the group does not straddle the branch cut, then measure its spread
        ref = angles[0]
        rel = [math.remainder(a - ref, 2 * math.pi) for a in angles]
        assert max(rel) - min(rel) < math.pi


def test_plot_unsupported(capsys, built):
    assert run(capsys, "plot", built["cbrt2"], "--place", 7)[0] == 2


def test_twister_command(capsys, fixture_dir):
    code, out, _ = run(capsys, "twister", fixture_dir / "cbrt2.json")
    assert code == 0
    data = json.loads(out)
    assert data["valid"] and len(data["twister"]) == 3


def test_info(capsys, fixture_dir, built):
    code, out, _ = run(capsys, "info", fixture_dir / "quartic.json")
    assert code == 0
    info = json.loads(out)
    assert info["signature"] == [2, 1] and info["expected_cones"] == 18
    code, out, _ = run(capsys, "info", built["cbrt2"])
    assert code == 0 and json.loads(out)["cones"] == 6
