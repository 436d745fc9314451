"""End-to-end CLI runs, all in process through main(argv)."""

import json

import pytest

from melzak import read_off
from melzak.cli import main
from melzak.shapes import PRISM_EDGE_LENGTH


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def prism_off(tmp_path, capsys):
    path = tmp_path / "prism.off"
    code, out, _ = run(capsys, "build", "--shape", "prism", "--out", str(path))
    assert code == 0
    assert out == f"wrote 6 vertices, 5 faces to {path}\n"
    return path


@pytest.fixture
def cube_off(tmp_path, capsys):
    path = tmp_path / "cube.off"
    assert run(capsys, "build", "--shape", "cube", "--out", str(path))[0] == 0
    return path


# ---------------------------------------------------------------------------
# build / ratio
# ---------------------------------------------------------------------------

def test_build_and_ratio(prism_off, capsys):
    code, out, _ = run(capsys, "ratio", str(prism_off))
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "e = 11.8962193695"
    assert lines[1] == "v = 0.999999999999"
    assert lines[2] == "m = 1683.55338496"
    assert float(lines[0].split(" = ")[1]) == pytest.approx(PRISM_EDGE_LENGTH, rel=1e-11)


def test_build_parametrized_shapes(tmp_path, capsys):
    path = tmp_path / "pyr.off"
    code, out, _ = run(capsys, "build", "--shape", "pyramid:5,1.0,0.8",
                       "--out", str(path))
    assert code == 0
    assert read_off(path).n_faces == 6
    code, _, err = run(capsys, "build", "--shape", "gyroid", "--out", str(path))
    assert code == 2
    assert err.startswith("error:")


# ---------------------------------------------------------------------------
# audit
# ---------------------------------------------------------------------------

def test_audit_candidate(prism_off, tmp_path, capsys):
    js = tmp_path / "report.json"
    code, out, _ = run(capsys, "audit", str(prism_off), "--mode", "candidate",
                       "--json", str(js))
    assert code == 0
    assert "is_candidate_minimizer: true" in out
    assert all(": fail" not in line for line in out.splitlines())
    payload = json.loads(js.read_text())
    assert list(payload) == ["criteria", "summary", "notes"]


def test_audit_notes_mention_doubling(prism_off, capsys):
    # with no explicit bound the audit uses the mesh's own edge length,
    # which for the prism is where the two published thresholds disagree
    _, out, _ = run(capsys, "audit", str(prism_off), "--mode", "candidate")
    assert any(line.startswith("note:") and "doubles the argument" in line
               for line in out.splitlines())


# ---------------------------------------------------------------------------
# perturb
# ---------------------------------------------------------------------------

def test_perturb_cube_translate(cube_off, capsys):
    code, out, _ = run(capsys, "perturb", str(cube_off), "--kind", "translate",
                       "--target", "0", "--fd")
    assert code == 0
    got = dict(line.split(" = ") for line in out.splitlines())
    assert got["E0"] == "12"
    assert got["V0"] == "1"
    assert got["M0"] == "1728"
    assert got["dE"] == "4"
    assert got["dV"] == "1"
    assert float(got["dM"]) == pytest.approx(0.0, abs=1e-8)
    assert "fd_step" in got and "fd_dM" in got


def test_perturb_hinge_requires_edge(cube_off, capsys):
    code, _, err = run(capsys, "perturb", str(cube_off), "--kind", "hinge",
                       "--target", "0")
    assert code == 2
    assert "need --edge" in err


# ---------------------------------------------------------------------------
# optimize
# ---------------------------------------------------------------------------

def test_optimize_box_to_cube(tmp_path, capsys):
    src = tmp_path / "box.off"
    assert run(capsys, "build", "--shape", "box:0.8,1.0,1.25",
               "--out", str(src))[0] == 0
    dst = tmp_path / "opt.off"
    trace = tmp_path / "trace.csv"
    code, out, _ = run(capsys, "optimize", str(src), "--out", str(dst),
                       "--trace", str(trace))
    assert code == 0
    got = dict(line.split(" = ") for line in out.splitlines())
    assert float(got["m"]) == pytest.approx(1728.0, rel=1e-9)
    assert got["combinatorics_changed"] == "false"
    rows = trace.read_text().splitlines()
    assert rows[0] == "iter,ratio"
    assert len(rows) == int(got["iterations"]) + 2
    assert read_off(dst).n_faces == 6


# ---------------------------------------------------------------------------
# sequence and quad-scan
# ---------------------------------------------------------------------------

def test_sequence_output(capsys):
    code, out, _ = run(capsys, "sequence", "--max-faces", "5")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "faces best_type ratio carried tie"
    assert lines[1] == "4 tetrahedron 1832.82077684 false false"
    assert lines[2] == "5 triangular_prism 1683.55338496 false false"
    assert any(l.startswith("type square_pyramid") for l in lines)


def test_quad_scan_deterministic(tmp_path, capsys):
    js1, js2 = tmp_path / "a.json", tmp_path / "b.json"
    code, out1, _ = run(capsys, "quad-scan", "--samples", "20", "--seed", "1",
                        "--json", str(js1))
    assert code == 0
    got = dict(line.split(" = ") for line in out1.splitlines())
    assert got["samples"] == "20"
    assert int(got["solutions"]) >= 1
    assert int(got["counterexamples"]) <= int(got["solutions"])
    code, out2, _ = run(capsys, "quad-scan", "--samples", "20", "--seed", "1",
                        "--json", str(js2))
    assert out1 == out2
    assert js1.read_text() == js2.read_text()


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------

def test_usage_error_is_exit_1(capsys):
    assert run(capsys, "ratio")[0] == 1
    assert run(capsys, "nonsense")[0] == 1
    assert run(capsys, "quad-scan", "--samples", "5")[0] == 1


def test_missing_file_is_exit_2(tmp_path, capsys):
    code, _, err = run(capsys, "ratio", str(tmp_path / "absent.off"))
    assert code == 2
    assert err.startswith("error:")
