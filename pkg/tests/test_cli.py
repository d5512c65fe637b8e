import json
import os
import subprocess
import sys

import pytest

from lmsurf import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def report(text):
    return json.loads(text)


def test_residual_elliptic_catenoid(capsys):
    code, out, _ = run(capsys, "residual", "--surface", "elliptic-catenoid")
    r = report(out)
    assert code == cli.EXIT_OK and r["pass"] is True
    assert r["results"]["max_abs"] < 1e-10
    assert set(r) == {"tool_version", "subcommand", "config", "results", "pass"}


def test_residual_paraboloid_fails(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, out, _ = run(capsys, "residual", "--surface", "paraboloid", "--out", str(path))
    assert code == cli.EXIT_FAIL
    assert report(path.read_text())["results"]["max_abs"] >= 4


def test_residual_plane_report_shape(capsys):
    code, out, _ = run(capsys, "residual", "--surface", "plane", "--grid", "11x11")
    assert '"pass":true,"results":{' in out and '"max_abs":0.0,' in out
    assert out.endswith("\n") and out.count("\n") == 1


def test_defaults_are_echoed(capsys):
    _, out, _ = run(capsys, "residual", "--surface", "plane", "--grid", "5x5")
    assert report(out)["config"]["tol"] == cli.DEFAULTS["residual_tol"]
    _, out, _ = run(capsys, "gauss", "--surface", "elliptic-catenoid", "--grid", "11x11",
                    "--n", "50")
    cfg = report(out)["config"]
    assert cfg["image_eps"] == 1e-8 and cfg["base_delta"] == 1e-6
    _, out, _ = run(capsys, "locus", "--surface", "plane", "--grid", "5x5")
    assert report(out)["config"]["refine_tol"] == 1e-10


def test_residual_parametric_skips_degenerate_samples(capsys):
    code, out, _ = run(capsys, "residual", "--surface", "helicoid-spacelike-axis",
                       "--grid", "21x21")
    r = report(out)["results"]
    assert code == cli.EXIT_OK and r["n_skipped"] == 21


def test_locus_of_linear_graph(capsys, tmp_path):
    f = tmp_path / "lin.txt"
    f.write_text("z = x\n")
    code, out, _ = run(capsys, "locus", "--surface", str(f), "--grid", "21x21")
    assert '"results":{"degenerate_field":true}' in out


def test_locus_writes_csv(capsys, tmp_path):
    f = tmp_path / "half.txt"
    f.write_text("z = (x^2 + y^2)/2\n")
    csv = tmp_path / "circle.csv"
    code, out, _ = run(capsys, "locus", "--surface", str(f), "--out", str(csv))
    assert code == cli.EXIT_OK
    assert csv.read_text().startswith("x,y\n")
    assert report(out)["results"]["files"] == [str(csv)]


def test_wick_with_check(capsys):
    code, out, _ = run(capsys, "wick", "--surface", "elliptic-catenoid", "--direction",
                       "to-timelike", "--check", "--n", "50")
    r = report(out)
    assert code == cli.EXIT_OK and r["results"]["correspondence"]["pass"] is True
    assert r["config"]["im_tol"] == 1e-9


def test_gauss_plane_is_constant(capsys):
    code, out, _ = run(capsys, "gauss", "--surface", "plane", "--grid", "11x11", "--n", "20")
    assert code == cli.EXIT_FAIL and '"constant_gauss_map":true' in out


def test_weierstrass_certify(capsys, tmp_path):
    obj = tmp_path / "h.obj"
    code, out, _ = run(capsys, "weierstrass", "--data", "helicoid-spacelike-axis",
                       "--urange=-1:1", "--vrange=-1:1", "--certify", "helicoid-spacelike-axis")
    r = report(out)
    assert code == cli.EXIT_OK and r["results"]["residual"] < 1e-8
    code, out, _ = run(capsys, "weierstrass", "--data", "helicoid-timelike-axis",
                       "--urange", "0.5:2.5", "--vrange", "0.5:2.5", "--obj", str(obj))
    assert code == cli.EXIT_OK and obj.read_text().startswith("v ")


def test_weierstrass_pole_is_runtime_error(capsys):
    code, _, err = run(capsys, "weierstrass", "--data", "helicoid-timelike-axis",
                       "--urange=-1:1", "--vrange", "0.5:2.5")
    assert code == cli.EXIT_RUNTIME and "pole" in err


def test_identity_spacelike(capsys):
    code, out, _ = run(capsys, "identity", "--id", "spacelike", "--z", "1,0.5",
                       "--ladder", "100,1000,10000")
    r = report(out)
    assert code == cli.EXIT_OK and r["results"]["sign_constant"] == 1


def test_mesh_and_catalog(capsys, tmp_path):
    obj = tmp_path / "p.obj"
    code, out, _ = run(capsys, "mesh", "--surface", "plane", "--grid", "2x2", "--out", str(obj))
    assert code == cli.EXIT_OK and report(out)["results"]["triangles"] == 2
    code, out, _ = run(capsys, "catalog", "--list")
    assert code == cli.EXIT_OK and "elliptic-catenoid\n" in out
    code, out, _ = run(capsys, "catalog")
    assert len(report(out)["surfaces"]) == 6


@pytest.mark.parametrize("argv", [
    ["residual", "--surface", "torus"],
    ["residual", "--surface", "plane", "--grid", "ten"],
    ["residual", "--surface", "plane", "--tol", "-1"],
    ["identity", "--id", "null", "--z", "1,0"],
    ["bogus"],
    [],
])
def test_usage_errors(capsys, argv):
    assert cli.main(argv) == cli.EXIT_USAGE


def test_bad_definition_file_is_usage_error(capsys, tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("z = sin(\n")
    assert cli.main(["residual", "--surface", str(f)]) == cli.EXIT_USAGE


def test_runtime_error(capsys, tmp_path):
    f = tmp_path / "sqrt.txt"
    f.write_text("z = sqrt(x)\n")
    code, _, err = run(capsys, "residual", "--surface", str(f), "--grid", "5x5")
    assert code == cli.EXIT_RUNTIME and err


ARTIFACT_RUNS = [
    ("residual", ["--surface", "catenoid-2nd-kind", "--grid", "101x101"], "json"),
    ("locus", ["--surface", "DEF", "--grid", "101x101"], "csv"),
    ("mesh", ["--surface", "elliptic-catenoid", "--grid", "41x41"], "obj"),
    ("gauss", ["--surface", "elliptic-catenoid", "--grid", "41x41", "--n", "100"], "json"),
]


def _artifacts(tmp_path, threads, monkeypatch, tag):
    monkeypatch.setenv("LMS_THREADS", str(threads))
    half = tmp_path / "half.txt"
    half.write_text("z = (x^2 + y^2)/2\n")
    out = {}
    for sub, args, ext in ARTIFACT_RUNS:
        path = tmp_path / f"{sub}-{tag}.{ext}"
        rep = tmp_path / f"{sub}-{tag}.report.json"
        args = [str(half) if a == "DEF" else a for a in args]
        cli.main([sub] + args + ["--out", str(path), "--report", str(rep)])
        out[sub] = (path.read_bytes(), rep.read_bytes().replace(tag.encode(), b"TAG"))
    return out


def test_outputs_are_byte_identical_across_runs_and_thread_counts(tmp_path, monkeypatch,
                                                                   capsys):
    a = _artifacts(tmp_path, 0, monkeypatch, "run-one")
    b = _artifacts(tmp_path, 0, monkeypatch, "run-two")
    c = _artifacts(tmp_path, 4, monkeypatch, "run-six")
    assert a == b == c
    capsys.readouterr()


def test_console_entry_point(tmp_path):
    env = dict(os.environ, LMS_THREADS="0")
    proc = subprocess.run([sys.executable, "-m", "lmsurf", "residual", "--surface", "plane",
                           "--grid", "3x3"], capture_output=True, text=True, env=env)
    assert proc.returncode == 0
    assert proc.stdout.endswith("}\n") and "\r" not in proc.stdout
