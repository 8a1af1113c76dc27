"""Command-line surface: exit codes, output formats, determinism."""

import json
import os
import subprocess
import sys

import pytest

from fermatw.maps import canonical_lattice

UNIFORMIZE_HEADER = "re_z,im_z,re_f,im_f,re_g,im_g,residual"
SOLVE_HEADER = "re_z,im_z,re_alpha,im_alpha,re_f,im_f,re_g,im_g,residual"


def run(*args, env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    return subprocess.run([sys.executable, "-m", "fermatw", *args],
                          capture_output=True, env=env)


def test_uniformize_csv_shape():
    out = run("uniformize", "--g3", "1", "--grid", "0.2,0.8,0.1,0.5,2")
    assert out.returncode == 0
    lines = out.stdout.decode().strip().split("\n")
    assert lines[0] == UNIFORMIZE_HEADER
    assert len(lines) == 5
    row = lines[1].split(",")
    assert len(row) == 7
    # repr serialization round-trips exactly
    assert repr(float(row[2])) == row[2]
    assert float(row[6]) < 1e-9


def test_uniformize_excludes_poles():
    # grid corner at the lattice origin must be dropped, not emitted as nan
    out = run("uniformize", "--g3", "1", "--grid", "0,1,0,1,4")
    assert out.returncode == 0
    body = out.stdout.decode().strip().split("\n")[1:]
    assert 0 < len(body) < 16
    assert b"nan" not in out.stdout
    assert b"excluded" in out.stderr


def test_solve_rows_follow_at_order():
    out = run("solve", "--g3", "8", "--alpha", "z^2", "--at", "0.2+0.1i",
              "--at", "0.4")
    assert out.returncode == 0
    lines = out.stdout.decode().strip().split("\n")
    assert lines[0] == SOLVE_HEADER
    assert len(lines) == 3
    first = [float(v) for v in lines[1].split(",")]
    assert first[0] == 0.2 and first[1] == 0.1
    # alpha column carries alpha(z), the argument fed to the solution pair
    z = complex(0.2, 0.1)
    w = z * z
    assert abs(complex(first[2], first[3]) - w) < 1e-15
    assert first[8] < 1e-9


def test_solve_json_structure():
    out = run("solve", "--alpha", "exp(z)", "--at", "0.3", "--format", "json")
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["command"] == "solve"
    assert doc["alpha"] == "exp(z)"
    assert len(doc["rows"]) == 1
    assert set(doc["rows"][0]) >= {"re_z", "im_z", "re_f", "im_f", "residual"}


def test_solve_rejects_non_entire_alpha():
    out = run("solve", "--alpha", "1/z", "--at", "1.0")
    assert out.returncode == 2
    assert b"alpha" in out.stderr


def test_solve_skips_pole_rows():
    lat = canonical_lattice(1.0)
    pole = f"{lat.omega1.real}+0i"
    out = run("solve", "--alpha", "z", "--at", pole, "--at", "0.3")
    assert out.returncode == 0
    lines = out.stdout.decode().strip().split("\n")
    assert len(lines) == 2  # header + the one good row
    assert b"lattice point" in out.stderr


def test_verify_passes_both_variants():
    for g3 in ("1", "8"):
        out = run("verify", "--g3", g3, "--samples", "120", "--seed", "7")
        assert out.returncode == 0, out.stderr
        lines = out.stdout.decode().strip().split("\n")
        assert lines[0].startswith("name,")
        assert all(line.endswith(",pass") for line in lines[1:])


def test_verify_fails_at_impossible_tolerance():
    out = run("verify", "--samples", "60", "--tol", "1e-12")
    assert out.returncode == 1
    assert b"FAILED" in out.stderr


def test_verify_byte_deterministic():
    a = run("verify", "--samples", "150", "--seed", "11", "--format", "json")
    b = run("verify", "--samples", "150", "--seed", "11", "--format", "json")
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout
    doc = json.loads(a.stdout)
    assert doc["rng"] == "numpy-PCG64"
    assert doc["all_passed"] is True


def test_verify_seed_changes_output():
    a = run("verify", "--samples", "150", "--seed", "11", "--format", "json")
    b = run("verify", "--samples", "150", "--seed", "12", "--format", "json")
    assert a.stdout != b.stdout


def test_usage_errors_exit_2():
    assert run("verify", "--g3", "5").returncode == 2
    assert run("normal-form").returncode == 2
    assert run("uniformize", "--grid", "bogus").returncode == 2
    assert run("solve", "--alpha", "z").returncode == 2  # --at required
    assert run("frobnicate").returncode == 2


def test_unwritable_output_exits_3(tmp_path):
    missing = tmp_path / "no" / "such" / "dir" / "x.csv"
    out = run("uniformize", "--grid", "0.2,0.8,0.2,0.8,2", "--out", str(missing))
    assert out.returncode == 3


def test_normal_form_text_and_json():
    out = run("normal-form", "--n", "3")
    assert out.returncode == 0
    assert b"2+6y^2=x^3" in out.stdout
    out = run("normal-form", "--n", "4", "--format", "json")
    assert out.returncode == 0
    doc = json.loads(out.stdout)
    assert doc["identity_holds"] is True
    assert doc["parity"] == "even"
    assert doc["equation"].endswith("=x^4")
    assert doc["lhs_coeffs"] == doc["rhs_coeffs"]


def test_normal_form_rejects_small_degree():
    assert run("normal-form", "--n", "2").returncode == 2


def test_plot_requires_out():
    out = run("plot", "--grid", "0,1,0,1,8")
    assert out.returncode == 2
    assert b"--out" in out.stderr


def test_plot_ppm_bytes(tmp_path):
    target = tmp_path / "f.ppm"
    out = run("plot", "--g3", "1", "--grid=-1,1,-1,1,3", "--what", "f",
              "--out", str(target))
    assert out.returncode == 0, out.stderr
    data = target.read_bytes()
    assert data.startswith(b"P6\n3 3\n255\n")
    assert len(data) == 11 + 27
    # center pixel sits exactly on the lattice pole: masked to white
    raster = data[11:]
    center = raster[(1 * 3 + 1) * 3:(1 * 3 + 1) * 3 + 3]
    assert center == b"\xff\xff\xff"


def test_plot_residual_mode(tmp_path):
    target = tmp_path / "r.ppm"
    out = run("plot", "--g3", "8", "--grid", "0.1,2.1,0.1,2.1,16",
              "--what", "residual", "--out", str(target))
    assert out.returncode == 0
    data = target.read_bytes()
    assert data.startswith(b"P6\n16 16\n255\n")
    raster = data[len(b"P6\n16 16\n255\n"):]
    # residual image is grayscale: r == g == b everywhere
    for k in range(0, len(raster), 3):
        assert raster[k] == raster[k + 1] == raster[k + 2]


def test_plot_deterministic(tmp_path):
    a, b = tmp_path / "a.ppm", tmp_path / "b.ppm"
    run("plot", "--grid", "0.2,1.2,0.2,1.2,12", "--out", str(a))
    run("plot", "--grid", "0.2,1.2,0.2,1.2,12", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_lattice_subcommand_matches_library():
    out = run("lattice", "--g3", "1")
    assert out.returncode == 0
    lines = out.stdout.decode().strip().split("\n")
    header = lines[0].split(",")
    row = lines[1].split(",")
    vals = dict(zip(header, row))
    lat = canonical_lattice(1.0)
    assert float(vals["omega1_re"]) == lat.omega1.real
    assert float(vals["g3_re"]) == lat.g3.real if hasattr(lat.g3, "real") else lat.g3
    assert abs(float(vals["disc_re"]) - (-27.0)) < 1e-9
    assert int(vals["truncation_radius"]) == 200


def test_python_backend_cli_parity():
    args = ("uniformize", "--g3", "1", "--grid", "0.2,0.8,0.2,0.8,3")
    a = run(*args)
    b = run(*args, env_extra={"FERMATW_BACKEND": "python"})
    assert a.returncode == b.returncode == 0
    la = a.stdout.decode().strip().split("\n")
    lb = b.stdout.decode().strip().split("\n")
    assert la[0] == lb[0]
    for ra, rb in zip(la[1:], lb[1:]):
        fa = [float(v) for v in ra.split(",")]
        fb = [float(v) for v in rb.split(",")]
        assert all(abs(x - y) <= 1e-10 * max(1.0, abs(x)) for x, y in zip(fa, fb))
