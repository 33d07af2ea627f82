import csv
import io
import json
import math
import subprocess
import sys

import pytest

from toric_obc.cli import dumps, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_dumps_is_stable_and_precise():
    text = dumps({"b": 0.1, "a": [1, 2.0, None, True], "c": float("nan")})
    assert text == '{"b": 0.10000000000000001, "a": [1, 2.0, null, true], "c": null}\n'
    assert json.loads(text)["b"] == 0.1


def test_degeneracy_plaquette_2x2(capsys):
    code, out, _ = run(capsys, "degeneracy", "--rows", "2", "--cols", "2", "--bc", "plaquette")
    d = json.loads(out)
    assert code == 0
    assert d["log2_degeneracy"] == 7
    assert d["spectral"]["count"] == 128 and d["agree"] is True
    assert d["config"]["bc"] == "plaquette"


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["--bc", "periodic", "--rows", "3", "--cols", "3"], 2),
        (["--rows", "4", "--cols", "3"], 13),
    ],
)
def test_degeneracy_examples(capsys, argv, expected):
    code, out, _ = run(capsys, "degeneracy", *argv)
    assert code == 0
    assert json.loads(out)["log2_degeneracy"] == expected


def test_entropy_routes(capsys):
    code, out, _ = run(capsys, "entropy", "--partition-rect", "0,0,1,1")
    d = json.loads(out)
    assert code == 0
    assert d["s_rank"] == pytest.approx(d["s_dense"], abs=1e-12)
    assert d["kind"] == "boundary_crossing" and d["routes_agree"] is True

    code, out, _ = run(capsys, "entropy", "--rows", "6", "--cols", "6", "--partition-rect", "2,2,4,4")
    d = json.loads(out)
    assert d["s_rank"] == pytest.approx(d["s_paper_bulk"], abs=1e-12)
    assert d["s_dense"] is None and any("dense route skipped" in n for n in d["notes"])

    code, out, _ = run(capsys, "entropy", "--partition-spins", "")
    assert json.loads(out)["s_rank"] == 0.0

    code, out, _ = run(
        capsys, "entropy", "--partition-rect", "0,0,1,2", "--family", "geometric", "--a", "0.5",
        "--phases", "2:0.25",
    )
    d = json.loads(out)
    assert d["s_rank"] is None and d["s_dense"] > 0
    assert d["config"]["phases"] == {"2": 0.25}


def test_dispersion_csv_and_json(capsys):
    code, out, _ = run(capsys, "dispersion", "--boundary-length", "8", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("# config: ")
    rows = list(csv.reader(io.StringIO("\n".join(lines[1:]))))
    assert rows[0] == ["k", "eps_finite", "eps_limit", "eps_cos"] and len(rows) == 9

    code, out, _ = run(capsys, "dispersion", "--hx", "0", "--boundary-length", "8")
    d = json.loads(out)
    assert all(v == 0 for v in d["eps_finite"])


def test_perturb_reports_formula_ratio(capsys):
    code, out, _ = run(capsys, "perturb", "--rows", "3", "--cols", "3", "--rmax", "2")
    d = json.loads(out)
    assert code == 0
    r1, r2 = d["results"]
    assert r1["chain_matches_leading"] and r2["chain_matches_leading"]
    assert r1["ratio_to_delta_E"] == pytest.approx(4.0, rel=1e-12)
    assert r2["ratio_to_delta_E"] == pytest.approx(8.0, rel=1e-12)

    code, out, _ = run(capsys, "perturb", "--hx", "0")
    assert all(r["chain"] == 0 for r in json.loads(out)["results"])

    code, out, _ = run(capsys, "perturb", "--order", "2")
    assert json.loads(out)["results"][0]["chain"] == 0


def test_spectrum_torus(capsys):
    code, out, _ = run(capsys, "spectrum", "--rows", "3", "--cols", "3", "--bc", "periodic", "--k", "6")
    d = json.loads(out)
    assert code == 0 and d["degeneracy"] == 4 and d["method"] == "lanczos"
    assert max(d["residuals"]) < 1e-8


def test_byte_identical_reruns(capsys):
    argv = ["entropy", "--rows", "3", "--cols", "2", "--partition-spins", "0,3,5,9"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"rows": 3, "cols": 3, "hx": 0.02, "rmax": 2}))
    code, out, _ = run(capsys, "perturb", "--config", str(cfg), "--rmax", "1")
    d = json.loads(out)
    assert d["config"]["hx"] == 0.02 and d["config"]["rows"] == 3
    assert d["config"]["rmax"] == 1 and len(d["results"]) == 1

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"nonsense": 1}))
    assert run(capsys, "perturb", "--config", str(bad))[0] == 1


def test_out_file(capsys, tmp_path):
    target = tmp_path / "deg.json"
    code, out, _ = run(capsys, "degeneracy", "--rows", "5", "--cols", "5", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["log2_degeneracy"] == 19


@pytest.mark.parametrize(
    "argv",
    [
        ["bogus"],
        ["entropy"],
        ["entropy", "--partition-rect", "0,0,1"],
        ["dispersion", "--hx", "3"],
        ["degeneracy", "--rows", "1"],
        ["perturb", "--rows", "2", "--cols", "2", "--rmax", "2"],
        ["dispersion", "--boundary-length", "7"],
        ["degeneracy", "--format", "csv"],
    ],
)
def test_usage_errors_exit_1(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 1 and "error" in err


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "toric_obc", "dispersion", "--boundary-length", "4"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    d = json.loads(proc.stdout)
    assert d["k"][0] == pytest.approx(-math.pi)
