import subprocess
import sys

import pytest

from perturbed_blaschke.cli import main, parse_complex, parse_resolution


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_parse_complex():
    assert parse_complex("1e-5") == 1e-5
    assert parse_complex("2.8e-5,8.4e-7") == complex(2.8e-5, 8.4e-7)
    for bad in ("x", "1,2,3", ""):
        with pytest.raises(Exception):
            parse_complex(bad)


def test_parse_resolution():
    assert parse_resolution("64x32") == (64, 32)
    with pytest.raises(Exception):
        parse_resolution("64")


def test_classify_csv(capsys):
    code, out = run(capsys, "classify", "--lambda", "3.022e-5", "--lambda", "2.8e-5,8.4e-7", "--lambda", "1e-5")
    assert code == 0
    rows = [ln.split(",") for ln in out.out.splitlines()]
    assert [r[2] for r in rows] == ["CaseA", "CaseB", "CaseC"]
    assert [r[4] for r in rows] == ["1", "3", "3"]
    assert rows[1][:2] == ["2.8e-05", "8.4e-07"]
    assert all(len(r) == 5 for r in rows)


def test_classify_not_escaping(capsys):
    code, out = run(capsys, "classify", "--lambda", "2.33e-5")
    assert code == 0 and out.out.strip() == "2.33e-05,0.0,NotEscaping,,"


def test_critical_points(capsys):
    code, out = run(capsys, "critical-points", "--lambda", "1e-6")
    lines = out.out.splitlines()
    assert code == 0 and lines[0] == "# role re im residual"
    assert lines[-1] == "# annulus_check true"
    assert len(lines) == 16
    code, out = run(capsys, "critical-points", "--lambda", "0")
    assert out.out.splitlines()[2].startswith("c_minus 0.381966011250105")


def test_render_commands(tmp_path, capsys):
    out = tmp_path / "d.ppm"
    fig = tmp_path / "d.png"
    code, _ = run(capsys, "render-dynamical", "--res", "64x48", "--out", str(out), "--figure", str(fig))
    assert code == 0 and out.read_bytes().startswith(b"P6\n64 48\n255\n")
    assert fig.read_bytes()[:4] == b"\x89PNG"
    out = tmp_path / "p.ppm"
    code, _ = run(capsys, "render-parameter", "--res", "32x32", "--out", str(out), "--figure", str(tmp_path / "p.png"))
    assert code == 0 and out.read_bytes().startswith(b"P6\n32 32\n255\n")


def test_itinerary_command(capsys):
    code, out = run(capsys, "itinerary", "--depth", "2", "--res", "1024x2048", "--samples", "3", "--point", "3")
    assert code == 0
    lines = out.out.splitlines()
    assert lines[0] == "# id r_min r_max depth image_id"
    assert "# re im terminal symbols" in lines
    assert lines[-4] == "3.0 0.0 Escaped"


def test_verify_exit_status(capsys):
    code, out = run(capsys, "verify", "lemma")
    assert code == 0 and out.out.splitlines()[-1].startswith("PASS suite lemma")


def test_errors_exit_nonzero(capsys):
    code, out = run(capsys, "classify", "--a", "2")
    assert code == 2 and "punctured unit disk" in out.err
    code, _ = run(capsys, "itinerary", "--lambda", "3.022e-5", "--res", "256x512")
    assert code == 2
    with pytest.raises(SystemExit) as exc:
        main(["render-dynamical", "--res", "banana"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit):
        main(["verify", "nonsense"])


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "perturbed_blaschke", "critical-points", "--lambda", "1e-7"],
        capture_output=True, text=True, check=True,
    )
    assert res.stdout.startswith("# role re im residual")
