import json
import subprocess
import sys
from pathlib import Path

import pytest

from latticeknots.cli import main

MINI = Path(__file__).parent / "data" / "mini_table.csv"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_jones_single_crossing(capsys):
    code, out, _ = run(capsys, "jones", "--n", "0", "--resolution", "+")
    assert code == 0
    assert out.splitlines()[:2] == ["1", "0:1"]
    assert "known: 0_1" in out


def test_jones_alternating_json(capsys):
    code, out, _ = run(capsys, "jones", "--n", "1", "--resolution", "+-+-+-+-+", "--format", "json")
    data = json.loads(out)
    assert code == 0
    assert data["identification"]["name"] == "7_4"
    assert data["identification"]["crossing_number"] == 7


@pytest.mark.parametrize("engine", ["sweep", "statesum", "pd"])
def test_jones_engines(capsys, engine):
    code, out, _ = run(capsys, "jones", "--n", "1", "--resolution", "++-+--+-+",
                       "--engine", engine, "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "polynomial,name,mirrored"


@pytest.mark.parametrize("res,msg", [("+-+-+-+-", "expected 9 characters"), ("+-+-x-+-+", "position 4")])
def test_jones_bad_resolution(capsys, res, msg):
    code, _, err = run(capsys, "jones", "--n", "1", "--resolution", res)
    assert code == 2 and msg in err


def test_enumerate_3x3(capsys, tmp_path):
    code, out, _ = run(capsys, "enumerate", "--n", "1", "--quiet", "--workers", "1", "--check-bounds")
    assert code == 0
    assert "distinct=10" in out and "unknot_count=312" in out
    assert "k=0 crossings 0..0: 312 in [256, 506] pass" in out
    base = tmp_path / "c3"
    code, _, _ = run(capsys, "enumerate", "--n", "1", "--quiet", "--workers", "2",
                     "--mirror", "folded", "-o", str(base))
    assert code == 0
    assert json.loads((tmp_path / "c3.json").read_text())["distinct"] == 6
    assert (tmp_path / "c3.csv").read_text().startswith("polynomial,count,name,mirrored,type\n")


def test_enumerate_csv_stdout(capsys):
    code, out, _ = run(capsys, "enumerate", "--n", "1", "--quiet", "--format", "csv", "--workers", "1")
    assert code == 0 and len(out.splitlines()) == 11


def test_enumerate_refuses_big_lattice(capsys):
    code, _, err = run(capsys, "enumerate", "--n", "3")
    assert code == 2 and "sample" in err


def test_sample(capsys):
    code, out, err = run(capsys, "sample", "--n", "1", "--count", "2000", "--seed", "4", "--workers", "1")
    data = json.loads(out)
    assert code == 0 and data["samples"] == 2000 and data["seed"] == 4
    assert "sample:" in err
    code, out, _ = run(capsys, "sample", "--n", "1", "--count", "2000", "--seed", "4",
                       "--format", "text", "--quiet", "--workers", "2")
    assert f"unknot_ratio={data['unknot_ratio']:.6g}" in out
    code, _, err = run(capsys, "sample", "--n", "1", "--count", "0")
    assert code == 2


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--n", "2")
    assert code == 0 and "paper-discrepancy" in out
    code, out, _ = run(capsys, "bounds", "--n", "1", "--format", "csv")
    assert out.splitlines()[1].startswith("0,256,256,506")
    code, _, _ = run(capsys, "bounds", "--n", "-1")
    assert code == 2


def test_stratify(capsys):
    code, out, _ = run(capsys, "stratify", "--max-n", "1", "--quiet", "--workers", "1")
    assert code == 0
    assert any(line.startswith("(1,1) 3_1 ") for line in out.splitlines())
    code, _, _ = run(capsys, "stratify", "--max-n", "3")
    assert code == 2


def test_identify(capsys):
    code, out, _ = run(capsys, "identify", "--poly", "q^-2 + q^-6 - q^-8")
    assert code == 0 and out.strip() == "3_1^m"
    code, out, _ = run(capsys, "identify", "--poly", "t + t^3 - t^4", "--var", "t")
    assert out.strip() == "3_1"
    code, out, _ = run(capsys, "identify", "--poly", "q^4+2q^8-2q^10+q^12-2q^14+q^16", "--factor")
    assert out.strip() == "beyond_table (product 3_1 # 3_1)"
    code, out, _ = run(capsys, "identify", "--poly", "2:1,0,0,0,1,0,-1", "--format", "json")
    assert json.loads(out)["identification"]["name"] == "3_1"
    code, _, err = run(capsys, "identify", "--poly", "q^^2")
    assert code == 2 and "position" in err


def test_custom_table(capsys, tmp_path):
    code, out, _ = run(capsys, "identify", "--poly", "q^-4-q^-2+2-2q^2+q^4-q^6+q^8",
                       "--table", str(MINI))
    assert code == 0 and out.strip() == "beyond_table"
    bad = tmp_path / "bad.csv"
    bad.write_text("3_1,3,T\n")
    code, _, err = run(capsys, "identify", "--poly", "1", "--table", str(bad))
    assert code == 2 and "line 1" in err
    code, _, err = run(capsys, "identify", "--poly", "1", "--table", str(tmp_path / "missing.csv"))
    assert code == 2


def test_output_file(capsys, tmp_path):
    path = tmp_path / "b.txt"
    code, out, _ = run(capsys, "bounds", "--n", "1", "-o", str(path))
    assert code == 0 and out == ""
    assert path.read_text().startswith("bounds for the 3x3 lattice")


def test_usage_errors_exit_2():
    with pytest.raises(SystemExit) as info:
        main(["jones", "--n", "1"])
    assert info.value.code == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "latticeknots.cli", "bounds", "--n", "1"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and "[256, 506]" in proc.stdout
