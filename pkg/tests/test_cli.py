import csv

import numpy as np
import pytest

from app.storage.files import file_store
from main import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_classes_lists_the_catalog(capsys):
    code, out, _ = run(capsys, "classes")
    assert code == 0
    assert sum(1 for line in out.splitlines() if line.startswith("(")) == 10
    assert "λ_uu − λ_vv = sinh λ" in out


def test_classify_relation(capsys):
    code, out, _ = run(capsys, "classify", "--relation=0,0,-1,1")
    assert code == 0
    assert out.splitlines()[0] == "class (8), K=−1, Δλ=−sin λ"
    assert "case trace: II.7.1" in out


def test_classify_umbilic_coeffs_is_a_precondition_error(capsys):
    code, _, err = run(capsys, "classify", "--coeffs=1,0,0,1")
    assert code == 3
    assert "umbilic" in err


def test_classify_needs_input(capsys):
    code, _, _ = run(capsys, "classify")
    assert code == 2


def test_solve_writes_flat_field(capsys, tmp_path):
    code, _, _ = run(capsys, "solve", "--grid", "12x10", "--out", str(tmp_path))
    assert code == 0
    field = file_store.read_field(str(tmp_path / "field.txt"))
    assert field.shape == (12, 10)
    assert field.class_id == "CMC_HALF"
    assert np.all(field.values == 0.0)


def test_solve_reconstruct_verify(capsys, tmp_path):
    out = str(tmp_path)
    assert run(capsys, "solve", "--grid", "16x16", "--amplitude", "0.05", "--out", out)[0] == 0
    field = str(tmp_path / "field.txt")
    assert run(capsys, "reconstruct", "--field", field, "--out", out)[0] == 0
    assert (tmp_path / "surface.obj").is_file()
    assert (tmp_path / "patch.txt").is_file()
    code, stdout, _ = run(capsys, "verify", "--field", field, "--grid", "16x16", "--out", out)
    assert code == 0
    assert "verification of CMC_HALF" in stdout
    with open(tmp_path / "verify.csv") as fh:
        keys = [row["key"] for row in csv.DictReader(fh)]
    assert "two_path_corner" in keys


def test_verify_failure_exit_code(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--grid", "32x32", "--amplitude", "0.5",
                       "--tol", "1e-14", "--out", str(tmp_path))
    assert code == 5
    assert "exceeds tol" in err


@pytest.mark.parametrize("argv", [
    ["solve", "--grid", "2x2"],
    ["solve", "--grid", "ten"],
    ["solve", "--no-such-flag"],
    ["solve", "--omega", "2.5"],
    ["frobnicate"],
])
def test_bad_arguments_exit_two(capsys, tmp_path, argv):
    code, _, _ = run(capsys, *argv, "--out", str(tmp_path)) if argv[0] == "solve" else run(capsys, *argv)
    assert code == 2


def test_job_file_and_flags(capsys, tmp_path):
    job = tmp_path / "job.env"
    job.write_text("CLASS=K_MINUS1\nGRID=9x9\nSTEP=0.1\n")
    code, _, _ = run(capsys, "solve", "--config", str(job), "--grid", "11x9", "--out", str(tmp_path))
    assert code == 0
    field = file_store.read_field(str(tmp_path / "field.txt"))
    assert field.class_id == "K_MINUS1"
    assert field.shape == (11, 9)
    assert np.isclose(field.du, 0.1)


def test_job_file_with_unknown_key(capsys, tmp_path):
    job = tmp_path / "job.env"
    job.write_text("COLOUR=blue\n")
    assert run(capsys, "solve", "--config", str(job))[0] == 2


def test_parallel_family(capsys, tmp_path):
    code, _, _ = run(capsys, "parallel", "--grid", "12x12", "--offset", "0.1", "--offset", "1",
                     "--out", str(tmp_path))
    assert code == 0
    with open(tmp_path / "family.csv") as fh:
        rows = list(csv.DictReader(fh))
    assert [r["status"] for r in rows] == ["ok", "singular"]
    assert (tmp_path / "parallel_a+0.1.obj").is_file()


def test_parallel_needs_an_offset(capsys, tmp_path):
    assert run(capsys, "parallel", "--grid", "8x8", "--out", str(tmp_path))[0] == 2
