import csv

import numpy as np
import pytest

from app.core.parallel import offset_patch
from app.core.reconstruction import reconstruct
from app.errors import ConfigError
from app.models.grid import GridField, GridSpec
from app.storage.files import SEPARATOR, file_store as store


@pytest.fixture
def patch(cmc):
    _, pair = cmc
    grid = GridSpec(4, 5, du=0.1, dv=0.1)
    return reconstruct(pair, GridField.on_grid(grid, np.zeros(grid.shape), nu0=pair.nu0))


def test_field_survives_write_and_read(tmp_path):
    rng = np.random.default_rng(3)
    field = GridField(values=rng.normal(size=(6, 7)), u0=0.1, v0=-0.3, du=1.0 / 3.0, dv=0.01,
                      nu0=0.25, a_const=2.0, class_id="CMC_HALF", kind="lambda", edges="extrapolated")
    back = store.read_field(store.write_field(str(tmp_path / "field.txt"), field))
    assert np.array_equal(back.values, field.values)
    assert back.header() == field.header()


def test_obj_faces_are_one_based(tmp_path, patch):
    path = store.write_obj(str(tmp_path / "s.obj"), patch)
    lines = open(path).read().splitlines()
    verts = [l for l in lines if l.startswith("v ")]
    faces = [[int(x) for x in l.split()[1:]] for l in lines if l.startswith("f ")]
    assert len(verts) == 20
    assert len(faces) == 2 * 3 * 4
    assert min(min(f) for f in faces) == 1
    assert max(max(f) for f in faces) == 20


def test_ply_header(tmp_path, patch):
    lines = open(store.write_ply(str(tmp_path / "s.ply"), patch)).read().splitlines()
    assert lines[:2] == ["ply", "format ascii 1.0"]
    assert "element vertex 20" in lines
    assert "element face 24" in lines
    assert lines[lines.index("end_header") + 21].startswith("3 ")


def test_rows_have_a_header(tmp_path):
    path = store.write_rows(str(tmp_path / "t.csv"), [{"a": 0.1, "status": "ok"}, {"a": 1.0, "status": "singular"}])
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    assert [r["status"] for r in rows] == ["ok", "singular"]


def test_patch_dump_layout(tmp_path, patch):
    bar = offset_patch(patch, 0.2)
    lines = open(store.write_patch(str(tmp_path / "p.txt"), bar)).read().splitlines()
    cut = lines.index(SEPARATOR)
    assert "offset_eps = 1" in lines[:cut]
    header = lines[cut + 1].split(",")
    assert header[:5] == ["i", "j", "x1", "x2", "x3"]
    assert len(header) == 20
    assert len(lines) - cut - 2 == 20


def test_unknown_mesh_format(tmp_path, patch):
    with pytest.raises(ConfigError):
        store.export_patch(str(tmp_path / "s.vtk"), patch, "vtk")


@pytest.mark.parametrize("text", [
    "rows = 3\ncols = 3\n",
    "rows = 3\ncols = 3\nu0 = 0\nv0 = 0\ndu = 1\ndv = 1\nnu0 = 0\na_const = 1\nb_const = 1\n---\n1 2 3\n",
    "rows = x\n---\n",
    "not a header\n---\n",
])
def test_malformed_field_files(tmp_path, text):
    path = tmp_path / "bad.txt"
    path.write_text(text)
    with pytest.raises(ConfigError):
        store.read_field(str(path))


def test_missing_field_file(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        store.read_field(str(tmp_path / "nope.txt"))
