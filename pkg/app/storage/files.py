import csv
import logging
import os
from typing import Dict, Any, List, Sequence

import numpy as np

from ..errors import ConfigError
from ..models.grid import GridField
from ..models.surface import SurfacePatch

logger = logging.getLogger(__name__)

SEPARATOR = "---"
FIELD_FLOATS = ("u0", "v0", "du", "dv", "nu0", "a_const", "b_const")


def _num(x: float) -> str:
    return "%.17g" % x


class FileStore:
    """Text formats for fields, meshes, tables and patch dumps"""

    def _prepare(self, path: str) -> None:
        parent = os.path.dirname(path)
        if parent:
            os.makedirs(parent, exist_ok=True)

    # --- grid fields ------------------------------------------------------

    def write_field(self, path: str, field: GridField) -> str:
        """Header 'key = value' lines, '---', then one row of %.17g values per u"""
        self._prepare(path)
        rows, cols = field.shape
        with open(path, "w", newline="\n") as fh:
            fh.write(f"rows = {rows}\n")
            fh.write(f"cols = {cols}\n")
            for key in FIELD_FLOATS:
                fh.write(f"{key} = {_num(getattr(field, key))}\n")
            fh.write(f"class_id = {field.class_id}\n")
            fh.write(f"kind = {field.kind}\n")
            fh.write(f"edges = {field.edges}\n")
            fh.write(SEPARATOR + "\n")
            for row in field.values:
                fh.write(" ".join(_num(x) for x in row) + "\n")
        logger.info("Wrote field %s (%dx%d)", path, rows, cols)
        return path

    def read_field(self, path: str) -> GridField:
        if not os.path.isfile(path):
            raise ConfigError(f"field file not found: {path}")
        with open(path) as fh:
            lines = fh.read().splitlines()
        try:
            cut = lines.index(SEPARATOR)
        except ValueError:
            raise ConfigError(f"{path}: missing '{SEPARATOR}' separator")
        header: Dict[str, str] = {}
        for line in lines[:cut]:
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            key, sep, value = line.partition("=")
            if not sep:
                raise ConfigError(f"{path}: bad header line '{line}'")
            header[key.strip()] = value.strip()
        try:
            rows, cols = int(header["rows"]), int(header["cols"])
            values = np.array([[float(x) for x in line.split()] for line in lines[cut + 1:] if line.strip()])
            data = {key: float(header[key]) for key in FIELD_FLOATS}
        except (KeyError, ValueError) as e:
            raise ConfigError(f"{path}: malformed field file ({e})")
        if values.shape != (rows, cols):
            raise ConfigError(f"{path}: expected {rows}x{cols} values, found shape {values.shape}")
        data.update(values=values, class_id=header.get("class_id", "custom"), kind=header.get("kind", "nu"),
                    edges=header.get("edges", "exact"))
        return GridField.from_dict(data)

    # --- meshes -------------------------------------------------------------

    @staticmethod
    def _faces(n: int, m: int) -> np.ndarray:
        """Two triangles per grid quad, 0-based"""
        i, j = np.meshgrid(np.arange(n - 1), np.arange(m - 1), indexing="ij")
        a = (i * m + j).ravel()
        b = ((i + 1) * m + j).ravel()
        c = ((i + 1) * m + j + 1).ravel()
        d = (i * m + j + 1).ravel()
        return np.concatenate([np.stack([a, b, c], axis=1), np.stack([a, c, d], axis=1)])

    def write_obj(self, path: str, patch: SurfacePatch) -> str:
        self._prepare(path)
        n, m = patch.shape
        with open(path, "w", newline="\n") as fh:
            fh.write(f"# {patch.grid.class_id} {n}x{m}\n")
            for x in patch.z.reshape(-1, 3):
                fh.write("v %s %s %s\n" % tuple(_num(c) for c in x))
            for tri in self._faces(n, m) + 1:
                fh.write("f %d %d %d\n" % tuple(tri))
        logger.info("Wrote OBJ %s", path)
        return path

    def write_ply(self, path: str, patch: SurfacePatch) -> str:
        self._prepare(path)
        n, m = patch.shape
        faces = self._faces(n, m)
        with open(path, "w", newline="\n") as fh:
            fh.write("ply\nformat ascii 1.0\n")
            fh.write(f"element vertex {n * m}\n")
            fh.write("property double x\nproperty double y\nproperty double z\n")
            fh.write(f"element face {len(faces)}\n")
            fh.write("property list uchar int vertex_indices\nend_header\n")
            for x in patch.z.reshape(-1, 3):
                fh.write("%s %s %s\n" % tuple(_num(c) for c in x))
            for tri in faces:
                fh.write("3 %d %d %d\n" % tuple(tri))
        logger.info("Wrote PLY %s", path)
        return path

    def write_mesh_csv(self, path: str, patch: SurfacePatch) -> str:
        u, v = patch.grid.grid.axes()
        f = patch.fields
        rows = []
        for i in range(patch.shape[0]):
            for j in range(patch.shape[1]):
                rows.append({
                    "i": i, "j": j, "u": _num(u[i]), "v": _num(v[j]),
                    "x1": _num(patch.z[i, j, 0]), "x2": _num(patch.z[i, j, 1]), "x3": _num(patch.z[i, j, 2]),
                    "nu1": _num(f.nu1[i, j]), "nu2": _num(f.nu2[i, j]),
                })
        return self.write_rows(path, rows)

    def export_patch(self, path: str, patch: SurfacePatch, fmt: str) -> str:
        writers = {"obj": self.write_obj, "ply": self.write_ply, "csv": self.write_mesh_csv}
        if fmt not in writers:
            raise ConfigError(f"no mesh export for format '{fmt}'")
        return writers[fmt](path, patch)

    # --- tables and dumps -----------------------------------------------------

    def write_rows(self, path: str, rows: Sequence[Dict[str, Any]], columns: List[str] = None) -> str:
        """CSV with a header row"""
        self._prepare(path)
        columns = columns or (list(rows[0].keys()) if rows else [])
        with open(path, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
            writer.writeheader()
            for row in rows:
                writer.writerow({k: row.get(k, "") for k in columns})
        logger.info("Wrote %d row(s) to %s", len(rows), path)
        return path

    def write_patch(self, path: str, patch: SurfacePatch) -> str:
        """Header, '---', then per node: index, position, frame rows and invariants"""
        self._prepare(path)
        f = patch.fields
        columns = ["i", "j", "x1", "x2", "x3"]
        columns += [f"{name}{k}" for name in ("X", "Y", "l") for k in (1, 2, 3)]
        columns += ["nu1", "nu2", "gamma1", "gamma2", "E", "G"]
        with open(path, "w", newline="") as fh:
            for key, value in patch.grid.header().items():
                fh.write(f"{key} = {_num(value) if isinstance(value, float) else value}\n")
            fh.write(f"renormalizations = {patch.renormalizations}\n")
            fh.write(f"seed_index = {patch.seed_index[0]},{patch.seed_index[1]}\n")
            if patch.offset is not None:
                fh.write(f"offset_a = {_num(patch.offset.a)}\n")
                fh.write(f"offset_eps = {patch.offset.eps}\n")
            fh.write(SEPARATOR + "\n")
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(columns)
            for i in range(patch.shape[0]):
                for j in range(patch.shape[1]):
                    frame = patch.frames[i, j].ravel()
                    inv = (f.nu1[i, j], f.nu2[i, j], f.gamma1[i, j], f.gamma2[i, j], f.E[i, j], f.G[i, j])
                    writer.writerow([i, j] + [_num(x) for x in patch.z[i, j]]
                                    + [_num(x) for x in frame] + [_num(x) for x in inv])
        logger.info("Wrote patch dump %s", path)
        return path


# Create a singleton instance
file_store = FileStore()
