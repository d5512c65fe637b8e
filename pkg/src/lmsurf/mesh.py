"""Triangle meshes and polylines sampled from surfaces, with OBJ/CSV output."""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import pde
from ._io import atomic_write_text
from .errors import MeshError


@dataclass
class TriMesh:
    vertices: np.ndarray  # (n, 3) float
    triangles: np.ndarray  # (m, 3) int, 0-based
    attributes: Optional[np.ndarray] = None  # (n,) per-vertex scalar

    def __post_init__(self):
        self.vertices = np.asarray(self.vertices, dtype=float).reshape(-1, 3)
        self.triangles = np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3)
        n = len(self.vertices)
        if self.triangles.size and (self.triangles.min() < 0 or self.triangles.max() >= n):
            raise MeshError("triangle index out of range")
        t = self.triangles
        if np.any((t[:, 0] == t[:, 1]) | (t[:, 1] == t[:, 2]) | (t[:, 0] == t[:, 2])):
            raise MeshError("degenerate triangle (repeated vertex index)")
        if self.attributes is not None:
            self.attributes = np.asarray(self.attributes, dtype=float)
            if self.attributes.shape != (n,):
                raise MeshError("need exactly one attribute per vertex")

    @property
    def edges(self):
        t = self.triangles
        e = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
        return np.unique(np.sort(e, axis=1), axis=0)

    @property
    def euler_characteristic(self):
        return len(self.vertices) - len(self.edges) + len(self.triangles)

    def boundary_edges(self):
        t = self.triangles
        e = np.sort(np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]]), axis=1)
        uniq, counts = np.unique(e, axis=0, return_counts=True)
        return uniq[counts == 1]


def _triangulate(valid):
    """Triangles over an ``(nx, ny)`` vertex mask; each full cell is split
    along the diagonal from ``(i, j)`` to ``(i+1, j+1)``."""
    nx, ny = valid.shape
    idx = np.arange(nx * ny).reshape(nx, ny)
    full = valid[:-1, :-1] & valid[1:, :-1] & valid[1:, 1:] & valid[:-1, 1:]
    a, b = idx[:-1, :-1][full], idx[1:, :-1][full]
    c, d = idx[1:, 1:][full], idx[:-1, 1:][full]
    tris = np.empty((2 * len(a), 3), dtype=np.int64)
    tris[0::2] = np.column_stack([a, b, c])
    tris[1::2] = np.column_stack([a, c, d])
    return tris


def _compact(points, tris, attrs=None):
    used = np.unique(tris)
    remap = np.full(len(points), -1, dtype=np.int64)
    remap[used] = np.arange(len(used))
    return TriMesh(points[used], remap[tris], None if attrs is None else attrs[used])


def _from_grid(points, valid, attrs=None):
    tris = _triangulate(valid)
    if len(tris) == 0:
        raise MeshError("every grid cell is excluded; nothing to mesh")
    nx, ny = valid.shape
    flat = points.reshape(nx * ny, 3)
    return _compact(flat, tris, None if attrs is None else attrs.reshape(-1))


def sample_graph(s, grid=(101, 101), domain=None):
    """Height-field mesh of a graph; vertex attribute is the degeneracy value."""
    nx, ny = grid
    if nx < 2 or ny < 2:
        raise MeshError("grid must be at least 2x2")
    domain = domain or s.domain
    xs, ys = domain.axes(nx, ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    x, y = X.ravel(), Y.ravel()
    ok = s.admissible(x, y)
    z = np.full(x.shape, np.nan)
    deg = np.full(x.shape, np.nan)
    if ok.any():
        j = s.jet((x[ok], y[ok]), strict=False)
        z[ok] = np.broadcast_to(np.real(j.val), x[ok].shape)
        deg[ok] = np.broadcast_to(np.real(pde._degeneracy_fn(s)(j)), x[ok].shape)
    valid = ok & np.isfinite(z) & np.isfinite(deg)
    pts = np.column_stack([x, y, z])
    return _from_grid(pts, valid.reshape(nx, ny), deg)


def sample_parametric(P, grid=(101, 101), domain=None):
    nx, ny = grid
    if nx < 2 or ny < 2:
        raise MeshError("grid must be at least 2x2")
    domain = domain or P.domain
    us, vs = domain.axes(nx, ny)
    U, V = np.meshgrid(us, vs, indexing="ij")
    pts = np.moveaxis(P.point((U, V), strict=False), 0, -1)
    valid = np.all(np.isfinite(pts), axis=-1)
    return _from_grid(pts, valid)


def sample_integrated(S):
    """Mesh of an integrated Weierstrass surface on its own sample grid."""
    pts = S.grid()
    return _from_grid(pts, np.all(np.isfinite(pts), axis=-1))


def obj_text(m):
    lines = ["v %.17g %.17g %.17g" % tuple(v) for v in m.vertices.tolist()]
    lines += ["f %d %d %d" % (a + 1, b + 1, c + 1) for a, b, c in m.triangles.tolist()]
    return "\n".join(lines) + "\n"


def write_obj(m, path):
    """OBJ with ``v`` lines (17 significant digits) then 1-based ``f`` lines."""
    if len(m.triangles) == 0 or len(m.vertices) == 0:
        raise MeshError("refusing to write an empty mesh")
    atomic_write_text(path, obj_text(m))


def read_obj(path):
    verts, faces = [], []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if parts[0] == "v":
                verts.append([float(p) for p in parts[1:4]])
            elif parts[0] == "f":
                faces.append([int(p.split("/")[0]) - 1 for p in parts[1:4]])
    return TriMesh(np.array(verts, dtype=float), np.array(faces, dtype=np.int64))


def polyline_csv_text(points):
    rows = ["%.17g,%.17g" % (x, y) for x, y in np.asarray(points, dtype=float).tolist()]
    return "x,y\n" + "".join(r + "\n" for r in rows)


def write_polyline_csv(polyline, path):
    """CSV with header ``x,y`` and one vertex per row."""
    points = getattr(polyline, "points", polyline)
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(points) == 0:
        raise MeshError("refusing to write an empty polyline")
    atomic_write_text(path, polyline_csv_text(points))


def read_polyline_csv(path):
    return np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
