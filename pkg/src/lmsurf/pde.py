"""Graph equations, degeneracy functions and singular loci.

For a graph ``z(x, y)`` the maximal surface equation is

    (1 - z_x^2) z_yy + 2 z_x z_y z_xy + (1 - z_y^2) z_xx = 0

and for a graph ``w(u, v)`` the Born-Infeld equation is

    (w_u^2 - 1) w_vv - 2 w_u w_v w_uv + (1 + w_v^2) w_uu = 0.

The induced metric degenerates where ``z_x^2 + z_y^2 = 1`` (maximal) or
``w_u^2 - w_v^2 = 1`` (timelike).  All values are returned unnormalized.
"""

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from . import _contour
from ._parallel import map_chunks
from .errors import DomainError, LmsError
from .surfaces import ParametricSurface, signature_diag

REGULAR = "regular"
SINGULAR = "singular"


def _maximal(j):
    zx, zy = j.dx, j.dy
    return ((1.0 - zx * zx) * j.hyy + (1.0 - zy * zy) * j.hxx) + 2.0 * (zx * zy) * j.hxy


def _borninfeld(j):
    wu, wv = j.dx, j.dy
    return (wu * wu - 1.0) * j.hyy - 2.0 * (wu * wv) * j.hxy + (1.0 + wv * wv) * j.hxx


def _deg_maximal(j):
    return j.dx * j.dx + j.dy * j.dy - 1.0


def _deg_timelike(j):
    return j.dx * j.dx - j.dy * j.dy - 1.0


def residual_maximal(s, p):
    """Maximal surface equation evaluated on the graph ``s`` at ``p``."""
    return _maximal(s.jet(p))


def residual_borninfeld(s, p):
    """Born-Infeld equation evaluated on the graph ``s`` at ``p``."""
    return _borninfeld(s.jet(p))


def degeneracy_maximal(s, p):
    return _deg_maximal(s.jet(p))


def degeneracy_timelike(s, p):
    return _deg_timelike(s.jet(p))


def residual(s, p):
    """The graph equation matching ``s.kind`` (maximal unless timelike)."""
    return residual_borninfeld(s, p) if s.equation == "borninfeld" else residual_maximal(s, p)


def degeneracy(s, p):
    return degeneracy_timelike(s, p) if s.equation == "borninfeld" else degeneracy_maximal(s, p)


def _residual_fn(s):
    return _borninfeld if s.equation == "borninfeld" else _maximal


def _degeneracy_fn(s):
    return _deg_timelike if s.equation == "borninfeld" else _deg_maximal


def classify(s, p, tol=1e-9):
    """``"singular"`` iff ``|degeneracy| <= tol`` (ties count as singular)."""
    return SINGULAR if abs(degeneracy(s, p)) <= tol else REGULAR


@dataclass
class ResidualReport:
    n_samples: int
    max_abs: float
    mean_abs: float
    l2: float  # root mean square over the samples
    worst_point: Tuple[float, float]
    equation: str = "maximal"

    def to_dict(self):
        return {"n_samples": self.n_samples, "max_abs": self.max_abs, "mean_abs": self.mean_abs,
                "l2": self.l2, "worst_point": list(self.worst_point), "equation": self.equation}


def grid_points(s, grid, domain=None):
    """Admissible points of an ``nx x ny`` grid over the domain, row-major."""
    nx, ny = grid
    if nx < 2 or ny < 2:
        raise LmsError("grid must be at least 2x2")
    domain = domain or s.domain
    xs, ys = domain.axes(nx, ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    X, Y = X.ravel(), Y.ravel()
    keep = s.admissible(X, Y)
    return X[keep], Y[keep]


def evaluate_on_points(s, fn, x, y, strict=True):
    """``fn(jet)`` over point arrays, chunked (``LMS_THREADS`` aware)."""
    def work(a, b):
        return np.asarray(fn(s.jet((x[a:b], y[a:b]), strict=strict)), dtype=float)
    out = map_chunks(work, len(x))
    return np.empty(0) if out is None else out


def residual_grid(s, grid=(201, 201), domain=None):
    """Residual statistics over the admissible points of a sampling grid."""
    x, y = grid_points(s, grid, domain)
    if len(x) == 0:
        raise LmsError(f"{s.name}: no admissible grid points")
    r = np.abs(evaluate_on_points(s, _residual_fn(s), x, y))
    k = int(np.argmax(r))
    return ResidualReport(
        n_samples=int(len(r)),
        max_abs=float(r[k]),
        mean_abs=float(np.mean(r)),
        l2=float(np.sqrt(np.mean(r * r))),
        worst_point=(float(x[k]), float(y[k])),
        equation=s.equation,
    )


@dataclass
class LocusPolyline:
    points: np.ndarray  # (n, 2)
    closed: bool
    residual_bound: float

    def to_dict(self):
        return {"closed": self.closed, "residual_bound": self.residual_bound,
                "n_points": int(len(self.points)), "points": self.points.tolist()}


@dataclass
class SingularLocus:
    """Result of :func:`singular_locus`.

    ``degenerate_field`` is set (and ``polylines`` left empty) when the
    degeneracy function vanishes on most of the grid, as for ``z = x``.
    """

    polylines: List[LocusPolyline] = field(default_factory=list)
    degenerate_field: bool = False
    spacing: float = 0.0
    refine_tol: float = 1e-10

    def __iter__(self):
        return iter(self.polylines)

    def __len__(self):
        return len(self.polylines)

    def __getitem__(self, k):
        return self.polylines[k]

    def to_dict(self):
        if self.degenerate_field:
            return {"degenerate_field": True}
        return {"degenerate_field": False, "refine_tol": self.refine_tol,
                "spacing": self.spacing, "polylines": [p.to_dict() for p in self.polylines]}


def singular_locus(s, grid=(201, 201), refine_tol=1e-10, domain=None):
    """Zero set of the degeneracy function as refined polylines."""
    nx, ny = grid
    if nx < 2 or ny < 2:
        raise LmsError("grid must be at least 2x2")
    domain = domain or s.domain
    xs, ys = domain.axes(nx, ny)
    spacing = float(max(xs[1] - xs[0], ys[1] - ys[0]))
    deg = _degeneracy_fn(s)

    def field_at(x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.full(x.shape, np.nan)
        ok = s.admissible(x, y)
        if ok.any():
            out[ok] = evaluate_on_points(s, deg, x[ok], y[ok], strict=False)
        return out

    X, Y = np.meshgrid(xs, ys, indexing="ij")
    F = field_at(X.ravel(), Y.ravel()).reshape(nx, ny)
    finite = np.isfinite(F)
    valid = finite[:-1, :-1] & finite[1:, :-1] & finite[1:, 1:] & finite[:-1, 1:]
    small = np.abs(np.where(finite, F, np.inf)) <= refine_tol
    flat = small[:-1, :-1] & small[1:, :-1] & small[1:, 1:] & small[:-1, 1:]
    result = SingularLocus(spacing=spacing, refine_tol=refine_tol)
    if valid.any() and flat.sum() >= 0.5 * valid.sum():
        result.degenerate_field = True
        return result
    for pts, closed, vals in _contour.zero_contours(xs, ys, F, field_at, refine_tol):
        result.polylines.append(
            LocusPolyline(pts, bool(closed), float(np.max(np.abs(vals)))))
    return result


def mean_curvature_numerator(s: ParametricSurface, p, signature=None, strict=True):
    """``e G - 2 f F + g E`` for a parametric surface under ``signature``.

    The normal is the Lorentz cross product of the tangents, so the second
    fundamental quantities reduce to Euclidean determinants such as
    ``det(X_u, X_v, X_uu)``.  Vanishes exactly where the surface is minimal
    (or maximal) for that metric.  Where ``|EG - F^2| <= 1e-12`` the value
    is undefined: an error, or NaN with ``strict=False``.
    """
    eta = signature_diag(signature or s.signature)
    jx, jy, jz = s.jets(p)
    comps = (jx, jy, jz)
    Xu = np.array([c.dx for c in comps])
    Xv = np.array([c.dy for c in comps])
    Xuu = np.array([c.hxx for c in comps])
    Xuv = np.array([c.hxy for c in comps])
    Xvv = np.array([c.hyy for c in comps])
    eta = eta.reshape((3,) + (1,) * (Xu.ndim - 1))
    E = np.sum(eta * Xu * Xu, axis=0)
    F = np.sum(eta * Xu * Xv, axis=0)
    G = np.sum(eta * Xv * Xv, axis=0)
    degenerate = np.abs(E * G - F * F) <= 1e-12
    if strict and np.any(degenerate):
        raise DomainError(f"degenerate tangent plane on {s.name}")
    cross = np.cross(Xu, Xv, axis=0)
    e = np.sum(cross * Xuu, axis=0)
    f = np.sum(cross * Xuv, axis=0)
    g = np.sum(cross * Xvv, axis=0)
    return np.where(degenerate, np.nan, e * G - 2.0 * f * F + g * E)
