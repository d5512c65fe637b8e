"""Gauss maps of maximal and Born-Infeld graphs, and injectivity scans.

A maximal graph sends ``(x, y)`` to ``(z_x, z_y, 1)`` and a timelike graph
sends ``(u, v)`` to ``(w_u, -w_v, 1)``.  Those raw vectors only land on the
unit hyperboloids after Lorentz normalization:

* maximal: divide by ``sqrt(1 - z_x^2 - z_y^2)``, giving ``X^2 + Y^2 - Z^2 = -1``
  (upper sheet, third component >= 1);
* timelike: divide by ``sqrt(1 + w_v^2 - w_u^2)``, giving ``-U^2 + V^2 + W^2 = 1``.

In both cases the radicand is minus the degeneracy function, so images exist
exactly at regular points of the graph.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import jet as jetlib
from . import pde
from .errors import DomainError, LmsError
from .wick import ContinuedGraph, random_admissible_points

TWO_SHEETED = "two-sheeted"
ONE_SHEETED = "one-sheeted"


@dataclass
class GaussImage:
    raw: np.ndarray
    normalized: np.ndarray
    quadric: str

    @property
    def quadric_residual(self):
        return quadric_residual(self.normalized, self.quadric)


def quadric_residual(v, quadric):
    v = np.asarray(v, dtype=float)
    X, Y, Z = v[..., 0], v[..., 1], v[..., 2]
    if quadric == TWO_SHEETED:
        return X * X + Y * Y - Z * Z + 1.0
    return -X * X + Y * Y + Z * Z - 1.0


def _quadric_for(s):
    return ONE_SHEETED if s.equation == "borninfeld" else TWO_SHEETED


def _raw_and_radicand(s, j):
    if s.equation == "borninfeld":
        raw = np.stack(np.broadcast_arrays(j.dx, -j.dy, 1.0), axis=-1)
        radicand = 1.0 + j.dy * j.dy - j.dx * j.dx
    else:
        raw = np.stack(np.broadcast_arrays(j.dx, j.dy, 1.0), axis=-1)
        radicand = 1.0 - j.dx * j.dx - j.dy * j.dy
    return raw.astype(float), radicand


def gauss_map(s, p, tol=1e-9):
    """Gauss image of the graph ``s`` at the regular point ``p``."""
    j = s.jet(p)
    raw, radicand = _raw_and_radicand(s, j)
    if not radicand > tol:
        raise DomainError(
            f"no Gauss image at {tuple(map(float, p))} on {s.name}: the point is singular "
            f"(normalization radicand {float(radicand):.3g})")
    return GaussImage(raw, raw / np.sqrt(radicand), _quadric_for(s))


def gauss_images(s, x, y, tol=1e-9):
    """Vectorized images: ``(raw, normalized, valid)`` for point arrays."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    j = s.jet((x, y), strict=False)
    raw, radicand = _raw_and_radicand(s, j)
    valid = np.isfinite(radicand) & (radicand > tol) & np.all(np.isfinite(raw), axis=-1)
    with np.errstate(all="ignore"):
        normalized = raw / np.sqrt(np.where(valid, radicand, 1.0))[..., None]
    return raw, normalized, valid


@dataclass
class Collision:
    p1: tuple
    p2: tuple
    image_distance: float

    def to_dict(self):
        return {"p1": list(self.p1), "p2": list(self.p2), "image_distance": self.image_distance}


@dataclass
class InjectivityReport:
    collisions: list = field(default_factory=list)
    n_points: int = 0
    n_skipped: int = 0
    constant_gauss_map: bool = False
    truncated: bool = False
    image_eps: float = 1e-8
    base_delta: float = 1e-6

    @property
    def injective(self):
        return not self.collisions and not self.constant_gauss_map

    def to_dict(self):
        return {
            "n_points": self.n_points,
            "n_skipped": self.n_skipped,
            "n_collisions": len(self.collisions),
            "collisions": [c.to_dict() for c in self.collisions],
            "constant_gauss_map": self.constant_gauss_map,
            "truncated": self.truncated,
            "image_eps": self.image_eps,
            "base_delta": self.base_delta,
            "injective": self.injective,
        }


def _pairs_hash(images, eps):
    """Candidate index pairs ``i < j`` whose images share or neighbour a cell."""
    keys = np.floor(images / eps)
    cells = {}
    for k, key in enumerate(map(tuple, keys.tolist())):
        cells.setdefault(key, []).append(k)
    offsets = list(itertools.product((-1, 0, 1), repeat=images.shape[1]))
    for key, members in cells.items():
        for off in offsets:
            other = cells.get(tuple(a + b for a, b in zip(key, off)))
            if other is None:
                continue
            for i in members:
                for j in other:
                    if i < j:
                        yield i, j


def _pairs_brute(images, eps):
    n = len(images)
    for i in range(n):
        for j in range(i + 1, n):
            yield i, j


def _order(p, q):
    return (p, q) if p <= q else (q, p)


def find_collisions(points, images, image_eps, base_delta, method="hash", limit=None):
    """Pairs with image distance ``< image_eps`` and base distance ``> base_delta``.

    ``method`` is ``"hash"`` (quantized spatial hashing) or ``"brute"``
    (all pairs).  Output is sorted lexicographically by base points.
    """
    gen = _pairs_hash if method == "hash" else _pairs_brute
    found = {}
    for i, j in gen(images, image_eps):
        d_img = float(np.linalg.norm(images[i] - images[j]))
        if d_img >= image_eps:
            continue
        if float(np.linalg.norm(points[i] - points[j])) <= base_delta:
            continue
        p, q = _order(tuple(map(float, points[i])), tuple(map(float, points[j])))
        found[(p, q)] = d_img
    out = [Collision(p, q, d) for (p, q), d in sorted(found.items())]
    truncated = limit is not None and len(out) > limit
    return (out[:limit] if truncated else out), truncated


def injectivity_scan(s, grid=(101, 101), image_eps=1e-8, base_delta=1e-6, domain=None,
                     method="hash", max_collisions=10000, tol=1e-9):
    """Sample the Gauss map on a grid and report non-injective pairs."""
    x, y = pde.grid_points(s, grid, domain)
    raw, normalized, valid = gauss_images(s, x, y, tol)
    pts = np.column_stack([x, y])[valid]
    imgs = normalized[valid]
    report = InjectivityReport(n_points=int(valid.sum()), n_skipped=int((~valid).sum()),
                               image_eps=image_eps, base_delta=base_delta)
    if len(imgs) >= 2 and np.all(np.ptp(imgs, axis=0) < image_eps):
        report.constant_gauss_map = True
        return report
    report.collisions, report.truncated = find_collisions(
        pts, imgs, image_eps, base_delta, method, max_collisions)
    return report


def _maximal_gradient_at_continued_point(max_s, u, v):
    """``(z_x, z_y)`` of the maximal graph at the complex point ``(u, i v)``."""
    x = jetlib.Jet2(np.asarray(u, dtype=complex), 1.0, 0.0)
    y = jetlib.Jet2(1j * np.asarray(v, dtype=float), 0.0, 1.0)
    j = max_s.complex_jet(x, y)
    dx, dy = np.broadcast_arrays(j.dx, j.dy)
    return np.stack([dx, dy], axis=-1)


@dataclass
class TransportReport:
    n_pairs: int
    n_coincident: int
    n_violations: int
    max_ratio: float
    operator_norm: float
    constant_gauss_map: bool = False
    image_eps: float = 1e-8

    @property
    def passed(self):
        return self.n_violations == 0 and not self.constant_gauss_map

    def to_dict(self):
        return {"n_pairs": self.n_pairs, "n_coincident": self.n_coincident,
                "n_violations": self.n_violations, "max_ratio": self.max_ratio,
                "operator_norm": self.operator_norm,
                "constant_gauss_map": self.constant_gauss_map, "image_eps": self.image_eps,
                "pass": self.passed}


def transport_check(max_s, tl_s, pairs=100, image_eps=1e-8, seed=0, grid=(101, 101)):
    """Coincident timelike Gauss images must pull back to coincident maximal ones.

    Candidate pairs are identical points, points perturbed far below
    ``image_eps`` and any collisions of the timelike scan.  The maximal
    gradients are computed directly from ``max_s`` at the complex points
    ``(u, i v)``; the correspondence acts on raw images as ``diag(1, i)``, so
    coincidence within ``eps`` must transport to within ``eps`` (operator norm
    1) up to rounding.
    """
    if not isinstance(tl_s, ContinuedGraph):
        raise LmsError("transport_check needs the continuation of the maximal graph")
    scan = injectivity_scan(tl_s, grid, image_eps)
    norm = 1.0
    if scan.constant_gauss_map:
        return TransportReport(0, 0, 0, 0.0, norm, True, image_eps)
    rng = np.random.default_rng(seed)
    u, v = random_admissible_points(tl_s, pairs, rng)
    jitter = rng.uniform(-1e-12, 1e-12, (2, pairs))
    p1 = np.concatenate([u, u] + [np.array([c.p1[0] for c in scan.collisions])])
    q1 = np.concatenate([v, v] + [np.array([c.p1[1] for c in scan.collisions])])
    p2 = np.concatenate([u, u + jitter[0]] + [np.array([c.p2[0] for c in scan.collisions])])
    q2 = np.concatenate([v, v + jitter[1]] + [np.array([c.p2[1] for c in scan.collisions])])

    _, img1, ok1 = gauss_images(tl_s, p1, q1)
    _, img2, ok2 = gauss_images(tl_s, p2, q2)
    ok = ok1 & ok2
    d_tl = np.linalg.norm(img1 - img2, axis=-1)
    raw1 = np.column_stack(np.broadcast_arrays(*(lambda j: (j.dx, -j.dy))(tl_s.jet((p1, q1)))))
    raw2 = np.column_stack(np.broadcast_arrays(*(lambda j: (j.dx, -j.dy))(tl_s.jet((p2, q2)))))
    coincident = ok & (d_tl < image_eps)
    g1 = _maximal_gradient_at_continued_point(max_s, p1, q1)
    g2 = _maximal_gradient_at_continued_point(max_s, p2, q2)
    d_max = np.linalg.norm(g1 - g2, axis=-1)
    d_raw = np.linalg.norm(raw1 - raw2, axis=-1)
    bound = norm * d_raw + 1e-12 * (1.0 + np.linalg.norm(g1, axis=-1))
    violations = coincident & (d_max > bound)
    with np.errstate(all="ignore"):
        ratio = np.where(coincident & (d_raw > 0), d_max / d_raw, 0.0)
    return TransportReport(
        n_pairs=int(len(p1)),
        n_coincident=int(coincident.sum()),
        n_violations=int(violations.sum()),
        max_ratio=float(np.max(ratio)) if len(ratio) else 0.0,
        operator_norm=norm,
        image_eps=image_eps,
    )
