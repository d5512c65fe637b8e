"""Correspondence between maximal graphs and Born-Infeld (timelike) graphs.

The canonical map substitutes an imaginary second coordinate,
``w(u, v) = z(u, i v)``, and keeps the real part once the imaginary part has
been checked to be negligible.  Under this substitution the maximal surface
equation turns into the Born-Infeld equation and ``z_x^2 + z_y^2 - 1`` into
``w_u^2 - w_v^2 - 1``.  The remaining freedom is a Lorentz boost of the
``(u, v)`` plane, handled by :func:`boost` on sampled heights.
"""

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np

from . import jet as jetlib
from . import pde
from .errors import ContinuationError, LmsError
from .jet import Jet2
from .surfaces import MAXIMAL, TIMELIKE, GraphLike, Rect, broadcast_jet

TO_TIMELIKE = "to-timelike"
TO_MAXIMAL = "to-maximal"


class ContinuedGraph(GraphLike):
    """``base`` evaluated with its second coordinate replaced by ``i`` times it.

    ``to-timelike`` turns a maximal graph ``z(x, y)`` into ``w(u, v) = z(u, iv)``;
    ``to-maximal`` turns a timelike ``w`` into ``z(x, y) = w(x, iy)``.  Bases
    may themselves be continued graphs; two continuations compose to the
    reflection ``y -> -y`` (recorded in ``reflection``).
    """

    def __init__(self, base, direction=TO_TIMELIKE, im_tol=1e-9):
        if direction not in (TO_TIMELIKE, TO_MAXIMAL):
            raise LmsError(f"unknown direction {direction!r}")
        if im_tol <= 0:
            raise LmsError("im_tol must be positive")
        self.base = base
        self.direction = direction
        self.im_tol = im_tol
        self.kind = TIMELIKE if direction == TO_TIMELIKE else MAXIMAL
        self.variables = ("u", "v") if direction == TO_TIMELIKE else ("x", "y")
        self.domain = base.domain
        self.name = f"{base.name}|{direction}"
        depth = getattr(base, "depth", 0) + 1
        self.depth = depth
        # composing two continuations gives y -> -y
        self.reflection = "y -> -y" if depth % 2 == 0 else None

    def __repr__(self):
        return f"ContinuedGraph({self.base.name!r}, {self.direction!r}, im_tol={self.im_tol})"

    def with_domain(self, domain):
        out = ContinuedGraph(self.base, self.direction, self.im_tol)
        out.domain = domain
        return out

    def complex_jet(self, jx, jy, strict=True):
        return self.base.complex_jet(jx, jetlib.mul(1j, jy), strict)

    def admit_values(self, cx, cy):
        return self.base.admit_values(np.asarray(cx, dtype=complex), 1j * np.asarray(cy))

    def complex_value_jet(self, p, strict=True):
        """Unreduced complex jet of the continued height at real ``p``."""
        u, v = (np.asarray(c, dtype=complex) if np.ndim(c) else complex(c) for c in p)
        shape = np.shape(u)
        ju, jv = jetlib.seed((u, v))
        j = self.complex_jet(ju, jv, strict)
        if not isinstance(j, Jet2):
            j = Jet2(j)
        return broadcast_jet(j, shape)

    def jet(self, p, strict=True):
        """Real jet ``(w, w_u, w_v, w_uu, w_uv, w_vv)`` after the imaginary-part check."""
        j = self.complex_value_jet(p, strict)
        imag = np.max([np.abs(np.imag(c)) for c in j.components()], axis=0)
        bad = ~(imag <= self.im_tol)
        if np.any(bad):
            if strict:
                pts = np.broadcast_arrays(*p)
                k = np.argmax(np.ravel(bad)) if np.ndim(bad) else 0
                where = tuple(float(np.ravel(c)[k]) for c in pts)
                raise ContinuationError(
                    f"imaginary part {float(np.max(np.where(bad, imag, 0))):.3g} exceeds "
                    f"im_tol={self.im_tol:g} on {self.name}", where)
            return j.map(lambda c: np.where(bad, np.nan, np.real(c)))
        return j.map(lambda c: np.real(c) if np.ndim(c) else float(np.real(c)))


def continue_graph(s, direction=TO_TIMELIKE, im_tol=1e-9):
    """Wick-continue a graph (see :class:`ContinuedGraph`)."""
    return ContinuedGraph(s, direction, im_tol)


def eval_continued(c, p):
    """Real jet of the continued graph at the real point ``p``."""
    return c.jet(p)


def random_admissible_points(s, n, rng, domain=None, max_rounds=200):
    """``n`` uniformly drawn points where ``s`` is admissible and evaluable."""
    domain = domain or s.domain
    xs, ys = [], []
    have = 0
    for _ in range(max_rounds):
        x = rng.uniform(domain.x0, domain.x1, 4 * n)
        y = rng.uniform(domain.y0, domain.y1, 4 * n)
        ok = s.admissible(x, y)
        x, y = x[ok], y[ok]
        if len(x):
            vals = s.jet((x, y), strict=False).val
            good = np.isfinite(vals)
            x, y = x[good], y[good]
        xs.append(x)
        ys.append(y)
        have += len(x)
        if have >= n:
            break
    x = np.concatenate(xs)[:n]
    y = np.concatenate(ys)[:n]
    if len(x) < n:
        raise LmsError(f"could only find {len(x)} of {n} admissible points on {s.name}")
    return x, y


# -- boosts ------------------------------------------------------------------

@dataclass(frozen=True)
class BoostMap:
    """Boost of rapidity ``theta`` composed with the canonical continuation.

    ``(u', v') = (u cosh t + v sinh t, u sinh t + v cosh t)`` followed by
    ``(x, y) = (u', i v')``, optionally reflecting either output axis.
    """

    theta: float
    reflect_x: bool = False
    reflect_y: bool = False

    def matrix(self):
        c, s = np.cosh(self.theta), np.sinh(self.theta)
        return np.array([[c, s], [s, c]])

    def jacobian(self):
        """``[[x_u, x_v], [y_u, y_v]]`` over the complex numbers."""
        J = self.matrix().astype(complex)
        J[1] *= 1j
        if self.reflect_x:
            J[0] *= -1
        if self.reflect_y:
            J[1] *= -1
        return J

    def relations(self):
        """Residuals of the four first-order relations the map must satisfy.

        ``x_u^2 - x_v^2 - 1``, ``y_u^2 - y_v^2 - 1``,
        ``(x_u y_v - x_v y_u)^2 + 1`` and ``x_u y_u - x_v y_v``.
        """
        (xu, xv), (yu, yv) = self.jacobian()
        return np.array([xu * xu - xv * xv - 1.0,
                         yu * yu - yv * yv - 1.0,
                         (xu * yv - xv * yu) ** 2 + 1.0,
                         xu * yu - xv * yv])


def is_lorentz_congruence(J, tol=1e-12):
    """Whether the real 2x2 map ``J`` preserves ``-du^2 + dv^2``.

    Such maps are the linear reparametrizations relating two timelike
    representatives of one maximal graph; their determinant is +-1.
    """
    J = np.asarray(J, dtype=float)
    eta = np.diag([-1.0, 1.0])
    return bool(np.allclose(J.T @ eta @ J, eta, rtol=0.0, atol=tol))


@dataclass
class SampledGraph:
    """Heights on a uniform grid (``ij`` indexing: ``heights[i, j]`` at ``(u[i], v[j])``)."""

    u: np.ndarray
    v: np.ndarray
    heights: np.ndarray
    kind: str = TIMELIKE
    name: str = "sampled"

    def fd_residual(self, equation=None):
        """Graph-equation residual from fourth-order central differences.

        Returned on the interior (two points are lost on every side).
        """
        equation = equation or ("borninfeld" if self.kind == TIMELIKE else "maximal")
        hu = self.u[1] - self.u[0]
        hv = self.v[1] - self.v[0]
        w = self.heights
        if w.shape[0] < 5 or w.shape[1] < 5:
            raise LmsError("need at least 5x5 samples for finite differences")
        c = slice(2, -2)

        def sh(a, b):
            return w[2 + a: w.shape[0] - 2 + a, 2 + b: w.shape[1] - 2 + b]

        wu = (-sh(2, 0) + 8 * sh(1, 0) - 8 * sh(-1, 0) + sh(-2, 0)) / (12 * hu)
        wv = (-sh(0, 2) + 8 * sh(0, 1) - 8 * sh(0, -1) + sh(0, -2)) / (12 * hv)
        wuu = (-sh(2, 0) + 16 * sh(1, 0) - 30 * w[c, c] + 16 * sh(-1, 0) - sh(-2, 0)) / (12 * hu * hu)
        wvv = (-sh(0, 2) + 16 * sh(0, 1) - 30 * w[c, c] + 16 * sh(0, -1) - sh(0, -2)) / (12 * hv * hv)

        # mixed derivative: product of the two fourth-order first-difference stencils
        wts = {-2: 1.0, -1: -8.0, 1: 8.0, 2: -1.0}
        wuv = sum(wa * wb * sh(a, b) for a, wa in wts.items() for b, wb in wts.items())
        wuv = wuv / (144 * hu * hv)
        j = Jet2(w[c, c], wu, wv, wuu, wuv, wvv)
        return pde._borninfeld(j) if equation == "borninfeld" else pde._maximal(j)


def boost(theta, s, rect=None, grid=(101, 101)):
    """Sample the boosted timelike graph ``W(u, v) = w(B(u, v))`` on ``rect``.

    ``B`` is the boost of rapidity ``theta``.  Every boosted sample point must
    land where ``s`` is admissible, otherwise the boosted surface is not a
    graph over ``rect`` and an error is raised.
    """
    if s.kind != TIMELIKE:
        raise LmsError(f"boost expects a timelike graph, got {s.kind}")
    rect = rect or s.domain
    nu, nv = grid
    us, vs = rect.axes(nu, nv)
    U, V = np.meshgrid(us, vs, indexing="ij")
    c, sh = np.cosh(theta), np.sinh(theta)
    Ub = U * c + V * sh
    Vb = U * sh + V * c
    ok = s.admissible(Ub.ravel(), Vb.ravel())
    if not ok.all():
        k = int(np.argmin(ok))
        raise LmsError(
            f"boosted surface is not a graph over {rect}: sample "
            f"({U.ravel()[k]:.6g}, {V.ravel()[k]:.6g}) maps outside the domain of {s.name}")
    heights = s.jet((Ub.ravel(), Vb.ravel())).val.reshape(U.shape)
    return SampledGraph(us, vs, np.asarray(heights, dtype=float), TIMELIKE,
                        f"{s.name}|boost({theta:g})")


# -- correspondence of singular sets ----------------------------------------

@dataclass
class CorrespondenceReport:
    max_residual: float
    n_residual_points: int
    locus_points: int
    max_target_degeneracy_on_locus: float
    approach: list = field(default_factory=list)
    approach_monotone: bool = True
    degenerate_field: bool = False
    source_locus_empty: bool = False
    tolerance: float = 1e-9

    @property
    def passed(self):
        ok = self.max_residual < self.tolerance
        if self.locus_points:
            ok = ok and self.max_target_degeneracy_on_locus <= self.tolerance
        return bool(ok)

    def to_dict(self):
        return {
            "max_residual": self.max_residual,
            "n_residual_points": self.n_residual_points,
            "locus_points": self.locus_points,
            "max_target_degeneracy_on_locus": self.max_target_degeneracy_on_locus,
            "approach": self.approach,
            "approach_monotone": self.approach_monotone,
            "degenerate_field": self.degenerate_field,
            "source_locus_empty": self.source_locus_empty,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def correspondence_check(max_s, tl_s, n=200, seed=0, grid=(101, 101), refine_tol=1e-10,
                         approach=(1e-1, 1e-2, 1e-3, 1e-4), tolerance=1e-9):
    """Check that singular points of a maximal graph match those of its partner.

    Reports the target's graph-equation residual on ``n`` random admissible
    points, the target degeneracy at (up to ``n``) points of the source's
    singular locus under the identification ``(x, y) = (u, v)``, and both
    degeneracy values along the approach sequence ``(t, 0)``.
    """
    rng = np.random.default_rng(seed)
    u, v = random_admissible_points(tl_s, n, rng)
    max_res = float(np.max(np.abs(pde.evaluate_on_points(tl_s, pde._residual_fn(tl_s), u, v))))

    locus = pde.singular_locus(max_s, grid, refine_tol)
    pts = (np.concatenate([p.points for p in locus.polylines])
           if len(locus) else np.empty((0, 2)))
    if len(pts) > n:
        pts = pts[np.linspace(0, len(pts) - 1, n).astype(int)]
    target_deg = 0.0
    used = 0
    if len(pts):
        ok = tl_s.admissible(pts[:, 0], pts[:, 1])
        if ok.any():
            vals = pde.degeneracy(tl_s, (pts[ok, 0], pts[ok, 1]))
            target_deg = float(np.nanmax(np.abs(vals)))
            used = int(ok.sum())

    rows = []
    for t in approach:
        row = {"t": t}
        for label, surf in (("source", max_s), ("target", tl_s)):
            try:
                row[label] = float(pde.degeneracy(surf, (t, 0.0)))
            except LmsError:
                row[label] = None
        rows.append(row)
    # strictly shrinking magnitudes along t -> 0 for both surfaces
    monotone = True
    for label in ("source", "target"):
        mags = [abs(r[label]) for r in rows if r[label] is not None]
        monotone &= len(mags) == len(rows) and all(b < a for a, b in zip(mags, mags[1:]))

    target_locus = pde.singular_locus(tl_s, grid, refine_tol)
    return CorrespondenceReport(
        max_residual=max_res,
        n_residual_points=int(len(u)),
        locus_points=used,
        max_target_degeneracy_on_locus=target_deg,
        approach=rows,
        approach_monotone=bool(monotone),
        degenerate_field=bool(locus.degenerate_field and target_locus.degenerate_field),
        source_locus_empty=bool(len(locus) == 0 and not locus.degenerate_field),
        tolerance=tolerance,
    )
