"""Integration of Weierstrass data for timelike minimal surfaces.

Data ``(q, f)`` in ``u`` and ``(r, g)`` in ``v`` give null tangents

    A'(u) = ( (1+q^2) f / 2, -(1-q^2) f / 2, -q f )
    B'(v) = s * ( (1+r^2) g / 2,  (1-r^2) g / 2,  r g )

for the ``(-,+,+)`` metric, and ``X(u, v) = A(u) + B(v)``.  The sign ``s`` of
the ``v`` part is the convention: ``"examples"`` (``s = +1``) reproduces the
catalog helicoids, ``"grouped"`` (``s = -1``) is the literal reading where the
``v`` integrals sit inside the same bracket as the ``u`` ones.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from . import expr as exprlib
from . import quadrature
from .errors import DomainError, LmsError, QuadratureError
from .surfaces import Rect, signature_diag

CONVENTIONS = ("examples", "grouped")
COMPONENTS = ("x_u", "y_u", "z_u", "x_v", "y_v", "z_v")
POLE_SCAN_POINTS = 1000
POLE_THRESHOLD = 1e-10


def _v_sign(convention):
    if convention not in CONVENTIONS:
        raise LmsError(f"unknown convention {convention!r}; known: {', '.join(CONVENTIONS)}")
    return 1.0 if convention == "examples" else -1.0


def _eval(e, t, params):
    return exprlib.evaluate(e, (t,), params)


def tangent_u(data, t):
    """``A'(t)`` as an array of shape ``(3, *shape(t))``."""
    q = _eval(data.q, t, data.params)
    f = _eval(data.f, t, data.params)
    shape = np.shape(t)
    return np.array([np.broadcast_to(c, shape) for c in
                     (0.5 * (1.0 + q * q) * f, -0.5 * (1.0 - q * q) * f, -q * f)], dtype=float)


def tangent_v(data, t, convention="examples"):
    """``B'(t)`` under ``convention``."""
    s = _v_sign(convention)
    r = _eval(data.r, t, data.params)
    g = _eval(data.g, t, data.params)
    shape = np.shape(t)
    return s * np.array([np.broadcast_to(c, shape) for c in
                         (0.5 * (1.0 + r * r) * g, 0.5 * (1.0 - r * r) * g, r * g)], dtype=float)


def integrand(data, which, t, convention="examples"):
    """One of the six integrands, named like ``"x_u"`` or ``("z", "v")``."""
    if not isinstance(which, str):
        which = "_".join(which)
    if which not in COMPONENTS:
        raise LmsError(f"unknown integrand {which!r}; known: {', '.join(COMPONENTS)}")
    k = "xyz".index(which[0])
    if which.endswith("u"):
        return tangent_u(data, t)[k]
    return tangent_v(data, t, convention)[k]


def _denominators(node):
    if isinstance(node, exprlib.Binary):
        if node.op == "/":
            yield node.right
        yield from _denominators(node.left)
        yield from _denominators(node.right)
    elif isinstance(node, exprlib.Unary):
        yield from _denominators(node.operand)
    elif isinstance(node, exprlib.Call):
        for a in node.args:
            yield from _denominators(a)


def find_pole(e, lo, hi, params=None, n=POLE_SCAN_POINTS, threshold=POLE_THRESHOLD):
    """Location of a denominator zero of ``e`` in ``[lo, hi]``, or ``None``.

    Each denominator is sampled on ``n`` points; a sign change, an exact zero
    or a local minimum of ``|den|`` refined below ``threshold`` counts.
    """
    params = dict(params or {})
    t = np.linspace(lo, hi, n)
    for den in _denominators(e.tree):
        sub = exprlib.CompiledExpr(den, e.variables, e.params, exprlib.to_source(den))

        def d(s):
            return np.real(exprlib.evaluate(sub, (s,), params, strict=False))
        vals = np.broadcast_to(np.asarray(d(t), dtype=float), t.shape)
        bad = ~np.isfinite(vals) | (vals == 0.0)
        if bad.any():
            return float(t[np.argmax(bad)])
        change = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
        if len(change):
            return float(0.5 * (t[change[0]] + t[change[0] + 1]))
        a = np.abs(vals)
        for k in range(n):
            left = a[k - 1] if k > 0 else np.inf
            right = a[k + 1] if k < n - 1 else np.inf
            if a[k] <= left and a[k] <= right:
                lo_k, hi_k = t[max(k - 1, 0)], t[min(k + 1, n - 1)]
                if lo_k == hi_k:
                    continue
                res = minimize_scalar(lambda s: abs(float(d(s))), bounds=(lo_k, hi_k),
                                      method="bounded", options={"xatol": 1e-14})
                if res.fun < threshold:
                    return float(res.x)
    return None


def check_poles(data, u_range, v_range):
    """Raise :class:`QuadratureError` if any data denominator vanishes on the ranges."""
    for key, rng in (("q", u_range), ("f", u_range), ("r", v_range), ("g", v_range)):
        e = getattr(data, key)
        where = find_pole(e, rng[0], rng[1], data.params)
        if where is not None:
            raise QuadratureError(
                f"{data.name}: pole of {key} = {e.source} near {where:.12g} inside "
                f"[{rng[0]:.12g}, {rng[1]:.12g}]")


@dataclass
class IntegratedSurface:
    """Translation surface ``X(u, v) = A(u) + B(v)`` sampled on uniform grids."""

    name: str
    us: np.ndarray
    vs: np.ndarray
    A: np.ndarray  # (n_u, 3)
    B: np.ndarray  # (n_v, 3)
    base: tuple
    quad_tol: float
    convention: str = "examples"
    data: object = field(default=None, repr=False)
    quad_error: float = 0.0
    signature: str = "(-,+,+)"

    @property
    def domain(self):
        return Rect(float(self.us[0]), float(self.us[-1]), float(self.vs[0]), float(self.vs[-1]))

    def grid(self):
        """Points on the sample grid, shape ``(n_u, n_v, 3)``."""
        return self.A[:, None, :] + self.B[None, :, :]

    def _curve(self, t, knots, samples, deriv):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        k = np.clip(np.searchsorted(knots, t), 0, len(knots) - 1)
        k = np.where((k > 0) & (np.abs(knots[k - 1] - t) < np.abs(knots[k] - t)), k - 1, k)
        out = samples[k].copy()
        for c in range(3):
            def fn(s, c=c):
                return deriv(s)[c]
            for i in np.nonzero(t != knots[k])[0]:
                out[i, c] += quadrature.integrate(fn, knots[k[i]], t[i], self.quad_tol)
        return out

    def at(self, u, v):
        """``X(u, v)`` at arbitrary parameters inside the sampled ranges."""
        u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
        if not np.all(self.domain.contains(u, v)):
            raise DomainError(f"({u}, {v}) lies outside the integrated rectangle {self.domain}")
        if self.data is None:
            raise LmsError("surface carries no data to integrate off-grid")
        A = self._curve(u, self.us, self.A, lambda s: tangent_u(self.data, s))
        B = self._curve(v, self.vs, self.B,
                        lambda s: tangent_v(self.data, s, self.convention))
        out = A + B
        return out[0] if np.ndim(u) == 0 else out.reshape(np.shape(u) + (3,))


def integrate(data, u_range, v_range, n=101, quad_tol=1e-10, convention="examples",
              base=None):
    """Integrate ``data`` into an :class:`IntegratedSurface`.

    ``base`` defaults to ``(data.u0, data.v0)`` when set, else the left ends
    of the ranges; ``X(base) = 0``.
    """
    _v_sign(convention)
    if n < 2:
        raise LmsError("need at least 2 samples per curve")
    if base is None:
        base = (data.u0 if data.u0 is not None else u_range[0],
                data.v0 if data.v0 is not None else v_range[0])
    u0, v0 = float(base[0]), float(base[1])
    ulo, uhi = min(u_range[0], u0), max(u_range[1], u0)
    vlo, vhi = min(v_range[0], v0), max(v_range[1], v0)
    check_poles(data, (ulo, uhi), (vlo, vhi))
    us = np.linspace(u_range[0], u_range[1], n)
    vs = np.linspace(v_range[0], v_range[1], n)
    A = np.empty((n, 3))
    B = np.empty((n, 3))
    err = 0.0
    for c in range(3):
        a, ra = quadrature.cumulative(lambda s, c=c: tangent_u(data, s)[c], us, u0, quad_tol)
        b, rb = quadrature.cumulative(lambda s, c=c: tangent_v(data, s, convention)[c],
                                      vs, v0, quad_tol)
        A[:, c], B[:, c] = a, b
        err = max(err, ra.error, rb.error)
    return IntegratedSurface(data.name, us, vs, A, B, (u0, v0), quad_tol, convention,
                             data, err, data.signature)


def null_to_isothermal(X, p):
    """Evaluate a null-coordinate surface at isothermal ``(x, y)``: ``u = x + y``, ``v = -x + y``."""
    x, y = (float(c) for c in p)
    u, v = x + y, -x + y
    if not X.domain.contains(u, v):
        raise DomainError(f"isothermal point {(x, y)} maps to {(u, v)} outside {X.domain}")
    if isinstance(X, IntegratedSurface):
        return X.at(u, v)
    return X.point((u, v))


def null_defect(data, ts_u, ts_v, convention="examples"):
    """Largest ``|-c1^2 + c2^2 + c3^2|`` over ``A'`` and ``B'`` at the given samples."""
    eta = signature_diag(data.signature)[:, None]
    a = tangent_u(data, np.asarray(ts_u, dtype=float))
    b = tangent_v(data, np.asarray(ts_v, dtype=float), convention)
    return float(max(np.max(np.abs(np.sum(eta * a * a, axis=0))),
                     np.max(np.abs(np.sum(eta * b * b, axis=0)))))


def mixed_difference(S):
    """Central-difference ``X_uv`` on the sample grid; shape ``(n_u-2, n_v-2, 3)``."""
    h = (S.us[1] - S.us[0]) * (S.vs[1] - S.vs[0])
    G = S.grid()
    return (G[2:, 2:] - G[2:, :-2] - G[:-2, 2:] + G[:-2, :-2]) / (4.0 * h)


def _fd(samples, h):
    """First and second derivatives by 4th-order central stencils (interior points)."""
    s = samples
    d1 = (-s[4:] + 8 * s[3:-1] - 8 * s[1:-3] + s[:-4]) / (12.0 * h)
    d2 = (-s[4:] + 16 * s[3:-1] - 30 * s[2:-2] + 16 * s[1:-3] - s[:-4]) / (12.0 * h * h)
    return d1, d2


def curvature_statistics(S, stride=None):
    """Mean-curvature numerator ``e G - 2 f F + g E`` from finite differences.

    Tangents come from the sampled curves ``A`` and ``B``; ``X_uv`` from the
    mixed difference of the grid.  Returns ``(max_abs, mean_abs)``.
    """
    hu = S.us[1] - S.us[0]
    hv = S.vs[1] - S.vs[0]
    Au, Auu = _fd(S.A, hu)
    Bv, Bvv = _fd(S.B, hv)
    Xuv = mixed_difference(S)[1:-1, 1:-1]
    stride = stride or 1
    Au, Auu = Au[::stride], Auu[::stride]
    Bv, Bvv = Bv[::stride], Bvv[::stride]
    Xuv = Xuv[::stride, ::stride]
    eta = signature_diag(S.signature)
    Xu = np.broadcast_to(Au[:, None, :], Xuv.shape)
    Xv = np.broadcast_to(Bv[None, :, :], Xuv.shape)
    Xuu = np.broadcast_to(Auu[:, None, :], Xuv.shape)
    Xvv = np.broadcast_to(Bvv[None, :, :], Xuv.shape)
    E = np.sum(eta * Xu * Xu, axis=-1)
    F = np.sum(eta * Xu * Xv, axis=-1)
    G = np.sum(eta * Xv * Xv, axis=-1)
    n = np.cross(Xu, Xv)
    e = np.sum(n * Xuu, axis=-1)
    f = np.sum(n * Xuv, axis=-1)
    g = np.sum(n * Xvv, axis=-1)
    H = np.abs(e * G - 2.0 * f * F + g * E)
    return float(np.max(H)), float(np.mean(H))


@dataclass
class CertifyReport:
    name: str
    sigma: tuple
    translation: tuple
    residual: float
    per_sigma: dict
    curvature_max_abs: float
    curvature_mean_abs: float
    null_defect: float
    mixed_max_abs: float
    convention: str
    grouped_residual: float
    grouped_sigma: tuple
    u_range: tuple
    v_range: tuple
    n: int
    quad_tol: float
    tolerance: float = 1e-8

    @property
    def passed(self):
        return (self.residual < self.tolerance and self.null_defect < 1e-9
                and self.mixed_max_abs < 1e-8 and self.curvature_max_abs < 1e-6)

    def to_dict(self):
        return {
            "name": self.name,
            "sigma": list(self.sigma),
            "translation": list(self.translation),
            "residual": self.residual,
            "per_sigma": dict(self.per_sigma),
            "curvature_max_abs": self.curvature_max_abs,
            "curvature_mean_abs": self.curvature_mean_abs,
            "null_defect": self.null_defect,
            "mixed_max_abs": self.mixed_max_abs,
            "convention": self.convention,
            "grouped_residual": self.grouped_residual,
            "grouped_sigma": list(self.grouped_sigma),
            "u_range": list(self.u_range),
            "v_range": list(self.v_range),
            "n": self.n,
            "quad_tol": self.quad_tol,
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


def fit_congruence(S, R):
    """Best ``sigma`` in ``{+1,-1}^3`` and translation ``t`` with ``sigma*S + t ~ R``.

    Works in the max norm: for each coordinate the optimal translation is
    the mid-range of ``R - sigma S``.  Ties prefer ``+1``.
    """
    fits = []
    for c in range(3):
        row = {}
        for s in (1, -1):
            d = R[..., c] - s * S[..., c]
            row[s] = (float(0.5 * (d.max() - d.min())), float(0.5 * (d.max() + d.min())))
        fits.append(row)
    per = {}
    for sig in itertools.product((1, -1), repeat=3):
        key = "".join("+" if s > 0 else "-" for s in sig)
        per[key] = max(fits[c][sig[c]][0] for c in range(3))
    sigma = tuple(1 if fits[c][1][0] <= fits[c][-1][0] else -1 for c in range(3))
    trans = tuple(fits[c][sigma[c]][1] for c in range(3))
    return sigma, trans, max(fits[c][sigma[c]][0] for c in range(3)), per


def _reference_grid(reference, us, vs):
    if isinstance(reference, IntegratedSurface):
        if not (np.array_equal(reference.us, us) and np.array_equal(reference.vs, vs)):
            U, V = np.meshgrid(us, vs, indexing="ij")
            return reference.at(U, V)
        return reference.grid()
    U, V = np.meshgrid(us, vs, indexing="ij")
    return np.moveaxis(reference.point((U, V)), 0, -1)


def certify(data, reference, n=21, u_range=None, v_range=None, quad_tol=1e-10,
            convention="examples", tolerance=1e-8, fd_samples=201):
    """Compare integrated ``data`` with ``reference`` up to reflections and translation."""
    if u_range is None or v_range is None:
        dom = reference.domain
        u_range = u_range or (dom.x0, dom.x1)
        v_range = v_range or (dom.y0, dom.y1)
    u_range = tuple(map(float, u_range))
    v_range = tuple(map(float, v_range))
    S = integrate(data, u_range, v_range, n, quad_tol, convention)
    R = _reference_grid(reference, S.us, S.vs)
    sigma, trans, resid, per = fit_congruence(S.grid(), R)

    other = "grouped" if convention == "examples" else "examples"
    S_other = integrate(data, u_range, v_range, n, quad_tol, other)
    g_sigma, _, g_resid, _ = fit_congruence(S_other.grid(), R)
    if convention == "grouped":
        g_sigma, g_resid = sigma, resid

    fine = integrate(data, u_range, v_range, fd_samples, quad_tol, convention)
    cmax, cmean = curvature_statistics(fine)
    ts_u = np.linspace(u_range[0], u_range[1], 100)
    ts_v = np.linspace(v_range[0], v_range[1], 100)
    return CertifyReport(
        name=data.name, sigma=sigma, translation=trans, residual=resid, per_sigma=per,
        curvature_max_abs=cmax, curvature_mean_abs=cmean,
        null_defect=null_defect(data, ts_u, ts_v, convention),
        mixed_max_abs=float(np.max(np.abs(mixed_difference(S)))),
        convention=convention, grouped_residual=g_resid, grouped_sigma=g_sigma,
        u_range=u_range, v_range=v_range, n=n, quad_tol=quad_tol, tolerance=tolerance)


__all__ = ["CertifyReport", "IntegratedSurface", "certify", "check_poles", "curvature_statistics",
           "find_pole", "fit_congruence", "integrand", "integrate", "mixed_difference",
           "null_defect", "null_to_isothermal", "tangent_u", "tangent_v"]
