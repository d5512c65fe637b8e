"""Second-order forward-mode jets in two variables.

A :class:`Jet2` carries a value together with its two first partials and the
three distinct second partials.  The base scalar can be a Python/NumPy real or
complex number, or an ndarray of either (evaluating a whole grid at once).

The module-level helpers (:func:`add`, :func:`mul`, :func:`div`,
:func:`power`, :func:`apply`) accept jets and plain scalars interchangeably and
take a ``strict`` flag: with ``strict=True`` any domain violation raises
:class:`~lmsurf.errors.DomainError`; with ``strict=False`` offending entries are
replaced by NaN so that grid sweeps can mask them out afterwards.
"""

import numbers

import numpy as np

from .errors import DomainError

__all__ = ["Jet2", "seed", "add", "sub", "mul", "div", "neg", "power", "apply",
           "FUNCTIONS", "is_complex"]


class Jet2:
    """Truncated Taylor expansion ``val + d.h + h^T H h / 2`` in two variables."""

    __slots__ = ("val", "dx", "dy", "hxx", "hxy", "hyy")

    def __init__(self, val, dx=0.0, dy=0.0, hxx=0.0, hxy=0.0, hyy=0.0):
        self.val = val
        self.dx = dx
        self.dy = dy
        self.hxx = hxx
        self.hxy = hxy
        self.hyy = hyy

    @property
    def d(self):
        return (self.dx, self.dy)

    @property
    def h(self):
        return ((self.hxx, self.hxy), (self.hxy, self.hyy))

    def components(self):
        """``(val, dx, dy, hxx, hxy, hyy)``."""
        return (self.val, self.dx, self.dy, self.hxx, self.hxy, self.hyy)

    def map(self, fn):
        """Apply ``fn`` to every stored component (e.g. ``np.real``)."""
        return Jet2(*(fn(c) for c in self.components()))

    def __repr__(self):
        return ("Jet2(val={!r}, d=({!r}, {!r}), h=({!r}, {!r}, {!r}))"
                .format(*self.components()))

    def __add__(self, other):
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        return sub(self, other)

    def __rsub__(self, other):
        return sub(other, self)

    def __mul__(self, other):
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return div(self, other)

    def __rtruediv__(self, other):
        return div(other, self)

    def __neg__(self):
        return neg(self)

    def __pos__(self):
        return self

    def __pow__(self, other):
        return power(self, other)

    def __rpow__(self, other):
        return power(other, self)


def seed(point):
    """Identity jets for the coordinate functions at ``point = (p0, p1)``.

    A 1-tuple seeds a single variable (the ``dy`` slots stay zero).
    """
    if len(point) == 1:
        return (Jet2(point[0], 1.0, 0.0),)
    if len(point) != 2:
        raise ValueError("jets support one or two variables")
    p0, p1 = point
    return Jet2(p0, 1.0, 0.0), Jet2(p1, 0.0, 1.0)


def is_complex(v):
    if isinstance(v, Jet2):
        v = v.val
    return np.iscomplexobj(v)


def _any(mask):
    return bool(np.any(mask))


def _nan_like(v):
    return complex(np.nan, np.nan) if np.iscomplexobj(v) else np.nan


def _guard(result, mask, strict, message):
    """Raise or NaN-mask where ``mask`` holds."""
    if not _any(mask):
        return result
    if strict:
        raise DomainError(message)
    if isinstance(result, Jet2):
        return result.map(lambda c: np.where(mask, _nan_like(c), c))
    return np.where(mask, _nan_like(result), result)


# -- arithmetic -------------------------------------------------------------

def add(a, b):
    if isinstance(a, Jet2) and isinstance(b, Jet2):
        return Jet2(a.val + b.val, a.dx + b.dx, a.dy + b.dy,
                    a.hxx + b.hxx, a.hxy + b.hxy, a.hyy + b.hyy)
    if isinstance(a, Jet2):
        return Jet2(a.val + b, a.dx, a.dy, a.hxx, a.hxy, a.hyy)
    if isinstance(b, Jet2):
        return Jet2(a + b.val, b.dx, b.dy, b.hxx, b.hxy, b.hyy)
    return a + b


def neg(a):
    if isinstance(a, Jet2):
        return a.map(lambda c: -c)
    return -a


def sub(a, b):
    if isinstance(a, Jet2) and isinstance(b, Jet2):
        return Jet2(a.val - b.val, a.dx - b.dx, a.dy - b.dy,
                    a.hxx - b.hxx, a.hxy - b.hxy, a.hyy - b.hyy)
    if isinstance(a, Jet2):
        return Jet2(a.val - b, a.dx, a.dy, a.hxx, a.hxy, a.hyy)
    if isinstance(b, Jet2):
        return Jet2(a - b.val, -b.dx, -b.dy, -b.hxx, -b.hxy, -b.hyy)
    return a - b


def mul(a, b):
    if isinstance(a, Jet2) and isinstance(b, Jet2):
        return Jet2(
            a.val * b.val,
            a.dx * b.val + a.val * b.dx,
            a.dy * b.val + a.val * b.dy,
            a.hxx * b.val + 2.0 * (a.dx * b.dx) + a.val * b.hxx,
            a.hxy * b.val + (a.dx * b.dy + a.dy * b.dx) + a.val * b.hxy,
            a.hyy * b.val + 2.0 * (a.dy * b.dy) + a.val * b.hyy,
        )
    if isinstance(a, Jet2):
        return a.map(lambda c: c * b)
    if isinstance(b, Jet2):
        return b.map(lambda c: a * c)
    return a * b


def _chain(u, f0, f1, f2):
    """Lift a univariate function with derivatives ``f1, f2`` at ``u.val``."""
    return Jet2(
        f0,
        f1 * u.dx,
        f1 * u.dy,
        f1 * u.hxx + f2 * (u.dx * u.dx),
        f1 * u.hxy + f2 * (u.dx * u.dy),
        f1 * u.hyy + f2 * (u.dy * u.dy),
    )


def _value(v):
    return v.val if isinstance(v, Jet2) else v


def _reciprocal(b, strict):
    mask = b.val == 0
    if strict and _any(mask):
        raise DomainError("division by zero")
    with np.errstate(all="ignore"):
        r = np.true_divide(1.0, b.val)
        out = _chain(b, r, -(r * r), 2.0 * (r * r * r))
    return _guard(out, mask, strict, "division by zero")


def div(a, b, strict=True):
    if not isinstance(a, Jet2) and not isinstance(b, Jet2):
        mask = b == 0
        if strict and _any(mask):
            raise DomainError("division by zero")
        with np.errstate(all="ignore"):
            out = a / b if not _any(mask) else np.true_divide(a, b)
        return _guard(out, mask, strict, "division by zero")
    if not isinstance(b, Jet2):
        mask = b == 0
        if strict and _any(mask):
            raise DomainError("division by zero")
        with np.errstate(all="ignore"):
            out = a.map(lambda c: np.true_divide(c, b))
        return _guard(out, mask, strict, "division by zero")
    return mul(a, _reciprocal(b, strict))


def _one_like(x):
    if isinstance(x, np.ndarray):
        return np.ones_like(x)
    return 1.0 + 0.0j if np.iscomplexobj(x) else 1.0


def _ipow(x, n):
    """``x**n`` by repeated multiplication (exact zero imaginary parts survive)."""
    if n < 0:
        return 1.0 / _ipow(x, -n)
    result = None
    base = x
    while n:
        if n & 1:
            result = base if result is None else result * base
        n >>= 1
        if n:
            base = base * base
    return _one_like(x) if result is None else result


def _integral_exponent(b):
    if isinstance(b, Jet2) or np.iscomplexobj(b) or not np.isscalar(b):
        return None
    if isinstance(b, numbers.Integral):
        return int(b)
    if np.isfinite(b) and float(b).is_integer() and abs(b) <= 1024:
        return int(b)
    return None


def power(a, b, strict=True):
    n = _integral_exponent(b)
    av = _value(a)
    if n is not None:
        mask = (av == 0) if n < 0 else False
        if strict and _any(mask):
            raise DomainError("zero raised to a negative power")
        with np.errstate(all="ignore"):
            if isinstance(a, Jet2):
                f0 = _ipow(av, n)
                f1 = n * _ipow(av, n - 1) if n != 0 else 0.0
                f2 = n * (n - 1) * _ipow(av, n - 2) if n not in (0, 1) else 0.0
                out = _chain(a, f0, f1, f2)
            else:
                out = _ipow(av, n)
        return _guard(out, mask, strict, "zero raised to a negative power")
    if isinstance(b, Jet2):
        return apply("exp", mul(b, apply("log", a, strict)), strict)
    # constant, non-integral exponent
    if np.iscomplexobj(av) or np.iscomplexobj(b):
        mask = av == 0
        message = "zero raised to a complex or fractional power"
        with np.errstate(all="ignore"):
            lv = np.log(np.where(mask, 1.0, av)) if isinstance(av, np.ndarray) \
                else np.log(av if av != 0 else 1.0)
            f0 = np.exp(b * lv)
            if isinstance(a, Jet2):
                out = _chain(a, f0, b * f0 / av, b * (b - 1) * f0 / (av * av))
            else:
                out = f0
        return _guard(out, mask, strict, message)
    mask = (av <= 0) if isinstance(a, Jet2) else (av < 0)
    message = "negative base raised to a fractional power"
    with np.errstate(all="ignore"):
        f0 = np.power(av, b)
        if isinstance(a, Jet2):
            out = _chain(a, f0, b * np.power(av, b - 1), b * (b - 1) * np.power(av, b - 2))
        else:
            out = f0
    return _guard(out, mask, strict, message)


# -- elementary functions ---------------------------------------------------

def _asinh(x):
    if not np.iscomplexobj(x):
        return np.arcsinh(x)
    # principal branch, log(w + sqrt(w^2 + 1)), with odd symmetry on Re w < 0
    # to dodge cancellation
    x = np.asarray(x, dtype=complex)
    flip = x.real < 0
    w = np.where(flip, -x, x)
    r = np.log(w + np.sqrt(w * w + 1.0))
    r = np.where(flip, -r, r)
    return r[()] if r.ndim == 0 else r


class _Function:
    """An elementary function with its first two derivatives.

    ``bad(x)`` marks arguments where the value is undefined, ``jet_bad(x)``
    where the derivatives are (checked only when lifting jets).
    """

    def __init__(self, name, f, d1, d2, bad=None, jet_bad=None, holomorphic=True):
        self.name = name
        self.f = f
        self.d1 = d1
        self.d2 = d2
        self.bad = bad
        self.jet_bad = jet_bad
        self.holomorphic = holomorphic

    def __call__(self, x, strict=True):
        xv = _value(x)
        cplx = np.iscomplexobj(xv)
        jet = isinstance(x, Jet2)
        if jet and cplx and not self.holomorphic:
            raise DomainError(f"{self.name} is not holomorphic; cannot lift a complex jet")
        mask = False
        if self.bad is not None:
            mask = self.bad(xv, cplx)
        if jet and self.jet_bad is not None:
            mask = np.logical_or(mask, self.jet_bad(xv, cplx))
        if strict and _any(mask):
            raise DomainError(f"{self.name} evaluated outside its domain")
        if _any(mask) and isinstance(xv, np.ndarray):
            xv = np.where(mask, _one_like(xv), xv)
        with np.errstate(all="ignore"):
            f0 = self.f(xv)
            out = _chain(x, f0, self.d1(xv, f0), self.d2(xv, f0)) if jet else f0
        return _guard(out, mask, strict, f"{self.name} evaluated outside its domain")


def _real_only(pred):
    return lambda x, cplx: False if cplx else pred(x)


def _tan_d1(x, t):
    c = np.cos(x)
    return 1.0 / (c * c)


def _abs(x):
    if np.iscomplexobj(x):
        return np.abs(x) + 0.0j
    return np.abs(x)


FUNCTIONS = {
    "sin": _Function("sin", np.sin, lambda x, f: np.cos(x), lambda x, f: -f),
    "cos": _Function("cos", np.cos, lambda x, f: -np.sin(x), lambda x, f: -f),
    "tan": _Function("tan", np.tan, _tan_d1, lambda x, f: 2.0 * f * _tan_d1(x, f),
                     bad=lambda x, cplx: np.cos(x) == 0),
    "sinh": _Function("sinh", np.sinh, lambda x, f: np.cosh(x), lambda x, f: f),
    "cosh": _Function("cosh", np.cosh, lambda x, f: np.sinh(x), lambda x, f: f),
    "tanh": _Function("tanh", np.tanh, lambda x, f: 1.0 - f * f,
                      lambda x, f: -2.0 * f * (1.0 - f * f)),
    "asinh": _Function("asinh", _asinh,
                       lambda x, f: 1.0 / np.sqrt(x * x + 1.0),
                       lambda x, f: -x / ((x * x + 1.0) * np.sqrt(x * x + 1.0)),
                       jet_bad=lambda x, cplx: (x * x + 1.0) == 0 if cplx else False),
    "exp": _Function("exp", np.exp, lambda x, f: f, lambda x, f: f),
    "log": _Function("log", np.log, lambda x, f: 1.0 / x, lambda x, f: -1.0 / (x * x),
                     bad=lambda x, cplx: (x == 0) if cplx else (x <= 0)),
    "sqrt": _Function("sqrt", np.sqrt, lambda x, f: 0.5 / f, lambda x, f: -0.25 / (f * x),
                      bad=_real_only(lambda x: x < 0),
                      jet_bad=lambda x, cplx: x == 0),
    "abs": _Function("abs", _abs, lambda x, f: np.sign(x), lambda x, f: 0.0 * x,
                     jet_bad=lambda x, cplx: x == 0, holomorphic=False),
}


def apply(name, x, strict=True):
    """Evaluate the elementary function ``name`` on a scalar, array or jet."""
    try:
        fn = FUNCTIONS[name]
    except KeyError:
        raise DomainError(f"unknown function {name!r}") from None
    return fn(x, strict)
