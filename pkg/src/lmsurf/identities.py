"""Infinite-product identities attached to the two Lorentz helicoids.

With ``a = Re z`` the quotients

    spacelike:  (sinh z + sinh conj(z)) / (cosh z + cosh conj(z)) = tanh(a)
    timelike:   (sin z + sin conj(z)) / (cos z + cos conj(z))     = tan(a)

are compared against the truncated products

    spacelike:  i * prod_k ((k-1)pi - i a)/((k-1/2)pi - i a) * (k pi + i a)/((k-1/2)pi + i a)
    timelike:       prod_k ((k-1)pi - a)/((k-1/2)pi - a)     * (k pi + a)/((k-1/2)pi + a)

The sign relating the two sides is measured, not assumed.
"""

import cmath
import functools
import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from .errors import DomainError, LmsError

SPACELIKE = "spacelike"
TIMELIKE = "timelike"
IDS = (SPACELIKE, TIMELIKE)
ORACLE_DPS = 60
DEFAULT_LADDER = (100, 1000, 10000, 100000)


def _check_id(id_):
    aliases = {"spacelike-axis": SPACELIKE, "timelike-axis": TIMELIKE}
    id_ = aliases.get(id_, id_)
    if id_ not in IDS:
        raise LmsError(f"unknown identity {id_!r}; known: {', '.join(IDS)}")
    return id_


def lhs(id_, z, tol=1e-12):
    """Left-hand quotient, cross-checked against ``tanh(Re z)`` / ``tan(Re z)``."""
    id_ = _check_id(id_)
    z = complex(z)
    zc = z.conjugate()
    if id_ == SPACELIKE:
        num, den = cmath.sinh(z) + cmath.sinh(zc), cmath.cosh(z) + cmath.cosh(zc)
        closed = math.tanh(z.real)
    else:
        num, den = cmath.sin(z) + cmath.sin(zc), cmath.cos(z) + cmath.cos(zc)
        closed = math.tan(z.real)
    if abs(den) <= tol:
        raise DomainError(f"{id_} quotient has a vanishing denominator at z = {z}")
    q = num / den
    if not (abs(q - closed) <= tol * max(1.0, abs(closed))):
        raise LmsError(f"quotient {q} disagrees with its closed form {closed} at z = {z}")
    return q


def _w(id_, z):
    a = complex(z).real
    return (1j * a, 1j) if id_ == SPACELIKE else (complex(a), 1.0 + 0j)


def factors(id_, z, N):
    """Per-``k`` factor pairs (already multiplied), ``k = 1..N``."""
    id_ = _check_id(id_)
    if N < 1:
        raise LmsError("N must be at least 1")
    w, _ = _w(id_, z)
    k = np.arange(1, N + 1, dtype=float)
    d1 = (k - 0.5) * np.pi - w
    d2 = (k - 0.5) * np.pi + w
    if np.any(d1 == 0) or np.any(d2 == 0):
        kk = int(np.argmax((d1 == 0) | (d2 == 0))) + 1
        raise DomainError(f"{id_} product: factor denominator vanishes at k = {kk} for z = {z}")
    return ((k - 1.0) * np.pi - w) / d1 * ((k * np.pi + w) / d2)


def partial_products(id_, z, ns):
    """Partial products at every ``N`` in ``ns`` (one sequential pass)."""
    id_ = _check_id(id_)
    ns = sorted(int(n) for n in ns)
    _, pre = _w(id_, z)
    cum = np.cumprod(factors(id_, z, ns[-1]))
    return {n: complex(pre * cum[n - 1]) for n in ns}


def partial_product(id_, z, N):
    return partial_products(id_, z, [N])[int(N)]


def oracle_partial_products(id_, z, ns, dps=ORACLE_DPS):
    """High-precision partial products (``dps`` decimal digits, ``dps >= 50``).

    Depends on ``z`` only through ``Re z``; results are cached.
    """
    id_ = _check_id(id_)
    if dps < 50:
        raise LmsError("the oracle needs at least 50 digits")
    return dict(_oracle(id_, complex(z).real, tuple(sorted(int(n) for n in ns)), dps))


@functools.lru_cache(maxsize=64)
def _oracle(id_, a, ns, dps):
    out = []
    with mpmath.workdps(dps):
        a = mpmath.mpf(a)
        w = mpmath.mpc(0, a) if id_ == SPACELIKE else mpmath.mpc(a, 0)
        w2 = w * w
        pi = mpmath.pi
        half = mpmath.mpf(1) / 2
        p = mpmath.mpc(0, 1) if id_ == SPACELIKE else mpmath.mpc(1, 0)
        targets = iter(ns)
        nxt = next(targets)
        for k in range(1, ns[-1] + 1):
            # ((k-1)pi - w)/((k-1/2)pi - w) * (k pi + w)/((k-1/2)pi + w) over one denominator
            m = (k - half) * pi
            den = m * m - w2
            if den == 0:
                raise DomainError(f"{id_} product: factor denominator vanishes at k = {k}")
            p *= ((k - 1) * pi - w) * (k * pi + w) / den
            if k == nxt:
                out.append((k, p))
                nxt = next(targets, None)
    return tuple(out)


def oracle_lhs(id_, z, dps=ORACLE_DPS):
    id_ = _check_id(id_)
    with mpmath.workdps(dps):
        zz = mpmath.mpc(complex(z).real, complex(z).imag)
        zc = mpmath.conj(zz)
        if id_ == SPACELIKE:
            return (mpmath.sinh(zz) + mpmath.sinh(zc)) / (mpmath.cosh(zz) + mpmath.cosh(zc))
        return (mpmath.sin(zz) + mpmath.sin(zc)) / (mpmath.cos(zz) + mpmath.cos(zc))


def fit_order(ns, errors):
    """Least-squares convergence order ``p`` with ``error ~ C N^-p``; ``None`` if undefined."""
    ns = np.asarray(ns, dtype=float)
    errors = np.asarray(errors, dtype=float)
    keep = errors > 0
    if keep.sum() < 2:
        return None
    slope = np.polyfit(np.log(ns[keep]), np.log(errors[keep]), 1)[0]
    return float(-slope)


@dataclass
class IdentityReport:
    id: str
    z: complex
    lhs: complex
    partial_products: list  # (N, value)
    sign_constant: int
    abs_errors: list  # (N, error) using the oracle products
    abs_error_at_N: float
    estimated_order: object
    oracle_max_rel_diff: float
    errors_monotone: bool
    printed_sign: int = 1
    notes: list = field(default_factory=list)

    @property
    def discrepancy(self):
        return self.sign_constant != self.printed_sign

    def to_dict(self):
        c = (lambda v: [float(v.real), float(v.imag)])
        return {
            "id": self.id,
            "z": c(self.z),
            "lhs": c(self.lhs),
            "partial_products": [[n, c(v)] for n, v in self.partial_products],
            "sign_constant": self.sign_constant,
            "printed_sign": self.printed_sign,
            "discrepancy": self.discrepancy,
            "abs_errors": [[n, e] for n, e in self.abs_errors],
            "abs_error_at_N": self.abs_error_at_N,
            "estimated_order": self.estimated_order,
            "oracle_max_rel_diff": self.oracle_max_rel_diff,
            "errors_monotone": self.errors_monotone,
            "notes": list(self.notes),
        }


def certify(id_, z, ladder=DEFAULT_LADDER, dps=ORACLE_DPS):
    """Sign, errors and convergence order of one identity on an ``N`` ladder."""
    id_ = _check_id(id_)
    z = complex(z)
    ladder = sorted(int(n) for n in ladder)
    left = lhs(id_, z)
    prods = partial_products(id_, z, ladder)
    oracle = oracle_partial_products(id_, z, ladder, dps)
    with mpmath.workdps(dps):
        L = oracle_lhs(id_, z, dps)
        top = oracle[ladder[-1]]
        sign = 1 if abs(L - top) <= abs(L + top) else -1
        errs = [(n, float(abs(L - sign * oracle[n]))) for n in ladder]
        rel = 0.0
        for n in ladder:
            o = oracle[n]
            scale = abs(o) if o != 0 else 1
            rel = max(rel, float(abs(mpmath.mpc(prods[n]) - o) / scale))
    tail = [e for n, e in errs if n >= 100]
    monotone = all(b < a for a, b in zip(tail, tail[1:])) or all(e == 0 for e in tail)
    half = len(ladder) // 2
    order = fit_order([n for n, _ in errs[half:]], [e for _, e in errs[half:]])
    notes = []
    if sign != 1:
        notes.append("the product equals minus the quotient; the printed identity has no such sign")
    return IdentityReport(
        id=id_, z=z, lhs=left, partial_products=[(n, prods[n]) for n in ladder],
        sign_constant=sign, abs_errors=errs, abs_error_at_N=errs[-1][1],
        estimated_order=order, oracle_max_rel_diff=rel, errors_monotone=monotone, notes=notes)
