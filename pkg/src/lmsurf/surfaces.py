"""Surface representations: height graphs, parametric patches, Weierstrass data.

Graphs share the small :class:`GraphLike` protocol (``jet``, ``admissible``,
``kind``) so the PDE, Gauss-map and meshing code works the same way for a
catalog graph and for a complex continuation of one (see :mod:`lmsurf.wick`).
"""

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Optional, Tuple

import numpy as np

from . import jet as jetlib
from .errors import DefinitionFileError, LmsError, ParseError
from .expr import CompiledExpr, evaluate, parse
from .jet import Jet2

MAXIMAL = "maximal"
TIMELIKE = "timelike-minimal"
NON_SOLUTION = "non-solution"
GRAPH_KINDS = (MAXIMAL, TIMELIKE, NON_SOLUTION)

SIGNATURES = {
    "(+,+,-)": (1.0, 1.0, -1.0),
    "(-,+,+)": (-1.0, 1.0, 1.0),
    "(+,+,+)": (1.0, 1.0, 1.0),
}


def signature_diag(tag):
    try:
        return np.array(SIGNATURES[tag])
    except KeyError:
        raise LmsError(f"unknown metric signature {tag!r}; known: {', '.join(SIGNATURES)}") from None


@dataclass(frozen=True)
class Rect:
    """Axis-aligned parameter rectangle ``[x0, x1] x [y0, y1]``.

    ``closed`` flags the left, right, bottom and top edges.
    """

    x0: float
    x1: float
    y0: float
    y1: float
    closed: Tuple[bool, bool, bool, bool] = (True, True, True, True)

    def __post_init__(self):
        if not (self.x0 < self.x1 and self.y0 < self.y1):
            raise LmsError(f"empty rectangle {self}")

    @classmethod
    def parse(cls, text):
        """``"x0:x1:y0:y1"`` (numbers may be expressions in ``pi``)."""
        parts = text.split(":")
        if len(parts) != 4:
            raise LmsError(f"domain must look like x0:x1:y0:y1, got {text!r}")
        vals = []
        for part in parts:
            try:
                vals.append(float(evaluate(parse(part.strip(), ["_"], params=()), (0.0,))))
            except ParseError as err:
                raise LmsError(f"bad domain bound {part!r}: {err}") from None
        return cls(*vals)

    def __str__(self):
        return f"{self.x0!r}:{self.x1!r}:{self.y0!r}:{self.y1!r}"

    def contains(self, x, y):
        left, right, bottom, top = self.closed
        ok = (x >= self.x0) if left else (x > self.x0)
        ok = ok & ((x <= self.x1) if right else (x < self.x1))
        ok = ok & ((y >= self.y0) if bottom else (y > self.y0))
        return ok & ((y <= self.y1) if top else (y < self.y1))

    def axes(self, nx, ny):
        return np.linspace(self.x0, self.x1, nx), np.linspace(self.y0, self.y1, ny)

    @property
    def spacing_bound(self):
        return max(self.x1 - self.x0, self.y1 - self.y0)


def _broadcast(v, shape):
    return np.broadcast_to(np.asarray(v), shape) if shape else v


def broadcast_jet(j, shape):
    """Make every component of ``j`` an array of ``shape`` (no-op for scalars)."""
    if not shape:
        return j
    return Jet2(*(np.array(_broadcast(c, shape)) for c in j.components()))


class GraphLike:
    """Common surface protocol for height graphs ``(p0, p1, h(p0, p1))``.

    Implementations provide ``name``, ``kind``, ``variables`` and ``domain``.
    """

    @property
    def equation(self):
        """Which graph equation applies: ``"borninfeld"`` or ``"maximal"``."""
        return "borninfeld" if self.kind == TIMELIKE else "maximal"

    def complex_jet(self, jx, jy, strict=True):
        """Evaluate the height on arbitrary (possibly complex) input jets."""
        raise NotImplementedError

    def admit_values(self, cx, cy):
        """Values of the admissibility expressions (admissible where all > 0)."""
        raise NotImplementedError

    def jet(self, p, strict=True):
        """Real second-order jet of the height at ``p`` (scalars or arrays)."""
        raise NotImplementedError

    def value(self, p, strict=True):
        return self.jet(p, strict).val

    def admissible(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        ok = self.domain.contains(x, y)
        with np.errstate(all="ignore"):
            for a in self.admit_values(x, y):
                ok = ok & (np.real(a) > 0)
        return ok

    def with_domain(self, domain):
        raise NotImplementedError


@dataclass(frozen=True)
class GraphSurface(GraphLike):
    """Height expression over a planar rectangle.

    ``admit`` holds expressions that must be strictly positive at admissible
    points; they carve exclusion sets (cone points, light-cone strips, poles)
    out of ``domain``.
    """

    name: str
    z: CompiledExpr
    kind: str = MAXIMAL
    domain: Rect = Rect(-2.0, 2.0, -2.0, 2.0)
    params: Dict[str, float] = field(default_factory=dict)
    admit: Tuple[CompiledExpr, ...] = ()
    description: str = ""

    def __post_init__(self):
        if self.kind not in GRAPH_KINDS:
            raise LmsError(f"unknown graph kind {self.kind!r}")
        if self.z.arity != 2:
            raise LmsError("graph heights need two variables")
        missing = self.z.params - set(self.params)
        if missing:
            raise LmsError(f"{self.name}: unbound parameter(s) {sorted(missing)}")

    @property
    def variables(self):
        return self.z.variables

    def __hash__(self):
        return hash((self.name, self.z, self.kind, self.domain,
                     tuple(sorted(self.params.items())), self.admit))

    def with_params(self, **params):
        return dataclasses.replace(self, params={**self.params, **params})

    def with_domain(self, domain):
        return dataclasses.replace(self, domain=domain)

    def complex_jet(self, jx, jy, strict=True):
        return evaluate(self.z, (jx, jy), self.params, strict)

    def admit_values(self, cx, cy):
        return [evaluate(a, (cx, cy), self.params, strict=False) for a in self.admit]

    def jet(self, p, strict=True):
        x, y = (np.asarray(c, dtype=float) if np.ndim(c) else float(c) for c in p)
        shape = np.shape(x)
        jx, jy = jetlib.seed((x, y))
        return broadcast_jet(self._as_jet(self.complex_jet(jx, jy, strict)), shape)

    def evaluate(self, x, y, strict=True):
        return evaluate(self.z, (x, y), self.params, strict)

    @staticmethod
    def _as_jet(v):
        return v if isinstance(v, Jet2) else Jet2(v)


@dataclass(frozen=True)
class ParametricSurface:
    """Three coordinate expressions over a parameter rectangle.

    ``signature`` tags the ambient metric, e.g. ``"(-,+,+)"`` when the first
    coordinate is timelike.
    """

    name: str
    X: CompiledExpr
    Y: CompiledExpr
    Z: CompiledExpr
    domain: Rect = Rect(-1.0, 1.0, -1.0, 1.0)
    signature: str = "(-,+,+)"
    params: Dict[str, float] = field(default_factory=dict)
    description: str = ""

    def __post_init__(self):
        if not (self.X.variables == self.Y.variables == self.Z.variables):
            raise LmsError(f"{self.name}: coordinate expressions use different variables")
        signature_diag(self.signature)

    @property
    def variables(self):
        return self.X.variables

    def __hash__(self):
        return hash((self.name, self.X, self.Y, self.Z, self.domain, self.signature))

    def with_domain(self, domain):
        return dataclasses.replace(self, domain=domain)

    def point(self, p, strict=True):
        """Coordinates at ``p``; shape ``(3,)`` or ``(3, *shape)`` for arrays."""
        shape = np.shape(p[0])
        comps = [evaluate(e, tuple(p), self.params, strict) for e in (self.X, self.Y, self.Z)]
        return np.array([_broadcast(np.real_if_close(c), shape) for c in comps], dtype=float)

    def jets(self, p, strict=True):
        shape = np.shape(p[0])
        seeds = jetlib.seed(tuple(p))
        out = []
        for e in (self.X, self.Y, self.Z):
            v = evaluate(e, seeds, self.params, strict)
            out.append(broadcast_jet(v if isinstance(v, Jet2) else Jet2(v), shape))
        return out


@dataclass(frozen=True)
class WeierstrassData:
    """Data ``(q, f)`` in ``u`` and ``(r, g)`` in ``v`` for the timelike representation."""

    name: str
    q: CompiledExpr
    f: CompiledExpr
    r: CompiledExpr
    g: CompiledExpr
    u0: Optional[float] = None
    v0: Optional[float] = None
    signature: str = "(-,+,+)"
    params: Dict[str, float] = field(default_factory=dict)
    description: str = ""

    def __post_init__(self):
        for key in ("q", "f", "r", "g"):
            if getattr(self, key).arity != 1:
                raise LmsError(f"{self.name}: Weierstrass component {key} must be univariate")

    def __hash__(self):
        return hash((self.name, self.q, self.f, self.r, self.g, self.u0, self.v0))


# -- definition files ----------------------------------------------------------

_KNOWN_KEYS = {"name", "kind", "vars", "z", "X", "Y", "Z", "q", "f", "r", "g",
               "domain", "params", "convention", "admit", "u0", "v0", "description"}


def _parse_params(text):
    out = {}
    for item in filter(None, (s.strip() for s in text.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise DefinitionFileError(f"params entry {item!r} is not name=value")
        out[key.strip()] = float(evaluate(parse(val.strip(), ["_"], params=()), (0.0,)))
    return out


def parse_definition(text, source="<string>"):
    """Build a surface from ``key = value`` definition text.

    Recognised keys: ``name, kind, vars, z | X,Y,Z | q,f,r,g, domain, params,
    convention`` plus the optional ``admit`` (``;``-separated expressions that
    must be positive), ``u0``, ``v0`` and ``description``.  ``#`` starts a
    comment.
    """
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip()
        if not sep or not key:
            raise DefinitionFileError(f"{source}:{lineno}: expected key = value")
        if key not in _KNOWN_KEYS:
            raise DefinitionFileError(f"{source}:{lineno}: unknown key {key!r}")
        if key in entries:
            raise DefinitionFileError(f"{source}:{lineno}: duplicate key {key!r}")
        entries[key] = value.strip()
    try:
        return _build(entries, source)
    except (ParseError, LmsError, ValueError) as err:
        if isinstance(err, DefinitionFileError):
            raise
        raise DefinitionFileError(f"{source}: {err}") from err


def _build(entries, source):
    name = entries.get("name", Path(source).stem)
    params = _parse_params(entries.get("params", ""))
    description = entries.get("description", "")
    kind = entries.get("kind")
    if "q" in entries or kind == "weierstrass":
        missing = [k for k in "qfrg" if k not in entries]
        if missing:
            raise DefinitionFileError(f"{source}: Weierstrass data needs {missing}")
        return WeierstrassData(
            name,
            *(parse(entries[k], [var], params=params) for k, var in
              (("q", "u"), ("f", "u"), ("r", "v"), ("g", "v"))),
            u0=float(entries["u0"]) if "u0" in entries else None,
            v0=float(entries["v0"]) if "v0" in entries else None,
            signature=entries.get("convention", "(-,+,+)"),
            params=params, description=description)
    variables = [v.strip() for v in entries.get("vars", "x,y").split(",")]
    domain = Rect.parse(entries["domain"]) if "domain" in entries else None
    if "X" in entries or kind == "parametric":
        missing = [k for k in "XYZ" if k not in entries]
        if missing:
            raise DefinitionFileError(f"{source}: parametric surface needs {missing}")
        comps = [parse(entries[k], variables, params=params) for k in "XYZ"]
        return ParametricSurface(name, *comps, domain=domain or Rect(-1.0, 1.0, -1.0, 1.0),
                                 signature=entries.get("convention", "(-,+,+)"),
                                 params=params, description=description)
    if "z" not in entries:
        raise DefinitionFileError(f"{source}: no z, X/Y/Z or q/f/r/g given")
    admit = tuple(parse(a, variables, params=params)
                  for a in entries.get("admit", "").split(";") if a.strip())
    return GraphSurface(name, parse(entries["z"], variables, params=params),
                        kind=kind or MAXIMAL, domain=domain or Rect(-2.0, 2.0, -2.0, 2.0),
                        params=params, admit=admit, description=description)


def load_definition(path):
    path = Path(path)
    return parse_definition(path.read_text(encoding="utf-8"), str(path))
