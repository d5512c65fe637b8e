"""Built-in surfaces.

Each entry bundles whatever forms are known for a surface: a height graph, a
parametrization in null coordinates ``(u, v)``, the same surface in Lorentz
isothermal coordinates ``(x, y)`` (related by ``u = x + y``, ``v = -x + y``)
and Weierstrass data.

Parametric surfaces live in the ``(-,+,+)`` convention: the first coordinate is
timelike.  Born-Infeld graphs ``(u, v, w(u, v))`` use the same convention, so
``u`` is the timelike base direction.
"""

import dataclasses
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import CatalogError
from .expr import parse
from .surfaces import (MAXIMAL, NON_SOLUTION, TIMELIKE, GraphSurface, ParametricSurface,
                       Rect, WeierstrassData)

__all__ = ["CatalogEntry", "get", "names", "register"]


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    graph: Optional[GraphSurface] = None
    parametric: Optional[ParametricSurface] = None
    isothermal: Optional[ParametricSurface] = None
    weierstrass: Optional[WeierstrassData] = None
    # relation(X, Y, Z) vanishes on the parametric surface
    relation: Optional[Callable] = None
    printed_relation: Optional[Callable] = None
    notes: str = ""

    @property
    def form(self):
        return "graph" if self.graph is not None else "parametric"

    @property
    def primary(self):
        return self.graph if self.graph is not None else self.parametric

    def with_params(self, **params):
        if not params:
            return self
        if self.graph is None:
            raise CatalogError(f"{self.name} has no parameters")
        unknown = set(params) - set(self.graph.params)
        if unknown:
            raise CatalogError(f"{self.name}: unknown parameter(s) {sorted(unknown)}")
        return dataclasses.replace(self, graph=self.graph.with_params(**params))


_REGISTRY = {}


def register(entry):
    _REGISTRY[entry.name] = entry
    return entry


def names():
    return sorted(_REGISTRY)


def get(name, **params):
    """Catalog entry ``name``; keyword arguments override graph parameters."""
    try:
        entry = _REGISTRY[name]
    except KeyError:
        raise CatalogError(f"unknown surface id {name!r}; known: {', '.join(names())}") from None
    return entry.with_params(**params)


def _graph(name, z, kind, variables=("x", "y"), params=None, admit=(), domain=None, description=""):
    params = dict(params or {})
    return GraphSurface(
        name, parse(z, variables, params=params), kind=kind,
        domain=domain or Rect(-2.0, 2.0, -2.0, 2.0), params=params,
        admit=tuple(parse(a, variables, params=params) for a in admit),
        description=description)


def _param(name, xyz, variables, domain=None):
    return ParametricSurface(name, *(parse(c, variables, params={}) for c in xyz),
                             domain=domain or Rect(-1.0, 1.0, -1.0, 1.0), signature="(-,+,+)")


def _wdata(name, q, f, r, g):
    return WeierstrassData(name, parse(q, ["u"], params={}), parse(f, ["u"], params={}),
                           parse(r, ["v"], params={}), parse(g, ["v"], params={}))


# Exclusions keep samples 1e-3 away from the cone point / light cone:
# r^2 > 1e-6 and |u^2 - v^2| > 1e-6 respectively.
register(CatalogEntry(
    "elliptic-catenoid",
    graph=_graph("elliptic-catenoid", "a*asinh(sqrt(x^2 + y^2)/a)", MAXIMAL,
                 params={"a": 1.0}, admit=["x^2 + y^2 - 1e-6"],
                 description="maximal graph with a conelike singularity at the origin"),
))

register(CatalogEntry(
    "catenoid-2nd-kind",
    graph=_graph("catenoid-2nd-kind", "-a*asinh(sqrt(u^2 - v^2)/a)", TIMELIKE,
                 variables=("u", "v"), params={"a": 1.0}, admit=["u^2 - v^2 - 1e-6"],
                 description="timelike minimal graph, defined where u^2 > v^2"),
))


def _spacelike_relation(X, Y, Z):
    return X / Y + np.tanh(Z / 2.0)


def _spacelike_printed(X, Y, Z):
    return X / Y - np.tanh(Z / 2.0)


def _timelike_relation(X, Y, Z):
    return Y / Z - np.tan(X / 2.0)


def _timelike_printed(X, Y, Z):
    return Y / Z + np.tan(X / 2.0)


register(CatalogEntry(
    "helicoid-spacelike-axis",
    parametric=_param("helicoid-spacelike-axis",
                      ["-(sinh(u) + sinh(v))", "-(cosh(u) + cosh(v))", "-(u + v)"], ("u", "v")),
    isothermal=_param("helicoid-spacelike-axis/isothermal",
                      ["-(2*cosh(x)*sinh(y))", "-(2*cosh(x)*cosh(y))", "-(2*y)"], ("x", "y")),
    weierstrass=_wdata("helicoid-spacelike-axis", "-exp(u)", "-exp(-u)", "exp(-v)", "-exp(v)"),
    relation=_spacelike_relation,
    printed_relation=_spacelike_printed,
    notes=("With the overall minus sign of the parametrization the surface satisfies "
           "X/Y = -tanh(Z/2); X/Y = tanh(Z/2) holds for the reflected copy (X, Y, -Z)."),
))

register(CatalogEntry(
    "helicoid-timelike-axis",
    parametric=_param("helicoid-timelike-axis",
                      ["-(u + v)", "-(sin(u) + sin(v))", "-(-cos(u) - cos(v))"], ("u", "v"),
                      domain=Rect(0.5, 2.5, 0.5, 2.5)),
    isothermal=_param("helicoid-timelike-axis/isothermal",
                      ["-(2*y)", "-(2*cos(x)*sin(y))", "-(-2*cos(x)*cos(y))"], ("x", "y")),
    weierstrass=_wdata("helicoid-timelike-axis", "sin(u)/(-1 + cos(u))", "-1 + cos(u)",
                       "sin(v)/(1 + cos(v))", "-(1 + cos(v))"),
    # Y = Z tan(X/2) as a Born-Infeld graph over the (timelike X, spacelike Z) plane
    graph=_graph("helicoid-timelike-axis/graph", "v*tan(u/2)", TIMELIKE, variables=("u", "v"),
                 admit=["cos(u/2)^2 - 1e-6"],
                 description="graph w(u, v) = v tan(u/2) of the timelike-axis helicoid"),
    relation=_timelike_relation,
    printed_relation=_timelike_printed,
    notes=("With the overall minus sign of the parametrization the surface satisfies "
           "Y/Z = tan(X/2); the Weierstrass data has poles at u in 2*pi*Z and v in pi + 2*pi*Z."),
))

register(CatalogEntry(
    "plane",
    graph=_graph("plane", "c", MAXIMAL, params={"c": 0.0},
                 description="horizontal plane; solves both graph equations"),
    notes="Also a Born-Infeld solution; its continuation is itself.",
))

register(CatalogEntry(
    "paraboloid",
    graph=_graph("paraboloid", "x^2 + y^2", NON_SOLUTION,
                 description="negative control: solves neither graph equation"),
))

REMARK = ("The substitution (x, y, z) -> (ix, iy, iz) also exchanges the two graph equations, "
          "but applied to sqrt(x^2 + y^2) + a sinh(z/a) = 0 it does not keep the Gauss map "
          "one-to-one; it is documented only and not implemented.")
