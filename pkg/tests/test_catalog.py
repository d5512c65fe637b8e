import math

import numpy as np
import pytest

from lmsurf import catalog
from lmsurf.errors import CatalogError, DefinitionFileError
from lmsurf.surfaces import (GraphSurface, ParametricSurface, Rect, WeierstrassData,
                             load_definition, parse_definition)


def test_registered_ids():
    assert catalog.names() == ["catenoid-2nd-kind", "elliptic-catenoid", "helicoid-spacelike-axis",
                               "helicoid-timelike-axis", "paraboloid", "plane"]


def test_unknown_id():
    with pytest.raises(CatalogError, match="unknown surface id"):
        catalog.get("torus")


def test_plane_is_zero():
    g = catalog.get("plane").graph
    assert g.value((0.3, -1.2)) == 0.0
    assert catalog.get("plane", c=2.5).graph.value((0.0, 0.0)) == 2.5


def test_spacelike_helicoid_at_origin():
    P = catalog.get("helicoid-spacelike-axis").parametric
    np.testing.assert_array_equal(P.point((0.0, 0.0)), [-0.0, -2.0, -0.0])


def test_catenoid_second_kind_value():
    g = catalog.get("catenoid-2nd-kind", a=1.0).graph
    assert g.value((2.0, 0.0)) == pytest.approx(-math.asinh(2.0), rel=1e-15)
    assert g.value((2.0, 0.0)) == pytest.approx(-1.4436354751788103)


def test_params_override():
    g = catalog.get("elliptic-catenoid", a=2.0).graph
    assert g.value((3.0, 4.0)) == pytest.approx(2 * math.asinh(2.5))
    with pytest.raises(CatalogError):
        catalog.get("elliptic-catenoid", b=1.0)


def test_exclusion_sets():
    e = catalog.get("elliptic-catenoid").graph
    assert not e.admissible(np.array([0.0]), np.array([0.0]))[0]
    assert e.admissible(np.array([0.01]), np.array([0.0]))[0]
    c = catalog.get("catenoid-2nd-kind").graph
    ok = c.admissible(np.array([1.0, 0.5, 1.0]), np.array([0.5, 1.0, 1.0]))
    assert ok.tolist() == [True, False, False]


@pytest.mark.parametrize("name", ["helicoid-spacelike-axis", "helicoid-timelike-axis"])
def test_null_and_isothermal_forms_agree(name):
    e = catalog.get(name)
    rng = np.random.default_rng(3)
    x = rng.uniform(-0.5, 0.5, 100)
    y = rng.uniform(-0.5, 0.5, 100)
    iso = e.isothermal.point((x, y))
    null = e.parametric.point((x + y, -x + y))
    np.testing.assert_allclose(null, iso, rtol=0, atol=1e-12)


def test_spacelike_graph_relation_on_isothermal_form():
    e = catalog.get("helicoid-spacelike-axis")
    rng = np.random.default_rng(5)
    x = rng.uniform(-1, 1, 100)
    y = rng.uniform(-1, 1, 100)
    X, Y, Z = e.isothermal.point((x, y))
    assert np.max(np.abs(e.relation(X, Y, Z))) < 1e-12
    # the printed relation holds only for the reflected copy
    assert np.max(np.abs(e.printed_relation(X, Y, -Z))) < 1e-12
    assert np.max(np.abs(e.printed_relation(X, Y, Z))) > 1e-3


def test_timelike_graph_relation_on_isothermal_form():
    e = catalog.get("helicoid-timelike-axis")
    rng = np.random.default_rng(6)
    x = rng.uniform(-0.5, 0.5, 100)
    y = rng.uniform(-0.5, 0.5, 100)
    X, Y, Z = e.isothermal.point((x, y))
    assert np.max(np.abs(e.relation(X, Y, Z))) < 1e-12
    assert np.max(np.abs(e.printed_relation(-X, Y, Z))) < 1e-12


def test_timelike_graph_matches_parametric_relation():
    e = catalog.get("helicoid-timelike-axis")
    rng = np.random.default_rng(8)
    u = rng.uniform(-2, 2, 50)
    v = rng.uniform(-2, 2, 50)
    w = e.graph.value((u, v))
    # graph point (timelike u, w, spacelike v) as (X, Y, Z)
    assert np.max(np.abs(e.relation(u, w, v))) < 1e-12


def test_weierstrass_data_is_univariate():
    w = catalog.get("helicoid-timelike-axis").weierstrass
    assert all(getattr(w, k).arity == 1 for k in "qfrg")


def test_definition_file_graph(tmp_path):
    path = tmp_path / "cone.txt"
    path.write_text("# a graph\nname = halfcone\nkind = maximal\nz = sqrt(x^2 + y^2)/2\n"
                    "domain = -1:1:-1:1\nadmit = x^2 + y^2 - 1e-6\n")
    s = load_definition(path)
    assert isinstance(s, GraphSurface) and s.name == "halfcone"
    assert s.value((0.6, 0.8)) == pytest.approx(0.5)
    assert s.domain == Rect(-1, 1, -1, 1)


def test_definition_parametric_and_weierstrass():
    P = parse_definition("kind = parametric\nvars = u,v\nX = u\nY = v\nZ = 0\n")
    assert isinstance(P, ParametricSurface)
    W = parse_definition("q = 0\nf = 1\nr = 0\ng = 1\nu0 = 0.5\n")
    assert isinstance(W, WeierstrassData) and W.u0 == 0.5


def test_definition_params_and_pi_domain():
    s = parse_definition("z = c*x\nparams = c=2\ndomain = -pi:pi:0:1\n")
    assert s.params == {"c": 2.0}
    assert s.domain.x1 == pytest.approx(math.pi)


@pytest.mark.parametrize("text", [
    "z = x\nz = y\n",
    "colour = red\n",
    "this is not a pair\n",
    "X = u\nvars = u,v\n",
    "z = sin(\n",
])
def test_bad_definition_files(text):
    with pytest.raises(DefinitionFileError):
        parse_definition(text)
