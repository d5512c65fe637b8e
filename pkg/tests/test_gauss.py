import math

import numpy as np
import pytest

from lmsurf import catalog, gauss, wick
from lmsurf.errors import DomainError, LmsError
from lmsurf.surfaces import Rect

GRAPHS = ["catenoid-2nd-kind", "elliptic-catenoid", "helicoid-timelike-axis", "paraboloid",
          "plane"]

# u-period of the timelike-axis helicoid graph v*tan(u/2)
PERIOD = 2 * math.pi


# regular points with normalization radicand at least this large; closer to the
# singular set the stored normalized vector carries rounding of order eps*|n|^2
MARGIN = 1e-2


def regular_points(s, n, seed, margin=MARGIN):
    rng = np.random.default_rng(seed)
    xs, ys = [], []
    while sum(map(len, xs)) < n:
        x, y = wick.random_admissible_points(s, 4 * n, rng)
        valid = gauss.gauss_images(s, x, y, tol=margin)[2]
        xs.append(x[valid])
        ys.append(y[valid])
    return np.concatenate(xs)[:n], np.concatenate(ys)[:n]


def quadric_of(s):
    return gauss.ONE_SHEETED if s.equation == "borninfeld" else gauss.TWO_SHEETED


@pytest.mark.parametrize("name", GRAPHS)
def test_quadric_membership(name):
    s = catalog.get(name).graph
    x, y = regular_points(s, 500, 0)
    _, img, _ = gauss.gauss_images(s, x, y)
    assert np.max(np.abs(gauss.quadric_residual(img, quadric_of(s)))) < 1e-10
    if quadric_of(s) == gauss.TWO_SHEETED:
        assert np.all(img[:, 2] >= 1.0)


@pytest.mark.parametrize("name", GRAPHS)
def test_quadric_rounding_scales_with_image_norm(name):
    s = catalog.get(name).graph
    x, y = regular_points(s, 2000, 1, margin=1e-9)
    _, img, _ = gauss.gauss_images(s, x, y)
    res = np.abs(gauss.quadric_residual(img, quadric_of(s)))
    assert np.all(res <= 1e-10 + 8 * np.finfo(float).eps * np.sum(img * img, axis=1))


def test_plane_image():
    g = gauss.gauss_map(catalog.get("plane").graph, (0.3, -0.4))
    np.testing.assert_array_equal(g.raw, [0.0, 0.0, 1.0])
    np.testing.assert_array_equal(g.normalized, [0.0, 0.0, 1.0])
    assert g.quadric == gauss.TWO_SHEETED and g.quadric_residual == 0.0


def test_elliptic_catenoid_image():
    g = gauss.gauss_map(catalog.get("elliptic-catenoid").graph, (1.0, 0.0))
    np.testing.assert_allclose(g.raw, [1 / math.sqrt(2), 0.0, 1.0], rtol=1e-15)
    np.testing.assert_allclose(g.normalized, [1.0, 0.0, math.sqrt(2)], rtol=1e-14, atol=1e-15)


def test_timelike_image_uses_one_sheeted_quadric():
    s = catalog.get("catenoid-2nd-kind").graph
    g = gauss.gauss_map(s, (2.0, 1.0))
    j = s.jet((2.0, 1.0))
    np.testing.assert_allclose(g.raw, [j.dx, -j.dy, 1.0])
    assert g.quadric == gauss.ONE_SHEETED and abs(g.quadric_residual) < 1e-12


def test_singular_limit_has_no_image():
    s = catalog.get("catenoid-2nd-kind").graph
    with pytest.raises(DomainError, match="singular"):
        gauss.gauss_map(s, (1.0, 1.0 - 1e-12))
    with pytest.raises(DomainError):
        gauss.gauss_map(catalog.get("paraboloid").graph, (1.0, 0.0))


def test_elliptic_catenoid_is_injective():
    rep = gauss.injectivity_scan(catalog.get("elliptic-catenoid").graph, (101, 101))
    assert rep.injective and rep.collisions == []
    assert rep.n_points == 10200


def test_periodic_helicoid_patch_collides():
    s = catalog.get("helicoid-timelike-axis").graph
    dom = Rect(-1.0, -1.0 + 60 * PERIOD / 50, -0.3, 0.3)
    rep = gauss.injectivity_scan(s.with_domain(dom), (61, 11), domain=dom)
    assert len(rep.collisions) >= 1
    c = rep.collisions[0]
    assert c.p2[0] - c.p1[0] == pytest.approx(PERIOD) and c.p1[1] == c.p2[1]
    assert c.image_distance < 1e-8


def test_plane_has_constant_gauss_map():
    rep = gauss.injectivity_scan(catalog.get("plane").graph, (21, 21))
    assert rep.constant_gauss_map and not rep.injective
    assert rep.to_dict()["constant_gauss_map"] is True


@pytest.mark.parametrize("name, dom, grid", [
    ("helicoid-timelike-axis", Rect(-1.0, -1.0 + PERIOD, -0.3, 0.3), (21, 11)),
    ("elliptic-catenoid", None, (21, 21)),
    ("catenoid-2nd-kind", None, (21, 21)),
])
def test_hash_equals_brute_force(name, dom, grid):
    s = catalog.get(name).graph
    if dom is not None:
        s = s.with_domain(dom)
    a = gauss.injectivity_scan(s, grid, method="hash")
    b = gauss.injectivity_scan(s, grid, method="brute")
    assert a.to_dict() == b.to_dict()
    if dom is not None:
        assert a.collisions


def test_find_collisions_coarse_eps_matches_brute():
    rng = np.random.default_rng(3)
    pts = rng.uniform(0, 1, (200, 2))
    imgs = np.round(rng.uniform(0, 1, (200, 3)), 1)
    a, _ = gauss.find_collisions(pts, imgs, 0.15, 1e-6, "hash")
    b, _ = gauss.find_collisions(pts, imgs, 0.15, 1e-6, "brute")
    assert a == b and len(a) > 0
    assert all(c.p1 <= c.p2 for c in a)
    assert [(c.p1, c.p2) for c in a] == sorted((c.p1, c.p2) for c in a)


def test_collision_limit_truncates():
    s = catalog.get("helicoid-timelike-axis").graph
    dom = Rect(-1.0, -1.0 + 60 * PERIOD / 50, -0.3, 0.3)
    rep = gauss.injectivity_scan(s.with_domain(dom), (61, 11), max_collisions=3)
    assert rep.truncated and len(rep.collisions) == 3


def test_transport_catenoid():
    max_s = catalog.get("elliptic-catenoid").graph
    rep = gauss.transport_check(max_s, wick.continue_graph(max_s), pairs=100)
    assert rep.passed and rep.n_violations == 0
    assert rep.n_coincident >= 100
    assert rep.max_ratio <= 1.0 + 1e-9


def test_transport_plane_is_degenerate():
    p = catalog.get("plane").graph
    rep = gauss.transport_check(p, wick.continue_graph(p), pairs=10, grid=(11, 11))
    assert rep.constant_gauss_map and not rep.passed


def test_transport_needs_continued_graph():
    with pytest.raises(LmsError):
        gauss.transport_check(catalog.get("elliptic-catenoid").graph,
                              catalog.get("catenoid-2nd-kind").graph)
