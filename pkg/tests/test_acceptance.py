"""Acceptance criteria 1-7, one test each; every test prints a PASS/FAIL line.

Run alone with ``pytest -v tests/test_acceptance.py`` or ``python3 tests/test_acceptance.py``.
"""

import math
import sys
from pathlib import Path

import numpy as np
import pytest

from lmsurf import catalog, cli, gauss, identities, pde, wick
from lmsurf import weierstrass as ws
from lmsurf.expr import evaluate, parse
from lmsurf.surfaces import Rect, parse_definition

sys.path.insert(0, str(Path(__file__).parent))

import test_expr  # noqa: E402
import test_jet  # noqa: E402


def announce(number, title, checks, capsys=None):
    """Print one line for the criterion and fail with the list of failed checks."""
    failed = [name for name, ok in checks if not ok]
    line = f"{'PASS' if not failed else 'FAIL'} criterion {number} ({title})"
    line += ": " + "; ".join(failed or [name for name, _ in checks])
    if capsys is not None:
        with capsys.disabled():
            print("\n" + line)
    else:
        print(line)
    assert not failed, line


def criterion_1():
    checks = []
    for a in (0.5, 1.0, 2.0):
        m = pde.residual_grid(catalog.get("elliptic-catenoid", a=a).graph, (201, 201))
        t = pde.residual_grid(catalog.get("catenoid-2nd-kind", a=a).graph, (201, 201))
        checks.append((f"maximal a={a} max {m.max_abs:.2e}", m.max_abs < 1e-9))
        checks.append((f"born-infeld a={a} max {t.max_abs:.2e}", t.max_abs < 1e-9))
    p = pde.residual_grid(catalog.get("paraboloid").graph, (201, 201))
    checks.append((f"paraboloid max {p.max_abs:.3g}", p.max_abs >= 4))
    return checks


def criterion_2():
    e = catalog.get("elliptic-catenoid").graph
    c2 = catalog.get("catenoid-2nd-kind").graph
    w = wick.continue_graph(e)
    u, v = wick.random_admissible_points(c2, 200, np.random.default_rng(0))
    diff = np.max(np.abs(w.jet((u, v)).val + c2.jet((u, v)).val))
    res = np.max(np.abs(pde.residual_borninfeld(w, (u, v))))
    back = wick.continue_graph(w, wick.TO_MAXIMAL)
    x, y = wick.random_admissible_points(e, 200, np.random.default_rng(1))
    rt = np.max(np.abs(back.jet((x, y)).val - e.value((x, -y))))
    return [(f"continued vs -(2nd kind) {diff:.2e}", diff < 1e-12),
            (f"born-infeld residual {res:.2e}", res < 1e-9),
            (f"round trip {rt:.2e}", rt < 1e-12)]


def criterion_3():
    rep = wick.correspondence_check(catalog.get("elliptic-catenoid").graph,
                                    catalog.get("catenoid-2nd-kind").graph)
    src = [abs(r["source"]) for r in rep.approach]
    tgt = [abs(r["target"]) for r in rep.approach]
    loc = pde.singular_locus(parse_definition("z = (x^2 + y^2)/2"), (201, 201))
    r = np.hypot(loc[0].points[:, 0], loc[0].points[:, 1]) if len(loc) else np.array([np.inf])
    dev = float(np.max(np.abs(r - 1.0)))
    return [(f"approach monotone (source {src[-1]:.1e}, target {tgt[-1]:.1e})",
             rep.approach_monotone and src[-1] < 1e-7 and tgt[-1] < 1e-7),
            (f"unit circle deviation {dev:.2e} vs spacing {loc.spacing:.2e}",
             len(loc) == 1 and dev <= loc.spacing)]


def criterion_4():
    checks = []
    for name in ("catenoid-2nd-kind", "elliptic-catenoid", "helicoid-timelike-axis",
                 "paraboloid", "plane"):
        s = catalog.get(name).graph
        rng = np.random.default_rng(0)
        xs, ys = [], []
        while sum(map(len, xs)) < 500:
            x, y = wick.random_admissible_points(s, 2000, rng)
            # regular with margin: radicand >= 1e-2 (rounding grows like eps/radicand)
            ok = gauss.gauss_images(s, x, y, tol=1e-2)[2]
            xs.append(x[ok])
            ys.append(y[ok])
        x, y = np.concatenate(xs)[:500], np.concatenate(ys)[:500]
        img = gauss.gauss_images(s, x, y)[1]
        q = gauss.ONE_SHEETED if s.equation == "borninfeld" else gauss.TWO_SHEETED
        worst = float(np.max(np.abs(gauss.quadric_residual(img, q))))
        checks.append((f"quadric {name} {worst:.1e}", worst < 1e-10))
    scan = gauss.injectivity_scan(catalog.get("elliptic-catenoid").graph, (101, 101))
    checks.append((f"elliptic-catenoid collisions {len(scan.collisions)}", scan.injective))
    period = 2 * math.pi
    dom = Rect(-1.0, -1.0 + 60 * period / 50, -0.3, 0.3)
    h = catalog.get("helicoid-timelike-axis").graph.with_domain(dom)
    hel = gauss.injectivity_scan(h, (61, 11))
    checks.append((f"2pi helicoid collisions {len(hel.collisions)}", len(hel.collisions) >= 1))
    for name, d, grid in (("helicoid-timelike-axis", Rect(-1.0, -1.0 + period, -0.3, 0.3),
                           (21, 11)),
                          ("elliptic-catenoid", None, (21, 21)),
                          ("catenoid-2nd-kind", None, (21, 21))):
        s = catalog.get(name).graph
        s = s.with_domain(d) if d else s
        a = gauss.injectivity_scan(s, grid, method="hash").collisions
        b = gauss.injectivity_scan(s, grid, method="brute").collisions
        checks.append((f"hash == brute {name} ({len(a)} collisions)", a == b))
    return checks


def criterion_5():
    checks = []
    for name in ("helicoid-spacelike-axis", "helicoid-timelike-axis"):
        e = catalog.get(name)
        rep = ws.certify(e.weierstrass, e.parametric, quad_tol=1e-10)
        if name == "helicoid-spacelike-axis":
            checks.append((f"{name} congruence residual {rep.residual:.1e}",
                           rep.residual < 1e-8))
        checks += [(f"{name} null defect {rep.null_defect:.1e}", rep.null_defect < 1e-9),
                   (f"{name} X_uv {rep.mixed_max_abs:.1e}", rep.mixed_max_abs < 1e-8),
                   (f"{name} mean curvature {rep.curvature_max_abs:.1e}",
                    rep.curvature_max_abs < 1e-6)]
    return checks


def criterion_6():
    checks = []
    rng = np.random.default_rng(6)
    for id_ in identities.IDS:
        for a in (0.5, 1.0, 2.0):
            for b in (0.0, float(rng.uniform(-3, 3))):
                rep = identities.certify(id_, complex(a, b))
                err = dict(rep.abs_errors)[10000]
                order = rep.estimated_order
                checks.append((f"{id_} z={a}{b:+.3f}i err {err:.2e} order {order:.4f}",
                               err < 5e-4 and abs(order - 1.0) <= 0.15))
        rep = identities.certify(id_, 1.0)
        sign = rep.sign_constant
        if id_ == identities.SPACELIKE:
            checks.append((f"spacelike sign {sign:+d}", sign == 1))
        else:
            # recorded; -1 is reported as a discrepancy with the printed identity
            checks.append((f"timelike sign {sign:+d} recorded",
                           rep.discrepancy == (sign != 1)))
    return checks


def _artifacts(tmp_path, threads, monkeypatch, tag):
    monkeypatch.setenv("LMS_THREADS", str(threads))
    half = tmp_path / "half.txt"
    half.write_text("z = (x^2 + y^2)/2\n")
    runs = [("residual", ["--surface", "catenoid-2nd-kind"], "json"),
            ("locus", ["--surface", str(half)], "csv"),
            ("mesh", ["--surface", "elliptic-catenoid", "--grid", "101x101"], "obj")]
    out = []
    for sub, args, ext in runs:
        path = tmp_path / f"{sub}-{tag}.{ext}"
        rep = tmp_path / f"{sub}-{tag}.report.json"
        cli.main([sub] + args + ["--out", str(path), "--report", str(rep)])
        out.append(path.read_bytes())
        out.append(rep.read_bytes().replace(tag.encode(), b"TAG"))
    return out


def criterion_7(tmp_path, monkeypatch):
    checks = []
    golden = 0
    for src, variables, point, params, expected in test_expr.GOLDEN:
        got = evaluate(parse(src, variables), point, params)
        golden += abs(got - expected) <= 1e-14 * max(1.0, abs(expected)) + 1e-15
    errors = 0
    for src, variables, fragment in test_expr.ERRORS:
        try:
            parse(src, variables)
        except Exception as exc:  # noqa: BLE001
            errors += fragment in str(exc)
    total = len(test_expr.GOLDEN) + len(test_expr.ERRORS)
    checks.append((f"grammar golden {golden + errors}/{total} ({errors} error cases)",
                   golden == len(test_expr.GOLDEN) and errors == len(test_expr.ERRORS)
                   and total >= 30 and errors >= 5))
    bad = 0
    n = 0
    for label, e, params, xs, ys in test_jet.CASES_2D:
        def f(x, y, e=e, params=params):
            return float(evaluate(e, (x, y), params))
        for x, y in zip(xs, ys):
            j = evaluate(e, test_jet.jet.seed((float(x), float(y))), params)
            j = j if isinstance(j, test_jet.Jet2) else test_jet.Jet2(j)
            got = (j.dx, j.dy, j.hxx, j.hxy, j.hyy)
            want = test_jet.fd_partials(f, float(x), float(y))
            bad += not all(test_jet.close(g, w) for g, w in zip(got, want))
            n += 1
    checks.append((f"jet vs finite differences {n - bad}/{n}", bad == 0))
    a = _artifacts(tmp_path, 0, monkeypatch, "first-run")
    b = _artifacts(tmp_path, 0, monkeypatch, "again-run")
    c = _artifacts(tmp_path, 4, monkeypatch, "threaded4")
    checks.append(("OBJ/CSV/JSON identical across runs", a == b))
    checks.append(("OBJ/CSV/JSON identical for LMS_THREADS 0 and 4", a == c))
    return checks


def test_criterion_1_pde_certification(capsys):
    announce(1, "PDE certification", criterion_1(), capsys)


def test_criterion_2_wick_correspondence(capsys):
    announce(2, "Wick correspondence", criterion_2(), capsys)


def test_criterion_3_singularity_transport(capsys):
    announce(3, "singularity transport", criterion_3(), capsys)


def test_criterion_4_gauss_map(capsys):
    announce(4, "Gauss map", criterion_4(), capsys)


def test_criterion_5_weierstrass(capsys):
    announce(5, "Weierstrass representation", criterion_5(), capsys)


def test_criterion_6_identities(capsys):
    announce(6, "product identities", criterion_6(), capsys)


def test_criterion_7_infrastructure(tmp_path, monkeypatch, capsys):
    announce(7, "infrastructure", criterion_7(tmp_path, monkeypatch), capsys)


if __name__ == "__main__":
    sys.exit(pytest.main(["-q", __file__]))
