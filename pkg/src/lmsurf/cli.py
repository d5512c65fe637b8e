"""Command-line interface: ``lmsurf <subcommand> ...``.

Exit codes: 0 all checks passed, 1 checks ran and some failed, 2 usage or
parse error, 3 runtime evaluation error.
"""

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import catalog, gauss, identities, mesh, pde, weierstrass, wick
from .errors import (CatalogError, DefinitionFileError, LmsError, MeshError, ParseError)
from .report import build_report, dumps, write_report
from .surfaces import (GraphLike, ParametricSurface, Rect, WeierstrassData, load_definition)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2, 3

DEFAULTS = {
    "residual_tol": 1e-9,
    "refine_tol": 1e-10,
    "im_tol": 1e-9,
    "image_eps": 1e-8,
    "base_delta": 1e-6,
    "quadric_tol": 1e-10,
    "quad_tol": 1e-10,
    "certify_tol": 1e-8,
    "identity_max_error": 5e-4,
    "order_band": 0.15,
}


class UsageError(LmsError):
    pass


def _grid(text):
    parts = text.lower().split("x")
    try:
        nx, ny = (int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like NXxNY, got {text!r}") from None
    if nx < 2 or ny < 2:
        raise argparse.ArgumentTypeError("grid must be at least 2x2")
    return nx, ny


def _positive(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError(f"tolerance must be positive, got {text}")
    return v


def _range(text):
    try:
        a, b = (float(p) for p in text.split(":"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"range must look like a:b, got {text!r}") from None
    if not a < b:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return a, b


def _domain(text):
    try:
        return Rect.parse(text)
    except LmsError as err:
        raise argparse.ArgumentTypeError(str(err)) from None


def _complex(text):
    try:
        parts = [float(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"z must look like RE,IM, got {text!r}") from None
    if len(parts) not in (1, 2):
        raise argparse.ArgumentTypeError(f"z must look like RE,IM, got {text!r}")
    return complex(parts[0], parts[1] if len(parts) == 2 else 0.0)


def _ladder(text):
    try:
        ns = [int(p) for p in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"ladder must be comma-separated integers: {text!r}") \
            from None
    if not ns or min(ns) < 1:
        raise argparse.ArgumentTypeError("ladder entries must be positive")
    return sorted(set(ns))


def _params(items):
    out = {}
    for item in items or []:
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects name=value, got {item!r}")
        try:
            out[key.strip()] = float(val)
        except ValueError:
            raise UsageError(f"--param {key}: not a number: {val!r}") from None
    return out


def _looks_like_path(s):
    return os.sep in s or s.endswith((".txt", ".def", ".surf")) or Path(s).is_file()


def load_surface(source, params=None, want="primary"):
    """A catalog id or definition-file path -> surface object.

    ``want`` picks the form: ``primary``, ``graph``, ``parametric`` or
    ``weierstrass``.
    """
    params = params or {}
    if _looks_like_path(source):
        if not Path(source).is_file():
            raise UsageError(f"no such definition file: {source}")
        s = load_definition(source)
        if params:
            if not hasattr(s, "with_params"):
                raise UsageError("--param only applies to graph surfaces")
            s = s.with_params(**params)
        return s
    entry = catalog.get(source, **params)
    s = entry.primary if want == "primary" else getattr(entry, want)
    if s is None:
        raise UsageError(f"catalog entry {source!r} has no {want} form")
    return s


def _require_graph(s, what):
    if not isinstance(s, GraphLike):
        raise UsageError(f"{what} needs a graph surface, got {type(s).__name__}")
    return s


def _emit(args, subcommand, config, results, passed):
    report = build_report(subcommand, config, results, passed)
    text = dumps(report)
    if getattr(args, "out", None) and subcommand not in ("locus", "mesh"):
        write_report(report, args.out)
    if getattr(args, "report", None):
        write_report(report, args.report)
    sys.stdout.write(text + "\n")
    return EXIT_OK if passed else EXIT_FAIL


def _base_config(args, **extra):
    cfg = {"surface": getattr(args, "surface", None), "params": _params(getattr(args, "param", []))}
    if getattr(args, "domain", None) is not None:
        cfg["domain"] = str(args.domain)
    cfg.update(extra)
    return cfg


def cmd_residual(args):
    params = _params(args.param)
    s = load_surface(args.surface, params)
    tol = args.tol if args.tol is not None else DEFAULTS["residual_tol"]
    cfg = _base_config(args, grid=list(args.grid), tol=tol)
    if isinstance(s, ParametricSurface):
        dom = args.domain or s.domain
        us, vs = dom.axes(*args.grid)
        U, V = np.meshgrid(us, vs, indexing="ij")
        H = np.abs(pde.mean_curvature_numerator(s, (U, V), strict=False))
        ok = np.isfinite(H)
        if not ok.any():
            raise LmsError(f"{s.name}: tangent plane degenerate at every sample")
        U, V, H = U[ok], V[ok], H[ok]
        k = int(np.argmax(H))
        results = {"n_samples": int(H.size), "n_skipped": int((~ok).sum()),
                   "max_abs": float(H[k]), "mean_abs": float(H.mean()),
                   "l2": float(np.sqrt(np.mean(H * H))),
                   "worst_point": [float(U[k]), float(V[k])],
                   "equation": "mean-curvature-numerator " + s.signature}
        return _emit(args, "residual", cfg, results, results["max_abs"] < tol)
    _require_graph(s, "residual")
    rep = pde.residual_grid(s, args.grid, args.domain)
    return _emit(args, "residual", cfg, rep.to_dict(), rep.max_abs < tol)


def _locus_paths(out, n):
    p = Path(out)
    return [p] + [p.with_name(f"{p.stem}.{k}{p.suffix}") for k in range(1, n)]


def cmd_locus(args):
    s = _require_graph(load_surface(args.surface, _params(args.param)), "locus")
    tol = args.refine_tol if args.refine_tol is not None else DEFAULTS["refine_tol"]
    loc = pde.singular_locus(s, args.grid, tol, args.domain)
    cfg = _base_config(args, grid=list(args.grid), refine_tol=tol, out=args.out)
    results = loc.to_dict()
    if args.out and len(loc):
        paths = _locus_paths(args.out, len(loc))
        for poly, path in zip(loc, paths):
            mesh.write_polyline_csv(poly, path)
        results["files"] = [str(p) for p in paths]
    passed = all(p.residual_bound <= tol for p in loc)
    return _emit(args, "locus", cfg, results, passed)


def cmd_wick(args):
    s = _require_graph(load_surface(args.surface, _params(args.param)), "wick")
    im_tol = args.im_tol if args.im_tol is not None else DEFAULTS["im_tol"]
    tol = args.tol if args.tol is not None else DEFAULTS["residual_tol"]
    c = wick.continue_graph(s, args.direction, im_tol)
    if args.domain:
        c = c.with_domain(args.domain)
    cfg = _base_config(args, direction=args.direction, im_tol=im_tol, tol=tol, seed=args.seed,
                       n=args.n, check=bool(args.check))
    rng = np.random.default_rng(args.seed)
    u, v = wick.random_admissible_points(c, args.n, rng)
    r = np.abs(pde.evaluate_on_points(c, pde._residual_fn(c), u, v))
    k = int(np.argmax(r))
    results = {"equation": c.equation, "n_points": int(len(r)), "max_abs": float(r[k]),
               "worst_point": [float(u[k]), float(v[k])], "reflection": c.reflection}
    passed = float(r[k]) < tol
    if args.check:
        if args.direction == wick.TO_TIMELIKE:
            rep = wick.correspondence_check(s, c, n=args.n, seed=args.seed, tolerance=tol)
        else:
            rep = wick.correspondence_check(c, s, n=args.n, seed=args.seed, tolerance=tol)
        results["correspondence"] = rep.to_dict()
        passed = passed and rep.passed
    return _emit(args, "wick", cfg, results, passed)


def cmd_gauss(args):
    s = _require_graph(load_surface(args.surface, _params(args.param)), "gauss")
    if args.domain:
        s = s.with_domain(args.domain)
    eps = args.image_eps if args.image_eps is not None else DEFAULTS["image_eps"]
    delta = args.base_delta if args.base_delta is not None else DEFAULTS["base_delta"]
    qtol = DEFAULTS["quadric_tol"]
    cfg = _base_config(args, grid=list(args.grid), image_eps=eps, base_delta=delta,
                       quadric_tol=qtol, seed=args.seed, n=args.n)
    scan = gauss.injectivity_scan(s, args.grid, eps, delta)
    rng = np.random.default_rng(args.seed)
    x, y = wick.random_admissible_points(s, 4 * args.n, rng)
    _, img, ok = gauss.gauss_images(s, x, y)
    img = img[ok][:args.n]
    q = np.abs(gauss.quadric_residual(img, gauss._quadric_for(s))) if len(img) else np.zeros(0)
    results = scan.to_dict()
    results["quadric"] = gauss._quadric_for(s)
    results["quadric_points"] = int(len(img))
    results["quadric_max_residual"] = float(q.max()) if len(q) else 0.0
    passed = scan.injective and results["quadric_max_residual"] <= qtol
    return _emit(args, "gauss", cfg, results, passed)


def cmd_weierstrass(args):
    data = load_surface(args.data, want="weierstrass")
    if not isinstance(data, WeierstrassData):
        raise UsageError(f"{args.data} is not Weierstrass data")
    qt = args.quad_tol if args.quad_tol is not None else DEFAULTS["quad_tol"]
    ctol = args.tol if args.tol is not None else DEFAULTS["certify_tol"]
    cfg = {"data": args.data, "urange": list(args.urange), "vrange": list(args.vrange),
           "quad_tol": qt, "n": args.n, "convention": args.convention,
           "certify": args.certify, "tol": ctol}
    if args.certify:
        ref = load_surface(args.certify, want="parametric")
        rep = weierstrass.certify(data, ref, args.n, args.urange, args.vrange, qt,
                                  args.convention, ctol)
        return _emit(args, "weierstrass", cfg, rep.to_dict(), rep.passed)
    S = weierstrass.integrate(data, args.urange, args.vrange, args.n, qt, args.convention)
    ts_u = np.linspace(*args.urange, 100)
    ts_v = np.linspace(*args.vrange, 100)
    null = weierstrass.null_defect(data, ts_u, ts_v, args.convention)
    mixed = float(np.max(np.abs(weierstrass.mixed_difference(S)))) if args.n >= 3 else 0.0
    fine = weierstrass.integrate(data, args.urange, args.vrange, 201, qt, args.convention)
    cmax, cmean = weierstrass.curvature_statistics(fine)
    results = {"name": data.name, "base": list(S.base), "n": args.n, "quad_error": S.quad_error,
               "null_defect": null, "mixed_max_abs": mixed, "curvature_max_abs": cmax,
               "curvature_mean_abs": cmean,
               "A_end": S.A[-1].tolist(), "B_end": S.B[-1].tolist()}
    passed = null < 1e-9 and mixed < 1e-8 and cmax < 1e-6
    if args.obj:
        mesh.write_obj(mesh.sample_integrated(S), args.obj)
        results["obj"] = args.obj
    return _emit(args, "weierstrass", cfg, results, passed)


def cmd_identity(args):
    max_err = args.max_error if args.max_error is not None else DEFAULTS["identity_max_error"]
    band = DEFAULTS["order_band"]
    cfg = {"id": args.id, "z": [args.z.real, args.z.imag], "ladder": list(args.ladder),
           "max_error": max_err, "order_band": band, "dps": identities.ORACLE_DPS}
    rep = identities.certify(args.id, args.z, args.ladder)
    results = rep.to_dict()
    if rep.abs_error_at_N == 0.0:
        passed = True
    else:
        passed = (rep.abs_error_at_N < max_err and rep.errors_monotone
                  and rep.estimated_order is not None and abs(rep.estimated_order - 1.0) <= band)
    return _emit(args, "identity", cfg, results, passed)


def cmd_mesh(args):
    s = load_surface(args.surface, _params(args.param))
    cfg = _base_config(args, grid=list(args.grid), out=args.out)
    if isinstance(s, ParametricSurface):
        m = mesh.sample_parametric(s, args.grid, args.domain)
    elif isinstance(s, WeierstrassData):
        raise UsageError("mesh Weierstrass data through `weierstrass --obj`")
    else:
        m = mesh.sample_graph(s, args.grid, args.domain)
    mesh.write_obj(m, args.out)
    results = {"vertices": int(len(m.vertices)), "triangles": int(len(m.triangles)),
               "euler_characteristic": int(m.euler_characteristic), "out": args.out}
    return _emit(args, "mesh", cfg, results, True)


def cmd_catalog(args):
    rows = []
    for name in catalog.names():
        e = catalog.get(name)
        row = {"name": name, "forms": [k for k in ("graph", "parametric", "isothermal",
                                                   "weierstrass") if getattr(e, k) is not None]}
        if e.graph is not None:
            row.update(kind=e.graph.kind, z=str(e.graph.z), params=dict(e.graph.params),
                       domain=str(e.graph.domain))
        if e.notes:
            row["notes"] = e.notes
        rows.append(row)
    if args.list:
        sys.stdout.write("".join(r["name"] + "\n" for r in rows))
        return EXIT_OK
    sys.stdout.write(dumps({"surfaces": rows}) + "\n")
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="lmsurf",
                                description="Verification toolkit for maximal and timelike "
                                            "minimal surfaces in Lorentz-Minkowski space.")
    sub = p.add_subparsers(dest="subcommand", required=True)

    def surface_args(sp, grid=(201, 201)):
        sp.add_argument("--surface", required=True, help="catalog id or definition-file path")
        sp.add_argument("--param", action="append", default=[], metavar="NAME=VALUE")
        sp.add_argument("--domain", type=_domain, default=None, metavar="x0:x1:y0:y1")
        sp.add_argument("--grid", type=_grid, default=grid, metavar="NXxNY")
        sp.add_argument("--report", default=None, help="also write the JSON report here")

    sp = sub.add_parser("residual", help="graph-equation residual on a grid")
    surface_args(sp)
    sp.add_argument("--tol", type=_positive, default=None)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_residual)

    sp = sub.add_parser("locus", help="singular locus as polylines")
    surface_args(sp)
    sp.add_argument("--refine-tol", type=_positive, default=None)
    sp.add_argument("--out", default=None, help="CSV path (extra polylines get .1, .2 ...)")
    sp.set_defaults(func=cmd_locus)

    sp = sub.add_parser("wick", help="continue a graph with y -> iy")
    surface_args(sp)
    sp.add_argument("--direction", choices=[wick.TO_TIMELIKE, wick.TO_MAXIMAL],
                    default=wick.TO_TIMELIKE)
    sp.add_argument("--im-tol", type=_positive, default=None)
    sp.add_argument("--tol", type=_positive, default=None)
    sp.add_argument("--check", action="store_true", help="also compare singular sets")
    sp.add_argument("--n", type=int, default=200)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_wick)

    sp = sub.add_parser("gauss", help="Gauss map quadric check and injectivity scan")
    surface_args(sp, grid=(101, 101))
    sp.add_argument("--image-eps", type=_positive, default=None)
    sp.add_argument("--base-delta", type=_positive, default=None)
    sp.add_argument("--n", type=int, default=500)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_gauss)

    sp = sub.add_parser("weierstrass", help="integrate Weierstrass data")
    sp.add_argument("--data", required=True, help="catalog id or definition-file path")
    sp.add_argument("--urange", type=_range, required=True, metavar="a:b")
    sp.add_argument("--vrange", type=_range, required=True, metavar="a:b")
    sp.add_argument("--quad-tol", type=_positive, default=None)
    sp.add_argument("--n", type=int, default=21)
    sp.add_argument("--convention", choices=weierstrass.CONVENTIONS, default="examples")
    sp.add_argument("--certify", default=None, metavar="REF")
    sp.add_argument("--tol", type=_positive, default=None)
    sp.add_argument("--obj", default=None, help="write the integrated mesh as OBJ")
    sp.add_argument("--out", default=None)
    sp.add_argument("--report", default=None)
    sp.set_defaults(func=cmd_weierstrass)

    sp = sub.add_parser("identity", help="certify a product identity")
    sp.add_argument("--id", required=True, choices=identities.IDS)
    sp.add_argument("--z", type=_complex, required=True, metavar="RE,IM")
    sp.add_argument("--ladder", type=_ladder, default=list(identities.DEFAULT_LADDER))
    sp.add_argument("--max-error", type=_positive, default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--report", default=None)
    sp.set_defaults(func=cmd_identity)

    sp = sub.add_parser("mesh", help="write an OBJ mesh")
    surface_args(sp, grid=(101, 101))
    sp.add_argument("--out", required=True)
    sp.set_defaults(func=cmd_mesh)

    sp = sub.add_parser("catalog", help="list built-in surfaces")
    sp.add_argument("--list", action="store_true")
    sp.set_defaults(func=cmd_catalog)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, CatalogError, DefinitionFileError, ParseError) as err:
        sys.stderr.write(f"lmsurf {args.subcommand}: {err}\n")
        return EXIT_USAGE
    except (MeshError, LmsError, ArithmeticError, OSError) as err:
        sys.stderr.write(f"lmsurf {args.subcommand}: {err}\n")
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
