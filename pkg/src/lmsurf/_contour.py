"""Marching squares for the zero level of a sampled scalar field."""

import numpy as np

# corner order around a cell: (i,j), (i+1,j), (i+1,j+1), (i,j+1)
# edge order: bottom, right, top, left
_CELL_EDGES = (
    lambda i, j: ("h", i, j),
    lambda i, j: ("v", i + 1, j),
    lambda i, j: ("h", i, j + 1),
    lambda i, j: ("v", i, j),
)
_EDGE_CORNERS = ((0, 1), (1, 2), (3, 2), (0, 3))


def _edge_endpoints(edge):
    kind, i, j = edge
    return ((i, j), (i + 1, j)) if kind == "h" else ((i, j), (i, j + 1))


def cell_segments(pos, center_positive):
    """Segments (pairs of edge slots) for one cell.

    ``pos`` holds the four corner signs; saddles use ``center_positive``.
    """
    crossing = [k for k, (a, b) in enumerate(_EDGE_CORNERS) if pos[a] != pos[b]]
    if len(crossing) == 2:
        return [tuple(crossing)]
    if len(crossing) == 4:
        if center_positive == pos[0]:
            # corners 0 and 2 connect through the centre; cut off 1 and 3
            return [(0, 1), (2, 3)]
        return [(3, 0), (1, 2)]
    return []


def bisect_edges(fn, lo, hi, f_lo, f_hi, tol, max_iter=200):
    """Refine sign changes on segments ``lo -> hi`` until ``|f| <= tol``.

    ``lo``/``hi`` are ``(n, 2)`` endpoint arrays with ``f_lo <= 0 < f_hi``.
    Returns points and the field values there.
    """
    lo = lo.copy()
    hi = hi.copy()
    best = np.where((np.abs(f_lo) <= np.abs(f_hi))[:, None], lo, hi)
    best_f = np.where(np.abs(f_lo) <= np.abs(f_hi), f_lo, f_hi)
    active = np.abs(best_f) > tol
    for _ in range(max_iter):
        if not active.any():
            break
        idx = np.nonzero(active)[0]
        mid = 0.5 * (lo[idx] + hi[idx])
        fm = fn(mid[:, 0], mid[:, 1])
        better = np.abs(fm) < np.abs(best_f[idx])
        best[idx[better]] = mid[better]
        best_f[idx[better]] = fm[better]
        done = (np.abs(fm) <= tol) | ~np.isfinite(fm)
        done |= np.all(mid == lo[idx], axis=1) | np.all(mid == hi[idx], axis=1)
        pos = fm > 0
        hi[idx[pos]] = mid[pos]
        lo[idx[~pos]] = mid[~pos]
        active[idx[done]] = False
    return best, best_f


def trace(segments):
    """Chain edge-to-edge segments into ordered paths; returns (path, closed) pairs."""
    adjacency = {}
    for a, b in segments:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)
    seen = set()
    paths = []

    def walk(start):
        path = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [n for n in adjacency[cur] if n != prev and n not in seen]
            if not nxt:
                closed = len(path) > 2 and start in adjacency[cur] and prev is not None
                return path, closed
            prev, cur = cur, nxt[0]
            path.append(cur)
            seen.add(cur)

    for node in sorted(adjacency):
        if node not in seen and len(adjacency[node]) == 1:
            paths.append(walk(node))
    for node in sorted(adjacency):
        if node not in seen:
            paths.append(walk(node))
    return paths


def zero_contours(xs, ys, field, fn, tol):
    """Zero-level polylines of ``field`` sampled on ``xs x ys`` (``ij`` indexing).

    ``fn(x, y)`` evaluates the field at arbitrary points (NaN where undefined)
    and is used for edge refinement and saddle disambiguation.  Cells with a
    non-finite corner are skipped.  Returns ``[(points, closed, values)]``.
    """
    nx, ny = field.shape
    finite = np.isfinite(field)
    positive = field > 0
    valid = finite[:-1, :-1] & finite[1:, :-1] & finite[1:, 1:] & finite[:-1, 1:]
    corners = (positive[:-1, :-1], positive[1:, :-1], positive[1:, 1:], positive[:-1, 1:])
    mixed = valid & ~((corners[0] == corners[1]) & (corners[1] == corners[2])
                      & (corners[2] == corners[3]))
    cells = np.argwhere(mixed)
    if len(cells) == 0:
        return []
    saddle = ((corners[0] == corners[2]) & (corners[1] == corners[3])
              & (corners[0] != corners[1]))
    saddle_cells = [tuple(c) for c in cells if saddle[tuple(c)]]
    center_pos = {}
    if saddle_cells:
        sc = np.array(saddle_cells)
        cx = 0.5 * (xs[sc[:, 0]] + xs[sc[:, 0] + 1])
        cy = 0.5 * (ys[sc[:, 1]] + ys[sc[:, 1] + 1])
        vals = fn(cx, cy)
        center_pos = {c: bool(v > 0) for c, v in zip(saddle_cells, vals)}

    segments = []
    for i, j in cells:
        i, j = int(i), int(j)
        pos = tuple(bool(c[i, j]) for c in corners)
        for a, b in cell_segments(pos, center_pos.get((i, j))):
            segments.append((_CELL_EDGES[a](i, j), _CELL_EDGES[b](i, j)))

    edges = sorted({e for seg in segments for e in seg})
    lo = np.empty((len(edges), 2))
    hi = np.empty((len(edges), 2))
    f_lo = np.empty(len(edges))
    f_hi = np.empty(len(edges))
    for k, edge in enumerate(edges):
        (i0, j0), (i1, j1) = _edge_endpoints(edge)
        p0, p1 = (xs[i0], ys[j0]), (xs[i1], ys[j1])
        v0, v1 = field[i0, j0], field[i1, j1]
        if v0 > 0:
            p0, p1, v0, v1 = p1, p0, v1, v0
        lo[k], hi[k], f_lo[k], f_hi[k] = p0, p1, v0, v1
    points, values = bisect_edges(fn, lo, hi, f_lo, f_hi, tol)
    index = {e: k for k, e in enumerate(edges)}

    out = []
    for path, closed in trace(segments):
        ks = np.array([index[e] for e in path])
        # adjacent edges meeting at a zero grid node refine to the same point
        p = points[ks]
        keep = np.ones(len(ks), dtype=bool)
        keep[1:] = np.any(p[1:] != p[:-1], axis=1)
        if closed and keep.sum() > 1 and np.all(p[keep][-1] == p[0]):
            keep[np.nonzero(keep)[0][-1]] = False
        out.append((p[keep], closed, values[ks][keep]))
    return out
