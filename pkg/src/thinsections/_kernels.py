"""Numeric kernels for plane-section tracing.

Hot loops live here so they can be jit-compiled.  Set THINSECTIONS_NO_NUMBA
to a nonempty value (other than "0") to run the same code interpreted; the
two paths execute identical source, so the fallback is a correctness
reference as well as an escape hatch.
"""

import os

import numpy as np

_DISABLED = os.environ.get("THINSECTIONS_NO_NUMBA", "") not in ("", "0")


def _identity(f):
    return f

if _DISABLED:
    _jit = _identity
else:
    try:
        from numba import njit

        _jit = njit(cache=True)
    except ImportError:  # pragma: no cover - numba is a declared dependency
        _jit = _identity

USING_NUMBA = _jit is not _identity


@_jit
def emit_segments(level, R, eps,
                  plate_z, plate_x0, plate_x1, plate_y0, plate_y1,
                  hole_pid, hole_x0, hole_x1, hole_y0, hole_y1,
                  vw_x, vw_y0, vw_y1, vw_z0, vw_z1,
                  tang_y, e2y, period, e3y):
    """Intersect the window [-R, R]^2 of the plane x2 = level with every
    lattice translate of the fundamental pieces.

    Returns (segments, clip flags, tangency distance): segments are rows
    (x0, z0, x1, z1) with z0 == z1 for plate traces and x0 == x1 for wall
    traces; a clip flag marks an endpoint produced by the window cut.  The
    tangency distance is the smallest |level - y| over every tangency face
    of an enumerated translate, for the caller's near-saddle guard.
    """
    s_lo = int(np.floor(-R - 1.0))
    s_hi = int(np.floor(R))
    n_s = s_hi - s_lo + 1
    margin = 1e-6
    per_translate = plate_z.shape[0] * (hole_pid.shape[0] + 1) + vw_x.shape[0]
    cap = n_s * n_s * 3 * per_translate
    out = np.empty((cap, 4), np.float64)
    clip = np.zeros((cap, 2), np.uint8)
    n = 0
    near = 1e300
    nh = hole_pid.shape[0]
    cut0 = np.empty(nh, np.float64)
    cut1 = np.empty(nh, np.float64)
    for k3 in range(s_lo, s_hi + 1):
        for s in range(s_lo, s_hi + 1):
            base = level - s * e2y - k3 * e3y
            k1_lo = int(np.ceil((-margin - base) / period))
            k1_hi = int(np.floor((period + margin - base) / period))
            for k1 in range(k1_lo, k1_hi + 1):
                yloc = base + k1 * period
                for t in range(tang_y.shape[0]):
                    d = abs(tang_y[t] - yloc)
                    if d < near:
                        near = d
                for i in range(plate_z.shape[0]):
                    z = plate_z[i] + k3
                    if z < -R or z > R:
                        continue
                    if yloc <= plate_y0[i] or yloc >= plate_y1[i]:
                        continue
                    nc = 0
                    for h in range(nh):
                        if hole_pid[h] == i and hole_y0[h] < yloc < hole_y1[h]:
                            a = hole_x0[h]
                            b = hole_x1[h]
                            j = nc
                            while j > 0 and cut0[j - 1] > a:
                                cut0[j] = cut0[j - 1]
                                cut1[j] = cut1[j - 1]
                                j -= 1
                            cut0[j] = a
                            cut1[j] = b
                            nc += 1
                    xcur = plate_x0[i]
                    for j in range(nc + 1):
                        if j < nc:
                            xend = cut0[j]
                        else:
                            xend = plate_x1[i]
                        xa = xcur + s
                        xb = xend + s
                        if j < nc:
                            xcur = cut1[j]
                        c0 = np.uint8(0)
                        c1 = np.uint8(0)
                        if xa < -R:
                            xa = -R
                            c0 = np.uint8(1)
                        if xb > R:
                            xb = R
                            c1 = np.uint8(1)
                        if xb - xa > 1e-12:
                            out[n, 0] = xa
                            out[n, 1] = z
                            out[n, 2] = xb
                            out[n, 3] = z
                            clip[n, 0] = c0
                            clip[n, 1] = c1
                            n += 1
                for v in range(vw_x.shape[0]):
                    if yloc <= vw_y0[v] or yloc >= vw_y1[v]:
                        continue
                    x = vw_x[v] + s
                    if x < -R or x > R:
                        continue
                    za = vw_z0[v] + k3
                    zb = vw_z1[v] + k3
                    c0 = np.uint8(0)
                    c1 = np.uint8(0)
                    if za < -R:
                        za = -R
                        c0 = np.uint8(1)
                    if zb > R:
                        zb = R
                        c1 = np.uint8(1)
                    if zb - za > 1e-12:
                        out[n, 0] = x
                        out[n, 1] = za
                        out[n, 2] = x
                        out[n, 3] = zb
                        clip[n, 0] = c0
                        clip[n, 1] = c1
                        n += 1
    return out[:n], clip[:n], near


@_jit
def _uf_find(parent, i):
    root = i
    while parent[root] != root:
        root = parent[root]
    while parent[i] != root:
        nxt = parent[i]
        parent[i] = root
        i = nxt
    return root


@_jit
def match_endpoints(seg, clip, eps):
    """Pair coincident unclipped segment endpoints and union their segments.

    Endpoints are paired greedily inside groups of equal coordinates (ties
    broken within eps); the section curves are embedded, so every endpoint
    has at most one partner.  Endpoint 2*i is the (x0, z0) end of segment i
    and 2*i + 1 the other end.  Returns (segment union-find roots, partner
    endpoint indices with -1 for unmatched).
    """
    n = seg.shape[0]
    m = 2 * n
    ex = np.empty(m, np.float64)
    ez = np.empty(m, np.float64)
    valid = np.zeros(m, np.uint8)
    for i in range(n):
        ex[2 * i] = seg[i, 0]
        ez[2 * i] = seg[i, 1]
        ex[2 * i + 1] = seg[i, 2]
        ez[2 * i + 1] = seg[i, 3]
        valid[2 * i] = 1 - clip[i, 0]
        valid[2 * i + 1] = 1 - clip[i, 1]
    idx = np.empty(m, np.int64)
    k = 0
    for e in range(m):
        if valid[e] == 1:
            idx[k] = e
            k += 1
    order = np.argsort(ex[idx[:k]])
    partner = np.full(m, -1, np.int64)
    parent = np.arange(n, dtype=np.int64)
    i = 0
    while i < k:
        j = i + 1
        x0 = ex[idx[order[i]]]
        while j < k and ex[idx[order[j]]] - x0 <= eps:
            j += 1
        run = j - i
        zs = np.empty(run, np.float64)
        for r in range(run):
            zs[r] = ez[idx[order[i + r]]]
        zord = np.argsort(zs)
        r = 0
        while r < run - 1:
            if zs[zord[r + 1]] - zs[zord[r]] <= eps:
                ea = idx[order[i + zord[r]]]
                eb = idx[order[i + zord[r + 1]]]
                partner[ea] = eb
                partner[eb] = ea
                ra = _uf_find(parent, ea // 2)
                rb = _uf_find(parent, eb // 2)
                if ra != rb:
                    parent[ra] = rb
                r += 2
            else:
                r += 1
        i = j
    roots = np.empty(n, np.int64)
    for i in range(n):
        roots[i] = _uf_find(parent, i)
    return roots, partner


@_jit
def flood_spanning(seg, R, pitch):
    """Grid flood-fill census over rasterized segments.

    Independent cross-check for the endpoint-matching path: occupancy on a
    square grid of the given pitch, 4-connected components, and a count of
    components touching two opposite window edges.  Returns (components,
    spanning components).
    """
    W = int(np.floor(2.0 * R / pitch)) + 1
    occ = np.zeros((W, W), np.uint8)
    for i in range(seg.shape[0]):
        c0 = int(np.floor((seg[i, 0] + R) / pitch))
        r0 = int(np.floor((seg[i, 1] + R) / pitch))
        c1 = int(np.floor((seg[i, 2] + R) / pitch))
        r1 = int(np.floor((seg[i, 3] + R) / pitch))
        if c0 < 0:
            c0 = 0
        if r0 < 0:
            r0 = 0
        if c1 > W - 1:
            c1 = W - 1
        if r1 > W - 1:
            r1 = W - 1
        if c0 == c1:
            for r in range(r0, r1 + 1):
                occ[r, c0] = 1
        else:
            for c in range(c0, c1 + 1):
                occ[r0, c] = 1
    stack = np.empty(W * W, np.int64)
    seen = np.zeros((W, W), np.uint8)
    n_comp = 0
    n_span = 0
    for r0 in range(W):
        for c0 in range(W):
            if occ[r0, c0] == 0 or seen[r0, c0] == 1:
                continue
            n_comp += 1
            top = 0
            stack[top] = r0 * W + c0
            top += 1
            seen[r0, c0] = 1
            t_left = False
            t_right = False
            t_bot = False
            t_top = False
            while top > 0:
                top -= 1
                cell = stack[top]
                r = cell // W
                c = cell % W
                if c == 0:
                    t_left = True
                if c == W - 1:
                    t_right = True
                if r == 0:
                    t_bot = True
                if r == W - 1:
                    t_top = True
                if r > 0 and occ[r - 1, c] == 1 and seen[r - 1, c] == 0:
                    seen[r - 1, c] = 1
                    stack[top] = (r - 1) * W + c
                    top += 1
                if r < W - 1 and occ[r + 1, c] == 1 and seen[r + 1, c] == 0:
                    seen[r + 1, c] = 1
                    stack[top] = (r + 1) * W + c
                    top += 1
                if c > 0 and occ[r, c - 1] == 1 and seen[r, c - 1] == 0:
                    seen[r, c - 1] = 1
                    stack[top] = r * W + (c - 1)
                    top += 1
                if c < W - 1 and occ[r, c + 1] == 1 and seen[r, c + 1] == 0:
                    seen[r, c + 1] = 1
                    stack[top] = r * W + (c + 1)
                    top += 1
            if (t_left and t_right) or (t_bot and t_top):
                n_span += 1
    return n_comp, n_span
