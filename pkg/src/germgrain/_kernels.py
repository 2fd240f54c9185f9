"""Compiled hot paths: convex clipping, polygon metrics, Monte Carlo inner loops.

All functions operate on raw (n, 2) float64 vertex arrays in counterclockwise
order.  Degenerate inputs (fewer than 3 vertices) are handled by the Python
wrappers in geom2d; the kernels here assume full-dimensional operands unless
noted otherwise.
"""

import numpy as np
from numba import njit

EPS = 1e-9


@njit(cache=True, nogil=True)
def _clip_halfplane(poly, n, ax, ay, bx, by, out):
    # Keep the part of `poly` left of the directed line a->b.
    m = 0
    ex = bx - ax
    ey = by - ay
    px = poly[n - 1, 0]
    py = poly[n - 1, 1]
    dp = ex * (py - ay) - ey * (px - ax)
    for i in range(n):
        qx = poly[i, 0]
        qy = poly[i, 1]
        dq = ex * (qy - ay) - ey * (qx - ax)
        if dp >= -EPS:
            if dq >= -EPS:
                out[m, 0] = qx
                out[m, 1] = qy
                m += 1
            else:
                t = dp / (dp - dq)
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
                out[m, 0] = px + t * (qx - px)
                out[m, 1] = py + t * (qy - py)
                m += 1
        else:
            if dq >= -EPS:
                t = dp / (dp - dq)
                if t < 0.0:
                    t = 0.0
                elif t > 1.0:
                    t = 1.0
                out[m, 0] = px + t * (qx - px)
                out[m, 1] = py + t * (qy - py)
                m += 1
                out[m, 0] = qx
                out[m, 1] = qy
                m += 1
        px = qx
        py = qy
        dp = dq
    return m


@njit(cache=True, nogil=True)
def clip_convex(sub, clip):
    """Intersection of two CCW convex polygons by iterated half-plane clipping.

    Returns the raw clipped chain; the caller canonicalises (dedup, collinear
    removal, dimension detection).
    """
    n = sub.shape[0]
    m = clip.shape[0]
    cap = n + m + 8
    buf_a = np.empty((cap, 2))
    buf_b = np.empty((cap, 2))
    for i in range(n):
        buf_a[i, 0] = sub[i, 0]
        buf_a[i, 1] = sub[i, 1]
    cnt = n
    in_a = True
    ax = clip[m - 1, 0]
    ay = clip[m - 1, 1]
    for j in range(m):
        bx = clip[j, 0]
        by = clip[j, 1]
        if cnt == 0:
            break
        if in_a:
            cnt = _clip_halfplane(buf_a, cnt, ax, ay, bx, by, buf_b)
        else:
            cnt = _clip_halfplane(buf_b, cnt, ax, ay, bx, by, buf_a)
        in_a = not in_a
        ax = bx
        ay = by
    out = np.empty((cnt, 2))
    if in_a:
        for i in range(cnt):
            out[i, 0] = buf_a[i, 0]
            out[i, 1] = buf_a[i, 1]
    else:
        for i in range(cnt):
            out[i, 0] = buf_b[i, 0]
            out[i, 1] = buf_b[i, 1]
    return out


@njit(cache=True, nogil=True)
def canon_chain(raw):
    """Canonicalise a near-convex CCW chain: drop duplicate and collinear
    vertices, classify the dimension.

    Returns (verts, dim) with dim in {-1, 0, 1, 2}; for dim 1 the two
    endpoints of the segment are returned, for dim 0 a single point.
    """
    n = raw.shape[0]
    if n == 0:
        return np.empty((0, 2)), -1
    # drop consecutive duplicates (cyclically)
    keep = np.empty(n, np.bool_)
    m = 0
    for i in range(n):
        if m == 0:
            keep[i] = True
            m += 1
            lastx = raw[i, 0]
            lasty = raw[i, 1]
        else:
            dx = raw[i, 0] - lastx
            dy = raw[i, 1] - lasty
            if abs(dx) > EPS or abs(dy) > EPS:
                keep[i] = True
                m += 1
                lastx = raw[i, 0]
                lasty = raw[i, 1]
            else:
                keep[i] = False
    pts = np.empty((m, 2))
    k = 0
    for i in range(n):
        if keep[i]:
            pts[k, 0] = raw[i, 0]
            pts[k, 1] = raw[i, 1]
            k += 1
    # wrap-around duplicate
    while m > 1:
        dx = pts[m - 1, 0] - pts[0, 0]
        dy = pts[m - 1, 1] - pts[0, 1]
        if abs(dx) <= EPS and abs(dy) <= EPS:
            m -= 1
        else:
            break
    if m == 1:
        return pts[:1].copy(), 0
    if m == 2:
        return pts[:2].copy(), 1
    # remove collinear vertices (perpendicular-distance test)
    out = np.empty((m, 2))
    cnt = 0
    for i in range(m):
        ax = pts[(i - 1) % m, 0]
        ay = pts[(i - 1) % m, 1]
        bx = pts[i, 0]
        by = pts[i, 1]
        cx = pts[(i + 1) % m, 0]
        cy = pts[(i + 1) % m, 1]
        ux = bx - ax
        uy = by - ay
        vx = cx - bx
        vy = cy - by
        cr = ux * vy - uy * vx
        base = np.sqrt(ux * ux + uy * uy) + np.sqrt(vx * vx + vy * vy)
        if abs(cr) > EPS * (base + 1.0):
            out[cnt, 0] = bx
            out[cnt, 1] = by
            cnt += 1
    if cnt == 0:
        # fully collinear chain: keep the two extreme points
        lo = 0
        hi = 0
        dx = pts[m - 1, 0] - pts[0, 0]
        dy = pts[m - 1, 1] - pts[0, 1]
        # dominant direction over all pairs
        best = -1.0
        for i in range(m):
            for j in range(m):
                dx = pts[j, 0] - pts[i, 0]
                dy = pts[j, 1] - pts[i, 1]
                d2 = dx * dx + dy * dy
                if d2 > best:
                    best = d2
                    lo = i
                    hi = j
        if best <= EPS * EPS:
            return pts[:1].copy(), 0
        seg = np.empty((2, 2))
        seg[0, 0] = pts[lo, 0]
        seg[0, 1] = pts[lo, 1]
        seg[1, 0] = pts[hi, 0]
        seg[1, 1] = pts[hi, 1]
        return seg, 1
    if cnt == 1:
        return out[:1].copy(), 0
    if cnt == 2:
        return out[:2].copy(), 1
    return out[:cnt].copy(), 2


@njit(cache=True, nogil=True)
def area_perimeter(v):
    """Shoelace area and boundary length of a CCW polygon (n >= 3)."""
    n = v.shape[0]
    a = 0.0
    p = 0.0
    x0 = v[n - 1, 0]
    y0 = v[n - 1, 1]
    for i in range(n):
        x1 = v[i, 0]
        y1 = v[i, 1]
        a += x0 * y1 - x1 * y0
        dx = x1 - x0
        dy = y1 - y0
        p += np.sqrt(dx * dx + dy * dy)
        x0 = x1
        y0 = y1
    return 0.5 * a, p


@njit(cache=True, nogil=True)
def point_in_convex(v, x, y):
    """True if (x, y) lies in the CCW convex polygon (within EPS)."""
    n = v.shape[0]
    ax = v[n - 1, 0]
    ay = v[n - 1, 1]
    for i in range(n):
        bx = v[i, 0]
        by = v[i, 1]
        if (bx - ax) * (y - ay) - (by - ay) * (x - ax) < -EPS:
            return False
        ax = bx
        ay = by
    return True


@njit(cache=True, nogil=True)
def _iv_of_chain(raw):
    """Intrinsic volumes (V0, V1, V2) of a raw clipped chain."""
    verts, dim = canon_chain(raw)
    if dim < 0:
        return 0.0, 0.0, 0.0
    if dim == 0:
        return 1.0, 0.0, 0.0
    if dim == 1:
        dx = verts[1, 0] - verts[0, 0]
        dy = verts[1, 1] - verts[0, 1]
        return 1.0, np.sqrt(dx * dx + dy * dy), 0.0
    a, p = area_perimeter(verts)
    return 1.0, 0.5 * p, a


@njit(cache=True, nogil=True)
def translative_iv_batch(kv, mv, xs):
    """Monte Carlo sums for the translation integral of (V0, V1, V2).

    For each sample translation x, evaluates the intrinsic volumes of
    K cap (M + x) and accumulates componentwise sums and sums of squares.
    """
    ns = xs.shape[0]
    nm = mv.shape[0]
    shifted = np.empty((nm, 2))
    s = np.zeros(3)
    s2 = np.zeros(3)
    for t in range(ns):
        for i in range(nm):
            shifted[i, 0] = mv[i, 0] + xs[t, 0]
            shifted[i, 1] = mv[i, 1] + xs[t, 1]
        raw = clip_convex(kv, shifted)
        v0, v1, v2 = _iv_of_chain(raw)
        s[0] += v0
        s[1] += v1
        s[2] += v2
        s2[0] += v0 * v0
        s2[1] += v1 * v1
        s2[2] += v2 * v2
    return s, s2


@njit(cache=True, nogil=True)
def iterated_translative_iv_batch(k1, k2, k3, xs2, xs3):
    """Same as translative_iv_batch for K1 cap (K2+x2) cap (K3+x3)."""
    ns = xs2.shape[0]
    n2 = k2.shape[0]
    n3 = k3.shape[0]
    sh2 = np.empty((n2, 2))
    sh3 = np.empty((n3, 2))
    s = np.zeros(3)
    s2 = np.zeros(3)
    for t in range(ns):
        for i in range(n2):
            sh2[i, 0] = k2[i, 0] + xs2[t, 0]
            sh2[i, 1] = k2[i, 1] + xs2[t, 1]
        raw = clip_convex(k1, sh2)
        verts, dim = canon_chain(raw)
        if dim == 2:
            for i in range(n3):
                sh3[i, 0] = k3[i, 0] + xs3[t, 0]
                sh3[i, 1] = k3[i, 1] + xs3[t, 1]
            raw2 = clip_convex(verts, sh3)
            v0, v1, v2 = _iv_of_chain(raw2)
        elif dim >= 0:
            # lower-dimensional middle intersection: clip the chain anyway
            v0 = 0.0
            v1 = 0.0
            v2 = 0.0
            if dim >= 0:
                inside = True
                # point or segment against K3+x3: test endpoints
                for i in range(n3):
                    sh3[i, 0] = k3[i, 0] + xs3[t, 0]
                    sh3[i, 1] = k3[i, 1] + xs3[t, 1]
                if dim == 0:
                    if point_in_convex(sh3, verts[0, 0], verts[0, 1]):
                        v0 = 1.0
                else:
                    raw2 = clip_convex(_seg_to_chain(verts), sh3)
                    v0, v1, v2 = _iv_of_chain(raw2)
        else:
            v0 = 0.0
            v1 = 0.0
            v2 = 0.0
        s[0] += v0
        s[1] += v1
        s[2] += v2
        s2[0] += v0 * v0
        s2[1] += v1 * v1
        s2[2] += v2 * v2
    return s, s2


@njit(cache=True, nogil=True)
def _seg_to_chain(seg):
    out = np.empty((2, 2))
    out[0, 0] = seg[0, 0]
    out[0, 1] = seg[0, 1]
    out[1, 0] = seg[1, 0]
    out[1, 1] = seg[1, 1]
    return out


@njit(cache=True, nogil=True)
def kinematic_iv_batch(kv, mv, xs, angles):
    """Monte Carlo sums for the motion integral of (V0, V1, V2).

    Each sample applies rotation by angles[t] to M, then translation xs[t].
    """
    ns = xs.shape[0]
    nm = mv.shape[0]
    moved = np.empty((nm, 2))
    s = np.zeros(3)
    s2 = np.zeros(3)
    for t in range(ns):
        c = np.cos(angles[t])
        sn = np.sin(angles[t])
        for i in range(nm):
            x = mv[i, 0]
            y = mv[i, 1]
            moved[i, 0] = c * x - sn * y + xs[t, 0]
            moved[i, 1] = sn * x + c * y + xs[t, 1]
        raw = clip_convex(kv, moved)
        v0, v1, v2 = _iv_of_chain(raw)
        s[0] += v0
        s[1] += v1
        s[2] += v2
        s2[0] += v0 * v0
        s2[1] += v1 * v1
        s2[2] += v2 * v2
    return s, s2


@njit(cache=True, nogil=True)
def edge_data(v):
    """Outer-normal angles and lengths of the edges of a CCW polygon."""
    n = v.shape[0]
    ang = np.empty(n)
    ln = np.empty(n)
    for i in range(n):
        j = (i + 1) % n
        ex = v[j, 0] - v[i, 0]
        ey = v[j, 1] - v[i, 1]
        ln[i] = np.sqrt(ex * ex + ey * ey)
        ang[i] = np.arctan2(-ex, ey)
        if ang[i] < 0.0:
            ang[i] += 2.0 * np.pi
    return ang, ln
