"""Convex polygon kernel for the plane.

Bodies are convex polygons with counterclockwise vertex order.  Points and
segments are first-class degenerate bodies (dim 0 and 1); the empty body is
representable and distinct from every nonempty body.  All operations are pure
and all predicates use an absolute coordinate tolerance of 1e-9.
"""

from __future__ import annotations

import math

import numpy as np

from . import _kernels
from ._kernels import EPS, area_perimeter, canon_chain, clip_convex, point_in_convex

TWO_PI = 2.0 * math.pi


def _as_points(vertices) -> np.ndarray:
    pts = np.asarray(vertices, dtype=float)
    if pts.size == 0:
        return np.empty((0, 2))
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("vertices must be an (n, 2) array of plane points")
    if not np.all(np.isfinite(pts)):
        raise ValueError("vertices must be finite")
    return pts


def _canonical_start(verts: np.ndarray) -> np.ndarray:
    """Rotate the vertex cycle so the lexicographically smallest point leads."""
    if len(verts) < 2:
        return verts
    i = int(np.lexsort((verts[:, 1], verts[:, 0]))[0])
    return np.roll(verts, -i, axis=0)


class ConvexPolygon:
    """An immutable convex body in the plane (possibly a segment or a point).

    ``dim`` is -1 for the empty body, else 0, 1 or 2.  Vertices are stored
    counterclockwise with duplicates and collinear points removed.
    """

    __slots__ = ("verts", "dim", "_area", "_perim")

    def __init__(self, vertices):
        pts = _as_points(vertices)
        if len(pts) >= 3:
            a = _signed_area(pts)
            if a < -EPS:
                pts = pts[::-1].copy()
            verts, dim = canon_chain(np.ascontiguousarray(pts))
            if dim == 2 and not _is_convex_ccw(verts):
                raise ValueError("vertices do not form a convex CCW chain")
        else:
            verts, dim = canon_chain(np.ascontiguousarray(pts))
        self._finish(verts, dim)

    def _finish(self, verts: np.ndarray, dim: int) -> None:
        if dim == 1:
            # order segment endpoints lexicographically for determinism
            if (verts[1, 0], verts[1, 1]) < (verts[0, 0], verts[0, 1]):
                verts = verts[::-1].copy()
        elif dim == 2:
            verts = _canonical_start(verts)
        verts = np.ascontiguousarray(verts)
        verts.setflags(write=False)
        object.__setattr__(self, "verts", verts)
        object.__setattr__(self, "dim", int(dim))
        if dim == 2:
            a, p = area_perimeter(verts)
        elif dim == 1:
            a, p = 0.0, 2.0 * float(np.hypot(*(verts[1] - verts[0])))
        else:
            a, p = 0.0, 0.0
        object.__setattr__(self, "_area", a)
        object.__setattr__(self, "_perim", p)

    def __setattr__(self, name, value):
        raise AttributeError("ConvexPolygon is immutable")

    @classmethod
    def _raw(cls, verts: np.ndarray, dim: int) -> "ConvexPolygon":
        """Trusted constructor for already-canonical chains (internal)."""
        self = object.__new__(cls)
        self._finish(verts, dim)
        return self

    @classmethod
    def empty(cls) -> "ConvexPolygon":
        return cls._raw(np.empty((0, 2)), -1)

    @classmethod
    def point(cls, p) -> "ConvexPolygon":
        return cls(np.asarray(p, dtype=float).reshape(1, 2))

    @classmethod
    def hull(cls, points) -> "ConvexPolygon":
        """Convex hull of an arbitrary point set (monotone chain)."""
        pts = _as_points(points)
        if len(pts) == 0:
            return cls.empty()
        order = np.lexsort((pts[:, 1], pts[:, 0]))
        pts = pts[order]
        keep = np.ones(len(pts), bool)
        keep[1:] = np.any(np.abs(np.diff(pts, axis=0)) > EPS, axis=1)
        pts = pts[keep]
        if len(pts) <= 2:
            return cls(pts)
        lower: list[np.ndarray] = []
        for p in pts:
            while len(lower) >= 2 and _cross3(lower[-2], lower[-1], p) <= EPS:
                lower.pop()
            lower.append(p)
        upper: list[np.ndarray] = []
        for p in pts[::-1]:
            while len(upper) >= 2 and _cross3(upper[-2], upper[-1], p) <= EPS:
                upper.pop()
            upper.append(p)
        ring = np.array(lower[:-1] + upper[:-1])
        return cls(ring)

    # -- basic queries ----------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return self.dim < 0

    @property
    def area(self) -> float:
        return self._area

    @property
    def perimeter(self) -> float:
        """Boundary length; a segment counts both sides (2 x length)."""
        return self._perim

    def intrinsic_volumes(self):
        return intrinsic_volumes(self)

    def bbox(self):
        if self.is_empty:
            raise ValueError("empty body has no bounding box")
        lo = self.verts.min(axis=0)
        hi = self.verts.max(axis=0)
        return lo, hi

    def circumradius(self, center=(0.0, 0.0)) -> float:
        if self.is_empty:
            return 0.0
        return float(np.max(np.hypot(self.verts[:, 0] - center[0],
                                     self.verts[:, 1] - center[1])))

    def contains_point(self, p) -> bool:
        if self.is_empty:
            return False
        x, y = float(p[0]), float(p[1])
        if self.dim == 2:
            return bool(point_in_convex(self.verts, x, y))
        if self.dim == 0:
            return abs(x - self.verts[0, 0]) <= EPS and abs(y - self.verts[0, 1]) <= EPS
        a, b = self.verts
        d = b - a
        cr = d[0] * (y - a[1]) - d[1] * (x - a[0])
        if abs(cr) > EPS * (np.hypot(*d) + 1.0):
            return False
        t = ((x - a[0]) * d[0] + (y - a[1]) * d[1]) / (d @ d)
        return -EPS <= t <= 1.0 + EPS

    # -- rigid motions and scaling ----------------------------------------

    def translate(self, t) -> "ConvexPolygon":
        if self.is_empty:
            return self
        return ConvexPolygon._raw(self.verts + np.asarray(t, float), self.dim)

    def scale(self, a: float) -> "ConvexPolygon":
        if self.is_empty:
            return self
        if a == 0.0:
            return ConvexPolygon.point((0.0, 0.0))
        if a < 0.0:
            return reflect(self.scale(-a))
        return ConvexPolygon._raw(self.verts * a, self.dim)

    def rotate(self, angle: float) -> "ConvexPolygon":
        if self.is_empty:
            return self
        c, s = math.cos(angle), math.sin(angle)
        rot = np.array([[c, -s], [s, c]])
        # rotation preserves the convex CCW chain exactly
        return ConvexPolygon._raw(self.verts @ rot.T, self.dim)

    # -- comparisons -------------------------------------------------------

    def approx_eq(self, other: "ConvexPolygon", tol: float = EPS) -> bool:
        if self.dim != other.dim:
            return False
        if self.is_empty:
            return True
        if self.verts.shape != other.verts.shape:
            return False
        return bool(np.all(np.abs(self.verts - other.verts) <= tol))

    def __repr__(self):
        if self.is_empty:
            return "ConvexPolygon.empty()"
        return f"ConvexPolygon(dim={self.dim}, n={len(self.verts)})"


def _signed_area(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _cross3(a, b, c) -> float:
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _is_convex_ccw(verts: np.ndarray) -> bool:
    n = len(verts)
    for i in range(n):
        if _cross3(verts[i - 1], verts[i], verts[(i + 1) % n]) < -EPS:
            return False
    return True


# -- generators -------------------------------------------------------------

def square(side: float) -> ConvexPolygon:
    """Axis-aligned square [0, side]^2."""
    return rect(side, side)


def rect(a: float, b: float) -> ConvexPolygon:
    """Axis-aligned rectangle [0, a] x [0, b]."""
    if a < 0 or b < 0:
        raise ValueError("rectangle sides must be nonnegative")
    return ConvexPolygon([(0, 0), (a, 0), (a, b), (0, b)])


def regular_ngon(m: int, r: float = 1.0) -> ConvexPolygon:
    """Regular m-gon inscribed in the circle of radius r about the origin."""
    if m < 3:
        raise ValueError("need at least 3 vertices")
    th = TWO_PI * np.arange(m) / m
    return ConvexPolygon(np.column_stack([r * np.cos(th), r * np.sin(th)]))


def segment(p, q) -> ConvexPolygon:
    return ConvexPolygon([p, q])


def from_literal(flat) -> ConvexPolygon:
    """Polygon from a flat coordinate list [x0, y0, x1, y1, ...] (CCW)."""
    arr = np.asarray(flat, dtype=float).reshape(-1, 2)
    return ConvexPolygon(arr)


# -- intersection, Minkowski sum, reflection --------------------------------

def intersect(p: ConvexPolygon, q: ConvexPolygon) -> ConvexPolygon:
    """Exact convex intersection; total, returns the empty body if disjoint."""
    if p.is_empty or q.is_empty:
        return ConvexPolygon.empty()
    if p.dim == 2 and q.dim == 2:
        raw = clip_convex(p.verts, q.verts)
        verts, dim = canon_chain(raw)
        return ConvexPolygon._raw(verts, dim)
    # at least one degenerate operand
    if p.dim == 0:
        return p if q.contains_point(p.verts[0]) else ConvexPolygon.empty()
    if q.dim == 0:
        return q if p.contains_point(q.verts[0]) else ConvexPolygon.empty()
    if p.dim == 1 and q.dim == 2:
        return _clip_segment(p, q)
    if q.dim == 1 and p.dim == 2:
        return _clip_segment(q, p)
    return _intersect_segments(p, q)


def _clip_segment(seg: ConvexPolygon, poly: ConvexPolygon) -> ConvexPolygon:
    a, b = seg.verts
    d = b - a
    t0, t1 = 0.0, 1.0
    verts = poly.verts
    n = len(verts)
    for i in range(n):
        u, v = verts[i], verts[(i + 1) % n]
        ex, ey = v - u
        elen = math.hypot(ex, ey)
        if elen <= EPS:
            continue
        # signed distances of the endpoints from the edge line (inside >= 0)
        dp = (ex * (a[1] - u[1]) - ey * (a[0] - u[0])) / elen
        dq = (ex * (b[1] - u[1]) - ey * (b[0] - u[0])) / elen
        dd = dq - dp
        if abs(dd) <= EPS:
            if dp < -EPS:
                return ConvexPolygon.empty()
            continue
        t = -dp / dd
        if dd > 0:
            t0 = max(t0, t)
        else:
            t1 = min(t1, t)
        if t0 > t1 + EPS:
            return ConvexPolygon.empty()
    t0 = min(max(t0, 0.0), 1.0)
    t1 = min(max(t1, 0.0), 1.0)
    if t0 > t1:
        return ConvexPolygon.empty()
    return ConvexPolygon(np.array([a + t0 * d, a + t1 * d]))


def _intersect_segments(p: ConvexPolygon, q: ConvexPolygon) -> ConvexPolygon:
    a, b = p.verts
    c, d = q.verts
    u = b - a
    v = d - c
    den = u[0] * v[1] - u[1] * v[0]
    scale = np.hypot(*u) * np.hypot(*v) + 1.0
    if abs(den) > EPS * scale:
        w = c - a
        s = (w[0] * v[1] - w[1] * v[0]) / den
        t = (w[0] * u[1] - w[1] * u[0]) / den
        if -EPS <= s <= 1 + EPS and -EPS <= t <= 1 + EPS:
            return ConvexPolygon.point(a + min(max(s, 0.0), 1.0) * u)
        return ConvexPolygon.empty()
    # parallel: check collinearity, then 1D overlap
    w = c - a
    ulen = np.hypot(*u)
    if ulen > EPS and abs(u[0] * w[1] - u[1] * w[0]) / ulen > EPS:
        return ConvexPolygon.empty()
    uu = u @ u
    if uu <= EPS * EPS:
        return intersect(ConvexPolygon.point(a), q)
    s0 = (c - a) @ u / uu
    s1 = (d - a) @ u / uu
    lo, hi = min(s0, s1), max(s0, s1)
    lo, hi = max(lo, 0.0), min(hi, 1.0)
    if lo > hi + EPS:
        return ConvexPolygon.empty()
    return ConvexPolygon(np.array([a + lo * u, a + hi * u]))


def reflect(p: ConvexPolygon) -> ConvexPolygon:
    """Point reflection through the origin, -P (orientation is preserved)."""
    if p.is_empty:
        return p
    return ConvexPolygon._raw(-p.verts, p.dim)


def minkowski_sum(p: ConvexPolygon, q: ConvexPolygon) -> ConvexPolygon:
    """Minkowski sum P + Q (hull of pairwise vertex sums)."""
    if p.is_empty or q.is_empty:
        return ConvexPolygon.empty()
    if q.dim == 0:
        return p.translate(q.verts[0])
    if p.dim == 0:
        return q.translate(p.verts[0])
    sums = (p.verts[:, None, :] + q.verts[None, :, :]).reshape(-1, 2)
    return ConvexPolygon.hull(sums)


# -- intrinsic volumes -------------------------------------------------------

def intrinsic_volumes(p: ConvexPolygon):
    """(V0, V1, V2): Euler characteristic, half boundary length, area."""
    if p.is_empty:
        return (0.0, 0.0, 0.0)
    return (1.0, 0.5 * p._perim, p._area)


# -- measures on the unit circle ---------------------------------------------

class SphereMeasure:
    """Finite measure on the unit circle: atoms plus a uniform component.

    Atoms are (angle, mass) pairs with angles canonical in [0, 2pi); atoms
    closer than the tolerance are merged.  ``density`` is the mass per radian
    of the rotation-invariant component, so the total mass is
    sum(masses) + 2*pi*density.
    """

    __slots__ = ("angles", "masses", "density")

    def __init__(self, angles=(), masses=(), density: float = 0.0):
        ang = np.asarray(angles, dtype=float).ravel() % TWO_PI
        mas = np.asarray(masses, dtype=float).ravel()
        if ang.shape != mas.shape:
            raise ValueError("angles and masses must have equal length")
        if np.any(mas < -1e-12):
            raise ValueError("atom masses must be nonnegative")
        if density < 0:
            raise ValueError("density must be nonnegative")
        order = np.argsort(ang, kind="stable")
        ang, mas = ang[order], mas[order]
        # merge atoms within tolerance (including the 0 ~ 2pi seam)
        out_a: list[float] = []
        out_m: list[float] = []
        for a, m in zip(ang, mas):
            if m <= 0.0:
                continue
            if out_a and a - out_a[-1] <= 1e-9:
                out_m[-1] += m
            else:
                out_a.append(a)
                out_m.append(m)
        if len(out_a) >= 2 and (TWO_PI - out_a[-1]) + out_a[0] <= 1e-9:
            out_m[0] += out_m[-1]
            out_a.pop()
            out_m.pop()
        self.angles = np.array(out_a)
        self.masses = np.array(out_m)
        self.density = float(density)

    @classmethod
    def zero(cls) -> "SphereMeasure":
        return cls()

    @classmethod
    def uniform(cls, density: float) -> "SphereMeasure":
        return cls(density=density)

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum() + TWO_PI * self.density)

    @property
    def atom_mass(self) -> float:
        return float(self.masses.sum())

    def centroid(self) -> np.ndarray:
        """The vector integral of u over the measure (zero for area measures)."""
        if len(self.angles) == 0:
            return np.zeros(2)
        return np.array([self.masses @ np.cos(self.angles),
                         self.masses @ np.sin(self.angles)])

    def rotated(self, angle: float) -> "SphereMeasure":
        return SphereMeasure(self.angles + angle, self.masses, self.density)

    def scaled(self, c: float) -> "SphereMeasure":
        if c < 0:
            raise ValueError("scale factor must be nonnegative")
        return SphereMeasure(self.angles, self.masses * c, self.density * c)

    def __add__(self, other: "SphereMeasure") -> "SphereMeasure":
        return SphereMeasure(np.concatenate([self.angles, other.angles]),
                             np.concatenate([self.masses, other.masses]),
                             self.density + other.density)

    def fourier(self, l: int):
        """(integral of cos(l t), integral of sin(l t)) against the measure."""
        if l == 0:
            return self.total_mass, 0.0
        c = float(self.masses @ np.cos(l * self.angles)) if len(self.angles) else 0.0
        s = float(self.masses @ np.sin(l * self.angles)) if len(self.angles) else 0.0
        return c, s

    def __repr__(self):
        return (f"SphereMeasure(atoms={len(self.angles)}, "
                f"density={self.density:g}, total={self.total_mass:g})")


def area_measure(p: ConvexPolygon, j: int) -> SphereMeasure:
    """Area measure S_j of a convex body, j in {0, 1}.

    S_1 carries edge lengths at the outer-normal angles (a segment yields two
    atoms, one per side); S_0 is V_0 times the uniform circle measure.
    """
    if j == 0:
        if p.is_empty:
            return SphereMeasure.zero()
        return SphereMeasure.uniform(1.0)
    if j != 1:
        raise ValueError("area measure implemented for j in {0, 1}")
    if p.is_empty or p.dim == 0:
        return SphereMeasure.zero()
    if p.dim == 1:
        a, b = p.verts
        d = b - a
        length = float(np.hypot(*d))
        ang = math.atan2(-d[0], d[1])
        return SphereMeasure([ang, ang + math.pi], [length, length])
    ang, ln = _kernels.edge_data(p.verts)
    return SphereMeasure(ang, ln)


# -- support function and Steiner point ---------------------------------------

def support(p: ConvexPolygon, angle: float) -> float:
    """Support function h(P, u(angle)) = max over vertices of <v, u>."""
    if p.is_empty:
        raise ValueError("support function of the empty body is undefined")
    u = np.array([math.cos(angle), math.sin(angle)])
    return float(np.max(p.verts @ u))


def support_vector(p: ConvexPolygon, angles) -> np.ndarray:
    if p.is_empty:
        raise ValueError("support function of the empty body is undefined")
    th = np.asarray(angles, dtype=float)
    u = np.column_stack([np.cos(th), np.sin(th)])
    return (u @ p.verts.T).max(axis=1)


class SupportMeasurePieces:
    """Boundary decomposition carrying the order-0 and order-1 support measures.

    ``edge_pieces`` is a list of ((a, b), normal_angle) entries; for a dim-2
    polygon each edge appears once, for a segment twice (both normals).
    ``vertex_pieces`` is a list of (vertex, (angle_lo, angle_hi)) entries whose
    counterclockwise normal-cone arcs tile the circle.
    """

    __slots__ = ("vertex_pieces", "edge_pieces")

    def __init__(self, vertex_pieces, edge_pieces):
        self.vertex_pieces = vertex_pieces
        self.edge_pieces = edge_pieces

    def vertex_arc_widths(self) -> np.ndarray:
        widths = []
        for _, (a0, a1) in self.vertex_pieces:
            widths.append(a1 - a0)
        return np.array(widths)


def support_measure_pieces(p: ConvexPolygon) -> SupportMeasurePieces:
    """Vertex normal-cone arcs and edge/normal pairs of a convex body."""
    if p.is_empty:
        raise ValueError("empty body has no support measure")
    if p.dim == 0:
        v = p.verts[0]
        return SupportMeasurePieces([(v.copy(), (0.0, TWO_PI))], [])
    if p.dim == 1:
        a, b = p.verts
        d = b - a
        ang = math.atan2(-d[0], d[1]) % TWO_PI
        edges = [((a.copy(), b.copy()), ang),
                 ((a.copy(), b.copy()), (ang + math.pi) % TWO_PI)]
        # endpoint normal cones are the half circles split by the two normals
        verts = [(b.copy(), (ang, ang + math.pi)),
                 (a.copy(), (ang + math.pi, ang + TWO_PI))]
        return SupportMeasurePieces(verts, edges)
    ang, _ = _kernels.edge_data(p.verts)
    n = len(p.verts)
    edges = []
    vpieces = []
    for i in range(n):
        a = p.verts[i]
        b = p.verts[(i + 1) % n]
        edges.append(((a.copy(), b.copy()), float(ang[i])))
    for i in range(n):
        prev = ang[i - 1]
        cur = ang[i]
        hi = cur if cur >= prev else cur + TWO_PI
        vpieces.append((p.verts[i].copy(), (float(prev), float(hi))))
    return SupportMeasurePieces(vpieces, edges)


def steiner_point(p: ConvexPolygon) -> np.ndarray:
    """The Steiner point, the additive translation-equivariant center.

    Computed from the normal-cone arcs: s = (1/pi) sum_v (int_arc u u^T) v.
    """
    if p.is_empty:
        raise ValueError("Steiner point of the empty body is undefined")
    if p.dim == 0:
        return p.verts[0].copy()
    if p.dim == 1:
        return 0.5 * (p.verts[0] + p.verts[1])
    ang, _ = _kernels.edge_data(p.verts)
    lo = np.roll(ang, 1)
    hi = np.where(ang >= lo, ang, ang + TWO_PI)
    dsin2 = np.sin(2 * hi) - np.sin(2 * lo)
    i20 = 0.5 * (hi - lo) + 0.25 * dsin2
    i11 = 0.5 * (np.sin(hi) ** 2 - np.sin(lo) ** 2)
    i02 = 0.5 * (hi - lo) - 0.25 * dsin2
    x, y = p.verts[:, 0], p.verts[:, 1]
    return np.array([i20 @ x + i11 @ y, i11 @ x + i02 @ y]) / math.pi


def _trig_int(a: int, b: int, x: float) -> float:
    """Antiderivative of cos^a(t) sin^b(t) at x (small nonnegative a, b)."""
    if a == 0 and b == 0:
        return x
    if a == 1 and b == 0:
        return math.sin(x)
    if a == 0 and b == 1:
        return -math.cos(x)
    if a == 1:
        return math.sin(x) ** (b + 1) / (b + 1)
    if b == 1:
        return -math.cos(x) ** (a + 1) / (a + 1)
    if a >= 2:
        return (math.cos(x) ** (a - 1) * math.sin(x) ** (b + 1) / (a + b)
                + (a - 1) / (a + b) * _trig_int(a - 2, b, x))
    # a == 0, b >= 2
    return (-math.cos(x) * math.sin(x) ** (b - 1) / b
            + (b - 1) / b * _trig_int(0, b - 2, x))


def arc_trig_moment(a: int, b: int, a0: float, a1: float) -> float:
    """Integral of cos^a sin^b over the angle interval [a0, a1]."""
    return _trig_int(a, b, a1) - _trig_int(a, b, a0)


# -- sampling window ----------------------------------------------------------

class Window:
    """Axis-aligned rectangular sampling window.

    Carries the half-open convention used by the density estimator: the
    upper-right boundary (right edge, top edge, and their corner) is the part
    removed from the closed cell.
    """

    __slots__ = ("x0", "y0", "x1", "y1")

    def __init__(self, x0: float, y0: float, x1: float, y1: float):
        if not (x1 > x0 + EPS and y1 > y0 + EPS):
            raise ValueError("window must have positive area")
        self.x0, self.y0, self.x1, self.y1 = map(float, (x0, y0, x1, y1))

    @classmethod
    def from_bounds(cls, bounds) -> "Window":
        return cls(*bounds)

    @property
    def polygon(self) -> ConvexPolygon:
        return ConvexPolygon([(self.x0, self.y0), (self.x1, self.y0),
                              (self.x1, self.y1), (self.x0, self.y1)])

    @property
    def area(self) -> float:
        return (self.x1 - self.x0) * (self.y1 - self.y0)

    def dilate(self, r: float) -> "Window":
        return Window(self.x0 - r, self.y0 - r, self.x1 + r, self.y1 + r)

    def upper_right_boundary(self):
        """The two closed boundary segments removed by the half-open cell,
        and their common corner."""
        right = segment((self.x1, self.y0), (self.x1, self.y1))
        top = segment((self.x0, self.y1), (self.x1, self.y1))
        corner = ConvexPolygon.point((self.x1, self.y1))
        return right, top, corner

    def contains_window(self, inner: "Window", margin: float = 0.0) -> bool:
        return (inner.x0 - self.x0 >= margin - EPS
                and inner.y0 - self.y0 >= margin - EPS
                and self.x1 - inner.x1 >= margin - EPS
                and self.y1 - inner.y1 >= margin - EPS)

    def contains_body(self, p: ConvexPolygon, margin: float = 0.0) -> bool:
        lo, hi = p.bbox()
        return (lo[0] - self.x0 >= margin - EPS
                and lo[1] - self.y0 >= margin - EPS
                and self.x1 - hi[0] >= margin - EPS
                and self.y1 - hi[1] >= margin - EPS)

    def __repr__(self):
        return f"Window({self.x0:g}, {self.y0:g}, {self.x1:g}, {self.y1:g})"
