"""Valuations on convex polygons: intrinsic volumes, mixed areas, Minkowski
tensors, circular-harmonic coefficients, centered support functions, and the
geometric constants they are built from.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .geom2d import (ConvexPolygon, SphereMeasure, arc_trig_moment, area_measure,
                     intrinsic_volumes, reflect, steiner_point, support,
                     support_measure_pieces, support_vector)

TWO_PI = 2.0 * math.pi


# -- constants ---------------------------------------------------------------

def kappa(k: int) -> float:
    """Volume of the unit ball in R^k (kappa_0 = 1, kappa_1 = 2, kappa_2 = pi)."""
    if k < 0:
        raise ValueError("kappa is defined for k >= 0")
    return math.pi ** (k / 2.0) / math.gamma(k / 2.0 + 1.0)


def omega(k: int) -> float:
    """Surface content of the unit sphere in R^k (omega_1 = 2, omega_2 = 2pi)."""
    if k < 1:
        raise ValueError("omega is defined for k >= 1")
    return 2.0 * math.pi ** (k / 2.0) / math.gamma(k / 2.0)


def c_upper(r: int, s: int) -> float:
    """The crofton coefficients c^r_s = r! kappa_r / (s! kappa_s)."""
    if r < 0 or s < 0:
        raise ValueError("indices must be nonnegative")
    return math.factorial(r) * kappa(r) / (math.factorial(s) * kappa(s))


def c_tensor(k: int, r: int, s: int) -> float:
    """Tensor normalization c_k^{r,s} = omega_k / (r! s! omega_{k+s})."""
    if k < 1 or r < 0 or s < 0:
        raise ValueError("need k >= 1 and nonnegative r, s")
    return omega(k) / (math.factorial(r) * math.factorial(s) * omega(k + s))


def c_area(n: int, j: int) -> float:
    """Area-measure normalization binom(n, j) / (n kappa_{n-j})."""
    if not 0 <= j < n:
        raise ValueError("need 0 <= j < n")
    return math.comb(n, j) / (n * kappa(n - j))


def alpha_iso(n: int, j: int, s: int) -> float:
    """Isotropic tensor-density coefficient for even tensor rank s."""
    if not 0 <= j < n or s < 0:
        raise ValueError("need 0 <= j < n and s >= 0")
    return (2.0 / math.factorial(s)) * (omega(n - j) * omega(s + n)
                                        / (omega(n) * omega(n - j + s) * omega(s + 1)))


def harm_dim(n: int, l: int) -> int:
    """Dimension of the space of degree-l spherical harmonics in R^n."""
    if n < 2 or l < 0:
        raise ValueError("need n >= 2 and l >= 0")
    if l == 0:
        return 1
    if n == 2:
        return 2
    return math.comb(n + l - 1, l) - math.comb(n + l - 3, l - 2)


_CONSTANTS: dict[str, Callable] = {
    "kappa": kappa,
    "omega": omega,
    "c_upper": c_upper,
    "c_tensor": c_tensor,
    "c_area": c_area,
    "alpha": alpha_iso,
    "D": harm_dim,
}


def constant(name: str, *indices: int) -> float:
    """Look up a named geometric constant, e.g. constant('c_upper', 2, 0)."""
    try:
        fn = _CONSTANTS[name]
    except KeyError:
        raise KeyError(f"unknown constant family {name!r}; "
                       f"known: {sorted(_CONSTANTS)}") from None
    return fn(*indices)


# -- symmetric tensors over the plane -----------------------------------------

class SymTensor:
    """Symmetric tensor of rank s over R^2, stored as s+1 coordinates.

    coords[i] is the component with i copies of the second basis vector
    (no multiplicity weights).  The rank-0 tensor is a scalar and the metric
    tensor Q has coords (1, 0, 1).
    """

    __slots__ = ("rank", "coords")

    def __init__(self, rank: int, coords=None):
        if rank < 0:
            raise ValueError("rank must be nonnegative")
        self.rank = int(rank)
        if coords is None:
            self.coords = np.zeros(rank + 1)
        else:
            arr = np.asarray(coords, dtype=float)
            if arr.shape != (rank + 1,):
                raise ValueError("coords must have length rank + 1")
            self.coords = arr.copy()

    @classmethod
    def zeros(cls, rank: int) -> "SymTensor":
        return cls(rank)

    @classmethod
    def metric(cls) -> "SymTensor":
        return cls(2, (1.0, 0.0, 1.0))

    @classmethod
    def from_direction(cls, angle: float, power: int) -> "SymTensor":
        """The symmetric tensor power u^power of the unit vector u(angle)."""
        c, s = math.cos(angle), math.sin(angle)
        i = np.arange(power + 1)
        return cls(power, (c ** (power - i)) * (s ** i))

    @classmethod
    def from_vector(cls, v, power: int) -> "SymTensor":
        x, y = float(v[0]), float(v[1])
        i = np.arange(power + 1)
        return cls(power, (x ** (power - i)) * (y ** i))

    def __add__(self, other: "SymTensor") -> "SymTensor":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return SymTensor(self.rank, self.coords + other.coords)

    def __sub__(self, other: "SymTensor") -> "SymTensor":
        if self.rank != other.rank:
            raise ValueError("rank mismatch")
        return SymTensor(self.rank, self.coords - other.coords)

    def __mul__(self, c: float) -> "SymTensor":
        return SymTensor(self.rank, self.coords * c)

    __rmul__ = __mul__

    def sym_product(self, other: "SymTensor") -> "SymTensor":
        """Symmetric tensor product (symmetrized outer product)."""
        p, q = self.rank, other.rank
        out = np.zeros(p + q + 1)
        tot = math.comb(p + q, p)
        for k in range(p + q + 1):
            acc = 0.0
            for j in range(max(0, k - q), min(p, k) + 1):
                w = math.comb(k, j) * math.comb(p + q - k, p - j) / tot
                acc += w * self.coords[j] * other.coords[k - j]
            out[k] = acc
        return SymTensor(p + q, out)

    def power(self, m: int) -> "SymTensor":
        """Repeated symmetric product, e.g. Q.power(2) = Q^2."""
        if m < 0:
            raise ValueError("power must be nonnegative")
        out = SymTensor(0, (1.0,))
        for _ in range(m):
            out = out.sym_product(self)
        return out

    def trace(self) -> "SymTensor":
        """Metric contraction over one index pair (rank drops by 2)."""
        if self.rank < 2:
            raise ValueError("rank must be at least 2")
        return SymTensor(self.rank - 2, self.coords[:-2] + self.coords[2:])

    def allclose(self, other: "SymTensor", atol: float = 1e-12) -> bool:
        return self.rank == other.rank and np.allclose(
            self.coords, other.coords, rtol=0.0, atol=atol)

    def __repr__(self):
        return f"SymTensor(rank={self.rank}, coords={np.array2string(self.coords, precision=6)})"


def circle_moment_coords(s: int) -> np.ndarray:
    """Coordinates of the full-circle integral of u^s (zero for odd s)."""
    out = np.empty(s + 1)
    for i in range(s + 1):
        out[i] = arc_trig_moment(s - i, i, 0.0, TWO_PI)
    return out


def arc_moment(s: int, a0: float, a1: float) -> SymTensor:
    """The tensor integral of u^s over the angle interval [a0, a1]."""
    out = np.empty(s + 1)
    for i in range(s + 1):
        out[i] = arc_trig_moment(s - i, i, a0, a1)
    return SymTensor(s, out)


# -- mixed area ----------------------------------------------------------------

def mixed_area(k: ConvexPolygon, m: ConvexPolygon) -> float:
    """Mixed area V(K, M), the cross term in area(K + M).

    Computed as half the integral of the support function of K against the
    edge-length measure of M; V(K, K) equals the area of K.
    """
    if k.is_empty or m.is_empty:
        return 0.0
    mu = area_measure(m, 1)
    if len(mu.angles) == 0:
        return 0.0
    vals = support_vector(k, mu.angles)
    return 0.5 * float(vals @ mu.masses)


def mixed_area_measure_pair(k: ConvexPolygon, mu: SphereMeasure) -> float:
    """Half-integral of h(K, .) against an arbitrary circle measure."""
    if k.is_empty:
        return 0.0
    acc = 0.0
    if len(mu.angles):
        acc += float(support_vector(k, mu.angles) @ mu.masses)
    if mu.density > 0.0:
        # full-circle integral of the support function = boundary length
        acc += mu.density * k.perimeter
    return 0.5 * acc


# -- Minkowski tensors -----------------------------------------------------------

def minkowski_tensor(k: ConvexPolygon, j: int, r: int, s: int,
                     cap: int = 8) -> SymTensor:
    """Minkowski tensor of rank r+s from the order-j support measure, j in {0,1}.

    Edge contributions are exact polynomial line integrals; vertex
    contributions are exact trigonometric arc integrals.  The rank-0 case
    reproduces the intrinsic volume V_j.
    """
    if j not in (0, 1):
        raise ValueError("tensor order j must be 0 or 1")
    if r < 0 or s < 0 or r + s > cap:
        raise ValueError(f"need r, s >= 0 with r + s <= {cap}")
    rank = r + s
    if k.is_empty:
        return SymTensor.zeros(rank)
    pieces = support_measure_pieces(k)
    const = c_tensor(2 - j, r, s)
    acc = SymTensor.zeros(rank)
    if j == 1:
        for (a, b), ang in pieces.edge_pieces:
            pos = _segment_position_moment(a, b, r)
            acc = acc + pos.sym_product(SymTensor.from_direction(ang, s))
        return const * 0.5 * acc
    for v, (a0, a1) in pieces.vertex_pieces:
        pos = SymTensor.from_vector(v, r)
        acc = acc + pos.sym_product(arc_moment(s, a0, a1))
    return const * (1.0 / TWO_PI) * acc


def _segment_position_moment(a, b, r: int) -> SymTensor:
    """Line integral of x^r along the segment [a, b]."""
    d = np.asarray(b, float) - np.asarray(a, float)
    length = float(np.hypot(*d))
    if r == 0:
        return SymTensor(0, (length,))
    acc = SymTensor.zeros(r)
    # x(t) = a + t (b-a), integrated over arclength: ds = L dt
    for i in range(r + 1):
        coef = math.comb(r, i) * length / (i + 1.0)
        term_a = SymTensor.from_vector(a, r - i) if r - i > 0 else SymTensor(0, (1.0,))
        term_d = SymTensor.from_vector(d, i) if i > 0 else SymTensor(0, (1.0,))
        acc = acc + coef * term_a.sym_product(term_d)
    return acc


# -- circular harmonics -----------------------------------------------------------

class HarmonicIndex(NamedTuple):
    """Index (l, p) into the real circular-harmonic basis.

    The basis is Y_{0,1} = 1, Y_{l,1} = sqrt(2) cos(l t), Y_{l,2} = sqrt(2) sin(l t),
    orthonormal for the scalar product with weight 1/(2 pi).
    """

    l: int
    p: int

    def validate(self) -> "HarmonicIndex":
        if self.l < 0:
            raise ValueError("harmonic degree must be nonnegative")
        if not 1 <= self.p <= harm_dim(2, self.l):
            raise ValueError(f"p out of range for degree {self.l}")
        return self


def harmonic_value(l: int, p: int, theta) -> np.ndarray:
    """Evaluate the basis function Y_{l,p} at angle(s) theta."""
    HarmonicIndex(l, p).validate()
    th = np.asarray(theta, dtype=float)
    if l == 0:
        return np.ones_like(th)
    if p == 1:
        return math.sqrt(2.0) * np.cos(l * th)
    return math.sqrt(2.0) * np.sin(l * th)


def measure_harmonic(mu: SphereMeasure, l: int, p: int) -> float:
    """Integral of Y_{l,p} against a circle measure."""
    if l == 0:
        return mu.total_mass
    c, s = mu.fourier(l)
    return math.sqrt(2.0) * (c if p == 1 else s)


def measure_harmonics_upto(mu: SphereMeasure, l_max: int) -> np.ndarray:
    """All integrals of Y_{l,p} for l <= l_max, laid out as
    [ (0,1), (1,1), (1,2), (2,1), (2,2), ... ]."""
    out = np.zeros(1 + 2 * l_max)
    out[0] = mu.total_mass
    if l_max >= 1 and len(mu.angles):
        ls = np.arange(1, l_max + 1)
        grid = np.outer(ls, mu.angles)
        out[1::2] = math.sqrt(2.0) * (np.cos(grid) @ mu.masses)
        out[2::2] = math.sqrt(2.0) * (np.sin(grid) @ mu.masses)
    return out


def measure_u_moments(mu: SphereMeasure, s: int) -> np.ndarray:
    """Coordinates of the tensor integral of u^s against a circle measure."""
    out = np.zeros(s + 1)
    if len(mu.angles):
        ca = np.cos(mu.angles)
        sa = np.sin(mu.angles)
        for i in range(s + 1):
            out[i] = mu.masses @ (ca ** (s - i) * sa ** i)
    if mu.density > 0.0:
        out += mu.density * circle_moment_coords(s)
    return out


def harmonic_iv(k: ConvexPolygon, j: int, idx) -> float:
    """Harmonic intrinsic volume: the (l, p) coefficient of the order-j area
    measure, normalized so that the (0, 1) coefficient is V_j."""
    l, p = idx
    HarmonicIndex(l, p).validate()
    if j not in (0, 1):
        raise ValueError("harmonic order j must be 0 or 1")
    if k.is_empty:
        return 0.0
    if j == 0:
        # the order-0 measure is uniform: only the constant survives
        return intrinsic_volumes(k)[0] if l == 0 else 0.0
    mu = area_measure(k, 1)
    return c_area(2, 1) * measure_harmonic(mu, l, p)


def rotation_average_harmonic(k: ConvexPolygon, j: int, idx,
                              order: int = 360) -> float:
    """Average of the (l, p) harmonic coefficient over `order` equispaced
    rotations of the body."""
    if order < 1:
        raise ValueError("quadrature order must be positive")
    l, p = idx
    if k.is_empty:
        return 0.0
    if j == 0:
        return harmonic_iv(k, 0, idx)
    mu = area_measure(k, 1)
    angles = TWO_PI * np.arange(order) / order
    acc = 0.0
    for a in angles:
        acc += measure_harmonic(mu.rotated(a), l, p)
    return c_area(2, 1) * acc / order


# -- centered support function ------------------------------------------------

def centered_support(k: ConvexPolygon, angles) -> np.ndarray:
    """Support function recentered at the Steiner point, h*(K, u)."""
    if k.is_empty:
        raise ValueError("centered support of the empty body is undefined")
    th = np.asarray(angles, dtype=float)
    s = steiner_point(k)
    u = np.column_stack([np.cos(th), np.sin(th)])
    return support_vector(k, th) - u @ s


# -- the valuation catalog ------------------------------------------------------

@dataclass(frozen=True)
class Valuation:
    """A vector-valued valuation: a named additive functional on convex bodies.

    ``fn`` maps a ConvexPolygon to a length-``size`` float array and must send
    the empty body to zeros.
    """

    name: str
    size: int
    fn: Callable[[ConvexPolygon], np.ndarray]

    def __call__(self, k: ConvexPolygon) -> np.ndarray:
        out = np.atleast_1d(np.asarray(self.fn(k), dtype=float))
        if out.shape != (self.size,):
            raise ValueError(f"valuation {self.name} returned shape {out.shape}")
        return out


def val_intrinsic(j: int) -> Valuation:
    if j not in (0, 1, 2):
        raise ValueError("j must be 0, 1 or 2")
    return Valuation(f"V{j}", 1, lambda k: np.array([intrinsic_volumes(k)[j]]))


def val_intrinsic_all() -> Valuation:
    return Valuation("V", 3, lambda k: np.array(intrinsic_volumes(k)))


def val_tensor(j: int, r: int, s: int) -> Valuation:
    return Valuation(f"Phi{j}^{r},{s}", r + s + 1,
                     lambda k: minkowski_tensor(k, j, r, s).coords)


def val_harmonic(j: int, l: int, p: int) -> Valuation:
    return Valuation(f"V{j}^{l},{p}", 1,
                     lambda k: np.array([harmonic_iv(k, j, (l, p))]))


def val_centered_support(angles) -> Valuation:
    th = np.asarray(angles, dtype=float)

    def fn(k: ConvexPolygon) -> np.ndarray:
        if k.is_empty:
            return np.zeros(len(th))
        return centered_support(k, th)

    return Valuation(f"h*[{len(th)}]", len(th), fn)
