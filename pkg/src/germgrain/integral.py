"""Translative and kinematic integral geometry in the plane.

Multi-index bookkeeping for the mixed functionals, their exact evaluation at
n = 2 via the splitting rule, the |sin| kernel form of the mixed area, and
Monte Carlo estimators for the left-hand-side translation and motion
integrals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .geom2d import (ConvexPolygon, SphereMeasure, intrinsic_volumes,
                     minkowski_sum, reflect)
from .valuations import Valuation, c_upper, mixed_area

N_DIM = 2
TWO_PI = 2.0 * math.pi


# -- multi-indices --------------------------------------------------------------

def _bounded_compositions(total: int, k: int, lo: int, hi: int):
    """Tuples of length k with entries in [lo, hi] summing to total."""
    if k == 0:
        if total == 0:
            yield ()
        return
    # prune: remaining entries must be able to reach the target
    start = max(lo, total - hi * (k - 1))
    stop = min(hi, total - lo * (k - 1))
    for first in range(start, stop + 1):
        for rest in _bounded_compositions(total - first, k - 1, lo, hi):
            yield (first,) + rest


def enumerate_mix(j: int, k: int, n: int = N_DIM) -> list[tuple[int, ...]]:
    """All multi-indices (m_1, ..., m_k) with entries in {j, ..., n} summing
    to (k-1) n + j."""
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    if k < 1:
        raise ValueError("need k >= 1")
    target = (k - 1) * n + j
    return list(_bounded_compositions(target, k, j, n))


def enumerate_mix_reduced(j: int, n: int = N_DIM) -> list[tuple[int, ...]]:
    """The reduced index set: entries in {j, ..., n-1}, lengths 1 .. n-j."""
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    out: list[tuple[int, ...]] = []
    for s in range(1, n - j + 1):
        target = (s - 1) * n + j
        out.extend(_bounded_compositions(target, s, j, n - 1))
    return out


def mix_type(m: Sequence[int], n: int = N_DIM) -> int:
    """The homogeneity degree j recovered from a multi-index."""
    return sum(m) - (len(m) - 1) * n


# -- exact mixed functionals (n = 2) ----------------------------------------------

def mixed_functional_V(m: Sequence[int], bodies: Sequence[ConvexPolygon]) -> float:
    """Exact mixed intrinsic-volume functional V_m at n = 2.

    Every index equal to 2 splits off an area factor; the remaining core is a
    single intrinsic volume or the genuinely mixed V_{1,1}(K, M) =
    2 V(K, -M).
    """
    m = tuple(int(x) for x in m)
    if len(m) != len(bodies):
        raise ValueError("index length must match the number of bodies")
    j = mix_type(m)
    if not 0 <= j <= N_DIM or any(not j <= x <= N_DIM for x in m):
        raise ValueError(f"{m} is not a valid multi-index")
    value = 1.0
    core: list[int] = []
    for i, mi in enumerate(m):
        if mi == N_DIM:
            value *= intrinsic_volumes(bodies[i])[2]
        else:
            core.append(i)
    if not core:
        return value
    if len(core) == 1:
        ji = m[core[0]]
        return value * intrinsic_volumes(bodies[core[0]])[ji]
    if len(core) == 2 and m[core[0]] == 1 and m[core[1]] == 1:
        a, b = bodies[core[0]], bodies[core[1]]
        return value * 2.0 * mixed_area(a, reflect(b))
    raise ValueError(f"index {m} has no planar splitting")


def kernel_mixed_area(mu: SphereMeasure, nu: SphereMeasure) -> float:
    """The |sin| kernel form of the mixed area of reflected pairs,
    (1/8) double-integral of |sin(a - b)| against two circle measures.

    Agrees with mixed_area(K, reflect(M)) on S_1 measures whenever the
    odd-harmonic pairing of the two measures vanishes (in particular when
    either body is centrally symmetric, or for rotation-averaged measures).
    """
    acc = 0.0
    if len(mu.angles) and len(nu.angles):
        diff = mu.angles[:, None] - nu.angles[None, :]
        acc += float(mu.masses @ np.abs(np.sin(diff)) @ nu.masses)
    # a uniform factor integrates |sin| to 4 against any direction
    if mu.density > 0.0:
        acc += 4.0 * mu.density * nu.atom_mass
    if nu.density > 0.0:
        acc += 4.0 * nu.density * mu.atom_mass
    if mu.density > 0.0 and nu.density > 0.0:
        acc += 4.0 * TWO_PI * mu.density * nu.density
    return acc / 8.0


# -- Monte Carlo for the integral formulas ------------------------------------------

@dataclass(frozen=True)
class MCResult:
    """Monte Carlo estimate with componentwise standard errors."""

    est: np.ndarray
    stderr: np.ndarray
    samples: int

    def within(self, truth, nsigma: float = 3.0, floor: float = 1e-12) -> bool:
        t = np.atleast_1d(np.asarray(truth, dtype=float))
        return bool(np.all(np.abs(self.est - t) <= nsigma * self.stderr + floor))


def _fan_triangulation(p: ConvexPolygon):
    v = p.verts
    tri_a = np.repeat(v[:1], len(v) - 2, axis=0)
    tri_b = v[1:-1]
    tri_c = v[2:]
    areas = 0.5 * np.abs((tri_b[:, 0] - tri_a[:, 0]) * (tri_c[:, 1] - tri_a[:, 1])
                         - (tri_b[:, 1] - tri_a[:, 1]) * (tri_c[:, 0] - tri_a[:, 0]))
    return tri_a, tri_b, tri_c, areas


def sample_in_polygon(p: ConvexPolygon, rng: np.random.Generator,
                      n: int) -> np.ndarray:
    """n points uniform in a dim-2 convex polygon (fan triangulation)."""
    if p.dim != 2:
        raise ValueError("sampling domain must be two-dimensional")
    a, b, c, areas = _fan_triangulation(p)
    probs = areas / areas.sum()
    idx = rng.choice(len(areas), size=n, p=probs)
    r1 = np.sqrt(rng.random(n))[:, None]
    r2 = rng.random(n)[:, None]
    return (1 - r1) * a[idx] + r1 * (1 - r2) * b[idx] + r1 * r2 * c[idx]


def _mc_reduce(total: float, s: np.ndarray, s2: np.ndarray, n: int) -> MCResult:
    mean = s / n
    var = np.maximum(s2 / n - mean ** 2, 0.0)
    est = total * mean
    stderr = total * np.sqrt(var / n)
    return MCResult(est, stderr, n)


def _is_intrinsic_stack(phi: Valuation) -> bool:
    return phi.name == "V" and phi.size == 3


def translative_mc(phi: Valuation, k: ConvexPolygon, m: ConvexPolygon,
                   samples: int, seed) -> MCResult:
    """Unbiased Monte Carlo estimate of the translation integral of
    phi(K cap (M + x)) over the exact support K + (-M)."""
    if samples < 1:
        raise ValueError("need at least one sample")
    support = minkowski_sum(k, reflect(m))
    if support.dim != 2:
        return MCResult(np.zeros(phi.size), np.zeros(phi.size), samples)
    rng = np.random.default_rng(seed)
    xs = sample_in_polygon(support, rng, samples)
    total = support.area
    if _is_intrinsic_stack(phi) and k.dim == 2 and m.dim == 2:
        s, s2 = _kernels.translative_iv_batch(k.verts, m.verts, xs)
        return _mc_reduce(total, s, s2, samples)
    s = np.zeros(phi.size)
    s2 = np.zeros(phi.size)
    from .geom2d import intersect
    for x in xs:
        v = phi(intersect(k, m.translate(x)))
        s += v
        s2 += v * v
    return _mc_reduce(total, s, s2, samples)


def iterated_translative_mc(phi: Valuation, bodies: Sequence[ConvexPolygon],
                            samples: int, seed) -> MCResult:
    """Monte Carlo for the doubly iterated translation integral (k = 3)."""
    if len(bodies) != 3:
        raise ValueError("iterated driver expects exactly three bodies")
    k1, k2, k3 = bodies
    sup2 = minkowski_sum(k1, reflect(k2))
    sup3 = minkowski_sum(k1, reflect(k3))
    if sup2.dim != 2 or sup3.dim != 2:
        return MCResult(np.zeros(phi.size), np.zeros(phi.size), samples)
    rng = np.random.default_rng(seed)
    xs2 = sample_in_polygon(sup2, rng, samples)
    xs3 = sample_in_polygon(sup3, rng, samples)
    total = sup2.area * sup3.area
    if _is_intrinsic_stack(phi) and all(b.dim == 2 for b in bodies):
        s, s2 = _kernels.iterated_translative_iv_batch(
            k1.verts, k2.verts, k3.verts, xs2, xs3)
        return _mc_reduce(total, s, s2, samples)
    from .geom2d import intersect
    s = np.zeros(phi.size)
    s2 = np.zeros(phi.size)
    for x2, x3 in zip(xs2, xs3):
        cur = intersect(k1, k2.translate(x2))
        cur = intersect(cur, k3.translate(x3))
        v = phi(cur)
        s += v
        s2 += v * v
    return _mc_reduce(total, s, s2, samples)


def kinematic_mc(phi: Valuation, k: ConvexPolygon, m: ConvexPolygon,
                 samples: int, seed) -> MCResult:
    """Monte Carlo for the motion integral: uniform rotation (normalized)
    times Lebesgue translation over a box covering every rotated support."""
    if samples < 1:
        raise ValueError("need at least one sample")
    if k.dim != 2 or m.dim != 2:
        raise ValueError("kinematic driver expects two-dimensional bodies")
    rng = np.random.default_rng(seed)
    lo, hi = k.bbox()
    r = m.circumradius()
    lo = lo - r
    hi = hi + r
    box_area = float(np.prod(hi - lo))
    xs = lo + rng.random((samples, 2)) * (hi - lo)
    angles = rng.random(samples) * TWO_PI
    if _is_intrinsic_stack(phi):
        s, s2 = _kernels.kinematic_iv_batch(k.verts, m.verts, xs, angles)
        return _mc_reduce(box_area, s, s2, samples)
    from .geom2d import intersect
    s = np.zeros(phi.size)
    s2 = np.zeros(phi.size)
    for x, a in zip(xs, angles):
        v = phi(intersect(k, m.rotate(a).translate(x)))
        s += v
        s2 += v * v
    return _mc_reduce(box_area, s, s2, samples)


def pkf_rhs(j: int, k: ConvexPolygon, m: ConvexPolygon) -> float:
    """Closed right-hand side of the principal kinematic formula."""
    if j not in (0, 1, 2):
        raise ValueError("j must be 0, 1 or 2")
    vk = intrinsic_volumes(k)
    vm = intrinsic_volumes(m)
    return sum(c_upper(i, j) * c_upper(N_DIM + j - i, N_DIM) * vk[i] * vm[N_DIM + j - i]
               for i in range(j, N_DIM + 1))


def translative_rhs(j: int, bodies: Sequence[ConvexPolygon]) -> float:
    """Sum of the exact mixed functionals over mix(j, k)."""
    k = len(bodies)
    return sum(mixed_functional_V(m, bodies) for m in enumerate_mix(j, k))
