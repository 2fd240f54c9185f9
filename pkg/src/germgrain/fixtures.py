"""Built-in fixture bodies and models used by the verification suites.

The translative fixture pairs each contain at least one centrally symmetric
body, so the |sin|-kernel form of the mixed area is exact on every pair
(the odd-harmonic pairing vanishes); the translative Monte Carlo checks
themselves are valid for arbitrary convex bodies.
"""

from __future__ import annotations

import math

from .boolmodel import BooleanModelSpec, GrainModel, OrientationLaw, ScaleLaw
from .geom2d import ConvexPolygon, Window, rect, regular_ngon, square


def triangle_right() -> ConvexPolygon:
    return ConvexPolygon([(0, 0), (1, 0), (0, 2)])


def triangle_irregular() -> ConvexPolygon:
    return ConvexPolygon([(0, 0), (1, 0), (0.3, 0.8)])


def diamond(r: float = 1.0) -> ConvexPolygon:
    return ConvexPolygon([(r, 0), (0, r), (-r, 0), (0, -r)])


def pentagon() -> ConvexPolygon:
    return regular_ngon(5, 0.8)


def fixture_pairs() -> list[tuple[str, ConvexPolygon, ConvexPolygon]]:
    """Six labelled convex-body pairs for the translation-integral checks."""
    return [
        ("square/square", square(1.0), square(1.0)),
        ("rect/square", rect(2.0, 1.0), square(1.0)),
        ("triangle/square", triangle_right(), square(1.5)),
        ("hexagon/rect", regular_ngon(6, 1.0), rect(1.5, 0.5)),
        ("disk64/triangle", regular_ngon(64, 1.0), triangle_irregular()),
        ("diamond/pentagon", diamond(1.0), pentagon()),
    ]


def kinematic_pairs() -> list[tuple[str, ConvexPolygon, ConvexPolygon]]:
    """Four pairs for the motion-integral checks, including the disk pair."""
    return [
        ("disk/disk", regular_ngon(64, 1.0), regular_ngon(64, 1.0)),
        ("square/square", square(1.0), square(1.0)),
        ("rect/triangle", rect(2.0, 1.0), triangle_irregular()),
        ("hexagon/diamond", regular_ngon(6, 1.0), diamond(0.7)),
    ]


def disk_model(gamma: float = 50.0, r: float = 0.05, m: int = 128,
               pad: float = 0.02) -> BooleanModelSpec:
    """Isotropic Boolean model of disk-like grains (regular m-gons).

    The window wraps the central unit cell with margin r_max + pad, the
    minimum for the boundary-corrected estimator.
    """
    grain = GrainModel(regular_ngon(m, r), orientation=OrientationLaw.uniform())
    margin = grain.r_max + pad
    window = Window(-margin, -margin, 1.0 + margin, 1.0 + margin)
    return BooleanModelSpec(gamma=gamma, grain=grain, window=window)


def square_model(gamma: float = 30.0, side: float = 0.1,
                 pad: float = 0.02) -> BooleanModelSpec:
    """Anisotropic Boolean model: fixed-orientation squares."""
    grain = GrainModel(square(side), orientation=OrientationLaw.fixed(0.0))
    margin = grain.r_max + pad
    window = Window(-margin, -margin, 1.0 + margin, 1.0 + margin)
    return BooleanModelSpec(gamma=gamma, grain=grain, window=window)
