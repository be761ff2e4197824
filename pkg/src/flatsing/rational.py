"""Exact planar arithmetic over rationals.

Points and vectors are plain ``(Fraction, Fraction)`` tuples: they hash, they
compare exactly, and they stay cheap in the hot loops of the developed-disk
search. All predicates here are exact; floats only appear in the ``*_f``
helpers used for pruning and reporting.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional, Tuple

Frac = Fraction
Vec = Tuple[Fraction, Fraction]

ZERO2: Vec = (Fraction(0), Fraction(0))


def frac(value) -> Fraction:
    """Coerce ints, Fractions, or 'p/q' strings to an exact Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"cannot coerce {value!r} to an exact rational")


def frac_str(value: Fraction) -> str:
    """Render a Fraction in the 'p/q' wire format (plain integer when q = 1)."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def vec(x, y) -> Vec:
    return (frac(x), frac(y))


def vadd(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def vsub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def vneg(a: Vec) -> Vec:
    return (-a[0], -a[1])


def vscale(k: Fraction, a: Vec) -> Vec:
    return (k * a[0], k * a[1])


def cross(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[1] - a[1] * b[0]


def dot(a: Vec, b: Vec) -> Fraction:
    return a[0] * b[0] + a[1] * b[1]


def norm2(a: Vec) -> Fraction:
    """Exact squared Euclidean norm."""
    return a[0] * a[0] + a[1] * a[1]


def dist2(a: Vec, b: Vec) -> Fraction:
    return norm2(vsub(a, b))


def vfloat(a: Vec) -> Tuple[float, float]:
    return (float(a[0]), float(a[1]))


def norm_f(a: Vec) -> float:
    return math.sqrt(float(norm2(a)))


def dist_f(a: Vec, b: Vec) -> float:
    return math.sqrt(float(dist2(a, b)))


def ray_line_params(origin: Vec, d: Vec, base: Vec, u: Vec) -> Optional[Tuple[Fraction, Fraction]]:
    """Solve origin + t*d = base + s*u exactly.

    Returns (t, s), or None when d and u are parallel.
    """
    det = cross(d, u)
    if det == 0:
        return None
    w = vsub(base, origin)
    t = cross(w, u) / det
    s = cross(w, d) / det
    return (t, s)


def segment_point(a: Vec, b: Vec, s: Fraction) -> Vec:
    """Point a + s*(b-a)."""
    return (a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))


def point_segment_dist2_f(p: Tuple[float, float], a: Tuple[float, float], b: Tuple[float, float]) -> float:
    """Float distance^2 from p to segment [a, b]; used only for pruning."""
    ax, ay = a
    bx, by = b
    px, py = p
    dx, dy = bx - ax, by - ay
    L2 = dx * dx + dy * dy
    if L2 <= 0.0:
        ex, ey = px - ax, py - ay
        return ex * ex + ey * ey
    s = ((px - ax) * dx + (py - ay) * dy) / L2
    if s < 0.0:
        s = 0.0
    elif s > 1.0:
        s = 1.0
    ex, ey = px - (ax + s * dx), py - (ay + s * dy)
    return ex * ex + ey * ey


def point_ray_dist2_f(p: Tuple[float, float], a: Tuple[float, float], d: Tuple[float, float]) -> float:
    """Float distance^2 from p to the ray a + t*d, t >= 0."""
    dx, dy = d
    L2 = dx * dx + dy * dy
    px, py = p
    s = ((px - a[0]) * dx + (py - a[1]) * dy) / L2
    if s < 0.0:
        s = 0.0
    ex, ey = px - (a[0] + s * dx), py - (a[1] + s * dy)
    return ex * ex + ey * ey
