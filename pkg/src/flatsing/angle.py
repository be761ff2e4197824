"""Directions as primitive rational vectors and angles with an exact pi-part.

Wedge angles of the fixtures are rational multiples of pi whenever the
bounding directions are related by quarter- or eighth-turns; keeping that
exact lets cone angles come out as exact 2*pi*k instead of floats. Angles
that are not recognized fall back to a float value (pi_part is None).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Optional

from .rational import Frac, Vec, cross, dot, frac, frac_str

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Direction:
    """A direction of the plane as a primitive integer vector.

    Two rational vectors that are positive scalar multiples reduce to the
    same primitive pair, so equality and hashing are exact.
    """

    vx: int
    vy: int

    def __post_init__(self):
        if self.vx == 0 and self.vy == 0:
            raise ValueError("zero vector has no direction")

    @staticmethod
    def of(x, y) -> "Direction":
        fx, fy = frac(x), frac(y)
        if fx == 0 and fy == 0:
            raise ValueError("zero vector has no direction")
        # clear denominators, then divide by gcd
        den = fx.denominator * fy.denominator // gcd(fx.denominator, fy.denominator)
        ix = int(fx * den)
        iy = int(fy * den)
        g = gcd(abs(ix), abs(iy))
        return Direction(ix // g, iy // g)

    @staticmethod
    def from_vec(v: Vec) -> "Direction":
        return Direction.of(v[0], v[1])

    @property
    def vector(self) -> Vec:
        return (Frac(self.vx), Frac(self.vy))

    @property
    def angle(self) -> float:
        """Float angle in [0, 2*pi)."""
        a = math.atan2(self.vy, self.vx)
        return a if a >= 0.0 else a + TWO_PI

    def reversed(self) -> "Direction":
        return Direction(-self.vx, -self.vy)

    def perp(self) -> "Direction":
        """Rotated a quarter turn counterclockwise."""
        return Direction(-self.vy, self.vx)

    def unit(self) -> tuple[float, float]:
        n = math.hypot(self.vx, self.vy)
        return (self.vx / n, self.vy / n)

    def __str__(self) -> str:
        return f"({self.vx},{self.vy})"

    def json(self) -> str:
        return f"{self.vx},{self.vy}"


@dataclass(frozen=True)
class Angle:
    """An angle (or angle difference), exact when it is a known multiple of pi/4.

    ``pi_part`` is the exact coefficient q with angle = q*pi, or None when only
    the float ``value`` is known. Arithmetic propagates exactness.
    """

    value: float
    pi_part: Optional[Fraction] = None

    @staticmethod
    def exact(pi_part) -> "Angle":
        q = frac(pi_part)
        return Angle(float(q) * math.pi, q)

    @staticmethod
    def inexact(value: float) -> "Angle":
        return Angle(value, None)

    @staticmethod
    def ccw_between(a: Direction, b: Direction) -> "Angle":
        """Counterclockwise angle from a to b, in [0, 2*pi).

        Exact multiples of pi/4 are detected from sign patterns of the dot
        and cross products; anything else is a float.
        """
        va, vb = a.vector, b.vector
        c = cross(va, vb)
        d = dot(va, vb)
        if c == 0:
            return Angle.exact(0) if d > 0 else Angle.exact(1)
        if d == 0:
            return Angle.exact(Fraction(1, 2)) if c > 0 else Angle.exact(Fraction(3, 2))
        if abs(c) == abs(d):
            if c > 0:
                return Angle.exact(Fraction(1, 4)) if d > 0 else Angle.exact(Fraction(3, 4))
            return Angle.exact(Fraction(7, 4)) if d > 0 else Angle.exact(Fraction(5, 4))
        raw = math.atan2(float(c), float(d))
        if raw < 0.0:
            raw += TWO_PI
        return Angle.inexact(raw)

    def __add__(self, other: "Angle") -> "Angle":
        if self.pi_part is not None and other.pi_part is not None:
            return Angle.exact(self.pi_part + other.pi_part)
        return Angle.inexact(self.value + other.value)

    def __sub__(self, other: "Angle") -> "Angle":
        if self.pi_part is not None and other.pi_part is not None:
            return Angle.exact(self.pi_part - other.pi_part)
        return Angle.inexact(self.value - other.value)

    def __neg__(self) -> "Angle":
        if self.pi_part is not None:
            return Angle.exact(-self.pi_part)
        return Angle.inexact(-self.value)

    def __lt__(self, other: "Angle") -> bool:
        if self.pi_part is not None and other.pi_part is not None:
            return self.pi_part < other.pi_part
        return self.value < other.value

    def __le__(self, other: "Angle") -> bool:
        if self.pi_part is not None and other.pi_part is not None:
            return self.pi_part <= other.pi_part
        return self.value <= other.value

    def is_multiple_of_two_pi(self) -> bool:
        if self.pi_part is not None:
            return self.pi_part % 2 == 0
        return abs(self.value / TWO_PI - round(self.value / TWO_PI)) < 1e-12

    def describe(self) -> str:
        if self.pi_part is not None:
            return f"{frac_str(self.pi_part)}*pi"
        return f"{self.value:.12g}"

    def json(self):
        return {
            "radians": self.value,
            "pi_multiple": frac_str(self.pi_part) if self.pi_part is not None else None,
        }
