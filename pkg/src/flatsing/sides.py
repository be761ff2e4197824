"""Boundary sides of cells.

A side is one boundary arc of a cell, split into sub-segments indexed by
integers. Finite sides store their breakpoints explicitly; infinite sides
(geometric subdivisions, parabola chord chains) expose closed-form segment
endpoints plus an index window beyond which queries raise
LocatorRangeExceeded. Ray queries use arbitrary rational direction vectors
and report the hit parameter t as the coefficient on that vector, so exact
affine reparametrizations (TransformedSide) compose without normalization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from .angle import Direction
from .errors import LocatorRangeExceeded, MalformedGeometry
from .rational import (
    Frac,
    Vec,
    cross,
    dist2,
    dot,
    frac,
    point_ray_dist2_f,
    point_segment_dist2_f,
    ray_line_params,
    vadd,
    vfloat,
    vsub,
)


@dataclass(frozen=True)
class SegGeom:
    """Geometry of one sub-segment: a bounded segment [a, b] or a ray from a."""

    a: Vec
    b: Optional[Vec] = None
    ray_dir: Optional[Vec] = None

    @property
    def is_ray(self) -> bool:
        return self.b is None

    def dir_vec(self) -> Vec:
        if self.b is not None:
            return vsub(self.b, self.a)
        assert self.ray_dir is not None
        return self.ray_dir


@dataclass(frozen=True)
class RayHit:
    """A forward intersection of a query ray with a side."""

    t: Fraction          # coefficient on the query direction vector
    point: Vec
    index: int           # sub-segment index
    vertex: Optional[Vec] = None   # set when the hit is exactly a removed vertex


@dataclass(frozen=True)
class EndArm:
    """Descriptor of one extreme end of a side, consumed by the site machinery.

    kind 'vertex': the side terminates at a finite endpoint (cell corner or
    slit end). kind 'tail': the subdivision accumulates at `point`; crossing
    is impossible there. kind 'open': the side runs to infinity.
    """

    kind: str                      # "vertex" | "tail" | "open"
    point: Optional[Vec]           # endpoint or accumulation point
    direction: Optional[Direction]  # from `point` along the side
    role: Optional[str]            # "start" | "end" (wedge role at this point)
    index: Optional[int] = None    # terminal segment index for vertex ends
    curves_inward: bool = False    # chain bends into the interior at the tail


def _arm_roles(interior_left: bool) -> Tuple[str, str]:
    """Roles of (arm at segment tail a, arm at segment head b).

    With the interior on the left of a->b, rotating counterclockwise off the
    a-arm enters the cell, so the a-arm opens the wedge.
    """
    return ("start", "end") if interior_left else ("end", "start")


class Side:
    """Base side: concrete classes provide segments and index bookkeeping."""

    def __init__(self, side_id: str, interior_left: bool, window: int):
        self.side_id = side_id
        self.interior_left = interior_left
        self.window = window

    # -- structure ---------------------------------------------------------

    def index_range(self) -> Tuple[Optional[int], Optional[int]]:
        raise NotImplementedError

    def segment(self, i: int) -> SegGeom:
        raise NotImplementedError

    def indices(self) -> range:
        """Window-clipped iterable of valid segment indices."""
        lo, hi = self.index_range()
        lo = -self.window if lo is None else lo
        hi = self.window if hi is None else hi
        return range(lo, hi + 1)

    def interior_vertex_indices(self) -> Iterable[int]:
        """Indices i such that segments i-1 and i share the vertex at segment(i).a."""
        lo, hi = self.index_range()
        first = (-self.window if lo is None else lo) + 1
        last = self.window if hi is None else hi
        return range(first, last + 1)

    def end_arms(self) -> List[EndArm]:
        raise NotImplementedError

    def check_index(self, i: int) -> None:
        lo, hi = self.index_range()
        if (lo is not None and i < lo) or (hi is not None and i > hi):
            raise MalformedGeometry(f"segment index {i} outside side {self.side_id}")
        if i < -self.window or i > self.window:
            raise LocatorRangeExceeded(
                f"segment index {i} beyond window {self.window} on side {self.side_id}"
            )

    # -- queries -----------------------------------------------------------

    def ray_hits(self, origin: Vec, d: Vec) -> List[RayHit]:
        """All strict-forward intersections with the side, t > 0, windowed.

        The default implementation scans the index window; straight sides
        override with a closed-form solve.
        """
        hits: List[RayHit] = []
        for i in self.indices():
            h = _ray_segment_hit(origin, d, self.segment(i), i)
            if h is not None:
                hits.append(h)
        return hits

    def collinear_run(self, origin: Vec, d: Vec) -> Optional[Tuple[int, Fraction]]:
        """If the ray runs along this side from origin, return (segment index, t of
        the next breakpoint ahead); None otherwise."""
        return None

    def segments_near(self, center_f: Tuple[float, float], radius_f: float) -> Iterable[int]:
        """Indices of sub-segments within radius of center (float prune, may
        over-report, never under-reports within the window)."""
        out = []
        r2 = radius_f * radius_f * (1.0 + 1e-9) + 1e-30
        for i in self.indices():
            if self._seg_dist2_f(i, center_f) <= r2:
                out.append(i)
        return out

    def _seg_dist2_f(self, i: int, p_f: Tuple[float, float]) -> float:
        seg = self.segment(i)
        if seg.is_ray:
            return point_ray_dist2_f(p_f, vfloat(seg.a), vfloat(seg.ray_dir))
        return point_segment_dist2_f(p_f, vfloat(seg.a), vfloat(seg.b))

    def transform(self, m: Tuple[Vec, Vec], b: Vec) -> "Side":
        return TransformedSide(self, m, b)

    def scheme_json(self) -> dict:
        raise NotImplementedError


def _ray_segment_hit(origin: Vec, d: Vec, seg: SegGeom, index: int) -> Optional[RayHit]:
    u = seg.dir_vec()
    sol = ray_line_params(origin, d, seg.a, u)
    if sol is None:
        return None
    t, s = sol
    if t <= 0:
        return None
    if seg.is_ray:
        if s < 0:
            return None
    elif s < 0 or s > 1:
        return None
    point = (origin[0] + t * d[0], origin[1] + t * d[1])
    vertex = None
    if s == 0:
        vertex = seg.a
    elif not seg.is_ray and s == 1:
        vertex = seg.b
    return RayHit(t=t, point=point, index=index, vertex=vertex)


class FiniteSide(Side):
    """A finite polyline side given by its breakpoint list (>= 2 points).

    Segments are indexed 0..n-2; the polyline need not be straight.
    """

    def __init__(self, side_id: str, points: Sequence[Vec], interior_left: bool, window: int = 64):
        super().__init__(side_id, interior_left, window)
        if len(points) < 2:
            raise MalformedGeometry(f"side {side_id}: needs at least two breakpoints")
        self.points = [tuple(map(frac, p)) for p in points]

    def index_range(self):
        return (0, len(self.points) - 2)

    def segment(self, i: int) -> SegGeom:
        self.check_index(i)
        return SegGeom(self.points[i], self.points[i + 1])

    def end_arms(self) -> List[EndArm]:
        role_a, role_b = _arm_roles(self.interior_left)
        first = self.segment(0)
        last = self.segment(len(self.points) - 2)
        return [
            EndArm("vertex", first.a, Direction.from_vec(first.dir_vec()), role_a, index=0),
            EndArm("vertex", last.b, Direction.from_vec(vsub(last.a, last.b)), role_b,
                   index=len(self.points) - 2),
        ]

    def collinear_run(self, origin: Vec, d: Vec):
        best = None
        for i in self.indices():
            seg = self.segment(i)
            u = seg.dir_vec()
            if cross(u, d) != 0 or cross(vsub(origin, seg.a), u) != 0:
                continue
            run = _collinear_next(origin, d, seg)
            if run is not None and (best is None or run < best[1]):
                best = (i, run)
        return best

    def scheme_json(self) -> dict:
        from .rational import frac_str
        return {
            "scheme": "segments",
            "points": [f"{frac_str(p[0])},{frac_str(p[1])}" for p in self.points],
        }


def _collinear_next(origin: Vec, d: Vec, seg: SegGeom) -> Optional[Fraction]:
    """For origin on the carrier of seg moving along d: ray parameter of the
    next segment endpoint strictly ahead, or None when none lies ahead."""
    dd = dot(d, d)
    ta = dot(vsub(seg.a, origin), d) / dd
    if seg.is_ray:
        # the apex is the only breakpoint of a ray segment
        return ta if ta > 0 else None
    tb = dot(vsub(seg.b, origin), d) / dd
    lo, hi = (ta, tb) if ta <= tb else (tb, ta)
    if hi <= 0:
        return None
    if lo > 0:
        return lo
    return hi


class RaySide(Side):
    """A single infinite ray from a finite endpoint (slit lips, half-plane edges)."""

    def __init__(self, side_id: str, apex: Vec, direction: Vec, interior_left: bool, window: int = 64):
        super().__init__(side_id, interior_left, window)
        self.apex = tuple(map(frac, apex))
        self.direction = tuple(map(frac, direction))

    def index_range(self):
        return (0, 0)

    def segment(self, i: int) -> SegGeom:
        self.check_index(i)
        return SegGeom(self.apex, None, self.direction)

    def end_arms(self) -> List[EndArm]:
        role_a, _ = _arm_roles(self.interior_left)
        return [
            EndArm("vertex", self.apex, Direction.from_vec(self.direction), role_a, index=0),
            EndArm("open", None, None, None),
        ]

    def collinear_run(self, origin: Vec, d: Vec):
        u = self.direction
        if cross(u, d) != 0 or cross(vsub(origin, self.apex), u) != 0:
            return None
        run = _collinear_next(origin, d, self.segment(0))
        if run is not None:
            return (0, run)
        return None

    def scheme_json(self) -> dict:
        from .rational import frac_str
        return {
            "scheme": "ray",
            "apex": f"{frac_str(self.apex[0])},{frac_str(self.apex[1])}",
            "direction": f"{frac_str(self.direction[0])},{frac_str(self.direction[1])}",
        }


class GeometricSide(Side):
    """A straight side subdivided geometrically: breakpoints at carrier
    parameter p_k = total - lead * ratio^k for k = 0, 1, 2, ...

    Segment k spans [p_k, p_{k+1}]; lengths shrink by `ratio` toward the
    accumulation point at parameter `total` (which is not a breakpoint but a
    declared completion-point member). Parameters are measured along the
    carrier direction, which is NOT required to be unit length: all positions
    are origin + p * u.
    """

    def __init__(
        self,
        side_id: str,
        origin: Vec,
        u: Vec,
        lead,
        ratio,
        interior_left: bool,
        total=None,
        window: int = 64,
    ):
        super().__init__(side_id, interior_left, window)
        self.origin = tuple(map(frac, origin))
        self.u = tuple(map(frac, u))
        self.lead = frac(lead)
        self.ratio = frac(ratio)
        if not (0 < self.ratio < 1) or self.lead <= 0:
            raise MalformedGeometry(f"side {side_id}: need 0 < ratio < 1 and lead > 0")
        # sum of lengths lead * (1 + ratio + ...) = lead / (1 - ratio)
        self.total = frac(total) if total is not None else self.lead / (1 - self.ratio)
        self._powers: List[Fraction] = [Fraction(1)]

    def _pow(self, k: int) -> Fraction:
        while len(self._powers) <= k:
            self._powers.append(self._powers[-1] * self.ratio)
        return self._powers[k]

    def param(self, k: int) -> Fraction:
        """Breakpoint parameter p_k (first-length lead/(1-ratio) scaling)."""
        # p_k = total - span * ratio^k with span = lead / (1 - ratio)
        span = self.lead / (1 - self.ratio)
        return self.total - span * self._pow(k)

    def point_at(self, p: Fraction) -> Vec:
        return (self.origin[0] + p * self.u[0], self.origin[1] + p * self.u[1])

    def breakpoint(self, k: int) -> Vec:
        return self.point_at(self.param(k))

    @property
    def accumulation_point(self) -> Vec:
        return self.point_at(self.total)

    def index_range(self):
        return (0, None)

    def segment(self, i: int) -> SegGeom:
        self.check_index(i)
        return SegGeom(self.breakpoint(i), self.breakpoint(i + 1))

    def index_of_param(self, p: Fraction) -> int:
        """Exact segment index containing carrier parameter p in [p_0, total)."""
        span = self.lead / (1 - self.ratio)
        rem = (self.total - p) / span  # = ratio^k at breakpoints
        if rem > 1 or rem <= 0:
            raise MalformedGeometry(f"parameter {p} outside side {self.side_id}")
        # find k with ratio^(k+1) < rem <= ratio^k  (segment k covers that range)
        lo, hi = 0, 1
        while self._pow(hi) >= rem:
            hi *= 2
            if hi > 4 * self.window:
                raise LocatorRangeExceeded(
                    f"parameter {p} deeper than window on side {self.side_id}"
                )
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if self._pow(mid) >= rem:
                lo = mid
            else:
                hi = mid
        k = lo
        if k > self.window:
            raise LocatorRangeExceeded(
                f"segment index {k} beyond window {self.window} on side {self.side_id}"
            )
        return k

    def end_arms(self) -> List[EndArm]:
        role_a, role_b = _arm_roles(self.interior_left)
        return [
            EndArm("vertex", self.breakpoint(0), Direction.from_vec(self.u), role_a, index=0),
            EndArm(
                "tail",
                self.accumulation_point,
                Direction.from_vec((-self.u[0], -self.u[1])),
                role_b,
            ),
        ]

    def ray_hits(self, origin: Vec, d: Vec) -> List[RayHit]:
        sol = ray_line_params(origin, d, self.origin, self.u)
        if sol is None:
            return []
        t, p = sol
        if t <= 0:
            return []
        if p < self.param(0) or p > self.total:
            return []
        point = (origin[0] + t * d[0], origin[1] + t * d[1])
        if p == self.total:
            # exact hit on the accumulation point
            return [RayHit(t=t, point=point, index=self.window, vertex=point)]
        k = self.index_of_param(p)
        vertex = point if p == self.param(k) or p == self.param(k + 1) else None
        return [RayHit(t=t, point=point, index=k, vertex=vertex)]

    def collinear_run(self, origin: Vec, d: Vec):
        if cross(self.u, d) != 0 or cross(vsub(origin, self.origin), self.u) != 0:
            return None
        uu = dot(self.u, self.u)
        ud = dot(self.u, d)
        p0 = dot(vsub(origin, self.origin), self.u) / uu
        if ud > 0:
            # toward the accumulation end: there is always a next breakpoint
            if p0 >= self.total:
                return None
            if p0 < self.param(0):
                k, target = 0, self.param(0)
            else:
                k = self.index_of_param(p0)
                target = self.param(k + 1)
        else:
            if p0 <= self.param(0) or p0 >= self.total:
                return None
            k = self.index_of_param(p0)
            if self.param(k) < p0:
                target = self.param(k)
            elif k == 0:
                return None
            else:
                k -= 1
                target = self.param(k)
        t = (target - p0) * uu / ud
        if t <= 0:
            return None
        return (k, t)

    def segments_near(self, center_f, radius_f):
        ox, oy = vfloat(self.origin)
        ux, uy = vfloat(self.u)
        un2 = ux * ux + uy * uy
        px = ((center_f[0] - ox) * ux + (center_f[1] - oy) * uy) / un2
        ex = center_f[0] - (ox + px * ux)
        ey = center_f[1] - (oy + px * uy)
        perp2 = ex * ex + ey * ey
        r2 = radius_f * radius_f
        if perp2 > r2 * (1.0 + 1e-9) + 1e-30:
            return []
        half_param = math.sqrt(max(r2 - perp2, 0.0) / un2)
        lo_k = self._index_near(px - half_param * (1 + 1e-12) - 1e-15, round_down=True)
        hi_k = self._index_near(px + half_param * (1 + 1e-12) + 1e-15, round_down=False)
        if hi_k < lo_k:
            return []
        return range(lo_k, min(hi_k, self.window) + 1)

    def _index_near(self, p_float: float, round_down: bool) -> int:
        span = float(self.lead / (1 - self.ratio))
        total = float(self.total)
        p0 = total - span
        if p_float <= p0:
            return 0
        rem = (total - p_float) / span
        if rem <= 0:
            return self.window
        k = math.log(rem) / math.log(float(self.ratio))
        k = int(math.floor(k)) - 1 if round_down else int(math.ceil(k)) + 1
        return max(0, min(k, self.window))

    def scheme_json(self) -> dict:
        from .rational import frac_str
        return {
            "scheme": "geometric",
            "origin": f"{frac_str(self.origin[0])},{frac_str(self.origin[1])}",
            "direction": f"{frac_str(self.u[0])},{frac_str(self.u[1])}",
            "lead": frac_str(self.lead),
            "ratio": frac_str(self.ratio),
            "total": frac_str(self.total),
        }


class ParabolaChainSide(Side):
    """Chord chain with vertices (x_sign * 2^n, y_sign * 2^(2n)), n in Z.

    Segment n joins vertex n to vertex n+1. The chain accumulates at the
    origin as n -> -infinity (tail, limiting direction (x_sign, 0)) and runs
    to infinity as n -> +infinity.
    """

    def __init__(self, side_id: str, x_sign: int, y_sign: int, interior_left: bool, window: int = 48):
        super().__init__(side_id, interior_left, window)
        self.x_sign = x_sign
        self.y_sign = y_sign

    def vertex(self, n: int) -> Vec:
        two_n = Fraction(2) ** n
        return (self.x_sign * two_n, self.y_sign * two_n * two_n)

    def index_range(self):
        return (None, None)

    def segment(self, i: int) -> SegGeom:
        self.check_index(i)
        return SegGeom(self.vertex(i), self.vertex(i + 1))

    def end_arms(self) -> List[EndArm]:
        role_a, _ = _arm_roles(self.interior_left)
        return [
            EndArm(
                "tail",
                (Fraction(0), Fraction(0)),
                Direction(self.x_sign, 0),
                role_a,
                curves_inward=True,
            ),
            EndArm("open", None, None, None),
        ]

    def scheme_json(self) -> dict:
        return {
            "scheme": "parabola",
            "x_sign": self.x_sign,
            "y_sign": self.y_sign,
        }


class TransformedSide(Side):
    """Exact affine image m*side + b of a base side (m rational, invertible)."""

    def __init__(self, base: Side, m: Tuple[Vec, Vec], b: Vec):
        super().__init__(base.side_id, _transformed_interior_left(base, m), base.window)
        self.base = base
        self.m = (tuple(map(frac, m[0])), tuple(map(frac, m[1])))
        self.b = tuple(map(frac, b))
        det = self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
        if det == 0:
            raise MalformedGeometry("singular matrix in side transform")
        self._inv = (
            (self.m[1][1] / det, -self.m[0][1] / det),
            (-self.m[1][0] / det, self.m[0][0] / det),
        )

    def _fwd(self, p: Vec) -> Vec:
        return (
            self.m[0][0] * p[0] + self.m[0][1] * p[1] + self.b[0],
            self.m[1][0] * p[0] + self.m[1][1] * p[1] + self.b[1],
        )

    def _fwd_vec(self, v: Vec) -> Vec:
        return (self.m[0][0] * v[0] + self.m[0][1] * v[1], self.m[1][0] * v[0] + self.m[1][1] * v[1])

    def _back(self, p: Vec) -> Vec:
        q = (p[0] - self.b[0], p[1] - self.b[1])
        return (
            self._inv[0][0] * q[0] + self._inv[0][1] * q[1],
            self._inv[1][0] * q[0] + self._inv[1][1] * q[1],
        )

    def _back_vec(self, v: Vec) -> Vec:
        return (
            self._inv[0][0] * v[0] + self._inv[0][1] * v[1],
            self._inv[1][0] * v[0] + self._inv[1][1] * v[1],
        )

    def index_range(self):
        return self.base.index_range()

    def segment(self, i: int) -> SegGeom:
        seg = self.base.segment(i)
        if seg.is_ray:
            return SegGeom(self._fwd(seg.a), None, self._fwd_vec(seg.ray_dir))
        return SegGeom(self._fwd(seg.a), self._fwd(seg.b))

    def end_arms(self) -> List[EndArm]:
        out = []
        for arm in self.base.end_arms():
            if arm.kind == "open":
                out.append(arm)
                continue
            direction = Direction.from_vec(self._fwd_vec(arm.direction.vector))
            role = arm.role
            if _det_sign(self.m) < 0 and role is not None:
                role = "end" if role == "start" else "start"
            out.append(EndArm(arm.kind, self._fwd(arm.point), direction, role,
                              index=arm.index, curves_inward=arm.curves_inward))
        return out

    def ray_hits(self, origin: Vec, d: Vec) -> List[RayHit]:
        hits = self.base.ray_hits(self._back(origin), self._back_vec(d))
        return [
            RayHit(t=h.t, point=self._fwd(h.point), index=h.index,
                   vertex=self._fwd(h.vertex) if h.vertex is not None else None)
            for h in hits
        ]

    def collinear_run(self, origin: Vec, d: Vec):
        return self.base.collinear_run(self._back(origin), self._back_vec(d))

    def scheme_json(self) -> dict:
        raise MalformedGeometry("transformed sides are in-memory only")


def _det_sign(m: Tuple[Vec, Vec]) -> int:
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    return 1 if det > 0 else -1


def _transformed_interior_left(base: Side, m: Tuple[Vec, Vec]) -> bool:
    return base.interior_left if _det_sign((tuple(map(frac, m[0])), tuple(map(frac, m[1])))) > 0 else not base.interior_left
