"""Unit-speed geodesic tracing and linear approaches.

A trace advances an exact (cell, point, direction) state through boundary
crossings until it hits a singular vertex, exhausts its length budget,
escapes an unbounded cell, or leaves a locator window. Positions at crossing
events are exact rationals; only the final budget-truncation point and
reported lengths are floats.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from .angle import Angle, Direction
from .errors import (
    AmbiguousWedge,
    DirectionNotRealized,
    LocatorRangeExceeded,
    MalformedGeometry,
    NotShort,
)
from .rational import Vec, cross, dot, frac_str, norm2, vadd, vfloat, vscale, vsub
from .surface import EdgeRef, Site, SurfacePoint, TranslationSurface

HIT_SINGULAR = "hit_singular"
BUDGET = "budget"
ESCAPED = "escaped"
WINDOW = "window"

_LENGTH_GUARD = 1e-12


@dataclass
class PathSegment:
    cell: str
    start: Vec
    end: Vec
    length: float
    length2: Optional[Fraction]   # exact squared length when the endpoint is exact
    entered_by: Optional[EdgeRef] = None

    def json(self):
        return {
            "cell": self.cell,
            "start": [frac_str(self.start[0]), frac_str(self.start[1])],
            "end": [frac_str(self.end[0]), frac_str(self.end[1])],
            "length": self.length,
        }


@dataclass
class GeodesicPath:
    """A traced geodesic: exact segments plus a termination tag."""

    surface: TranslationSurface
    direction: Direction
    segments: List[PathSegment]
    termination: str
    hit_site: Optional[Site] = None
    hit_anchor: Optional[str] = None
    prefix: List[EdgeRef] = field(default_factory=list)

    @property
    def total_length(self) -> float:
        return sum(s.length for s in self.segments)

    @property
    def hit_length2(self) -> Optional[Fraction]:
        """Exact squared length to the singular hit, when every segment is exact."""
        if self.termination != HIT_SINGULAR:
            return None
        total = Fraction(0)
        for s in self.segments:
            if s.length2 is None:
                return None
            # exact only when segments are collinear pieces of one ray;
            # lengths add, so sum sqrt's exactly only if each is rational
            r = _sqrt_exact(s.length2)
            if r is None:
                return None
            total += r
        return total * total

    def point_at(self, s: float) -> Tuple[str, Tuple[float, float]]:
        """Float position at arclength s from the start (s <= total_length)."""
        remaining = s
        for seg in self.segments:
            if remaining <= seg.length + _LENGTH_GUARD:
                ax, ay = vfloat(seg.start)
                bx, by = vfloat(seg.end)
                if seg.length <= 0:
                    return seg.cell, (ax, ay)
                f = remaining / seg.length
                return seg.cell, (ax + f * (bx - ax), ay + f * (by - ay))
            remaining -= seg.length
        raise ValueError(f"parameter {s} beyond path length {self.total_length}")

    def cell_point_at(self, s: float) -> Tuple[str, Tuple[float, float]]:
        return self.point_at(s)

    def json(self):
        return {
            "direction": self.direction.json(),
            "termination": self.termination,
            "hit_anchor": self.hit_anchor,
            "total_length": self.total_length,
            "segments": [s.json() for s in self.segments],
        }


def _sqrt_exact(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    num = math.isqrt(q.numerator)
    den = math.isqrt(q.denominator)
    if num * num == q.numerator and den * den == q.denominator:
        return Fraction(num, den)
    return None


def _interior_normal(surface: TranslationSurface, e: EdgeRef) -> Vec:
    side = surface.side(e.cell, e.side)
    u = surface.edge_segment(e).dir_vec()
    n = (-u[1], u[0])
    return n if side.interior_left else (-n[0], -n[1])


def normalize_start(surface: TranslationSurface, point: SurfacePoint,
                    d: Direction) -> Tuple[str, Vec, Optional[str]]:
    """Resolve which cell a trajectory from an edge point enters; the third
    component names the side the trajectory runs along when d is edge-aligned."""
    if point.edge is None:
        return point.cell, point.point, None
    n = _interior_normal(surface, point.edge)
    s = dot(d.vector, n)
    if s == 0:
        return point.cell, point.point, point.edge.side
    if s > 0:
        return point.cell, point.point, None
    pe, ppoint = surface.cross_edge(point.edge, point.point)
    return pe.cell, ppoint, None


def trace(
    surface: TranslationSurface,
    start: Union[SurfacePoint, Tuple[str, Vec]],
    direction: Direction,
    budget: float,
    max_steps: int = 4096,
    on_side: Optional[str] = None,
) -> GeodesicPath:
    """Maximal unit-speed geodesic from start, up to `budget` of length.

    `on_side` names the side the trajectory initially runs along when it is
    edge-aligned; without it a run along one lip of a slit would be
    ambiguous, since both lips share planar coordinates.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    if isinstance(start, SurfacePoint):
        cell_id, pos, inferred = normalize_start(surface, start, direction)
        on_side = on_side or inferred
    else:
        cell_id, pos = start
    d = direction.vector
    dlen = math.sqrt(float(norm2(d)))
    segments: List[PathSegment] = []
    prefix: List[EdgeRef] = []
    remaining = float(budget)
    entered: Optional[EdgeRef] = None

    for _ in range(max_steps):
        cell = surface.cell(cell_id)
        try:
            if on_side is not None:
                r = cell.side(on_side).collinear_run(pos, d)
                run = (on_side, r[0], r[1]) if r is not None else None
            else:
                run = cell.collinear_run(pos, d)
            hit = cell.locate(pos, d)
        except LocatorRangeExceeded:
            return GeodesicPath(surface, direction, segments, WINDOW, prefix=prefix)

        # choose the nearest event: collinear breakpoint vs boundary hit
        event_t: Optional[Fraction] = None
        event_kind = None
        event_data = None
        if run is not None:
            event_t, event_kind, event_data = run[2], "breakpoint", run
        if hit is not None and (event_t is None or hit.hit.t < event_t):
            event_t, event_data = hit.hit.t, hit
            event_kind = "vertex" if hit.hit.vertex is not None else "crossing"

        if event_t is None:
            # escapes the unbounded cell: pad the remaining budget
            end = vadd(pos, vscale(Fraction(remaining / dlen).limit_denominator(10**15), d))
            segments.append(PathSegment(cell_id, pos, end, remaining, None, entered))
            return GeodesicPath(surface, direction, segments, ESCAPED, prefix=prefix)

        step_len = float(event_t) * dlen
        if step_len > remaining + _LENGTH_GUARD:
            tq = Fraction(remaining / dlen).limit_denominator(10**15)
            end = vadd(pos, vscale(tq, d))
            segments.append(PathSegment(cell_id, pos, end, remaining, None, entered))
            return GeodesicPath(surface, direction, segments, BUDGET, prefix=prefix)

        if event_kind == "breakpoint":
            side_id, _seg_index, t = event_data
            end = vadd(pos, vscale(t, d))
        else:
            rayhit = event_data.hit
            side_id = event_data.side_id
            end = rayhit.point
        segments.append(PathSegment(
            cell_id, pos, end, step_len, event_t * event_t * norm2(d), entered))
        remaining -= step_len

        if event_kind in ("breakpoint", "vertex"):
            singular = _resolve_vertex(surface, cell_id, end, side_id)
            if singular is not None:
                path = GeodesicPath(surface, direction, segments, HIT_SINGULAR, prefix=prefix)
                path.hit_site, path.hit_anchor = singular
                return path
            if remaining <= _LENGTH_GUARD:
                return GeodesicPath(surface, direction, segments, BUDGET, prefix=prefix)
            cell_id, pos, on_side = _through_flat(surface, cell_id, end, direction, side_id)
            entered = None
            continue

        if remaining <= _LENGTH_GUARD:
            return GeodesicPath(surface, direction, segments, BUDGET, prefix=prefix)

        # plain crossing into the glued partner cell
        e = EdgeRef(cell_id, side_id, rayhit.index)
        pe, ppoint = surface.cross_edge(e, end)
        prefix.append(e)
        entered = pe
        cell_id, pos = pe.cell, ppoint
        on_side = None

    return GeodesicPath(surface, direction, segments, WINDOW, prefix=prefix)


def _resolve_vertex(surface: TranslationSurface, cell_id: str, v: Vec, side_hint: str):
    """A trajectory reached a removed vertex: (site, anchor) when singular,
    None for a flat vertex class (the caller passes straight through)."""
    label = surface.anchor_of_vertex(cell_id, v, side_hint=side_hint)
    if label is None:
        return None
    try:
        site = surface.site_at(cell_id, v, side_hint=side_hint)
    except LocatorRangeExceeded:
        site = None
    return (site, label)


def _through_flat(surface: TranslationSurface, cell_id: str, v: Vec,
                  d: Direction, side_hint: str) -> Tuple[str, Vec, Optional[str]]:
    """Continue a trajectory straight through a flat vertex class: pick the
    wedge of the cycle realizing d; edge-aligned continuations keep the side."""
    cycle = surface.flat_cycle(cell_id, v, side_hint=side_hint)
    for site in cycle:
        if site.contains_direction(d):
            on_side = None
            for arm in (site.start, site.end):
                if arm.kind == "edge" and arm.direction == d:
                    on_side = arm.edge.side
            return site.cell, site.point, on_side
    raise MalformedGeometry(f"no wedge of the flat vertex at {v} admits {d}")


@dataclass(frozen=True)
class LinearApproach:
    """The germ of a unit-speed geodesic emanating from a completion point
    (site of an anchor) or from a flat surface point."""

    surface: TranslationSurface
    site: Optional[Site]
    flat_base: Optional[SurfacePoint]
    direction: Direction

    def __eq__(self, other):
        if not isinstance(other, LinearApproach):
            return NotImplemented
        return (
            self.surface is other.surface
            and self.base_key() == other.base_key()
            and self.direction == other.direction
        )

    def __hash__(self):
        return hash((id(self.surface), self.base_key(), self.direction))

    def base_key(self):
        if self.site is not None:
            return ("site", self.site.key)
        return ("flat", self.flat_base.cell, self.flat_base.point)

    @property
    def anchor_label(self) -> Optional[str]:
        return self.site.anchor if self.site is not None else None

    def start_state(self) -> Tuple[str, Vec]:
        if self.site is not None:
            return self.site.cell, self.site.point
        sp = self.flat_base
        return sp.cell, sp.point

    def germ(self, budget: float, max_steps: int = 4096) -> GeodesicPath:
        on_side = None
        if self.site is not None:
            for arm in (self.site.start, self.site.end):
                if arm.kind == "edge" and arm.direction == self.direction:
                    on_side = arm.edge.side
        return trace(self.surface, self.start_state(), self.direction, budget,
                     max_steps=max_steps, on_side=on_side)

    def angle(self) -> float:
        return self.direction.angle

    def json(self):
        base = self.site.key_str() if self.site else self.flat_base.json()
        return {"base": base, "direction": self.direction.json()}


def bp_dir(approach: LinearApproach):
    """Basepoint and direction of an approach (continuous maps on germs)."""
    if approach.site is not None:
        return approach.site.anchor, approach.direction
    return approach.flat_base, approach.direction


def linear_approach(
    surface: TranslationSurface,
    anchor_label: str,
    direction: Direction,
    site: Optional[Site] = None,
    site_key: Optional[tuple] = None,
) -> LinearApproach:
    """The approach from an anchor in a given direction.

    Raises DirectionNotRealized when no wedge of the anchor admits the
    direction and AmbiguousWedge when several do and no selector is passed.
    """
    anchor = surface.anchor(anchor_label)
    if site is not None:
        chosen = [site]
    elif site_key is not None:
        chosen = [s for s in anchor.sites if s.key == site_key]
    else:
        chosen = [s for s in anchor.sites if s.contains_direction(direction)]
    if not chosen:
        raise DirectionNotRealized(
            f"direction {direction} is in no wedge of anchor {anchor_label}"
        )
    if len(chosen) > 1:
        raise AmbiguousWedge(
            f"direction {direction} realized in {len(chosen)} wedges of "
            f"anchor {anchor_label}; pass a site selector"
        )
    if not chosen[0].contains_direction(direction):
        raise DirectionNotRealized(
            f"direction {direction} is not realized in the selected wedge"
        )
    return LinearApproach(surface, chosen[0], None, direction)


def flat_approach(surface: TranslationSurface, point: SurfacePoint,
                  direction: Direction) -> LinearApproach:
    """The unique approach with a flat basepoint and given direction."""
    return LinearApproach(surface, None, point, direction)


def maximal_length(approach: LinearApproach, cutoff: float) -> float:
    """ell_eps: min(cutoff, distance along the ray to the first singular hit)."""
    if cutoff <= 0:
        raise ValueError("cutoff must be positive")
    path = approach.germ(cutoff)
    if path.termination == HIT_SINGULAR:
        return min(cutoff, path.total_length)
    if path.termination == WINDOW:
        raise LocatorRangeExceeded("germ left the locator window before the cutoff")
    return cutoff


def sigma_pair(approach: LinearApproach, eps: float) -> LinearApproach:
    """The far-end approach of a saddle connection shorter than eps.

    An involution: applying it twice returns the original approach.
    """
    path = approach.germ(eps)
    if path.termination != HIT_SINGULAR or path.total_length >= eps:
        raise NotShort(f"approach has ell >= eps = {eps}")
    if path.hit_site is None:
        raise LocatorRangeExceeded("saddle-connection endpoint beyond the site window")
    back = approach.direction.reversed()
    if not path.hit_site.contains_direction(back):
        raise MalformedGeometry(
            "reversed direction not realized at the far endpoint wedge"
        )
    return LinearApproach(approach.surface, path.hit_site, None, back)


def uniform_distance(a1: LinearApproach, a2: LinearApproach, eps: float) -> Optional[float]:
    """Uniform metric sup_{0<t<eps} |gamma1(t) - gamma2(t)| for approaches that
    co-develop from one site; None (incomparable) otherwise."""
    if a1.base_key() != a2.base_key():
        return None
    u1, u2 = a1.direction.unit(), a2.direction.unit()
    gap = math.hypot(u1[0] - u2[0], u1[1] - u2[1])
    t1 = maximal_length(a1, eps)
    t2 = maximal_length(a2, eps)
    return min(eps, t1, t2) * gap
