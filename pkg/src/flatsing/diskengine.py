"""Breadth-first development of disks: immersion radius, local distance,
saddle-connection enumeration.

The search develops every cell instance whose glued boundary meets the open
disk around a center, in order of increasing entry distance, and collects
singular vertex lifts. Offsets are exact, so instances deduplicate exactly;
distances are floats. Straight-line distance candidates are verified by
re-tracing, which keeps wrapped lifts of overlapping developments from
producing phantom shortcuts.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .angle import Direction
from .errors import DanglingEdge, LocatorRangeExceeded
from .rational import Vec, dist2, frac_str, vadd, vfloat, vsub
from .surface import EdgeRef, Site, SurfacePoint, TranslationSurface
from .tracer import HIT_SINGULAR, LinearApproach, trace

_EPS = 1e-12


@dataclass(frozen=True)
class Lift:
    """A singular vertex lift seen in the developed disk."""

    dist: float
    cell: str
    offset: Vec
    point: Vec          # local (undeveloped) coordinates
    anchor: str
    site_key: Optional[tuple]

    @property
    def developed(self) -> Vec:
        return vadd(self.point, self.offset)


@dataclass
class DiskResult:
    center: Tuple[float, float]
    cap: float
    instances: List[Tuple[str, Vec]]
    lifts: List[Lift]
    capped: bool
    confidence: float   # complete at least out to this radius

    @property
    def min_singular(self) -> Optional[float]:
        return self.lifts[0].dist if self.lifts else None


def disk_search(
    surface: TranslationSurface,
    cell_id: str,
    center_f: Tuple[float, float],
    cap: float,
    max_instances: int = 1500,
) -> DiskResult:
    """Develop all cell instances meeting the open disk of radius `cap`.

    Instances are visited in order of increasing entry distance, so when the
    instance budget is exhausted the result is still complete out to the
    nearest unexplored crossing (`confidence`).
    """
    start_key = (cell_id, (Fraction(0), Fraction(0)))
    heap: List[Tuple[float, int, str, Vec]] = [(0.0, 0, cell_id, start_key[1])]
    seen: Set[Tuple[str, Vec]] = set()
    lifts: Dict[Tuple[str, Vec, Vec], Lift] = {}
    instances: List[Tuple[str, Vec]] = []
    capped = False
    confidence = cap
    counter = 1

    while heap:
        entry_dist, _, cid, offset = heapq.heappop(heap)
        key = (cid, offset)
        if key in seen:
            continue
        if len(instances) >= max_instances:
            capped = True
            confidence = min(confidence, entry_dist)
            break
        seen.add(key)
        instances.append(key)
        try:
            cell = surface.cell(cid)
        except LocatorRangeExceeded:
            capped = True
            confidence = min(confidence, entry_dist)
            continue
        off_f = vfloat(offset)
        local = (center_f[0] - off_f[0], center_f[1] - off_f[1])

        for sid in sorted(cell.sides):
            side = cell.sides[sid]
            # singular lifts at accumulation points
            for arm in side.end_arms():
                if arm.kind != "tail":
                    continue
                d = math.hypot(local[0] - float(arm.point[0]),
                               local[1] - float(arm.point[1]))
                if d < cap:
                    _note_lift(surface, lifts, d, cid, offset, arm.point, sid)
            try:
                candidates = list(side.segments_near(local, cap))
            except LocatorRangeExceeded:
                capped = True
                confidence = min(confidence, entry_dist)
                continue
            for i in candidates:
                try:
                    seg = side.segment(i)
                except LocatorRangeExceeded:
                    capped = True
                    continue
                for v in (seg.a, seg.b):
                    if v is None:
                        continue
                    d = math.hypot(local[0] - float(v[0]), local[1] - float(v[1]))
                    if _EPS < d < cap:
                        _note_lift(surface, lifts, d, cid, offset, v, sid)
                seg_dist = side._seg_dist2_f(i, local) ** 0.5
                if seg_dist >= cap:
                    continue
                try:
                    e = EdgeRef(cid, sid, i)
                    t = surface.edge_translation(e)
                    pe = surface.edge_partner(e)
                except (DanglingEdge, LocatorRangeExceeded):
                    capped = True
                    confidence = min(confidence, max(seg_dist, entry_dist))
                    continue
                noffset = vsub(offset, t)
                nkey = (pe.cell, noffset)
                if nkey not in seen:
                    heapq.heappush(heap, (max(seg_dist, entry_dist), counter,
                                          pe.cell, noffset))
                    counter += 1

    if heap and not capped:
        pass
    out = sorted(lifts.values(), key=lambda L: (L.dist, L.cell, L.site_key or ()))
    return DiskResult(center_f, cap, instances, out, capped, confidence)


def _note_lift(surface, lifts, d, cid, offset, point, side_hint):
    try:
        label = surface.anchor_of_vertex(cid, point, side_hint=side_hint)
    except LocatorRangeExceeded:
        label = surface.anchor_label if surface.anchor_mode == "merge_all" else None
    if label is None:
        return  # flat vertex class: not singular
    try:
        site = surface.site_at(cid, point, side_hint=side_hint)
        skey = site.key
    except Exception:
        skey = None
    key = (cid, offset, point)
    prev = lifts.get(key)
    if prev is None or d < prev.dist:
        lifts[key] = Lift(d, cid, offset, point, label, skey)


def immersion_radius(
    surface: TranslationSurface,
    point: SurfacePoint,
    cap: float,
    max_instances: int = 1500,
) -> float:
    """min(cap, distance from the point to the singular set)."""
    center = vfloat(point.point)
    res = disk_search(surface, point.cell, center, cap, max_instances)
    if res.min_singular is None:
        return cap
    return min(cap, res.min_singular)


def immersion_radius_at(
    surface: TranslationSurface,
    cell_id: str,
    center_f: Tuple[float, float],
    cap: float,
    max_instances: int = 1500,
) -> float:
    res = disk_search(surface, cell_id, center_f, cap, max_instances)
    if res.min_singular is None:
        return cap
    return min(cap, res.min_singular)


def _rationalize(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10**12)


def local_distance(
    surface: TranslationSurface,
    cell_p: str,
    p_f: Tuple[float, float],
    cell_q: str,
    q_f: Tuple[float, float],
    cap: float,
    max_instances: int = 1200,
) -> Optional[float]:
    """d_X(p, q) whenever it does not exceed cap; None otherwise.

    Straight candidates come from lifts of q's cell in the developed disk and
    are verified by re-tracing; one-bend paths through a common singular
    anchor are also considered (shortest paths may pivot at a singularity).
    """
    if cell_p == cell_q:
        d0 = math.hypot(p_f[0] - q_f[0], p_f[1] - q_f[1])
    else:
        d0 = None

    res_p = disk_search(surface, cell_p, p_f, cap, max_instances)
    best: Optional[float] = None

    # straight candidates, nearest first, verified by tracing
    cands = []
    for cid, offset in res_p.instances:
        if cid != cell_q:
            continue
        off = vfloat(offset)
        d = math.hypot(p_f[0] - q_f[0] - off[0], p_f[1] - q_f[1] - off[1])
        if d < cap:
            cands.append((d, off))
    cands.sort()
    for d, off in cands:
        if best is not None and d >= best:
            break
        if d < 1e-12:
            best = d if best is None or d < best else best
            break
        if _verify_straight(surface, cell_p, p_f, cell_q, q_f, off, d):
            best = d if best is None or d < best else best
            break

    # one-bend paths through a shared singular anchor
    res_q = disk_search(surface, cell_q, q_f, cap, max_instances)
    near_p: Dict[str, float] = {}
    for L in res_p.lifts:
        near_p[L.anchor] = min(near_p.get(L.anchor, math.inf), L.dist)
    for L in res_q.lifts:
        if L.anchor in near_p:
            bend = near_p[L.anchor] + L.dist
            if bend < cap and (best is None or bend < best):
                best = bend

    if best is not None and best <= cap:
        return best
    return None


def _verify_straight(surface, cell_p, p_f, cell_q, q_f, off, d) -> bool:
    """Check that the straight developed segment from p to the lift of q is a
    genuine geodesic on the surface by tracing it."""
    p = (_rationalize(p_f[0]), _rationalize(p_f[1]))
    dx = q_f[0] + off[0] - p_f[0]
    dy = q_f[1] + off[1] - p_f[1]
    try:
        direction = Direction.of(_rationalize(dx), _rationalize(dy))
    except ValueError:
        return False
    try:
        path = trace(surface, (cell_p, p), direction, d * (1 + 1e-9) + 1e-15,
                     max_steps=512)
    except Exception:
        return False
    if path.termination == HIT_SINGULAR and path.total_length < d * (1 - 1e-9):
        return False
    if not path.segments:
        return False
    last = path.segments[-1]
    if last.cell != cell_q:
        return False
    ex, ey = vfloat(last.end)
    return math.hypot(ex - q_f[0], ey - q_f[1]) <= max(1e-9, 1e-9 * d)


@dataclass
class SaddleConnection:
    """A finite critical trajectory between anchor sites, with its two
    boundary approaches paired by the sigma involution."""

    surface: TranslationSurface
    start_site: Site
    end_site: Site
    direction: Direction
    holonomy: Vec             # exact displacement from start apex to end apex
    length2: Fraction
    start_anchor: str
    end_anchor: str

    @property
    def length(self) -> float:
        return math.sqrt(float(self.length2))

    def approaches(self) -> Tuple[LinearApproach, LinearApproach]:
        a = LinearApproach(self.surface, self.start_site, None, self.direction)
        b = LinearApproach(self.surface, self.end_site, None, self.direction.reversed())
        return a, b

    def canonical_key(self):
        k1 = (self.start_site.key, self.direction.vx, self.direction.vy)
        k2 = (self.end_site.key, -self.direction.vx, -self.direction.vy)
        return (self.length2,) + (min(k1, k2), max(k1, k2))

    def json(self):
        return {
            "start": self.start_site.key_str(),
            "end": self.end_site.key_str(),
            "direction": self.direction.json(),
            "holonomy": [frac_str(self.holonomy[0]), frac_str(self.holonomy[1])],
            "length": self.length,
        }


@dataclass
class ConnectionSearch:
    connections: List[SaddleConnection]
    complete: bool
    confidence: float


def saddle_connections(
    surface: TranslationSurface,
    anchor_label: str,
    l_max: float,
    max_instances: int = 900,
    max_sites: Optional[int] = None,
) -> ConnectionSearch:
    """All saddle connections of length <= l_max issuing from the anchor,
    each unoriented connection reported once; interior clearance is verified
    by tracing every candidate.

    The search is complete up to `confidence` (= l_max when nothing was
    window- or budget-capped).
    """
    anchor = surface.anchor(anchor_label)
    sites = sorted(anchor.sites, key=lambda s: s.key)
    if max_sites is not None:
        sites = sites[:max_sites]
    found: Dict[tuple, SaddleConnection] = {}
    complete = True
    confidence = l_max

    for site in sites:
        res = disk_search(surface, site.cell, vfloat(site.point), l_max * (1 + 1e-9),
                          max_instances=max_instances)
        if res.capped:
            complete = False
            confidence = min(confidence, res.confidence)
        for lift in res.lifts:
            vec_exact = vsub(lift.developed, site.point)
            if vec_exact == (0, 0):
                continue
            length2 = dist2(lift.developed, site.point)
            if float(length2) > l_max * l_max * (1 + 1e-9):
                continue
            direction = Direction.from_vec(vec_exact)
            if not site.contains_direction(direction):
                continue
            conn = _verify_connection(surface, site, direction, length2, vec_exact,
                                      anchor_label)
            if conn is None:
                continue
            key = conn.canonical_key()
            if key not in found:
                found[key] = conn

    out = sorted(found.values(),
                 key=lambda c: (c.length2, c.direction.angle,
                                c.holonomy[0], c.holonomy[1]))
    return ConnectionSearch(out, complete, confidence)


def _verify_connection(surface, site, direction, length2, holonomy, anchor_label):
    length = math.sqrt(float(length2))
    approach = LinearApproach(surface, site, None, direction)
    try:
        path = approach.germ(length * (1 + 1e-9) + 1e-15)
    except Exception:
        return None
    if path.termination != HIT_SINGULAR or path.hit_site is None:
        return None
    exact2 = path.hit_length2
    if exact2 is not None:
        if exact2 != length2:
            return None
    elif abs(path.total_length - length) > 1e-9 * max(1.0, length):
        return None
    end_site = path.hit_site
    if not end_site.contains_direction(direction.reversed()):
        return None
    return SaddleConnection(
        surface, site, end_site, direction, holonomy, length2,
        anchor_label, path.hit_anchor or anchor_label,
    )


def in_basis_set(
    approach: LinearApproach,
    x: SurfacePoint,
    r: float,
    t: float,
    max_instances: int = 1200,
) -> bool:
    """Membership of the approach in the basis set around (x, r) at time t:
    the approach must have a representative longer than t whose point at time
    t lies within surface distance r of x."""
    if r <= 0 or t <= 0:
        raise ValueError("r and t must be positive")
    path = approach.germ(t * (1 + 1e-9) + 1e-12)
    if path.termination == HIT_SINGULAR and path.total_length <= t * (1 + 1e-12):
        return False  # no representative of length > t
    cell, pt = path.point_at(min(t, path.total_length))
    d = local_distance(approach.surface, cell, pt, x.cell, vfloat(x.point),
                       r * (1 + 1e-9), max_instances)
    return d is not None and d < r
