"""Translation surfaces: cells glued by translations, completion-point sites.

The surface owns the gluing table, the lazily built index of boundary sites
(vertex and accumulation points with their bounding wedges), the partition of
sites into completion points, and structural validation. All positions are
exact rationals; angles carry an exact pi-part whenever the bounding
directions allow it.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .angle import Angle, Direction
from .cell import BoundaryHit, Cell
from .errors import (
    DanglingEdge,
    LocatorRangeExceeded,
    MalformedGeometry,
    UnresolvedIdentification,
)
from .rational import Vec, cross, dist2, dot, frac, frac_str, norm2, vadd, vsub
from .sides import FiniteSide, GeometricSide, ParabolaChainSide, RaySide, SegGeom, Side

FORMAT = "flatsing-surface/1"


@dataclass(frozen=True)
class EdgeRef:
    """Address of one glued sub-segment: (cell, side, segment index)."""

    cell: str
    side: str
    index: int

    def key(self):
        return (self.cell, self.side, self.index)

    def json(self):
        return [self.cell, self.side, self.index]


@dataclass(frozen=True)
class Arm:
    """One of the two boundary directions bounding a wedge at a site."""

    kind: str                      # "edge" | "tail"
    direction: Direction           # outward from the site point
    edge: Optional[EdgeRef] = None
    tail_side: Optional[str] = None
    curves_inward: bool = False


@dataclass
class Site:
    """A boundary point of one cell together with its interior wedge.

    ``start``/``end`` bound the wedge: rotating counterclockwise from the
    start arm sweeps through the interior and reaches the end arm after
    ``wedge``. Degenerate wedges (both arms tails in the same direction at a
    cusp) have wedge = 0 and realize a single direction. On slit boundaries
    the two lips carry distinct sites at equal planar coordinates; ``marker``
    disambiguates them (the side id for interior subdivision vertices).
    """

    cell: str
    point: Vec
    start: Arm
    end: Arm
    wedge: Angle
    marker: str = ""
    anchor: Optional[str] = None
    flat: bool = False

    @property
    def key(self):
        return (self.cell, self.point[0], self.point[1], self.marker)

    def key_str(self) -> str:
        tag = f"#{self.marker}" if self.marker else ""
        return f"{self.cell}:{frac_str(self.point[0])},{frac_str(self.point[1])}{tag}"

    def sides_touched(self) -> set:
        out = set()
        for arm in (self.start, self.end):
            if arm.kind == "edge":
                out.add(arm.edge.side)
            else:
                out.add(arm.tail_side)
        return out

    def contains_direction(self, d: Direction) -> bool:
        """Whether a germ in direction d emanates from this wedge.

        Closed at an arm iff the arm is a crossable edge (the germ then runs
        along the glued segment); open at accumulation tails. A degenerate
        wedge (cusp) realizes exactly its single direction.
        """
        on_start = d == self.start.direction
        on_end = d == self.end.direction
        if on_start or on_end:
            if self.wedge.value == 0.0 and self.wedge.pi_part == 0:
                # cusp between two tails: the single axis direction is realized
                return True
            return (on_start and self.start.kind == "edge") or (
                on_end and self.end.kind == "edge"
            )
        if self.wedge.pi_part == 0 and self.wedge.value == 0.0:
            return False
        a = Angle.ccw_between(self.start.direction, d)
        if a.value == 0.0:
            return False
        return a < self.wedge


@dataclass
class SiteClass:
    """A union-find class of sites joined by corner crossings."""

    sites: List[Site]
    total_angle: Angle
    closed: bool
    has_tail: bool

    @property
    def is_flat(self) -> bool:
        return self.closed and not self.has_tail and self.total_angle.pi_part == 2


@dataclass
class Anchor:
    """A declared completion point (singularity) with its known sites."""

    label: str
    sites: List[Site] = field(default_factory=list)

    def site_at(self, cell: str, point: Vec) -> Optional[Site]:
        for s in self.sites:
            if s.cell == cell and s.point == point:
                return s
        return None


@dataclass(frozen=True)
class SurfacePoint:
    """A point of the open surface, with the edge it sits on when applicable."""

    cell: str
    point: Vec
    edge: Optional[EdgeRef] = None

    def json(self):
        return {
            "cell": self.cell,
            "point": f"{frac_str(self.point[0])},{frac_str(self.point[1])}",
            "edge": self.edge.json() if self.edge else None,
        }


@dataclass
class ValidationReport:
    surface_name: str
    checks: Dict[str, str] = field(default_factory=dict)
    violations: List[str] = field(default_factory=list)
    flat_vertex_classes: int = 0
    anchor_isolation: Dict[str, Optional[float]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def json(self):
        return {
            "surface": self.surface_name,
            "ok": self.ok,
            "checks": dict(sorted(self.checks.items())),
            "violations": list(self.violations),
            "flat_vertex_classes": self.flat_vertex_classes,
            "anchor_isolation": {
                k: (v if v is not None else "unbounded")
                for k, v in sorted(self.anchor_isolation.items())
            },
        }


class TranslationSurface:
    """A translation surface built from cells, gluings, and declarations.

    ``gluings`` maps (cell, side) to (cell', side', a, b): sub-segment i of
    one side is glued to sub-segment a*i + b of the other. Translation
    vectors are derived from the exact segment endpoints, so a gluing is
    fully determined by the combinatorics.
    """

    def __init__(
        self,
        name: str,
        cells: Sequence[Cell],
        gluings: Dict[Tuple[str, str], Tuple[str, str, int, int]],
        anchor_mode: str = "walk",
        anchor_label: str = "x",
        area: Optional[Fraction] = None,
        cell_family: Optional["CellFamily"] = None,
        params: Optional[dict] = None,
        window: int = 64,
    ):
        self.name = name
        self.params = params or {}
        self.window = window
        self._cells: Dict[str, Cell] = {c.cell_id: c for c in cells}
        self._gluings = dict(gluings)
        for (c, s), (c2, s2, a, b) in list(gluings.items()):
            if a not in (1, -1):
                raise MalformedGeometry("index maps must have slope +-1")
            if (c2, s2) not in self._gluings:
                # inverse of j = a*i + b is i = a*j - a*b
                self._gluings[(c2, s2)] = (c, s, a, -a * b)
        self.anchor_mode = anchor_mode
        self.anchor_label = anchor_label
        self.area = area
        self.family = cell_family
        self._lock = threading.RLock()
        self._cell_sites: Dict[str, Dict[tuple, Site]] = {}
        self._classes: Optional[List[SiteClass]] = None
        self._anchors: Optional[Dict[str, Anchor]] = None
        self._generation = 0
        self._resolved_generation = -1

    # -- cells and gluing ---------------------------------------------------

    def cell(self, cell_id: str) -> Cell:
        c = self._cells.get(cell_id)
        if c is not None:
            return c
        if self.family is not None:
            c = self.family.materialize(cell_id, self)
            if c is not None:
                with self._lock:
                    if cell_id not in self._cells:
                        self._cells[cell_id] = c
                        self._generation += 1
                return self._cells[cell_id]
        raise MalformedGeometry(f"unknown cell {cell_id}")

    def cell_ids(self) -> List[str]:
        return sorted(self._cells.keys())

    def side(self, cell_id: str, side_id: str) -> Side:
        return self.cell(cell_id).side(side_id)

    def partner_side(self, cell_id: str, side_id: str) -> Tuple[str, str, int, int]:
        key = (cell_id, side_id)
        got = self._gluings.get(key)
        if got is None and self.family is not None:
            got = self.family.partner(cell_id, side_id)
        if got is None:
            raise DanglingEdge(f"side {cell_id}/{side_id} has no gluing partner")
        return got

    def edge_partner(self, e: EdgeRef) -> EdgeRef:
        c2, s2, a, b = self.partner_side(e.cell, e.side)
        return EdgeRef(c2, s2, a * e.index + b)

    def edge_segment(self, e: EdgeRef) -> SegGeom:
        return self.side(e.cell, e.side).segment(e.index)

    def edge_translation(self, e: EdgeRef) -> Vec:
        """Exact translation carrying sub-segment e onto its partner."""
        pe = self.edge_partner(e)
        seg = self.edge_segment(e)
        pseg = self.edge_segment(pe)
        d1 = Direction.from_vec(seg.dir_vec())
        d2 = Direction.from_vec(pseg.dir_vec())
        if d1 == d2:
            return vsub(pseg.a, seg.a)
        if d1 == d2.reversed():
            if pseg.is_ray or seg.is_ray:
                raise MalformedGeometry(f"ray gluing with reversed orientation at {e}")
            return vsub(pseg.b, seg.a)
        raise MalformedGeometry(f"glued segments not parallel at {e} / {pe}")

    def cross_edge(self, e: EdgeRef, point: Vec) -> Tuple[EdgeRef, Vec]:
        """Carry a point of edge e to the glued partner edge."""
        t = self.edge_translation(e)
        return self.edge_partner(e), vadd(point, t)

    def canonical_edge_point(self, e: EdgeRef, point: Vec) -> SurfacePoint:
        """The lexicographically smaller of the two glued representatives."""
        pe, ppoint = self.cross_edge(e, point)
        if pe.key() < e.key():
            return SurfacePoint(pe.cell, ppoint, pe)
        return SurfacePoint(e.cell, point, e)

    def develop(self, start_cell: str, prefix: Sequence[EdgeRef]) -> List[Vec]:
        """Offsets o_i of the developed cells along a crossing chain.

        Cell k of the chain is drawn translated by o_k; crossing edge e with
        translation t continues the picture with offset o - t.
        """
        offsets: List[Vec] = [(Fraction(0), Fraction(0))]
        current = start_cell
        for e in prefix:
            if e.cell != current:
                raise MalformedGeometry(f"prefix not connected at {e}")
            t = self.edge_translation(e)
            offsets.append(vsub(offsets[-1], t))
            current = self.edge_partner(e).cell
        return offsets

    # -- sites and anchors ---------------------------------------------------

    def sites(self) -> Dict[tuple, Site]:
        """All sites of the currently materialized cells."""
        with self._lock:
            out: Dict[tuple, Site] = {}
            for cell_id in self.cell_ids():
                out.update(self._sites_of_cell(cell_id))
            return out

    def _sites_of_cell(self, cell_id: str) -> Dict[tuple, Site]:
        with self._lock:
            cached = self._cell_sites.get(cell_id)
            if cached is None:
                cached = self._build_cell_sites(cell_id)
                self._cell_sites[cell_id] = cached
            return cached

    def _build_cell_sites(self, cell_id: str) -> Dict[tuple, Site]:
        cell = self._cells[cell_id]
        sites: Dict[tuple, Site] = {}

        def make_site(point: Vec, armlist: List[Arm], marker: str):
            start, end = self._assign_roles(cell_id, point, armlist)
            wedge = Angle.ccw_between(start.direction, end.direction)
            if wedge.pi_part == 0:
                cusp = start.curves_inward or end.curves_inward
                wedge = Angle.exact(0) if cusp else Angle.exact(2)
            site = Site(cell_id, point, start, end, wedge, marker=marker)
            sites[site.key] = site

        # interior subdivision vertices pair their own side's two arms
        for sid, side in cell.sides.items():
            for i in side.interior_vertex_indices():
                try:
                    seg_prev = side.segment(i - 1)
                    seg = side.segment(i)
                except LocatorRangeExceeded:
                    continue
                v = seg.a
                make_site(v, [
                    Arm("edge", Direction.from_vec(seg.dir_vec()),
                        edge=EdgeRef(cell_id, sid, i)),
                    Arm("edge", Direction.from_vec(vsub(seg_prev.a, v)),
                        edge=EdgeRef(cell_id, sid, i - 1)),
                ], marker=sid)

        # side extremes and accumulation tails group by planar point
        groups: Dict[tuple, List[Arm]] = {}
        for sid, side in cell.sides.items():
            for end_arm in side.end_arms():
                if end_arm.kind == "open":
                    continue
                if end_arm.kind == "vertex":
                    arm = Arm("edge", end_arm.direction,
                              edge=EdgeRef(cell_id, sid, end_arm.index))
                else:
                    arm = Arm("tail", end_arm.direction, tail_side=sid,
                              curves_inward=end_arm.curves_inward)
                groups.setdefault((end_arm.point[0], end_arm.point[1]), []).append(arm)
        for (x, y), armlist in groups.items():
            if len(armlist) != 2:
                raise MalformedGeometry(
                    f"boundary point {(x, y)} of cell {cell_id} has {len(armlist)} end arms"
                )
            make_site((x, y), armlist, marker="")
        return sites

    def _assign_roles(self, cell_id: str, point: Vec, armlist: List[Arm]) -> Tuple[Arm, Arm]:
        roles = [self._arm_role(cell_id, a) for a in armlist]
        if roles == ["start", "end"]:
            return armlist[0], armlist[1]
        if roles == ["end", "start"]:
            return armlist[1], armlist[0]
        raise MalformedGeometry(
            f"inconsistent boundary orientation at {point} of cell {cell_id}: roles {roles}"
        )

    def _arm_role(self, cell_id: str, arm: Arm) -> str:
        if arm.kind == "tail":
            side = self.side(cell_id, arm.tail_side)
            for end_arm in side.end_arms():
                if end_arm.kind == "tail" and end_arm.direction == arm.direction:
                    return end_arm.role
            raise MalformedGeometry("tail arm does not match its side")
        e = arm.edge
        side = self.side(e.cell, e.side)
        seg = side.segment(e.index)
        at_a = Direction.from_vec(seg.dir_vec()) == arm.direction
        if side.interior_left:
            return "start" if at_a else "end"
        return "end" if at_a else "start"

    def site_at(self, cell_id: str, point: Vec, side_hint: Optional[str] = None) -> Site:
        """The site at an exact boundary point; disambiguate coincident slit
        lips with the side that reported the point."""
        self.cell(cell_id)
        cell_sites = self._sites_of_cell(cell_id)
        matches = [
            s for s in cell_sites.values()
            if s.point == (point[0], point[1])
        ]
        if side_hint is not None:
            hinted = [s for s in matches if side_hint in s.sides_touched()]
            if hinted:
                matches = hinted
        if not matches:
            raise LocatorRangeExceeded(
                f"no site at {point} in cell {cell_id} within window {self.window}"
            )
        if len(matches) > 1:
            raise MalformedGeometry(
                f"ambiguous site at {point} in cell {cell_id}; pass a side hint"
            )
        return matches[0]

    def cross_site(self, site: Site, arm: Arm) -> Site:
        """Follow an edge arm across its gluing; the apex maps to the partner
        endpoint, which is a site of the same completion point."""
        if arm.kind != "edge":
            raise MalformedGeometry("cannot cross an accumulation tail")
        pe, ppoint = self.cross_edge(arm.edge, site.point)
        return self.site_at(pe.cell, ppoint, side_hint=pe.side)

    def classes(self) -> List[SiteClass]:
        with self._lock:
            if self._classes is None or self._resolved_generation != self._generation:
                self._anchors = None
                self._classes = self._build_classes()
                self._resolved_generation = self._generation
            return self._classes

    def _build_classes(self) -> List[SiteClass]:
        sites = self.sites()
        parent: Dict[tuple, tuple] = {k: k for k in sites}

        def find(k):
            while parent[k] != k:
                parent[k] = parent[parent[k]]
                k = parent[k]
            return k

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        unresolved = set()
        for key, site in sites.items():
            for arm in (site.start, site.end):
                if arm.kind != "edge":
                    continue
                try:
                    pe = self.edge_partner(arm.edge)
                except DanglingEdge:
                    unresolved.add(key)
                    continue
                if pe.cell not in self._cells:
                    unresolved.add(key)  # never materialize cells just to classify
                    continue
                ppoint = vadd(site.point, self.edge_translation(arm.edge))
                try:
                    other = self.site_at(pe.cell, ppoint, side_hint=pe.side)
                except LocatorRangeExceeded:
                    unresolved.add(key)
                    continue
                if other.key in parent:
                    union(key, other.key)
                else:
                    unresolved.add(key)

        groups: Dict[tuple, List[Site]] = {}
        for key, site in sites.items():
            groups.setdefault(find(key), []).append(site)

        out: List[SiteClass] = []
        for members in groups.values():
            members.sort(key=lambda s: s.key)
            total = Angle.exact(0)
            for s in members:
                total = total + s.wedge
            has_tail = any(
                a.kind == "tail" for s in members for a in (s.start, s.end)
            )
            closed = not has_tail and not any(s.key in unresolved for s in members)
            cls = SiteClass(members, total, closed, has_tail)
            for s in members:
                s.flat = cls.is_flat
            out.append(cls)
        out.sort(key=lambda c: c.sites[0].key)
        return out

    def anchors(self) -> Dict[str, Anchor]:
        classes = self.classes()
        with self._lock:
            if self._anchors is not None:
                return self._anchors
        anchors: Dict[str, Anchor] = {}
        if self.anchor_mode == "merge_all":
            a = Anchor(self.anchor_label)
            for cls in classes:
                if cls.is_flat:
                    continue
                for s in cls.sites:
                    s.anchor = a.label
                    a.sites.append(s)
            if a.sites:
                anchors[a.label] = a
        else:
            n = 0
            for cls in classes:
                if cls.is_flat:
                    continue
                if cls.has_tail or not cls.closed:
                    raise UnresolvedIdentification(
                        "a corner walk left the window without closing; "
                        "declare the identification explicitly"
                    )
                label = f"p{n}"
                n += 1
                a = Anchor(label)
                for s in cls.sites:
                    s.anchor = label
                    a.sites.append(s)
                anchors[label] = a
        with self._lock:
            self._anchors = anchors
        return anchors

    def anchor(self, label: str) -> Anchor:
        anchors = self.anchors()
        if label not in anchors:
            raise MalformedGeometry(f"no anchor {label}; have {sorted(anchors)}")
        return anchors[label]

    def anchor_of_vertex(self, cell_id: str, point: Vec,
                         side_hint: Optional[str] = None) -> Optional[str]:
        """Anchor label of a removed vertex, or None for a flat vertex class."""
        self.anchors()
        try:
            site = self.site_at(cell_id, point, side_hint=side_hint)
        except LocatorRangeExceeded:
            # beyond the site window: membership by declaration
            if self.anchor_mode == "merge_all":
                return self.anchor_label
            raise
        return site.anchor if not site.flat else None

    def flat_cycle(self, cell_id: str, point: Vec,
                   side_hint: Optional[str] = None) -> List[Site]:
        """The closed wedge cycle around a flat vertex, in crossing order."""
        first = self.site_at(cell_id, point, side_hint=side_hint)
        cycle = [first]
        site = first
        while True:
            site = self.cross_site(site, site.end)
            if site.key == first.key:
                return cycle
            cycle.append(site)
            if len(cycle) > 4 * self.window:
                raise MalformedGeometry("flat cycle does not close")

    # -- validation -----------------------------------------------------------

    def validate(self, sample_budget: int = 20) -> ValidationReport:
        """Structural checks on sampled finite data; raises MalformedGeometry
        on hard gluing inconsistencies."""
        report = ValidationReport(self.name)
        edges = list(self._sample_edges(sample_budget))

        for e in edges:
            pe = self.edge_partner(e)
            back = self.edge_partner(pe)
            if back != e:
                raise MalformedGeometry(f"gluing is not an involution at {e}")
            seg, pseg = self.edge_segment(e), self.edge_segment(pe)
            u, pu = seg.dir_vec(), pseg.dir_vec()
            if cross(u, pu) != 0:
                raise MalformedGeometry(f"glued segments not parallel at {e}")
            if not seg.is_ray and not pseg.is_ray and norm2(u) != norm2(pu):
                raise MalformedGeometry(
                    f"glued segments of different length at {e} / {pe}"
                )
            t = self.edge_translation(e)
            tp = self.edge_translation(pe)
            if vadd(t, tp) != (0, 0):
                raise MalformedGeometry(f"translations not opposite at {e}")
            side = self.side(e.cell, e.side)
            pside = self.side(pe.cell, pe.side)
            d1, d2 = Direction.from_vec(u), Direction.from_vec(pu)
            same_dir = d1 == d2
            if same_dir == (side.interior_left == pside.interior_left):
                raise MalformedGeometry(
                    f"glued interiors on the same side at {e} / {pe}"
                )
        report.checks["gluing_involution"] = f"pass ({len(edges)} edges)"
        report.checks["gluing_geometry"] = "pass"

        sites = self.sites()
        report.checks["vertex_sites"] = f"pass ({len(sites)} sites)"

        classes = self.classes()
        report.flat_vertex_classes = sum(1 for c in classes if c.is_flat)
        anchors = self.anchors()
        if self.anchor_mode == "merge_all":
            for cls in classes:
                if cls.is_flat:
                    report.violations.append(
                        f"declared singular class at {cls.sites[0].key_str()} "
                        "is a forbidden flat point"
                    )
        report.checks["flat_point_convention"] = (
            "pass" if not report.violations else "violations found"
        )

        # discreteness estimate: distance between sites of distinct anchors
        labels = sorted(anchors)
        for label in labels:
            best = None
            for other in labels:
                if other == label:
                    continue
                for s1 in anchors[label].sites[:sample_budget]:
                    for s2 in anchors[other].sites[:sample_budget]:
                        d2_ = dist2(s1.point, s2.point) if s1.cell == s2.cell else None
                        if d2_ is not None and (best is None or d2_ < best):
                            best = d2_
            report.anchor_isolation[label] = float(best) ** 0.5 if best is not None else None
        report.checks["discreteness"] = "pass (sampled)"
        return report

    def _sample_edges(self, budget: int) -> Iterable[EdgeRef]:
        for cell_id in self.cell_ids():
            cell = self._cells[cell_id]
            for sid in sorted(cell.sides):
                side = cell.sides[sid]
                idxs = sorted(side.indices(), key=abs)[:budget]
                for i in sorted(idxs):
                    yield EdgeRef(cell_id, sid, i)

    # -- serialization ---------------------------------------------------------

    def to_json(self) -> dict:
        cells_json = []
        for cell_id in self.cell_ids():
            cell = self._cells[cell_id]
            sides_json = []
            for sid in sorted(cell.sides):
                side = cell.sides[sid]
                entry = {"id": sid, "interior_left": side.interior_left,
                         "window": side.window}
                entry.update(side.scheme_json())
                sides_json.append(entry)
            cells_json.append({"id": cell_id, "bounded": cell.bounded, "sides": sides_json})
        gluings_json = []
        seen = set()
        for (c, s), (c2, s2, a, b) in sorted(self._gluings.items()):
            if ((c2, s2), (c, s)) in seen:
                continue
            seen.add(((c, s), (c2, s2)))
            gluings_json.append({"a": [c, s], "b": [c2, s2], "index_map": [a, b]})
        return {
            "format": FORMAT,
            "name": self.name,
            "params": self.params,
            "window": self.window,
            "area": frac_str(self.area) if self.area is not None else None,
            "anchors": {"mode": self.anchor_mode, "label": self.anchor_label},
            "cell_family": self.family.json() if self.family else None,
            "cells": cells_json,
            "gluings": gluings_json,
        }

    def digest(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


class CellFamily:
    """Lazily materialized cell family (bi-infinite chains of half-planes)."""

    def __init__(self, scheme: str, cap: int, builder: Callable[[int], Cell],
                 partner_fn: Callable[[str, str], Optional[Tuple[str, str, int, int]]]):
        self.scheme = scheme
        self.cap = cap
        self._builder = builder
        self._partner_fn = partner_fn

    def materialize(self, cell_id: str, surface: TranslationSurface) -> Optional[Cell]:
        idx = self.parse_id(cell_id)
        if idx is None:
            return None
        if abs(idx) > self.cap:
            raise LocatorRangeExceeded(
                f"cell index {idx} beyond instantiation cap {self.cap}"
            )
        return self._builder(idx)

    def partner(self, cell_id: str, side_id: str):
        return self._partner_fn(cell_id, side_id)

    @staticmethod
    def parse_id(cell_id: str) -> Optional[int]:
        if ":" not in cell_id:
            return None
        head, _, tail = cell_id.partition(":")
        try:
            return int(tail)
        except ValueError:
            return None

    def json(self):
        return {"scheme": self.scheme, "cap": self.cap}


def _parse_point(text: str) -> Vec:
    x, _, y = text.partition(",")
    return (frac(x), frac(y))


def _side_from_json(entry: dict) -> Side:
    sid = entry["id"]
    il = bool(entry["interior_left"])
    window = int(entry.get("window", 64))
    scheme = entry["scheme"]
    if scheme == "segments":
        pts = [_parse_point(p) for p in entry["points"]]
        return FiniteSide(sid, pts, il, window)
    if scheme == "ray":
        return RaySide(sid, _parse_point(entry["apex"]), _parse_point(entry["direction"]), il, window)
    if scheme == "geometric":
        return GeometricSide(
            sid,
            _parse_point(entry["origin"]),
            _parse_point(entry["direction"]),
            frac(entry["lead"]),
            frac(entry["ratio"]),
            il,
            total=frac(entry["total"]),
            window=window,
        )
    if scheme == "parabola":
        return ParabolaChainSide(sid, int(entry["x_sign"]), int(entry["y_sign"]), il, window)
    raise MalformedGeometry(f"unknown side scheme {scheme}")


def load_surface(doc: dict) -> TranslationSurface:
    """Rebuild a surface from its JSON description (inverse of to_json).

    Lazy cell families are reconstructed for the known schemes.
    """
    if doc.get("format") != FORMAT:
        raise MalformedGeometry(f"unsupported format {doc.get('format')!r}")
    cells = []
    for centry in doc["cells"]:
        sides = [_side_from_json(s) for s in centry["sides"]]
        cells.append(Cell(centry["id"], sides, bool(centry["bounded"])))
    gluings = {}
    for g in doc["gluings"]:
        a, b = tuple(g["a"]), tuple(g["b"])
        am, bm = g["index_map"]
        gluings[(a[0], a[1])] = (b[0], b[1], am, bm)
    anchors = doc.get("anchors", {"mode": "walk", "label": "x"})
    family = None
    fam = doc.get("cell_family")
    if fam is not None:
        from .examples import family_from_json

        family = family_from_json(fam)
    area = frac(doc["area"]) if doc.get("area") else None
    return TranslationSurface(
        doc.get("name", "surface"),
        cells,
        gluings,
        anchor_mode=anchors.get("mode", "walk"),
        anchor_label=anchors.get("label", "x"),
        area=area,
        cell_family=family,
        params=doc.get("params", {}),
        window=int(doc.get("window", 64)),
    )
