"""Cells: planar domains bounded by sides, with first-intersection queries."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .errors import MalformedGeometry
from .rational import Vec
from .sides import RayHit, Side


@dataclass(frozen=True)
class BoundaryHit:
    side_id: str
    hit: RayHit


class Cell:
    """A planar cell: bounded polygon or unbounded domain (plane minus slits).

    Sides carry their own subdivision and interior orientation; the cell just
    aggregates ray queries over them.
    """

    def __init__(self, cell_id: str, sides: List[Side], bounded: bool):
        self.cell_id = cell_id
        self.bounded = bounded
        self.sides: Dict[str, Side] = {}
        for s in sides:
            if s.side_id in self.sides:
                raise MalformedGeometry(f"duplicate side id {s.side_id} in cell {cell_id}")
            self.sides[s.side_id] = s

    def side(self, side_id: str) -> Side:
        try:
            return self.sides[side_id]
        except KeyError:
            raise MalformedGeometry(f"cell {self.cell_id} has no side {side_id}") from None

    def locate(self, origin: Vec, d: Vec) -> Optional[BoundaryHit]:
        """First boundary intersection strictly ahead of origin along d.

        Returns None when the ray escapes (possible only in unbounded cells).
        A hit exactly at a sub-segment endpoint carries hit.vertex. Hits are
        kept only when the ray approaches the side from the cell interior;
        this disambiguates coincident slit lips.
        """
        best: Optional[BoundaryHit] = None
        for sid, side in self.sides.items():
            for h in side.ray_hits(origin, d):
                seg = side.segment(h.index)
                u = seg.dir_vec()
                n = (-u[1], u[0]) if side.interior_left else (u[1], -u[0])
                if d[0] * n[0] + d[1] * n[1] > 0:
                    continue  # approaching from outside: the other lip's hit
                if best is None or h.t < best.hit.t or (
                    h.t == best.hit.t and best.hit.vertex is None and h.vertex is not None
                ):
                    best = BoundaryHit(sid, h)
        if best is None and self.bounded:
            raise MalformedGeometry(
                f"ray from {origin} along {d} misses the boundary of bounded cell {self.cell_id}"
            )
        return best

    def collinear_run(self, origin: Vec, d: Vec) -> Optional[Tuple[str, int, Fraction]]:
        """If the ray runs along a side through origin, the (side, segment,
        t-of-next-breakpoint) triple with the nearest breakpoint."""
        best = None
        for sid, side in self.sides.items():
            run = side.collinear_run(origin, d)
            if run is not None and (best is None or run[1] < best[2]):
                best = (sid, run[0], run[1])
        return best
