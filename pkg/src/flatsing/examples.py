"""Constructors for the standard surfaces used throughout the package.

Each constructor emits a TranslationSurface whose sides carry closed-form
locators, and declares the singularity identification where corner walks
cannot close (infinitely subdivided boundaries).
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Optional, Tuple

from .cell import Cell
from .errors import MalformedGeometry
from .rational import frac
from .sides import FiniteSide, GeometricSide, ParabolaChainSide, RaySide
from .surface import CellFamily, TranslationSurface


def square_torus(window: int = 64) -> TranslationSurface:
    """Unit square with opposite sides glued; no singular anchors."""
    cell = Cell(
        "T",
        [
            FiniteSide("bottom", [(0, 0), (1, 0)], interior_left=True),
            FiniteSide("top", [(0, 1), (1, 1)], interior_left=False),
            FiniteSide("left", [(0, 0), (0, 1)], interior_left=False),
            FiniteSide("right", [(1, 0), (1, 1)], interior_left=True),
        ],
        bounded=True,
    )
    gluings = {
        ("T", "bottom"): ("T", "top", 1, 0),
        ("T", "left"): ("T", "right", 1, 0),
    }
    return TranslationSurface(
        "square_torus", [cell], gluings, anchor_mode="walk",
        area=Fraction(1), window=window,
    )


def chamanara(alpha=Fraction(1, 2), window: int = 64) -> TranslationSurface:
    """The baker's-map surface: unit square, each edge subdivided geometrically.

    Top edge left-to-right and bottom right-to-left carry segments of lengths
    (1-alpha)*alpha^(k-1) glued by translation, and likewise left
    top-to-bottom against right bottom-to-top. At alpha = 1/2 the segment
    lengths are exactly 2^-k. All subdivision endpoints, the four corners,
    and the accumulation corners form a single completion point.
    """
    a = frac(alpha)
    if not (0 < a < 1):
        raise MalformedGeometry(f"alpha must be in (0,1), got {a}")
    lead = 1 - a
    cell = Cell(
        "SQ",
        [
            GeometricSide("top", (0, 1), (1, 0), lead, a, interior_left=False, window=window),
            GeometricSide("bottom", (1, 0), (-1, 0), lead, a, interior_left=False, window=window),
            GeometricSide("left", (0, 1), (0, -1), lead, a, interior_left=True, window=window),
            GeometricSide("right", (1, 0), (0, 1), lead, a, interior_left=True, window=window),
        ],
        bounded=True,
    )
    gluings = {
        ("SQ", "top"): ("SQ", "bottom", 1, 0),
        ("SQ", "left"): ("SQ", "right", 1, 0),
    }
    return TranslationSurface(
        "chamanara", [cell], gluings, anchor_mode="merge_all", anchor_label="x",
        area=Fraction(1), params={"alpha": str(a)}, window=window,
    )


def geometric_series(alpha, window: int = 64) -> TranslationSurface:
    """Plane slit along [0, s], s = alpha/(1-alpha), lips glued geometrically.

    The lower lip splits into segments of lengths alpha^(n+1) accumulating at
    the far end of the slit, the upper lip mirrors them accumulating at the
    origin, and matching segments are glued by translation. At alpha = 1/2
    the slit is exactly [0, 1]. One wild completion point.
    """
    a = frac(alpha)
    if not (0 < a < 1):
        raise MalformedGeometry(f"alpha must be in (0,1), got {a}")
    s = a / (1 - a)
    cell = Cell(
        "PL",
        [
            GeometricSide("lower", (0, 0), (1, 0), a, a, interior_left=False, window=window),
            GeometricSide("upper", (s, 0), (-1, 0), a, a, interior_left=False, window=window),
        ],
        bounded=False,
    )
    gluings = {("PL", "lower"): ("PL", "upper", 1, 0)}
    return TranslationSurface(
        "geometric_series", [cell], gluings, anchor_mode="merge_all", anchor_label="x",
        area=None, params={"alpha": str(a)}, window=window,
    )


def double_parabola(window: int = 48) -> TranslationSurface:
    """Two horn-shaped cells between dyadic parabola chords, cross-glued.

    The right horn is bounded above by chords of y = x^2 and below by chords
    of y = -x^2 (vertices at x = 2^n, n in Z); the left horn mirrors it.
    Parallel equal-length chords are glued by translation. The chord vertices
    accumulate at the origin, a single wild completion point whose axis
    directions are rotational components with exactly one element.
    """
    plus = Cell(
        "Pp",
        [
            ParabolaChainSide("upper", 1, 1, interior_left=False, window=window),
            ParabolaChainSide("lower", 1, -1, interior_left=True, window=window),
        ],
        bounded=False,
    )
    minus = Cell(
        "Pm",
        [
            ParabolaChainSide("upper", -1, 1, interior_left=True, window=window),
            ParabolaChainSide("lower", -1, -1, interior_left=False, window=window),
        ],
        bounded=False,
    )
    gluings = {
        ("Pp", "upper"): ("Pm", "lower", 1, 0),
        ("Pp", "lower"): ("Pm", "upper", 1, 0),
    }
    return TranslationSurface(
        "double_parabola", [plus, minus], gluings, anchor_mode="merge_all",
        anchor_label="x", area=None, window=window,
    )


def _half_plane_cell(cell_id: str, upper: bool, window: int) -> Cell:
    return Cell(
        cell_id,
        [
            RaySide("neg", (0, 0), (-1, 0), interior_left=not upper, window=window),
            RaySide("pos", (0, 0), (1, 0), interior_left=upper, window=window),
        ],
        bounded=False,
    )


def cone(k: int, window: int = 64) -> TranslationSurface:
    """Cone of total angle 2*pi*k built from 2k half-planes glued cyclically."""
    if k < 1:
        raise MalformedGeometry("cone multiplicity must be a positive integer")
    cells = [_half_plane_cell(f"H:{j}", upper=(j % 2 == 0), window=window) for j in range(2 * k)]
    gluings: Dict[Tuple[str, str], Tuple[str, str, int, int]] = {}
    for i in range(k):
        gluings[(f"H:{2 * i}", "pos")] = (f"H:{2 * i + 1}", "pos", 1, 0)
        gluings[(f"H:{2 * i + 1}", "neg")] = (f"H:{(2 * i + 2) % (2 * k)}", "neg", 1, 0)
    return TranslationSurface(
        "cone", cells, gluings, anchor_mode="walk", area=None,
        params={"k": k}, window=window,
    )


def _helicoid_partner(cell_id: str, side_id: str) -> Optional[Tuple[str, str, int, int]]:
    j = CellFamily.parse_id(cell_id)
    if j is None:
        return None
    if j % 2 == 0:
        if side_id == "pos":
            return (f"H:{j + 1}", "pos", 1, 0)
        if side_id == "neg":
            return (f"H:{j - 1}", "neg", 1, 0)
    else:
        if side_id == "neg":
            return (f"H:{j + 1}", "neg", 1, 0)
        if side_id == "pos":
            return (f"H:{j - 1}", "pos", 1, 0)
    return None


def infinite_helicoid(window: int = 64, cap: int = 10**6) -> TranslationSurface:
    """Infinite-angle singularity: a bi-infinite chain of half-planes.

    Cells materialize lazily as walks and traces reach them, up to `cap`.
    """
    family = CellFamily(
        "helicoid", cap,
        builder=lambda j: _half_plane_cell(f"H:{j}", upper=(j % 2 == 0), window=window),
        partner_fn=_helicoid_partner,
    )
    seed = [_half_plane_cell("H:0", upper=True, window=window)]
    return TranslationSurface(
        "infinite_helicoid", seed, {}, anchor_mode="merge_all", anchor_label="apex",
        area=None, cell_family=family, window=window,
    )


def two_square_genus2(window: int = 64) -> TranslationSurface:
    """Genus-2 surface: a 1x2 domino and a unit square with torus-like gluings.

    The single singular point has total angle 6*pi (stratum H(2) origami with
    three unit squares, presented as two cells).
    """
    domino = Cell(
        "R",
        [
            FiniteSide("bottom", [(0, 0), (1, 0)], interior_left=True),
            FiniteSide("top", [(0, 2), (1, 2)], interior_left=False),
            FiniteSide("left_lo", [(0, 0), (0, 1)], interior_left=False),
            FiniteSide("left_hi", [(0, 1), (0, 2)], interior_left=False),
            FiniteSide("right_lo", [(1, 0), (1, 1)], interior_left=True),
            FiniteSide("right_hi", [(1, 1), (1, 2)], interior_left=True),
        ],
        bounded=True,
    )
    square = Cell(
        "S",
        [
            FiniteSide("bottom", [(1, 0), (2, 0)], interior_left=True),
            FiniteSide("top", [(1, 1), (2, 1)], interior_left=False),
            FiniteSide("left", [(1, 0), (1, 1)], interior_left=False),
            FiniteSide("right", [(2, 0), (2, 1)], interior_left=True),
        ],
        bounded=True,
    )
    gluings = {
        ("R", "bottom"): ("R", "top", 1, 0),
        ("S", "bottom"): ("S", "top", 1, 0),
        ("R", "left_lo"): ("S", "right", 1, 0),
        ("R", "left_hi"): ("R", "right_hi", 1, 0),
        ("R", "right_lo"): ("S", "left", 1, 0),
    }
    return TranslationSurface(
        "two_square_genus2", [domino, square], gluings, anchor_mode="walk",
        area=Fraction(3), window=window,
    )


def _slit_plane_cell(cell_id: str, window: int) -> Cell:
    return Cell(
        cell_id,
        [
            RaySide("up", (0, 0), (1, 0), interior_left=True, window=window),
            RaySide("down", (0, 0), (1, 0), interior_left=False, window=window),
        ],
        bounded=False,
    )


def finite_cyclic_cover(n: int, window: int = 64) -> TranslationSurface:
    """Degree-n cyclic cover of the punctured plane: n slit planes in a cycle.

    The single completion point is a cone point of angle 2*pi*n; sheets are
    indexed modulo n.
    """
    if n < 1:
        raise MalformedGeometry("cover degree must be a positive integer")
    cells = [_slit_plane_cell(f"C:{j}", window) for j in range(n)]
    gluings = {
        (f"C:{j}", "down"): (f"C:{(j + 1) % n}", "up", 1, 0) for j in range(n)
    }
    return TranslationSurface(
        "finite_cyclic_cover", cells, gluings, anchor_mode="walk", area=None,
        params={"n": n}, window=window,
    )


_BUILDERS = {
    "square_torus": lambda params, window: square_torus(window),
    "chamanara": lambda params, window: chamanara(params.get("alpha", Fraction(1, 2)), window),
    "geometric_series": lambda params, window: geometric_series(params["alpha"], window),
    "double_parabola": lambda params, window: double_parabola(min(window, 48)),
    "cone": lambda params, window: cone(int(params["k"]), window),
    "infinite_helicoid": lambda params, window: infinite_helicoid(window),
    "two_square_genus2": lambda params, window: two_square_genus2(window),
    "finite_cyclic_cover": lambda params, window: finite_cyclic_cover(int(params["n"]), window),
}


def fixture_names():
    return sorted(_BUILDERS)


def build_surface(name: str, params: Optional[dict] = None, window: int = 64) -> TranslationSurface:
    """Build a fixture by name; parameters are fixture-specific."""
    if name not in _BUILDERS:
        raise MalformedGeometry(f"unknown fixture {name}; have {fixture_names()}")
    return _BUILDERS[name](params or {}, window)


def family_from_json(doc: dict) -> CellFamily:
    if doc["scheme"] == "helicoid":
        cap = int(doc["cap"])
        return CellFamily(
            "helicoid", cap,
            builder=lambda j: _half_plane_cell(f"H:{j}", upper=(j % 2 == 0), window=64),
            partner_fn=_helicoid_partner,
        )
    raise MalformedGeometry(f"unknown cell family scheme {doc['scheme']}")
