"""Translation surfaces as exact polygon gluings, with local invariants at singularities.

The package represents finite- and infinite-type translation surfaces as
planar cells glued by translations (all coordinates exact rationals), and
computes the local structure at completion points: geodesic rays, linear
approaches, rotational components, singularity classification, affine
pushforwards, transverse measures, and a finite-data neighborhood
equivalence decision.
"""

from .errors import (
    AmbiguousWedge,
    CorrespondenceGap,
    DanglingEdge,
    DirectionNotRealized,
    FlatsingError,
    IsolationViolated,
    LocatorRangeExceeded,
    MalformedGeometry,
    NoComparableSamples,
    NotAreaPreserving,
    NotFull,
    NotShort,
    OrientationReversed,
    OutsideSweep,
    ParallelSegment,
    UnresolvedIdentification,
)
from .angle import Angle, Direction
from .surface import EdgeRef, SurfacePoint, TranslationSurface, load_surface

__version__ = "0.1.0"


def __getattr__(name):
    if name in ("GeodesicPath", "LinearApproach"):
        from . import tracer

        return getattr(tracer, name)
    raise AttributeError(name)

__all__ = [
    "Angle",
    "Direction",
    "EdgeRef",
    "GeodesicPath",
    "LinearApproach",
    "SurfacePoint",
    "TranslationSurface",
    "load_surface",
    "FlatsingError",
    "MalformedGeometry",
    "LocatorRangeExceeded",
    "DanglingEdge",
    "DirectionNotRealized",
    "AmbiguousWedge",
    "NotShort",
    "OutsideSweep",
    "NotAreaPreserving",
    "OrientationReversed",
    "CorrespondenceGap",
    "ParallelSegment",
    "NotFull",
    "NoComparableSamples",
    "IsolationViolated",
    "UnresolvedIdentification",
    "__version__",
]
