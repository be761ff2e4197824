"""Exception types shared across the package."""


class FlatsingError(Exception):
    """Base class for all package-specific errors."""


class MalformedGeometry(FlatsingError):
    """A surface description violates a structural invariant."""


class LocatorRangeExceeded(FlatsingError):
    """A closed-form locator cannot decide within its configured index window."""


class DanglingEdge(FlatsingError):
    """An edge has no gluing partner."""


class DirectionNotRealized(FlatsingError):
    """The requested direction lies in no wedge of the anchor."""


class AmbiguousWedge(FlatsingError):
    """The direction is realized in several wedges; a wedge selector is required."""


class NotShort(FlatsingError):
    """sigma-pairing requested for an approach that is not a short saddle connection."""


class OutsideSweep(FlatsingError):
    """A chart coordinate lies outside the swept interval of the component."""


class NotAreaPreserving(FlatsingError):
    """The matrix does not have determinant of absolute value one."""


class OrientationReversed(FlatsingError):
    """Orientation-reversing maps are not accepted for pushforward."""


class CorrespondenceGap(FlatsingError):
    """A germ crosses an edge outside the declared cell correspondence."""


class ParallelSegment(FlatsingError):
    """The transversal segment is parallel to the reference direction."""


class NotFull(FlatsingError):
    """Some germ of the family misses all supplied transversals."""


class NoComparableSamples(FlatsingError):
    """No sample of the schedule produced a comparable distance."""


class IsolationViolated(FlatsingError):
    """epsilon exceeds the isolation radius of an anchor."""


class UnresolvedIdentification(FlatsingError):
    """A corner walk left the sampled window without closing."""
