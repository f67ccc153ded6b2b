"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ElrError(Exception):
    """Base class for every error raised by the library."""


class GraphError(ElrError):
    pass


class InconsistentRotation(GraphError):
    pass


class NotPlanarEmbedding(GraphError):
    pass


class DisconnectedGraph(GraphError):
    pass


class DegreeNotTwo(GraphError):
    pass


class WouldCreateMultiEdge(GraphError):
    pass


class UnknownEdge(GraphError):
    pass


class FamilyError(ElrError):
    """Input does not belong to the family an operation expects."""


class NotHalin(FamilyError):
    pass


class NotGeneralizedHalin(FamilyError):
    pass


class NotInFamily(FamilyError):
    pass


class NotOuterplanar(FamilyError):
    pass


class IsK4(FamilyError):
    pass


class DrawingError(ElrError):
    pass


class InvalidDrawing(DrawingError):
    pass


class InfeasibleGaps(DrawingError):
    pass


class SeamCrossing(DrawingError):
    pass


class PreconditionViolated(DrawingError):
    pass


class ConstructionGap(DrawingError):
    """A construction produced a drawing that failed verification."""


class DegenerateEdge(ElrError):
    pass


class NotEmbeddingPreserving(ElrError):
    pass


class InfeasibleStart(ElrError):
    pass
