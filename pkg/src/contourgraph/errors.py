"""Exception types shared across the package."""


class ContourGraphError(Exception):
    """Base class for all package errors."""


class InvalidGraph(ContourGraphError):
    """A graph violates the structural invariants."""


class MissingStartPoint(ContourGraphError):
    """Canonical traversal requires a start point."""


class MalformedDocument(ContourGraphError):
    """A serialized document is not parseable."""


class SchemaViolation(ContourGraphError):
    """A parsed document violates the graph schema."""


class EmptyImage(ContourGraphError):
    """An input raster has zero pixels."""


class DisconnectedGraph(ContourGraphError):
    """Vectorization produced more than one connected component."""


class DegenerateBounds(ContourGraphError):
    """A graph has no spatial extent to normalize against."""


class ZeroVector(ContourGraphError):
    """Direction queries need a non-zero vector."""


class NotAnEndpoint(ContourGraphError):
    """Branch removal was asked to start from a non-endpoint node."""


class NoPathFound(ContourGraphError):
    """No simple path connects the requested node pair."""


class AlignmentFailure(ContourGraphError):
    """No anchor of the sample scores above the alignment threshold."""


class NoCommonStructure(ContourGraphError):
    """Merging reduced the concept to nothing."""


class TooLarge(ContourGraphError):
    """The exact edit-distance oracle refuses instances this big."""


class EmptyLibrary(ContourGraphError):
    """Classification needs at least one concept."""


class BadMagic(ContourGraphError):
    """An IDX file starts with the wrong magic number."""


class TruncatedFile(ContourGraphError):
    """An IDX file is shorter than its header promises."""


class CountMismatch(ContourGraphError):
    """Image and label files disagree on the record count."""


class ConfigError(ContourGraphError):
    """A configuration file contains an unknown key or a bad value."""


class TrainingError(ContourGraphError):
    """A concept group could not be trained at all."""
