"""Exception and warning types shared across the package."""


class AfpError(Exception):
    """Base class for all errors raised by this package."""


class AfpWarning(UserWarning):
    """Base class for warnings emitted by this package."""


class ParseError(AfpError):
    """A document could not be parsed at all (bad JSON, wrong top-level shape)."""


class ValidationError(AfpError):
    """A parsed document or argument violates a declared invariant."""


class ZeroVectorError(AfpError):
    """A feature vector has (near-)zero norm where a direction is required."""


class RangeError(AfpError):
    """A numeric parameter is outside its documented range."""


class ShapeError(AfpError):
    """A matrix argument has the wrong shape or is not symmetric."""


class InsufficientSamplesError(AfpError):
    """Too few samples to run a statistical estimate."""


class EmptySelectionError(AfpError):
    """Prompt assembly was asked to run with no representative frames."""


class TransportError(AfpError):
    """The external graph-generation endpoint could not be reached."""


class MalformedResponseError(AfpError):
    """The external graph-generation endpoint replied with unusable content."""
