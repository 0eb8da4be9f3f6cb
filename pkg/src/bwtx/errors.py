"""Exception hierarchy shared across the package.

Every error carries a stable ``code`` (the class name) so API layers can
serialize errors as ``{code, message}`` without lookup tables.
"""


class BwtxError(Exception):
    """Base class for all bwtx errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


class EmptyText(BwtxError):
    """Input text is empty; transforms are defined for length >= 1 only."""


class NoEndMarkerAvailable(BwtxError):
    """All 256 byte values occur in the input, leaving no free end marker."""


class TextTooLarge(BwtxError):
    """Input exceeds the configured service size limit."""


class PresetUnavailable(BwtxError):
    """A preset ordering was requested but is not configured."""


class MalformedSpec(BwtxError):
    """An ordering spec string could not be parsed."""


class DuplicateCharacter(BwtxError):
    """An ordering lists the same byte more than once."""


class MissingCharacters(BwtxError):
    """An ordering does not cover every distinct byte of the text."""


class UnknownCharacter(BwtxError):
    """A byte was referenced that is not part of the text's alphabet."""


class NotAValidTransform(BwtxError):
    """A claimed last column cannot be inverted into a text."""


class OracleBoundExceeded(BwtxError):
    """The naive rotation-sort oracle was asked for a text beyond its bound."""


class OutOfBounds(BwtxError):
    """A row or column index lies outside the matrix."""


class WindowTooLarge(BwtxError):
    """A window request exceeds the configured service dimensions."""


class TextMismatch(BwtxError):
    """Two transforms built from different texts were combined."""


class CycleDetected(BwtxError):
    """Order constraints form a cycle and cannot be combined.

    ``cycle`` holds one offending byte cycle, in order.
    """

    def __init__(self, message: str, cycle: list[int] | None = None):
        super().__init__(message)
        self.cycle = cycle or []


class EndMarkerConstraint(BwtxError):
    """A constraint tried to order a byte below the end marker."""


class WriteFailure(BwtxError):
    """A session file could not be written."""


class CorruptFile(BwtxError):
    """A session stream is not a well-formed container."""


class VersionUnsupported(BwtxError):
    """A session stream declares an unknown format version."""


class CacheInvalid(UserWarning):
    """A cached last column failed validation; the transform was rebuilt."""
