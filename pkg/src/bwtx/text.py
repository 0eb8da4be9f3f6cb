"""Input texts and end-marker selection."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import EmptyText, NoEndMarkerAvailable

DOLLAR = 0x24


def select_end_marker(data: bytes) -> int:
    """Pick an end-marker byte guaranteed absent from ``data``.

    '$' is preferred; if it occurs in the input, the lowest free byte
    value (scanning 0x00..0xFF ascending) is used instead.
    """
    if len(data) == 0:
        raise EmptyText("cannot pick an end marker for an empty input")
    present = np.zeros(256, dtype=bool)
    present[np.frombuffer(data, dtype=np.uint8)] = True
    if not present[DOLLAR]:
        return DOLLAR
    free = np.flatnonzero(~present)
    if free.size == 0:
        raise NoEndMarkerAvailable("all 256 byte values occur in the input")
    return int(free[0])


@dataclass(frozen=True)
class TextBuffer:
    """A byte text plus the unique end marker appended to it.

    The conceptual transformed sequence is ``data + end_marker`` (length
    ``m = n + 1``); the marker never occurs in ``data``.
    """

    data: bytes
    end_marker: int

    def __post_init__(self):
        if len(self.data) == 0:
            raise EmptyText("input text must contain at least one byte")
        if not 0 <= self.end_marker <= 255:
            raise ValueError(f"end marker {self.end_marker} is not a byte")
        if self.end_marker in self.data:
            raise ValueError(
                f"end marker {self.end_marker:#04x} occurs in the input"
            )

    @classmethod
    def load(cls, data: bytes, end_marker: int | None = None) -> "TextBuffer":
        """Wrap ``data``, auto-selecting the end marker unless given."""
        if end_marker is None:
            end_marker = select_end_marker(data)
        return cls(bytes(data), end_marker)

    @property
    def n(self) -> int:
        return len(self.data)

    @property
    def m(self) -> int:
        return len(self.data) + 1

    @cached_property
    def with_marker(self) -> bytes:
        """The augmented sequence the matrix is built over."""
        return self.data + bytes([self.end_marker])

    @cached_property
    def byte_counts(self) -> np.ndarray:
        """Occurrence count per byte value (length 256, marker excluded)."""
        return np.bincount(np.frombuffer(self.data, np.uint8), minlength=256)

    @cached_property
    def alphabet(self) -> bytes:
        """Distinct bytes of ``data`` in ascending byte order."""
        return bytes(int(b) for b in np.flatnonzero(self.byte_counts))
