"""Alphabet orderings: the rank assignment that drives the rotation sort.

An ordering covers exactly the distinct bytes of one text. The end marker
is not part of ``order``; its rank is always 0, below everything else.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    DuplicateCharacter,
    MalformedSpec,
    MissingCharacters,
    PresetUnavailable,
    UnknownCharacter,
)
from .text import TextBuffer

PRESETS = (
    "ascii",
    "reverse_ascii",
    "least_frequent",
    "most_frequent",
    "chapin_tate",
    "order_of_appearance",
    "vowels_first",
)

_VOWELS = b"aeiouAEIOU"

# Hand-tuned ordering for the chapin_tate preset. Not bundled: supply one
# via set_chapin_tate_table() before requesting the preset.
_chapin_tate_table: bytes | None = None


def set_chapin_tate_table(table: bytes | None) -> None:
    """Install (or clear) the byte sequence backing the chapin_tate preset."""
    global _chapin_tate_table
    if table is not None and len(set(table)) != len(table):
        raise DuplicateCharacter("chapin_tate table repeats a byte")
    _chapin_tate_table = bytes(table) if table is not None else None


@dataclass(frozen=True)
class AlphabetOrdering:
    """A total order over the distinct bytes of a text.

    ``order`` lists those bytes least to greatest; ``rank_of`` maps the end
    marker to 0 and ``order[i]`` to ``i + 1``.
    """

    name: str
    order: bytes
    end_marker: int

    def __post_init__(self):
        if len(set(self.order)) != len(self.order):
            raise DuplicateCharacter("ordering repeats a byte")
        if self.end_marker in self.order:
            raise ValueError("end marker cannot appear in the ordering")

    @cached_property
    def rank_table(self) -> np.ndarray:
        """Byte value -> rank; -1 for bytes outside the alphabet."""
        table = np.full(256, -1, dtype=np.int16)
        table[self.end_marker] = 0
        for i, b in enumerate(self.order):
            table[b] = i + 1
        table.setflags(write=False)
        return table

    @property
    def sigma(self) -> int:
        return len(self.order)

    def rank_of(self, byte: int) -> int:
        r = int(self.rank_table[byte])
        if r < 0:
            raise UnknownCharacter(f"byte {byte:#04x} is not in the alphabet")
        return r

    def __contains__(self, byte: int) -> bool:
        return int(self.rank_table[byte]) >= 0

    def position(self, byte: int) -> int:
        """Index of ``byte`` within ``order``."""
        idx = self.order.find(bytes([byte]))
        if idx < 0:
            raise UnknownCharacter(f"byte {byte:#04x} is not in the ordering")
        return idx

    def spec_string(self) -> str:
        """Comma-separated display form, parseable by parse_ordering()."""
        return ",".join(escape_byte(b) for b in self.order)

    def covers(self, text: TextBuffer) -> bool:
        return set(self.order) == set(text.alphabet) and (
            self.end_marker == text.end_marker
        )


def escape_byte(b: int) -> str:
    if 0x20 <= b <= 0x7E and b not in (0x5C,):
        return chr(b)
    return f"\\x{b:02x}"


def ordering_from_bytes(
    order, text: TextBuffer, name: str = "custom"
) -> AlphabetOrdering:
    """Build an ordering from an explicit byte sequence, validating that it
    covers exactly the distinct bytes of the text."""
    order = bytes(order)
    seen = set()
    for b in order:
        if b in seen:
            raise DuplicateCharacter(f"byte {escape_byte(b)!r} listed twice")
        seen.add(b)
    alphabet = set(text.alphabet)
    extra = seen - alphabet
    if extra:
        listed = ", ".join(escape_byte(b) for b in sorted(extra))
        raise UnknownCharacter(f"not in the text: {listed}")
    missing = alphabet - seen
    if missing:
        listed = ", ".join(escape_byte(b) for b in sorted(missing))
        raise MissingCharacters(f"text bytes not listed: {listed}")
    return AlphabetOrdering(name=name, order=order, end_marker=text.end_marker)


_HEX_ESCAPE = re.compile(r"^\\x([0-9a-fA-F]{2})$")


def _spec_tokens(spec: str) -> list[int]:
    """Split a comma-separated character list into byte values.

    Two consecutive empty fields stand for a literal comma; \\xNN escapes
    name arbitrary bytes.
    """
    pieces = spec.split(",")
    out: list[int] = []
    i = 0
    while i < len(pieces):
        piece = pieces[i]
        if piece == "":
            if i + 1 < len(pieces) and pieces[i + 1] == "":
                out.append(0x2C)
                i += 2
                continue
            raise MalformedSpec("empty entry in ordering spec")
        if len(piece) == 1:
            value = ord(piece)
            if value > 255:
                raise MalformedSpec(f"{piece!r} is not a single byte")
            out.append(value)
        else:
            hexmatch = _HEX_ESCAPE.match(piece)
            if not hexmatch:
                raise MalformedSpec(f"{piece!r} is not a single character")
            out.append(int(hexmatch.group(1), 16))
        i += 1
    if not out:
        raise MalformedSpec("ordering spec is empty")
    return out


def parse_ordering(spec: str, text: TextBuffer) -> AlphabetOrdering:
    """Parse a comma-separated character list into an ordering over the
    text's alphabet (least first)."""
    return ordering_from_bytes(_spec_tokens(spec), text, name="custom")


def preset_ordering(
    preset: str,
    text: TextBuffer,
    *,
    chapin_table: bytes | None = None,
) -> AlphabetOrdering:
    """Build one of the named preset orderings for ``text``."""
    alphabet = text.alphabet
    counts = text.byte_counts

    if preset == "ascii":
        order = alphabet
    elif preset == "reverse_ascii":
        order = alphabet[::-1]
    elif preset == "least_frequent":
        order = bytes(sorted(alphabet, key=lambda b: (counts[b], b)))
    elif preset == "most_frequent":
        order = bytes(sorted(alphabet, key=lambda b: (-counts[b], b)))
    elif preset == "order_of_appearance":
        arr = np.frombuffer(text.data, np.uint8)
        uniq, first_pos = np.unique(arr, return_index=True)
        by_first = np.argsort(first_pos, kind="stable")
        order = bytes(int(uniq[i]) for i in by_first)
    elif preset == "vowels_first":
        present = set(alphabet)
        vowels = [v for v in _VOWELS if v in present]
        rest = [b for b in alphabet if b not in set(vowels)]
        order = bytes(vowels + rest)
    elif preset == "chapin_tate":
        table = chapin_table if chapin_table is not None else _chapin_tate_table
        if table is None:
            raise PresetUnavailable(
                "no chapin_tate ordering table is configured"
            )
        present = set(alphabet)
        listed = [b for b in table if b in present]
        rest = [b for b in alphabet if b not in set(listed)]
        order = bytes(listed + rest)
    else:
        raise ValueError(f"unknown preset {preset!r}")

    return AlphabetOrdering(name=preset, order=order, end_marker=text.end_marker)
