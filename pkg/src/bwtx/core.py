"""Transform construction, inversion, and run statistics.

The conceptual object is the m x m matrix of cyclic rotations of T' (text
plus end marker) sorted by the active alphabet ranks. Only its last column
L and the suffix array behind it are ever materialized.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import (
    MissingCharacters,
    NotAValidTransform,
    OracleBoundExceeded,
    UnknownCharacter,
)
from .ordering import AlphabetOrdering
from .suffix import njit, suffix_array
from .text import TextBuffer

ORACLE_BOUND = 4096


@dataclass(frozen=True)
class RunStatistics:
    end_marker_used: int
    original_size: int
    run_count: int
    rle_length: int

    def as_dict(self) -> dict:
        return {
            "end_marker_used": self.end_marker_used,
            "original_size": self.original_size,
            "run_count": self.run_count,
            "rle_length": self.rle_length,
        }


def _as_u8(seq) -> np.ndarray:
    if isinstance(seq, np.ndarray):
        return seq.astype(np.uint8, copy=False)
    return np.frombuffer(bytes(seq), dtype=np.uint8)


def run_count(last_column) -> int:
    """Number of maximal equal-byte runs."""
    arr = _as_u8(last_column)
    if arr.shape[0] == 0:
        raise ValueError("empty sequence has no runs")
    return 1 + int(np.count_nonzero(arr[1:] != arr[:-1]))


def run_bounds(last_column) -> tuple[np.ndarray, np.ndarray]:
    """Starts and (exclusive) ends of the maximal runs, in order."""
    arr = _as_u8(last_column)
    change = np.flatnonzero(arr[1:] != arr[:-1])
    starts = np.concatenate(([0], change + 1))
    ends = np.concatenate((change + 1, [arr.shape[0]]))
    return starts, ends


def rle_length(last_column) -> int:
    """Encoded size at 2 bytes per run, runs over 255 split into chunks."""
    starts, ends = run_bounds(last_column)
    if starts.shape[0] == 0:
        raise ValueError("empty sequence has no runs")
    chunks = (ends - starts + 254) // 255
    return 2 * int(chunks.sum())


class Transform:
    """An immutable built transform: text, ordering, sa/isa, L, stats."""

    def __init__(self, text: TextBuffer, ordering: AlphabetOrdering,
                 sa: np.ndarray, l_array: np.ndarray):
        self.text = text
        self.ordering = ordering
        self.sa = sa
        self.l_array = l_array
        isa = np.empty_like(sa)
        isa[sa] = np.arange(sa.shape[0], dtype=sa.dtype)
        self.isa = isa
        for arr in (self.sa, self.isa, self.l_array):
            arr.setflags(write=False)
        self.stats = RunStatistics(
            end_marker_used=text.end_marker,
            original_size=text.n,
            run_count=run_count(l_array),
            rle_length=rle_length(l_array),
        )

    @property
    def m(self) -> int:
        return self.text.m

    @cached_property
    def last_column(self) -> bytes:
        return self.l_array.tobytes()

    @cached_property
    def tprime(self) -> np.ndarray:
        arr = np.frombuffer(self.text.with_marker, dtype=np.uint8)
        arr.setflags(write=False)
        return arr

    @cached_property
    def rank_seq(self) -> np.ndarray:
        """T' remapped bytewise to ranks; the string the sort ran on."""
        seq = self.ordering.rank_table[self.tprime].astype(np.uint8)
        seq.setflags(write=False)
        return seq


def _check_coverage(text: TextBuffer, ordering: AlphabetOrdering) -> None:
    if ordering.end_marker != text.end_marker:
        raise ValueError(
            "ordering was built for end marker "
            f"{ordering.end_marker:#04x}, text uses {text.end_marker:#04x}"
        )
    table = ordering.rank_table
    present = np.flatnonzero(text.byte_counts)
    if np.any(table[present] < 0):
        missing = [int(b) for b in present if table[b] < 0 and b != text.end_marker]
        raise MissingCharacters(
            "ordering does not cover text bytes: "
            + ", ".join(f"{b:#04x}" for b in missing)
        )


def build_transform(text: TextBuffer, ordering: AlphabetOrdering,
                    backend: str | None = None) -> Transform:
    """Sort the rotations of T' under the ordering's ranks.

    The end marker is unique and ranked least, so suffix order of the
    rank-mapped T' equals rotation order; any suffix sorter applies. The
    m x m matrix itself is never built.
    """
    _check_coverage(text, ordering)
    tprime = np.frombuffer(text.with_marker, dtype=np.uint8)
    ranks = ordering.rank_table[tprime].astype(np.uint8)
    sa = suffix_array(ranks, sigma=ordering.sigma + 1, backend=backend)
    l_array = tprime[(sa - 1) % text.m]
    return Transform(text, ordering, sa, l_array)


@njit(cache=True)
def _lf_cycle(lf):
    """Walk LF from row 0; rows visited in order, empty if not one m-cycle."""
    m = lf.shape[0]
    rows = np.empty(m, dtype=np.int64)
    visited = np.zeros(m, dtype=np.bool_)
    i = 0
    for k in range(m):
        if visited[i]:
            return rows[:0]
        visited[i] = True
        rows[k] = i
        i = lf[i]
    if i != 0:
        return rows[:0]
    return rows


def lf_mapping(l_array: np.ndarray, rank_table: np.ndarray) -> np.ndarray:
    """LF[i] = row of F holding the same character occurrence as L[i]."""
    ranks = rank_table[l_array]
    if np.any(ranks < 0):
        raise UnknownCharacter("last column contains bytes outside the ordering")
    m = l_array.shape[0]
    perm = np.argsort(ranks, kind="stable")
    lf = np.empty(m, dtype=np.int64)
    lf[perm] = np.arange(m, dtype=np.int64)
    return lf


def invert(last_column, ordering: AlphabetOrdering, end_marker: int) -> bytes:
    """Reconstruct the original data from L by walking the LF mapping.

    Row k of the walk is the rotation starting at position m-1-k, so the
    walk spells the text right to left.
    """
    l_array = _as_u8(last_column)
    m = l_array.shape[0]
    if int(np.count_nonzero(l_array == end_marker)) != 1:
        raise NotAValidTransform("need exactly one end marker in the last column")
    lf = lf_mapping(l_array, ordering.rank_table)
    rows = _lf_cycle(lf)
    if rows.shape[0] != m:
        raise NotAValidTransform("LF walk does not visit every row exactly once")
    out = np.empty(m, dtype=np.uint8)
    out[(m - 2 - np.arange(m)) % m] = l_array[rows]
    if out[m - 1] != end_marker:
        raise NotAValidTransform("LF walk does not close at the end marker")
    return out[: m - 1].tobytes()


def transform_from_last_column(text: TextBuffer, ordering: AlphabetOrdering,
                               l_array: np.ndarray) -> Transform:
    """Rebuild a full Transform from a stored L without re-sorting suffixes.

    The LF walk yields sa directly (row k starts at position m-1-k). The
    result is verified against the text, so a bogus L cannot smuggle in an
    inconsistent transform; raises NotAValidTransform on any mismatch.
    """
    _check_coverage(text, ordering)
    m = text.m
    if l_array.shape[0] != m:
        raise NotAValidTransform("cached last column has the wrong length")
    if int(np.count_nonzero(l_array == text.end_marker)) != 1:
        raise NotAValidTransform("cached last column must hold the end marker once")
    lf = lf_mapping(l_array, ordering.rank_table)
    rows = _lf_cycle(lf)
    if rows.shape[0] != m:
        raise NotAValidTransform("LF walk does not visit every row exactly once")
    sa = np.empty(m, dtype=np.int64)
    sa[rows] = m - 1 - np.arange(m, dtype=np.int64)
    tprime = np.frombuffer(text.with_marker, dtype=np.uint8)
    if not np.array_equal(tprime[(sa - 1) % m], l_array):
        raise NotAValidTransform("cached last column does not spell this text")
    # full order check: first ranks non-decreasing, ties decided by the
    # successor rows, which is exactly rotation order
    ranks = ordering.rank_table[tprime]
    isa = np.empty(m, dtype=np.int64)
    isa[sa] = np.arange(m, dtype=np.int64)
    a, b = ranks[sa[:-1]], ranks[sa[1:]]
    succ_lt = isa[(sa[:-1] + 1) % m] < isa[(sa[1:] + 1) % m]
    if not np.all((a < b) | ((a == b) & succ_lt)):
        raise NotAValidTransform("cached last column is not sorted under this ordering")
    return Transform(text, ordering, sa, l_array.copy())


def naive_bwt(text: TextBuffer, ordering: AlphabetOrdering,
              bound: int = ORACLE_BOUND) -> Transform:
    """Test oracle: materialize and sort all m rotations.

    Deliberately shares no code path with build_transform beyond the
    Transform container.
    """
    if text.m > bound:
        raise OracleBoundExceeded(f"m={text.m} exceeds oracle bound {bound}")
    _check_coverage(text, ordering)
    tp = text.with_marker
    m = text.m
    table = ordering.rank_table
    doubled = tp + tp
    rotations = sorted(
        range(m),
        key=lambda i: [int(table[b]) for b in doubled[i : i + m]],
    )
    sa = np.array(rotations, dtype=np.int64)
    l_array = np.array([doubled[i + m - 1] for i in rotations], dtype=np.uint8)
    return Transform(text, ordering, sa, l_array)
