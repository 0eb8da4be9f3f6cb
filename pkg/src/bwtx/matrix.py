"""Windowed access to the conceptual rotation matrix.

Row i of the matrix is T' rotated to start at sa[i]; any cell is one
modular index away, so a view of the matrix costs only the cells actually
requested.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Transform
from .errors import OutOfBounds, TextMismatch

DEFAULT_WINDOW_ROWS = 64
DEFAULT_WINDOW_COLS = 64

FORWARD = "forward"
BACKWARD = "backward"


@dataclass(frozen=True)
class WindowSpec:
    top_row: int = 0
    left_col: int = 0
    height: int = DEFAULT_WINDOW_ROWS
    width: int = DEFAULT_WINDOW_COLS


@dataclass(frozen=True)
class WindowGrid:
    top_row: int
    left_col: int
    height: int
    width: int
    cells: np.ndarray = field(repr=False)
    l_slice: bytes
    truncated: tuple[bool, ...]

    def row_bytes(self, i: int) -> bytes:
        return self.cells[i].tobytes()


def cell(t: Transform, row: int, col: int) -> int:
    """Matrix cell without the matrix: T'[(sa[row] + col) mod m]."""
    m = t.m
    if not (0 <= row < m and 0 <= col < m):
        raise OutOfBounds(f"cell ({row},{col}) outside {m}x{m} matrix")
    return int(t.tprime[(int(t.sa[row]) + col) % m])


def window(t: Transform, spec: WindowSpec) -> WindowGrid:
    """Materialize height x width cells; edges clip to the matrix."""
    m = t.m
    if not (0 <= spec.top_row < m and 0 <= spec.left_col < m):
        raise OutOfBounds(f"window origin ({spec.top_row},{spec.left_col}) outside {m}x{m} matrix")
    if spec.height < 1 or spec.width < 1:
        raise OutOfBounds("window height and width must be at least 1")
    h = min(spec.height, m - spec.top_row)
    w = min(spec.width, m - spec.left_col)
    starts = t.sa[spec.top_row : spec.top_row + h]
    idx = (starts[:, None] + (spec.left_col + np.arange(w))[None, :]) % m
    cells = t.tprime[idx]
    l_slice = t.l_array[spec.top_row : spec.top_row + h].tobytes()
    truncated = tuple([spec.left_col + w < m] * h)
    return WindowGrid(
        top_row=spec.top_row,
        left_col=spec.left_col,
        height=h,
        width=w,
        cells=cells,
        l_slice=l_slice,
        truncated=truncated,
    )


def _compare_prefix(t: Transform, row: int, pranks) -> int:
    """Row's rotation prefix vs the pattern, under the active ranks."""
    seq = t.rank_seq
    m = t.m
    start = int(t.sa[row])
    for j, pr in enumerate(pranks):
        c = int(seq[(start + j) % m])
        if c != pr:
            return -1 if c < pr else 1
    return 0


def prefix_search(t: Transform, pattern) -> tuple[int, int]:
    """Maximal row interval [lo, hi) whose rotations start with pattern.

    Two binary searches, O(|pattern| log m); empty interval when the
    pattern uses bytes outside the alphabet or nothing matches.
    """
    pattern = bytes(pattern)
    if not pattern:
        raise ValueError("pattern must be non-empty")
    table = t.ordering.rank_table
    pranks = [int(table[b]) for b in pattern]
    # rows are m cells wide, so nothing longer can be a row prefix
    if len(pranks) > t.m or any(r < 0 for r in pranks):
        return (0, 0)
    m = t.m
    lo, hi = 0, m
    while lo < hi:  # first row with prefix >= pattern
        mid = (lo + hi) // 2
        if _compare_prefix(t, mid, pranks) < 0:
            lo = mid + 1
        else:
            hi = mid
    first = lo
    hi = m
    while lo < hi:  # first row with prefix > pattern
        mid = (lo + hi) // 2
        if _compare_prefix(t, mid, pranks) <= 0:
            lo = mid + 1
        else:
            hi = mid
    return (first, lo)


def find_match(t: Transform, pattern, from_row: int, direction: str) -> int | None:
    """Nearest matching row strictly beyond from_row in the given direction."""
    if not (0 <= from_row < t.m):
        raise OutOfBounds(f"from_row {from_row} outside 0..{t.m - 1}")
    if direction not in (FORWARD, BACKWARD):
        raise ValueError(f"direction must be {FORWARD!r} or {BACKWARD!r}")
    lo, hi = prefix_search(t, pattern)
    if lo == hi:
        return None
    if direction == FORWARD:
        row = max(lo, from_row + 1)
        return row if row < hi else None
    row = min(hi - 1, from_row - 1)
    return row if row >= lo else None


def locate_row(src: Transform, row: int, dst: Transform) -> int:
    """Row of dst holding the same rotation as src's given row."""
    if src.text.data != dst.text.data or src.text.end_marker != dst.text.end_marker:
        raise TextMismatch("transforms were built from different texts")
    if not (0 <= row < src.m):
        raise OutOfBounds(f"row {row} outside 0..{src.m - 1}")
    return int(dst.isa[src.sa[row]])
