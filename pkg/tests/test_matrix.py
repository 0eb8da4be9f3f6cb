import numpy as np
import pytest

from bwtx.core import build_transform
from bwtx.errors import OutOfBounds, TextMismatch
from bwtx.matrix import (
    WindowSpec,
    cell,
    find_match,
    locate_row,
    prefix_search,
    window,
)
from bwtx.ordering import preset_ordering
from bwtx.text import TextBuffer

from conftest import random_case, sorted_rotations


@pytest.fixture(scope="module")
def tb(banana):
    return build_transform(banana, preset_ordering("ascii", banana))


def test_cell_examples(tb):
    assert cell(tb, 0, 0) == 0x24
    assert cell(tb, 4, 0) == ord("b")
    assert cell(tb, 1, 6) == ord("n")


def test_cell_bounds(tb):
    with pytest.raises(OutOfBounds):
        cell(tb, 7, 0)
    with pytest.raises(OutOfBounds):
        cell(tb, 0, 7)
    with pytest.raises(OutOfBounds):
        cell(tb, -1, 0)


def test_full_window_matches_rotations(tb, banana):
    grid = window(tb, WindowSpec(0, 0, 7, 7))
    rows = [grid.row_bytes(i) for i in range(grid.height)]
    assert rows == sorted_rotations(banana.data, tb.ordering.order, banana.end_marker)
    assert grid.l_slice == tb.last_column
    assert grid.truncated == (False,) * 7


def test_window_clipping(tb):
    grid = window(tb, WindowSpec(5, 5, 10, 10))
    assert (grid.height, grid.width) == (2, 2)
    assert grid.truncated == (False, False)
    tiny = window(tb, WindowSpec(0, 0, 1, 1))
    assert tiny.row_bytes(0) == b"$"
    part = window(tb, WindowSpec(0, 0, 3, 2))
    assert part.truncated == (True, True, True)


def test_window_bounds(tb):
    with pytest.raises(OutOfBounds):
        window(tb, WindowSpec(7, 0, 1, 1))
    with pytest.raises(OutOfBounds):
        window(tb, WindowSpec(0, 0, 0, 5))


def test_column_0_and_last(tb, banana):
    first = bytes(cell(tb, r, 0) for r in range(tb.m))
    table = tb.ordering.rank_table
    assert first == bytes(sorted(banana.with_marker, key=lambda b: table[b]))
    last = bytes(cell(tb, r, tb.m - 1) for r in range(tb.m))
    assert last == tb.last_column


def test_windows_match_oracle_random(rng):
    for _ in range(30):
        text, ordering = random_case(rng, max_n=63)
        t = build_transform(text, ordering)
        rots = sorted_rotations(text.data, ordering.order, text.end_marker)
        grid = window(t, WindowSpec(0, 0, t.m, t.m))
        assert [grid.row_bytes(i) for i in range(t.m)] == rots
        top = int(rng.integers(0, t.m))
        left = int(rng.integers(0, t.m))
        h = int(rng.integers(1, 8))
        w = int(rng.integers(1, 8))
        sub = window(t, WindowSpec(top, left, h, w))
        for i in range(sub.height):
            assert sub.row_bytes(i) == rots[top + i][left : left + sub.width]


def test_prefix_search_examples(tb):
    assert prefix_search(tb, b"an") == (2, 4)
    assert prefix_search(tb, b"$") == (0, 1)
    assert prefix_search(tb, b"zz") == (0, 0)
    assert prefix_search(tb, b"banana$") == (4, 5)


def test_prefix_search_brute_force(rng):
    for _ in range(30):
        text, ordering = random_case(rng, max_n=100)
        t = build_transform(text, ordering)
        rots = sorted_rotations(text.data, ordering.order, text.end_marker)
        for _ in range(6):
            plen = int(rng.integers(1, 5))
            start = int(rng.integers(0, text.m))
            pattern = (text.with_marker + text.with_marker)[start : start + plen]
            lo, hi = prefix_search(t, pattern)
            want = [i for i, r in enumerate(rots) if r.startswith(pattern)]
            assert list(range(lo, hi)) == want


def test_find_match(tb):
    assert find_match(tb, b"an", 0, "forward") == 2
    assert find_match(tb, b"an", 2, "forward") == 3
    assert find_match(tb, b"an", 3, "forward") is None
    assert find_match(tb, b"an", 2, "backward") is None
    assert find_match(tb, b"an", 3, "backward") == 2
    assert find_match(tb, b"zz", 0, "forward") is None
    with pytest.raises(OutOfBounds):
        find_match(tb, b"an", 99, "forward")
    with pytest.raises(ValueError):
        find_match(tb, b"an", 0, "sideways")


def test_locate_row(tb, banana):
    reverse = build_transform(banana, preset_ordering("reverse_ascii", banana))
    assert locate_row(tb, 4, reverse) == 3
    for row in range(tb.m):
        assert locate_row(tb, row, tb) == row
        back = locate_row(reverse, locate_row(tb, row, reverse), tb)
        assert back == row


def test_locate_row_is_bijection(rng):
    text, o1 = random_case(rng, max_n=80)
    t1 = build_transform(text, o1)
    t2 = build_transform(text, preset_ordering("reverse_ascii", text))
    image = {locate_row(t1, r, t2) for r in range(t1.m)}
    assert image == set(range(t1.m))


def test_locate_row_text_mismatch(tb):
    other = TextBuffer.load(b"panama")
    t2 = build_transform(other, preset_ordering("ascii", other))
    with pytest.raises(TextMismatch):
        locate_row(tb, 0, t2)


def test_empty_pattern_rejected(tb):
    with pytest.raises(ValueError):
        prefix_search(tb, b"")
