"""Shared fixtures and a from-scratch oracle.

The oracle here sorts fully materialized rotation strings and never touches
the package's index math, so agreement between the two is meaningful.
"""

from __future__ import annotations

import numpy as np
import pytest

from bwtx.ordering import ordering_from_bytes
from bwtx.text import TextBuffer


def sorted_rotations(data: bytes, order: bytes, marker: int) -> list[bytes]:
    """All rotations of data+marker, sorted by the given byte order."""
    tp = data + bytes([marker])
    rank = {marker: 0}
    for i, b in enumerate(order):
        rank[b] = i + 1
    rots = [tp[i:] + tp[:i] for i in range(len(tp))]
    rots.sort(key=lambda r: [rank[b] for b in r])
    return rots


def oracle_sa_and_l(data: bytes, order: bytes, marker: int):
    """(sa, L) derived purely from sorted rotation strings."""
    tp = data + bytes([marker])
    m = len(tp)
    rank = {marker: 0}
    for i, b in enumerate(order):
        rank[b] = i + 1
    pairs = sorted(
        ((tp[i:] + tp[:i], i) for i in range(m)),
        key=lambda p: [rank[b] for b in p[0]],
    )
    sa = [i for _, i in pairs]
    l_col = bytes(r[-1] for r, _ in pairs)
    return sa, l_col


def random_case(rng: np.random.Generator, max_n: int = 512,
                sigma_lo: int = 2, sigma_hi: int = 16):
    """A random text plus a random ordering over its alphabet."""
    n = int(rng.integers(1, max_n + 1))
    sigma = int(rng.integers(sigma_lo, sigma_hi + 1))
    pool = rng.choice(np.arange(32, 127), size=sigma, replace=False)
    data = bytes(rng.choice(pool, size=n).astype(np.uint8))
    text = TextBuffer.load(data)
    alpha = np.frombuffer(text.alphabet, dtype=np.uint8).copy()
    rng.shuffle(alpha)
    ordering = ordering_from_bytes(alpha.tobytes(), text)
    return text, ordering


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def banana():
    return TextBuffer.load(b"banana")


@pytest.fixture(scope="session")
def fig1_text():
    return TextBuffer.load(b"aacaacaacbdccccc")


@pytest.fixture(scope="session")
def fig2_text():
    return TextBuffer.load(b"aabaaabac")


@pytest.fixture(scope="session", autouse=True)
def warm_jit():
    """Compile the jitted kernels once so timed tests see steady state."""
    from bwtx.core import build_transform, invert
    from bwtx.ordering import preset_ordering

    text = TextBuffer.load(b"warmup text")
    t = build_transform(text, preset_ordering("ascii", text))
    invert(t.last_column, t.ordering, text.end_marker)
