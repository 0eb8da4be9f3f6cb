"""Suffix array construction over small-integer symbol strings.

Input contract for every backend: ``s`` is a 1-d integer array whose last
element is 0, the unique least symbol (the end marker's rank). All other
values are positive. Because that sentinel is unique and least, the suffix
order of ``s`` equals the sort order of its cyclic rotations, which is what
the transform builder needs.

The default backend is SA-IS (induced sorting), linear time, with the hot
loops compiled by numba. A pure numpy prefix-doubling backend is kept as a
fallback and for cross-checking; select with BWTX_SA_BACKEND=doubling.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        return wrap if not (args and callable(args[0])) else args[0]


# Incremented on every full construction; lets tests prove that cached
# session loads never re-sort suffixes.
_constructions = 0


def construction_count() -> int:
    return _constructions


@njit(cache=True)
def _classify(s):
    """S/L type per position; the sentinel is S-type by convention."""
    n = s.shape[0]
    is_s = np.zeros(n, np.bool_)
    is_s[n - 1] = True
    for i in range(n - 2, -1, -1):
        if s[i] < s[i + 1]:
            is_s[i] = True
        elif s[i] == s[i + 1]:
            is_s[i] = is_s[i + 1]
    return is_s


@njit(cache=True)
def _lms_positions(is_s):
    n = is_s.shape[0]
    count = 0
    for i in range(1, n):
        if is_s[i] and not is_s[i - 1]:
            count += 1
    lms = np.empty(count, np.int64)
    k = 0
    for i in range(1, n):
        if is_s[i] and not is_s[i - 1]:
            lms[k] = i
            k += 1
    return lms


@njit(cache=True)
def _bucket_counts(s, sigma):
    counts = np.zeros(sigma, np.int64)
    for i in range(s.shape[0]):
        counts[s[i]] += 1
    return counts


@njit(cache=True)
def _seed_and_induce(s, is_s, counts, lms_order, sa):
    """One full induced-sorting pass.

    Seeds the given LMS positions at their bucket tails (iterated last to
    first, so a sorted lms_order lands in sorted final positions), then
    induces all L-type entries left to right and all S-type entries right
    to left. Fills sa completely.
    """
    n = s.shape[0]
    sigma = counts.shape[0]
    sa[:] = -1
    edges = np.empty(sigma, np.int64)
    total = 0
    for c in range(sigma):
        total += counts[c]
        edges[c] = total
    for k in range(lms_order.shape[0] - 1, -1, -1):
        j = lms_order[k]
        c = s[j]
        edges[c] -= 1
        sa[edges[c]] = j
    total = 0
    for c in range(sigma):
        edges[c] = total
        total += counts[c]
    for i in range(n):
        j = sa[i]
        if j > 0 and not is_s[j - 1]:
            c = s[j - 1]
            sa[edges[c]] = j - 1
            edges[c] += 1
    total = 0
    for c in range(sigma):
        total += counts[c]
        edges[c] = total
    for i in range(n - 1, -1, -1):
        j = sa[i]
        if j > 0 and is_s[j - 1]:
            c = s[j - 1]
            edges[c] -= 1
            sa[edges[c]] = j - 1


@njit(cache=True)
def _lms_eq(s, is_s, is_lms, a, b):
    """Equality of the LMS substrings starting at a and b (bytes + types)."""
    n = s.shape[0]
    if a == n - 1 or b == n - 1:
        return a == b
    i = 0
    while True:
        if s[a + i] != s[b + i] or is_s[a + i] != is_s[b + i]:
            return False
        if i > 0 and (is_lms[a + i] or is_lms[b + i]):
            return is_lms[a + i] and is_lms[b + i]
        i += 1


@njit(cache=True)
def _name_lms(s, is_s, sa):
    """Assign names to LMS substrings in their induced-sorted order.

    Returns (names indexed by position, distinct name count). Positions
    that are not LMS keep name -1.
    """
    n = s.shape[0]
    is_lms = np.zeros(n, np.bool_)
    for i in range(1, n):
        if is_s[i] and not is_s[i - 1]:
            is_lms[i] = True
    names = np.full(n, -1, np.int32)
    current = np.int32(0)
    prev = -1
    for i in range(n):
        j = sa[i]
        if is_lms[j]:
            if prev >= 0 and not _lms_eq(s, is_s, is_lms, prev, j):
                current += 1
            names[j] = current
            prev = j
    return names, int(current) + 1


def _sais(s: np.ndarray, sigma: int) -> np.ndarray:
    """Recursive SA-IS driver; kernels above carry the O(n) loops."""
    n = s.shape[0]
    if n == 1:
        return np.zeros(1, dtype=np.int64)
    if n == 2:
        return np.array([1, 0], dtype=np.int64)
    is_s = _classify(s)
    lms = _lms_positions(is_s)
    counts = _bucket_counts(s, sigma)
    sa = np.empty(n, dtype=np.int64)
    _seed_and_induce(s, is_s, counts, lms, sa)
    names, name_count = _name_lms(s, is_s, sa)
    summary = names[lms].astype(np.int64)
    del names
    if name_count == lms.shape[0]:
        order = np.empty(lms.shape[0], dtype=np.int64)
        order[summary] = np.arange(lms.shape[0], dtype=np.int64)
        lms_sorted = lms[order]
    else:
        del sa
        sub_sa = _sais(summary, name_count)
        lms_sorted = lms[sub_sa]
        del sub_sa
        sa = np.empty(n, dtype=np.int64)
    del summary
    _seed_and_induce(s, is_s, counts, lms_sorted, sa)
    return sa


def _sa_doubling(s: np.ndarray) -> np.ndarray:
    """Prefix doubling with numpy sorts; O(n log^2 n), no compilation."""
    n = s.shape[0]
    # densify symbol values to 0..n-1 so packed keys below cannot collide
    order = np.argsort(s, kind="stable")
    svals = s[order]
    rank = np.empty(n, dtype=np.int64)
    boundary = np.empty(n, dtype=np.int64)
    boundary[0] = 0
    np.cumsum(svals[1:] != svals[:-1], out=boundary[1:])
    rank[order] = boundary
    if boundary[-1] == n - 1:
        return order
    k = 1
    while True:
        key2 = np.full(n, -1, dtype=np.int64)
        key2[: n - k] = rank[k:]
        combined = rank * np.int64(n + 1) + (key2 + 1)
        sa = np.argsort(combined, kind="stable")
        csort = combined[sa]
        boundary = np.empty(n, dtype=np.int64)
        boundary[0] = 0
        np.cumsum(csort[1:] != csort[:-1], out=boundary[1:])
        rank = np.empty(n, dtype=np.int64)
        rank[sa] = boundary
        if boundary[-1] == n - 1:
            return sa
        k *= 2


BACKENDS = ("sais", "doubling")


def suffix_array(s, sigma: int | None = None, backend: str | None = None) -> np.ndarray:
    """Sort the suffixes of a sentinel-terminated symbol string.

    s: integer array, s[-1] == 0 unique least. sigma: number of distinct
    symbol values (max + 1); inferred when omitted. Returns int64 indices.
    """
    global _constructions
    _constructions += 1
    s = np.ascontiguousarray(s)
    if s.ndim != 1 or s.shape[0] == 0:
        raise ValueError("need a non-empty 1-d symbol array")
    if backend is None:
        backend = os.environ.get("BWTX_SA_BACKEND", "sais")
    if backend not in BACKENDS:
        raise ValueError(f"unknown suffix backend {backend!r}")
    if backend == "sais" and not HAVE_NUMBA:
        backend = "doubling"
    if backend == "doubling":
        return _sa_doubling(s)
    if sigma is None:
        sigma = int(s.max()) + 1
    return _sais(s, sigma)
