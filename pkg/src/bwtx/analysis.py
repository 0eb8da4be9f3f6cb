"""Primitives for hunting mergeable runs and deriving better orderings.

Two workflows feed on these: chase a long potential run and move its
breakers above the run character, or read the distinguishing comparisons
inside one first-column section and combine them into a new ordering.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

import numpy as np

from .core import Transform, RunStatistics, build_transform, run_bounds
from .errors import CycleDetected, EndMarkerConstraint, UnknownCharacter
from .matrix import cell
from .ordering import AlphabetOrdering
from .text import TextBuffer

DEFAULT_MAX_GAP = 4


@dataclass(frozen=True)
class RunBreaker:
    row: int
    breaker: int
    flanked_by: int

    def as_dict(self) -> dict:
        return {"row": self.row, "breaker": self.breaker, "flanked_by": self.flanked_by}


@dataclass(frozen=True)
class PotentialRun:
    character: int
    member_runs: tuple[tuple[int, int], ...]
    gaps: tuple[tuple[int, int], ...]
    total_length: int
    total_gap: int

    def as_dict(self) -> dict:
        return {
            "character": self.character,
            "member_runs": [list(r) for r in self.member_runs],
            "gaps": [list(g) for g in self.gaps],
            "total_length": self.total_length,
            "total_gap": self.total_gap,
        }


@dataclass(frozen=True)
class Section:
    first_char: int
    lo: int
    hi: int

    def as_dict(self) -> dict:
        return {"first_char": self.first_char, "rows": [self.lo, self.hi]}


@dataclass(frozen=True)
class OrderConstraint:
    lesser: int
    greater: int
    rows: tuple[int, int] = field(default=(0, 0))
    depth: int = 1
    immovable: bool = False

    def as_dict(self) -> dict:
        return {
            "lesser": self.lesser,
            "greater": self.greater,
            "rows": list(self.rows),
            "depth": self.depth,
            "immovable": self.immovable,
        }


def run_breakers(t: Transform) -> list[RunBreaker]:
    """Rows j with L[j-1] = L[j+1] != L[j], ascending."""
    lcol = t.l_array
    if lcol.shape[0] < 3:
        return []
    a, b, c = lcol[:-2], lcol[1:-1], lcol[2:]
    rows = np.flatnonzero((a == c) & (a != b)) + 1
    return [RunBreaker(int(j), int(lcol[j]), int(lcol[j - 1])) for j in rows]


def potential_runs(t: Transform, max_gap: int = DEFAULT_MAX_GAP) -> list[PotentialRun]:
    """Group each byte's consecutive runs while the rows between them stay
    few, then rank the groups (longest first, tightest gaps first).

    A group keeps absorbing the byte's next run as long as its accumulated
    gap stays within max_gap. Bytes whose runs never group still
    contribute their single best run, so every byte shows up at least once.
    """
    lcol = t.l_array
    starts, ends = run_bounds(lcol)
    by_char: dict[int, list[tuple[int, int]]] = {}
    for s, e in zip(starts.tolist(), ends.tolist()):
        by_char.setdefault(int(lcol[s]), []).append((s, e))

    groups: list[PotentialRun] = []
    for ch, runs in by_char.items():
        chains: list[list[tuple[int, int]]] = [[runs[0]]]
        gap_sum = 0
        for prev, cur in zip(runs, runs[1:]):
            gap = cur[0] - prev[1]
            if gap_sum + gap <= max_gap:
                chains[-1].append(cur)
                gap_sum += gap
            else:
                chains.append([cur])
                gap_sum = 0
        multi = [c for c in chains if len(c) >= 2]
        if not multi:
            best = max(chains, key=lambda c: c[0][1] - c[0][0])
            multi = [best]
        for chain in multi:
            gaps = tuple(
                (a[1], b[0]) for a, b in zip(chain, chain[1:])
            )
            groups.append(
                PotentialRun(
                    character=ch,
                    member_runs=tuple(chain),
                    gaps=gaps,
                    total_length=sum(e - s for s, e in chain),
                    total_gap=sum(b - a for a, b in gaps),
                )
            )
    groups.sort(key=lambda g: (-g.total_length, g.total_gap, g.character))
    return groups


def sections(t: Transform) -> list[Section]:
    """Maximal intervals of rows sharing a first-column byte."""
    first = t.tprime[t.sa]
    change = np.flatnonzero(first[1:] != first[:-1])
    lows = np.concatenate(([0], change + 1))
    highs = np.concatenate((change + 1, [t.m]))
    return [Section(int(first[lo]), int(lo), int(hi)) for lo, hi in zip(lows, highs)]


def _lcp(t: Transform, i: int, j: int) -> int:
    seq = t.rank_seq
    m = t.m
    a, b = int(t.sa[i]), int(t.sa[j])
    ell = 0
    while ell < m and seq[(a + ell) % m] == seq[(b + ell) % m]:
        ell += 1
    return ell


def distinguishing_pairs(t: Transform, section: Section) -> list[OrderConstraint]:
    """The byte comparison that orders each adjacent row pair in a section.

    Adjacent rows share a prefix up to some depth; the two bytes there are
    what the sort actually compared. Pairs touching the end marker are
    flagged immovable since its rank is pinned at 0.
    """
    out = []
    marker = t.text.end_marker
    for i in range(section.lo, section.hi - 1):
        ell = _lcp(t, i, i + 1)
        lesser = cell(t, i, ell)
        greater = cell(t, i + 1, ell)
        out.append(
            OrderConstraint(
                lesser=lesser,
                greater=greater,
                rows=(i, i + 1),
                depth=ell,
                immovable=(lesser == marker or greater == marker),
            )
        )
    return out


def combine_constraints(
    desired, base: AlphabetOrdering
) -> AlphabetOrdering:
    """Merge pairwise constraints into a full ordering over base's bytes.

    Constrained bytes are topologically ordered; everything else keeps its
    relative position in base. Each weakly connected constraint group is
    placed where its earliest (by base) member sat, and inside a group ties
    fall back to base order too.
    """
    pos = {b: i for i, b in enumerate(base.order)}
    edges: set[tuple[int, int]] = set()
    for con in desired:
        lesser, greater = int(con.lesser), int(con.greater)
        if greater == base.end_marker:
            raise EndMarkerConstraint(
                "nothing can be ordered below the end marker"
            )
        if lesser == base.end_marker:
            continue  # already below everything
        for b in (lesser, greater):
            if b not in pos:
                raise UnknownCharacter(f"byte {b:#04x} is not in the base ordering")
        if lesser == greater:
            raise CycleDetected(f"byte {lesser:#04x} ordered below itself",
                                cycle=[lesser])
        edges.add((lesser, greater))

    if not edges:
        return AlphabetOrdering(
            name="combined", order=base.order, end_marker=base.end_marker
        )

    succ: dict[int, set[int]] = {}
    nodes: set[int] = set()
    for a, b in edges:
        succ.setdefault(a, set()).add(b)
        nodes.update((a, b))

    # weakly connected components
    component: dict[int, int] = {}
    neighbors: dict[int, set[int]] = {n: set() for n in nodes}
    for a, b in edges:
        neighbors[a].add(b)
        neighbors[b].add(a)
    for n in nodes:
        if n in component:
            continue
        comp_id = len(set(component.values()))
        stack = [n]
        while stack:
            v = stack.pop()
            if v in component:
                continue
            component[v] = comp_id
            stack.extend(neighbors[v] - component.keys())

    comp_members: dict[int, list[int]] = {}
    for n, cid in component.items():
        comp_members.setdefault(cid, []).append(n)

    # topological order inside each component, base order breaking ties
    comp_sequence: dict[int, list[int]] = {}
    for cid, members in comp_members.items():
        indeg = {n: 0 for n in members}
        for a, b in edges:
            if component[a] == cid:
                indeg[b] += 1
        heap = [pos[n] for n in members if indeg[n] == 0]
        heapq.heapify(heap)
        seq: list[int] = []
        while heap:
            n = base.order[heapq.heappop(heap)]
            seq.append(n)
            for b in sorted(succ.get(n, ())):
                indeg[b] -= 1
                if indeg[b] == 0:
                    heapq.heappush(heap, pos[b])
        if len(seq) != len(members):
            raise CycleDetected(
                "constraints form a cycle: "
                + " < ".join(f"{b:#04x}" for b in _find_cycle(succ, members)),
                cycle=_find_cycle(succ, members),
            )
        comp_sequence[cid] = seq

    # stitch components into the unconstrained remainder by earliest member
    placed = sorted(comp_sequence.values(), key=lambda seq: min(pos[n] for n in seq))
    out: list[int] = []
    next_comp = 0
    for b in base.order:
        if b in nodes:
            anchor = min(pos[n] for n in placed[next_comp]) if next_comp < len(placed) else None
            if anchor is not None and pos[b] == anchor:
                out.extend(placed[next_comp])
                next_comp += 1
            continue
        out.append(b)
    # a component is emitted when base order reaches its earliest member,
    # so every component lands exactly once
    return AlphabetOrdering(
        name="combined", order=bytes(out), end_marker=base.end_marker
    )


def _find_cycle(succ: dict[int, set[int]], members: list[int]) -> list[int]:
    state: dict[int, int] = {}
    parent: dict[int, int] = {}
    members_set = set(members)
    for start in members:
        if state.get(start):
            continue
        stack = [(start, iter(sorted(succ.get(start, ()))))]
        state[start] = 1
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in members_set:
                    continue
                if state.get(nxt) == 1:
                    cycle = [nxt, node]
                    cur = node
                    while cur != nxt:
                        cur = parent[cur]
                        cycle.append(cur)
                    cycle.pop()
                    cycle.reverse()
                    return cycle
                if nxt not in state:
                    state[nxt] = 1
                    parent[nxt] = node
                    stack.append((nxt, iter(sorted(succ.get(nxt, ())))))
                    advanced = True
                    break
            if not advanced:
                state[node] = 2
                stack.pop()
    return []


def move_char(base: AlphabetOrdering, ch: int, anchor: int, placement: str) -> AlphabetOrdering:
    """Reinsert ch immediately before or after anchor, all else unchanged."""
    if placement not in ("before", "after"):
        raise ValueError("placement must be 'before' or 'after'")
    if ch == anchor:
        raise UnknownCharacter("anchor must differ from the moved byte")
    order = list(base.order)
    for b in (ch, anchor):
        if b not in order:
            raise UnknownCharacter(f"byte {b:#04x} is not in the ordering")
    order.remove(ch)
    at = order.index(anchor)
    order.insert(at if placement == "before" else at + 1, ch)
    return AlphabetOrdering(name="custom", order=bytes(order), end_marker=base.end_marker)


def evaluate_ordering(text: TextBuffer, ordering: AlphabetOrdering) -> RunStatistics:
    """Stats of a throwaway transform; the feedback signal when iterating."""
    return build_transform(text, ordering).stats
