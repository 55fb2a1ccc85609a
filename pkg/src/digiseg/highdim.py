"""Order-derived segments in ``Z^d``.

For a pair with ``p <= q`` coordinatewise, sort the segment interval
``[sum(p), sum(q) - 1]`` and hand out its elements from the top: the
``q_d - p_d`` greatest step in direction ``d``, the next ``q_{d-1} - p_{d-1}``
in direction ``d - 1``, and so on down to direction 1. That family is
consistent on its own; gluing the other sign patterns on by reflecting
coordinates is not, and :func:`find_mixed_s3_violation` finds the witness.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Iterator, Sequence

from .conformance import Violation
from .errors import DomainError
from .order import TotalOrder

PointD = tuple[int, ...]
SegmentD = tuple[PointD, ...]


def segment_d(order: TotalOrder, p: Sequence[int], q: Sequence[int]) -> SegmentD:
    p, q = tuple(p), tuple(q)
    if len(p) != len(q) or len(p) < 2:
        raise ValueError("endpoints need the same dimension d >= 2")
    deltas = [b - a for a, b in zip(p, q)]
    if any(t < 0 for t in deltas):
        raise DomainError(f"{p} -> {q} does not have strictly positive slope type")
    start, end = sum(p), sum(q)
    if start == end:
        return (p,)
    ranked = order.sorted_range(start, end - 1)
    direction: dict[int, int] = {}
    pos = len(ranked)
    for axis in range(len(p) - 1, -1, -1):
        for c in ranked[pos - deltas[axis]:pos]:
            direction[c] = axis
        pos -= deltas[axis]
    r = list(p)
    pts = [p]
    for c in range(start, end):
        r[direction[c]] += 1
        pts.append(tuple(r))
    return tuple(pts)


def slope_type(p: Sequence[int], q: Sequence[int]) -> tuple[int, ...]:
    """Sign vector of ``p -> q`` after orienting it.

    The pair is oriented so that the last coordinate where the endpoints
    differ increases; ties count as ``+1``.
    """
    p, q = _orient(tuple(p), tuple(q))
    return tuple(1 if a <= b else -1 for a, b in zip(p, q))


def _orient(p: PointD, q: PointD) -> tuple[PointD, PointD]:
    for a, b in zip(reversed(p), reversed(q)):
        if a != b:
            return (p, q) if a < b else (q, p)
    return p, q


def mixed_segment(order: TotalOrder, p: Sequence[int], q: Sequence[int]) -> SegmentD:
    """Segment for any slope type: reflect the decreasing coordinates, walk, reflect back.

    In ``d = 2`` this is the planar construction, including its mirror rule
    for negative slopes.
    """
    p, q = tuple(p), tuple(q)
    a, b = _orient(p, q)
    signs = tuple(1 if u <= v else -1 for u, v in zip(a, b))
    flip = lambda r: tuple(s * x for s, x in zip(signs, r))  # noqa: E731
    path = tuple(flip(r) for r in segment_d(order, flip(a), flip(b)))
    return path if a == p else path[::-1]


class BoxD:
    """Inclusive cube ``[lo, hi]^d``."""

    def __init__(self, lo: int, hi: int, d: int):
        if lo > hi or d < 2:
            raise ValueError("need lo <= hi and d >= 2")
        self.lo, self.hi, self.d = lo, hi, d

    def points(self) -> Iterator[PointD]:
        return product(range(self.lo, self.hi + 1), repeat=self.d)

    def __repr__(self) -> str:
        return f"BoxD([{self.lo},{self.hi}]^{self.d})"


def _positive_pairs(box: BoxD) -> Iterator[tuple[PointD, PointD]]:
    pts = list(box.points())
    for p in pts:
        for q in pts:
            if all(a <= b for a, b in zip(p, q)):
                yield p, q


def check_axioms_d(order: TotalOrder, box: BoxD) -> list[Violation]:
    """The axioms over every strictly-positive-slope pair in ``box``.

    Symmetry is read as ``S(q, p)`` being the reverse of ``S(p, q)``,
    prolongation looks at ``q + e_i``, and monotonicity requires every
    coordinate to move monotonically between its endpoint values.
    """
    memo: dict[tuple[PointD, PointD], SegmentD] = {}

    def seg(p: PointD, q: PointD) -> SegmentD:
        s = memo.get((p, q))
        if s is None:
            s = memo[p, q] = segment_d(order, p, q)
        return s

    out: list[Violation] = []
    d = box.d
    for p, q in _positive_pairs(box):
        s = seg(p, q)
        steps = [sum(abs(a - b) for a, b in zip(u, v)) for u, v in zip(s, s[1:])]
        if s[0] != p or s[-1] != q or any(t != 1 for t in steps) or len(set(s)) != len(s):
            out.append(Violation("S1", (p, q)))
            continue
        if set(mixed_segment(order, q, p)) != set(s):
            out.append(Violation("S2", (p, q)))
        for i, r in enumerate(s):
            if seg(p, r) != s[:i + 1]:
                out.append(Violation("S3", (p, q, r)))
                break
        base = set(s)
        nexts = [tuple(x + (j == i) for j, x in enumerate(q)) for i in range(d)]
        if not any(base <= set(seg(p, n)) for n in nexts):
            out.append(Violation("S4", (p, q)))
        for i in range(d):
            coords = [r[i] for r in s]
            if coords != sorted(coords) or coords[0] != p[i] or coords[-1] != q[i]:
                out.append(Violation("S5", (p, q, i)))
                break
    return out


def find_mixed_s3_violation(
    order: TotalOrder,
    box: BoxD,
    slope_types: Iterable[Sequence[int]] | None = None,
) -> tuple[PointD, PointD, PointD] | None:
    """Lexicographically first ``(p, q, r)`` with ``r`` on ``S(p, q)`` but
    ``S(p, r)`` not contained in it, for the reflected all-types system.

    ``slope_types`` restricts the pairs ``(p, q)`` and ``(p, r)`` examined to
    the given sign vectors.
    """
    allowed = None if slope_types is None else {tuple(t) for t in slope_types}
    memo: dict[tuple[PointD, PointD], SegmentD] = {}

    def seg(p: PointD, q: PointD) -> SegmentD:
        s = memo.get((p, q))
        if s is None:
            s = memo[p, q] = mixed_segment(order, p, q)
        return s

    pts = list(box.points())
    for p in pts:
        for q in pts:
            if q == p or (allowed is not None and slope_type(p, q) not in allowed):
                continue
            s = seg(p, q)
            members = set(s)
            for r in sorted(s):
                if r == p or (allowed is not None and slope_type(p, r) not in allowed):
                    continue
                if not set(seg(p, r)) <= members:
                    return p, q, r
    return None
