"""Digital lines of an order-derived system, restricted to finite windows.

A line with non-negative slope is determined by one of its points and by
its slope: the set of diagonal sums ``x + y`` at which it steps up. Slopes
are upward-closed in the order. Infinite lines are out of reach, so
everything here works on a window of consecutive diagonals, and an
irrational slope is stood in for by a predicate on a finite domain.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError, InconclusiveError, PreconditionError
from .order import POW2, IntegerInterval, Pow2Order, TotalOrder, pow2_predecessor, pow2_successor
from .segments import OrderSystem, Point

ALL, EMPTY, RATINC, RATEXC, PRED = "all", "empty", "ratinc", "ratexc", "pred"

DISJOINT = "disjoint"
CROSS = "cross_with_common_segment"
HALFLINE = "common_halfline_in_window"


@dataclass(frozen=True)
class Slope:
    """Upward-closed set of diagonal sums.

    ``ratinc`` is ``{a >= c}`` and ``ratexc`` is ``{a > c}`` in the order;
    ``pred`` lists its members explicitly on ``domain`` and is only defined
    there. Use the constructors below, which validate their arguments.
    """

    kind: str
    c: int | None = None
    domain: IntegerInterval | None = None
    members: frozenset[int] = frozenset()

    @classmethod
    def all(cls) -> Slope:
        return cls(ALL)

    @classmethod
    def empty(cls) -> Slope:
        return cls(EMPTY)

    @classmethod
    def ratinc(cls, c: int) -> Slope:
        return cls(RATINC, c=c)

    @classmethod
    def ratexc(cls, c: int) -> Slope:
        return cls(RATEXC, c=c)

    @classmethod
    def predicate(cls, order: TotalOrder, domain: IntegerInterval, members: Iterable[int]) -> Slope:
        members = frozenset(members)
        if not members <= set(domain):
            raise ValueError(f"members outside {domain}")
        # upward-closed on the domain means the members form a top segment of the sorted domain
        ranked = order.sorted_range(domain.lo, domain.hi)
        k = len(members)
        if k and not members == frozenset(ranked[len(ranked) - k:]):
            raise ValueError("members are not upward-closed in the order")
        return cls(PRED, domain=domain, members=members)

    def contains(self, order: TotalOrder, a: int) -> bool:
        if self.kind == ALL:
            return True
        if self.kind == EMPTY:
            return False
        if self.kind == RATINC:
            return order.compare(a, self.c) >= 0
        if self.kind == RATEXC:
            return order.compare(a, self.c) > 0
        if a not in self.domain:
            raise DomainError(f"membership of {a} undecided outside {self.domain}")
        return a in self.members

    def __str__(self) -> str:
        if self.kind in (RATINC, RATEXC):
            return f"{self.kind}:{self.c}"
        if self.kind == PRED:
            return f"pred[{self.domain.lo},{self.domain.hi}]:{','.join(map(str, sorted(self.members)))}"
        return self.kind


def parse_slope(spec: str, order: TotalOrder) -> Slope:
    """Parse ``all``, ``empty``, ``ratinc:<c>``, ``ratexc:<c>`` or ``pred:<file>``.

    A predicate file holds the domain bounds ``lo hi`` on its first line and
    the members, whitespace separated, on the following lines.
    """
    if spec in (ALL, EMPTY):
        return Slope(spec)
    kind, _, arg = spec.partition(":")
    if kind == RATINC:
        return Slope.ratinc(int(arg))
    if kind == RATEXC:
        return Slope.ratexc(int(arg))
    if kind == PRED:
        with open(arg) as fh:
            rows = [line.split() for line in fh if line.strip() and not line.startswith("#")]
        lo, hi = (int(t) for t in rows[0])
        members = [int(t) for row in rows[1:] for t in row]
        return Slope.predicate(order, IntegerInterval(lo, hi), members)
    raise ValueError(f"unknown slope spec {spec!r}")


@dataclass(frozen=True)
class LineWindow:
    """The part of a line stepping at the diagonals in ``diag``.

    ``points[i]`` lies on diagonal ``diag.lo + i``, so there are
    ``len(diag) + 1`` points.
    """

    points: tuple[Point, ...]
    diag: IntegerInterval
    slope: Slope | None = None

    def at(self, s: int) -> Point:
        return self.points[s - self.diag.lo]

    def __contains__(self, p: object) -> bool:
        x, y = p  # type: ignore[misc]
        s = x + y
        return self.diag.lo <= s <= self.diag.hi + 1 and self.at(s) == (x, y)

    def up_sums(self) -> frozenset[int]:
        return frozenset(
            u[0] + u[1] for u, v in zip(self.points, self.points[1:]) if v[1] == u[1] + 1
        )


def line_window(order: TotalOrder, p: Point, slope: Slope, diag: IntegerInterval) -> LineWindow:
    """The line through ``p`` with the given slope, over the diagonals in ``diag``."""
    s = p[0] + p[1]
    if not diag.lo <= s <= diag.hi + 1:
        raise DomainError(f"{p} is not on a diagonal of the window {diag}")
    if slope.kind == PRED and not (slope.domain.lo <= diag.lo and diag.hi <= slope.domain.hi):
        raise DomainError(f"slope domain {slope.domain} does not cover {diag}")
    up = {c: slope.contains(order, c) for c in diag}
    x, y = p
    back = []
    for c in range(s - 1, diag.lo - 1, -1):
        if up[c]:
            y -= 1
        else:
            x -= 1
        back.append((x, y))
    x, y = p
    fwd = [p]
    for c in range(s, diag.hi + 1):
        if up[c]:
            y += 1
        else:
            x += 1
        fwd.append((x, y))
    return LineWindow(tuple(back[::-1] + fwd), diag, slope)


def contains_own_segments(order: TotalOrder, lw: LineWindow) -> bool:
    """Is the segment between every two points of ``lw`` a sub-path of ``lw``?"""
    system = OrderSystem(order)
    pts = lw.points
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if system.segment(pts[i], pts[j]) != pts[i:j + 1]:
                return False
    return True


def classify_intersection(l1: LineWindow, l2: LineWindow) -> str:
    """How two lines over the same diagonals meet inside the window.

    A shared run touching either end of the window counts as a common
    half-line; a shared run strictly inside it is a crossing.
    """
    if l1.diag != l2.diag:
        raise ValueError("windows cover different diagonals")
    shared = [i for i, (u, v) in enumerate(zip(l1.points, l2.points)) if u == v]
    if not shared:
        return DISJOINT
    first, last = shared[0], shared[-1]
    if last - first + 1 != len(shared):
        raise ValueError(f"lines split and meet again between {l1.points[first]} and {l1.points[last]}")
    if first == 0 or last == len(l1.points) - 1:
        return HALFLINE
    return CROSS


def _least(order: TotalOrder, values: Iterable[int]) -> int | None:
    best = None
    for v in values:
        if best is None or order.compare(v, best) < 0:
            best = v
    return best


def _greatest(order: TotalOrder, values: Iterable[int]) -> int | None:
    best = None
    for v in values:
        if best is None or order.compare(v, best) > 0:
            best = v
    return best


def _neighbour_slopes(order: TotalOrder, slope: Slope, diag: IntegerInterval) -> list[tuple[Slope, int]]:
    """Slopes differing from ``slope`` by its boundary element, with that element."""
    if slope.kind == RATINC:
        return [(Slope.ratexc(slope.c), slope.c)]
    if slope.kind == RATEXC:
        return [(Slope.ratinc(slope.c), slope.c)]
    # Outside the rational kinds the boundary is taken on a finite domain.
    domain = slope.domain if slope.kind == PRED else diag
    members = set(domain) if slope.kind == ALL else set(slope.members)
    out = []
    least = _least(order, members)
    if least is not None:
        out.append((Slope.predicate(order, domain, members - {least}), least))
    top_out = _greatest(order, set(domain) - members)
    if top_out is not None:
        out.append((Slope.predicate(order, domain, members | {top_out}), top_out))
    return out


def _gap_slopes(slope: Slope) -> list[tuple[Slope, int]]:
    """One-element changes at the far side of a pow2 gap next to the boundary element.

    ``[c, inf)`` also gains the immediate predecessor of ``c`` and
    ``(c, inf)`` also loses the immediate successor of ``c``, when those exist.
    """
    if slope.kind == RATINC:
        e = pow2_predecessor(slope.c)
        return [] if e is None else [(Slope.ratinc(e), e)]
    if slope.kind == RATEXC:
        e = pow2_successor(slope.c)
        return [] if e is None else [(Slope.ratexc(e), e)]
    return []


def parallels_through(order: TotalOrder, lw: LineWindow, p: Point, gap_neighbours: bool = False) -> list[Slope]:
    """Slopes of the lines through ``p`` that do not cross ``lw`` inside its window.

    Candidates are ``slope`` itself and the slopes differing from it by its
    boundary element. Candidates realizing the same path in the window are
    merged. For a rational slope whose boundary element falls outside the
    window the two parallels cannot be told apart, which raises
    :class:`InconclusiveError`; for a predicate slope that collapse is the
    expected outcome and a single slope is returned.

    pow2 is not dense: every positive integer has an immediate successor.
    With ``gap_neighbours`` the slope differing by the element across such
    a gap is tried too, which can add a third non-crossing parallel.
    """
    if not isinstance(order, Pow2Order):
        raise PreconditionError("parallels are characterized for the pow2 order only", order.name)
    if p in lw:
        raise PreconditionError(f"{p} lies on the line", p)
    slope = lw.slope
    if slope is None or line_window(order, lw.points[0], slope, lw.diag).points != lw.points:
        raise PreconditionError("line window does not carry its slope", lw.points[:2])
    found: list[Slope] = []
    paths: set[tuple[Point, ...]] = set()
    candidates = [(slope, None)] + _neighbour_slopes(order, slope, lw.diag)
    if gap_neighbours:
        candidates += _gap_slopes(slope)
    collapsed = False
    for cand, _elem in candidates:
        path = line_window(order, p, cand, lw.diag)
        if path.points in paths:
            collapsed = True
            continue
        if classify_intersection(lw, path) == CROSS:
            continue
        paths.add(path.points)
        found.append(cand)
    if collapsed and slope.kind in (RATINC, RATEXC):
        raise InconclusiveError(f"boundary element {slope.c} lies outside the window {lw.diag}")
    return found


def density_failures(lo: int = -256, hi: int = 256, search: int = 1 << 10) -> list[tuple[int, int]]:
    """Pairs ``a < b`` (in pow2) of ``[lo, hi]`` with nothing strictly between them
    in ``[lo - search, hi + search]``.

    Only consecutive pairs need checking: any other pair has an element of
    ``[lo, hi]`` between them. The failures are genuine gaps of the order,
    ``(x, pow2_successor(x))`` for positive ``x``, not artifacts of the search range.
    """
    big = POW2.sorted_range(lo - search, hi + search)
    pos = {v: i for i, v in enumerate(big)}
    small = POW2.sorted_range(lo, hi)
    return [(a, b) for a, b in zip(small, small[1:]) if pos[b] - pos[a] < 2]
