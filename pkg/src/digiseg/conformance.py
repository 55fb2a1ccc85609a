"""Axiom checks and induced-order machinery for arbitrary segment systems.

Every check sweeps a finite :class:`Window` of lattice points in
lexicographic scan order and returns :class:`Violation` records whose
witnesses replay the failure. Segment answers are memoized per sweep, so an
oracle is asked each question at most once.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Sequence

from .errors import OrderConflictError, OrderExtractionError, PreconditionError
from .order import IntegerInterval, TotalOrder, two_adic_valuation
from .segments import Point, Segment, SegmentSystem

AXIOMS = ("S1", "S2", "S3", "S4", "S5")
CONSEQUENCES = ("C1", "C2", "C3")


@dataclass(frozen=True)
class Window:
    """Inclusive lattice rectangle ``[lo.x, hi.x] x [lo.y, hi.y]``."""

    lo: Point
    hi: Point

    def __post_init__(self) -> None:
        if self.lo[0] > self.hi[0] or self.lo[1] > self.hi[1]:
            raise ValueError(f"empty window {self.lo}..{self.hi}")

    @classmethod
    def square(cls, a: int, b: int | None = None) -> Window:
        """``[-a, a]^2`` or, with two arguments, ``[a, b]^2``."""
        lo, hi = (-a, a) if b is None else (a, b)
        return cls((lo, lo), (hi, hi))

    def points(self) -> Iterator[Point]:
        return product(range(self.lo[0], self.hi[0] + 1), range(self.lo[1], self.hi[1] + 1))

    def grow(self, m: int) -> Window:
        return Window((self.lo[0] - m, self.lo[1] - m), (self.hi[0] + m, self.hi[1] + m))

    def __contains__(self, p: object) -> bool:
        x, y = p  # type: ignore[misc]
        return self.lo[0] <= x <= self.hi[0] and self.lo[1] <= y <= self.hi[1]

    @property
    def size(self) -> int:
        return max(self.hi[0] - self.lo[0], self.hi[1] - self.lo[1]) + 1


def _jsonable(w):
    if isinstance(w, tuple):
        return [_jsonable(v) for v in w]
    return w


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple

    def to_json(self) -> str:
        return json.dumps({"axiom": self.axiom, "witness": _jsonable(self.witness)})


class Memo:
    """Caches segment answers and their point sets for one sweep."""

    def __init__(self, system: SegmentSystem):
        self.system = system
        self._segs: dict[tuple[Point, Point], Segment] = {}
        self._sets: dict[tuple[Point, Point], frozenset[Point]] = {}

    def seg(self, p: Point, q: Point) -> Segment:
        s = self._segs.get((p, q))
        if s is None:
            s = self.system.segment(p, q)
            if not isinstance(s, tuple) or (s and not isinstance(s[0], tuple)):
                s = tuple(tuple(pt) for pt in s)
            self._segs[p, q] = s
        return s

    def set(self, p: Point, q: Point) -> frozenset[Point]:
        s = self._sets.get((p, q))
        if s is None:
            s = self._sets[p, q] = frozenset(self.seg(p, q))
        return s


def _is_grid_path(seg: Segment, p: Point, q: Point) -> bool:
    if not seg or seg[0] != p or seg[-1] != q or len(set(seg)) != len(seg):
        return False
    return all(abs(u[0] - v[0]) + abs(u[1] - v[1]) == 1 for u, v in zip(seg, seg[1:]))


def _neighbors(q: Point) -> tuple[Point, ...]:
    x, y = q
    return ((x + 1, y), (x, y + 1), (x - 1, y), (x, y - 1))


def _prolongable(memo: Memo, p: Point, q: Point, candidates: Iterable[Point]) -> bool:
    base = memo.set(p, q)
    return any(r not in base and base <= memo.set(p, r) for r in candidates)


def check_axioms(
    system: SegmentSystem,
    w: Window,
    axioms: Sequence[str] = AXIOMS,
    inconclusive: list | None = None,
    memo: Memo | None = None,
) -> list[Violation]:
    """Check the segment axioms for every ordered pair of points in ``w``.

    Prolongation (S4) first tries the four neighbours of ``q``, then every
    point of ``w`` grown by one. When that margin has no witness the search
    widens to ``w`` grown by its own size: a witness found there makes the
    pair inconclusive (appended to ``inconclusive`` when given), no witness
    at all makes it a violation.
    """
    memo = memo or Memo(system)
    wanted = set(axioms)
    out: list[Violation] = []
    pts = list(w.points())
    margin = None
    for p in pts:
        for q in pts:
            seg = memo.seg(p, q)
            if "S1" in wanted and not _is_grid_path(seg, p, q):
                out.append(Violation("S1", (p, q)))
            if "S2" in wanted and p < q and memo.set(p, q) != memo.set(q, p):
                out.append(Violation("S2", (p, q)))
            if "S3" in wanted:
                full = memo.set(p, q)
                for r in seg[:-1]:
                    if not memo.set(p, r) <= full:
                        out.append(Violation("S3", (p, q, r)))
                        break
            if "S4" in wanted and not _prolongable(memo, p, q, _neighbors(q)):
                if margin is None:
                    margin = list(w.grow(1).points())
                if not _prolongable(memo, p, q, margin):
                    if _prolongable(memo, p, q, w.grow(w.size).points()):
                        if inconclusive is not None:
                            inconclusive.append((p, q))
                    else:
                        out.append(Violation("S4", (p, q)))
            if "S5" in wanted:
                if p[0] == q[0] and any(u[0] != p[0] for u in seg):
                    out.append(Violation("S5", (p, q)))
                elif p[1] == q[1] and any(u[1] != p[1] for u in seg):
                    out.append(Violation("S5", (p, q)))
    return out


def _slope_ok(points: Iterable[Point], sign: int) -> tuple[Point, Point] | None:
    """Find two points spanning a slope of the wrong sign, if any.

    ``sign`` +1 demands non-negative slopes: after sorting by ``(x, sign*y)``
    the y values must be monotone in that direction.
    """
    ordered = sorted(points, key=lambda u: (u[0], sign * u[1]))
    for u, v in zip(ordered, ordered[1:]):
        if sign * (v[1] - u[1]) < 0:
            return (u, v)
    return None


def check_consequences(
    system: SegmentSystem,
    w: Window,
    c3_window: Window | None = None,
    which: Sequence[str] = CONSEQUENCES,
    memo: Memo | None = None,
) -> list[Violation]:
    """Check the slope (C1), box (C2) and intersection (C3) consequences.

    C3 is checked in the form "for every segment T and points u, v of T,
    S(u, v) lies in T", which is the two-segment statement with both
    segments taken equal; it implies the general case because S(u, v) lies
    in T1 and T2 separately.
    """
    memo = memo or Memo(system)
    wanted = set(which)
    out: list[Violation] = []
    pts = list(w.points())
    for p in pts:
        for q in pts:
            seg = memo.seg(p, q)
            dx, dy = q[0] - p[0], q[1] - p[1]
            if "C1" in wanted:
                for sign in (1, -1):
                    if dx * dy * sign >= 0:
                        bad = _slope_ok(seg, sign)
                        if bad:
                            out.append(Violation("C1", (p, q) + bad))
                            break
            if "C2" in wanted:
                x0, x1 = sorted((p[0], q[0]))
                y0, y1 = sorted((p[1], q[1]))
                for u in seg:
                    if not (x0 <= u[0] <= x1 and y0 <= u[1] <= y1):
                        out.append(Violation("C2", (p, q, u)))
                        break
    if "C3" in wanted:
        pts3 = list((c3_window or w).points())
        for p in pts3:
            for q in pts3:
                if q < p:
                    continue
                seg = memo.seg(p, q)
                full = memo.set(p, q)
                hit = None
                for i, u in enumerate(seg):
                    for v in seg[i + 1:]:
                        if not memo.set(u, v) <= full:
                            hit = (u, v)
                            break
                    if hit:
                        break
                if hit:
                    out.append(Violation("C3", (p, q) + hit))
    return out


def check_translation_invariance(
    system: SegmentSystem,
    w: Window,
    ts: Iterable[int] = range(-3, 4),
    first_only: bool = False,
    memo: Memo | None = None,
    negative: bool = False,
) -> list[Violation]:
    """Compare S(p + (t,-t), q + (t,-t)) with S(p, q) + (t,-t) on ``w``.

    Only non-negative slope pairs are examined: the y-axis mirror used for
    negative slopes turns the shift into (t, t). With ``negative=True`` the
    negative slope pairs are checked against that (t, t) shift instead.
    """
    memo = memo or Memo(system)
    ts = [t for t in ts if t != 0]
    out: list[Violation] = []
    pts = list(w.points())
    sy = 1 if negative else -1
    for p in pts:
        for q in pts:
            slope = (q[0] - p[0]) * (q[1] - p[1])
            if (slope < 0) != negative:
                continue
            base = memo.seg(p, q)
            for t in ts:
                moved = memo.seg((p[0] + t, p[1] + sy * t), (q[0] + t, q[1] + sy * t))
                if moved != tuple((x + t, y + sy * t) for x, y in base):
                    out.append(Violation("OBS1", (p, q, t)))
                    if first_only:
                        return out
                    break
    return out


def _steps(seg: Segment) -> Iterator[tuple[int, bool]]:
    """Yield ``(x + y, went_up)`` for each step of a monotone staircase."""
    for u, v in zip(seg, seg[1:]):
        if v == (u[0], u[1] + 1):
            yield u[0] + u[1], True
        elif v == (u[0] + 1, u[1]):
            yield u[0] + u[1], False
        else:
            raise OrderExtractionError(f"segment is not an up/right staircase at {u} -> {v}", (u, v))


def check_no_cross(system: SegmentSystem, p: Point, C: int, w: Window, memo: Memo | None = None) -> list[Violation]:
    """Look for two rays from ``p`` to the diagonal ``x + y = C + 1`` that
    go up at ``(a, C - a)`` and right at ``(b, C - b)`` with ``a > b``."""
    if p not in w:
        raise ValueError(f"{p} not in window")
    memo = memo or Memo(system)
    ups: list[tuple[int, Point]] = []
    rights: list[tuple[int, Point]] = []
    for q in w.points():
        if q[0] + q[1] != C + 1 or q[0] < p[0] or q[1] < p[1]:
            continue
        for u, v in zip(memo.seg(p, q), memo.seg(p, q)[1:]):
            if u[0] + u[1] == C:
                (ups if v[1] > u[1] else rights).append((u[0], q))
                break
    out = []
    for a, qa in ups:
        for b, qb in rights:
            if a > b:
                out.append(Violation("NOCROSS", (p, qa, qb, C)))
    return out


@dataclass(frozen=True)
class InducedOrder:
    """A strict total order on ``domain`` recovered from segments at ``base_point``.

    ``increasing`` lists the domain from least to greatest.
    """

    base_point: Point | None
    domain: IntegerInterval
    increasing: tuple[int, ...]
    _rank: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_rank", {x: i for i, x in enumerate(self.increasing)})

    def precedes(self, a: int, b: int) -> bool:
        return self._rank[a] < self._rank[b]

    @property
    def relation(self) -> frozenset[tuple[int, int]]:
        inc = self.increasing
        return frozenset((inc[i], inc[j]) for i in range(len(inc)) for j in range(i + 1, len(inc)))


class _Rotated(SegmentSystem):
    """The system turned by 180 degrees: S'(a, b) = -S(-a, -b)."""

    def __init__(self, system: SegmentSystem):
        self.inner = system
        self.name = f"rot({system.name})"

    def segment(self, p, q):
        return tuple((-x, -y) for x, y in self.inner.segment((-p[0], -p[1]), (-q[0], -q[1])))

    def _build(self, a, b):  # pragma: no cover - segment() is overridden
        return self.segment(a, b)


def extract_order(system: SegmentSystem, p: Point, domain: IntegerInterval, memo: Memo | None = None) -> InducedOrder:
    """Recover the order induced at ``p`` on ``domain``.

    A segment from ``p`` that goes right on diagonal ``D`` and up on
    diagonal ``E`` sets ``D`` below ``E``. For every ``E`` in the domain the
    rays from ``p`` to the diagonal ``E + 1`` are scanned until two of them
    share their point on diagonal ``E``; those two split there, and between
    them they decide ``E`` against every smaller ``D``.

    Domains below ``px + py`` are handled by turning the system by 180
    degrees, which maps diagonal ``D`` to ``-D - 1``. A domain straddling
    ``px + py`` is rejected since the two sides are independent orders.
    """
    s0 = p[0] + p[1]
    if domain.hi < s0:
        rotated = extract_order(_Rotated(system), (-p[0], -p[1]), IntegerInterval(-domain.hi - 1, -domain.lo - 1))
        return InducedOrder(p, domain, tuple(-d - 1 for d in rotated.increasing))
    if domain.lo < s0:
        raise ValueError(f"domain {domain} straddles the base diagonal {s0}")

    memo = memo or Memo(system)
    below: dict[tuple[int, int], bool] = {}  # (min, max) -> min is below max

    def record(seg: Segment) -> None:
        rights, ups = [], []
        for d, up in _steps(seg):
            if d in domain:
                (ups if up else rights).append(d)
        for d in rights:
            for e in ups:
                key, val = ((d, e), True) if d < e else ((e, d), False)
                prev = below.setdefault(key, val)
                if prev != val:
                    raise OrderExtractionError(f"{key[0]} and {key[1]} are ordered both ways at {p}", key)

    for e in domain:
        if e == domain.lo:
            continue
        seen: dict[Point, Segment] = {}
        for j in range(e + 1 - s0 + 1):
            target = (p[0] + j, e + 1 - p[0] - j)
            seg = memo.seg(p, target)
            hit = next((u for u in seg if u[0] + u[1] == e), None)
            if hit is None:
                raise OrderExtractionError(f"segment {p}->{target} misses diagonal {e}", (e,))
            if hit in seen:
                record(seen[hit])
                record(seg)
                break
            seen[hit] = seg
        else:
            raise OrderExtractionError(f"no splitting point on diagonal {e}", (e,))

    values = list(domain)
    n = len(values)
    score = dict.fromkeys(values, 0)
    for i, a in enumerate(values):
        for b in values[i + 1:]:
            if (a, b) not in below:
                raise OrderExtractionError(f"{a} and {b} are not compared at {p}", (a, b))
            score[b if below[a, b] else a] += 1
    increasing = sorted(values, key=score.__getitem__)
    if [score[x] for x in increasing] != list(range(n)):
        raise OrderExtractionError(f"induced relation at {p} is not transitive", _find_cycle(values, below))
    return InducedOrder(p, domain, tuple(increasing))


def _find_cycle(values: list[int], below: dict) -> tuple[int, ...]:
    def lt(a, b):
        return below[a, b] if a < b else not below[b, a]

    for a in values:
        for b in values:
            for c in values:
                if len({a, b, c}) == 3 and lt(a, b) and lt(b, c) and lt(c, a):
                    return (a, b, c)
    return ()


def recover_global_order(
    system: SegmentSystem,
    w: Window,
    domain: IntegerInterval,
    n_bases: int = 4,
    ts: Iterable[int] = range(-3, 4),
) -> InducedOrder:
    """Recover the single order behind a diagonally translation-invariant system.

    Raises :class:`PreconditionError` carrying an ``(p, q, t)`` witness when
    the invariance fails on ``w``, and :class:`OrderConflictError` carrying
    ``(p, q, A, B)`` when two base points induce different orders.
    """
    memo = Memo(system)
    bad = check_translation_invariance(system, w, ts, first_only=True, memo=memo)
    if bad:
        raise PreconditionError("system is not invariant under diagonal translation", bad[0].witness)

    pts = sorted(w.points())
    bases: list[Point] = []
    s = domain.lo
    while len(bases) < n_bases:
        on_diag = [u for u in pts if u[0] + u[1] == s]
        if not on_diag:
            break
        bases.append(on_diag[0])
        s -= 1
    if not bases:
        raise PreconditionError(f"no base point in the window lies on or below diagonal {domain.lo}")

    orders = [extract_order(system, b, domain, memo=memo) for b in bases]
    first = orders[0]
    for other in orders[1:]:
        for i, a in enumerate(domain):
            for b in list(domain)[i + 1:]:
                if first.precedes(a, b) != other.precedes(a, b):
                    raise OrderConflictError(
                        f"orders at {first.base_point} and {other.base_point} disagree on {a}, {b}",
                        (first.base_point, other.base_point, a, b),
                    )
    return first


def check_alternation(order: TotalOrder, A: int, k: int) -> bool:
    """Check that the ``2**(k+1) - 1`` integers from ``A`` alternate sides of
    their midpoint when listed in increasing order.

    The midpoint must have valuation at least ``k`` and every other member a
    smaller one; otherwise :class:`PreconditionError` is raised.
    """
    if k < 1:
        raise PreconditionError("k must be positive")
    B = A + (1 << (k + 1)) - 1
    mid = (A + B - 1) // 2
    if two_adic_valuation(mid) < k:
        raise PreconditionError(f"midpoint {mid} has valuation below {k}", (A, k))
    for x in range(A, B):
        if x != mid and two_adic_valuation(x) >= k:
            raise PreconditionError(f"{x} has valuation >= {k}", (A, k))
    seq = order.sorted_range(A, B - 1)
    for u, v in zip(seq, seq[1:]):
        if (u < mid and v < mid) or (u > mid and v > mid):
            return False
    return True
