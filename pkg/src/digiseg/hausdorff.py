"""Hausdorff distance between digital and Euclidean segments.

Distances keep their exact square as a :class:`~fractions.Fraction`, so
comparisons never hinge on floating point. The logarithmic bound
``H <= sqrt(5) * log2(L)``, with ``L`` the number of unit steps, is checked
exactly as well: rationally when ``L`` is a power of two, otherwise by a
float comparison with a safety margin backed by 60-digit arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterator, Sequence

import mpmath
import numpy as np

from .errors import PreconditionError
from .order import Pow2Order, TotalOrder
from .segments import OrderSystem, Point, Segment

SPLIT_CONSTANT = math.sqrt(5) / 2
"""Largest offset of the two-chord detour through the split point."""

BOUND_FACTOR = 2 * SPLIT_CONSTANT


@total_ordering
@dataclass(frozen=True)
class Distance:
    squared: Fraction

    @property
    def value(self) -> float:
        return math.sqrt(self.squared)

    def __lt__(self, other: Distance) -> bool:
        return self.squared < other.squared

    def __float__(self) -> float:
        return self.value


ZERO = Distance(Fraction(0))


def point_to_euclidean_segment(r: Point, p: Point, q: Point) -> Distance:
    """Distance from ``r`` to the closed segment ``pq``."""
    dx, dy = q[0] - p[0], q[1] - p[1]
    rx, ry = r[0] - p[0], r[1] - p[1]
    dd = dx * dx + dy * dy
    if dd == 0:
        return Distance(Fraction(rx * rx + ry * ry))
    dot = rx * dx + ry * dy
    if dot <= 0:
        return Distance(Fraction(rx * rx + ry * ry))
    if dot >= dd:
        ex, ey = r[0] - q[0], r[1] - q[1]
        return Distance(Fraction(ex * ex + ey * ey))
    cross = dx * ry - dy * rx
    return Distance(Fraction(cross * cross, dd))


def _polyline_distance(v: tuple[float, float], seg: Segment) -> float:
    """Distance from a real point to the union of unit grid edges of ``seg``."""
    pts = np.asarray(seg, dtype=float)
    if len(pts) == 1:
        return float(np.hypot(*(pts[0] - v)))
    a, b = pts[:-1], pts[1:]
    d = b - a
    t = np.clip(((v[0] - a[:, 0]) * d[:, 0] + (v[1] - a[:, 1]) * d[:, 1]), 0.0, 1.0)
    fx = a[:, 0] + t * d[:, 0] - v[0]
    fy = a[:, 1] + t * d[:, 1] - v[1]
    return float(np.sqrt(fx * fx + fy * fy).min())


def hausdorff_distance(seg: Sequence[Point], debug: bool = False) -> Distance:
    """Hausdorff distance between a digital segment and the chord joining its ends.

    It is the largest distance from a lattice point of ``seg`` to the chord.
    With ``debug`` the opposite direction is sampled at ``64 * L + 1``
    points of the chord, measured against the grid polyline through
    ``seg``, and asserted not to exceed that maximum.
    """
    seg = tuple(tuple(u) for u in seg)
    if len(seg) < 2:
        return ZERO
    p, q = seg[0], seg[-1]
    best = max(point_to_euclidean_segment(r, p, q) for r in seg)
    if debug:
        n = 64 * (len(seg) - 1)
        reverse = max(
            _polyline_distance((p[0] + (q[0] - p[0]) * i / n, p[1] + (q[1] - p[1]) * i / n), seg)
            for i in range(n + 1)
        )
        assert reverse <= best.value + 1e-9, (reverse, best.value)
    return best


def l1_length(p: Point, q: Point) -> int:
    return abs(q[0] - p[0]) + abs(q[1] - p[1])


def within_bound(h_squared: Fraction, L: int) -> bool:
    """Exact test of ``sqrt(h_squared) <= sqrt(5) * log2(L)`` for ``L >= 1``."""
    if L & (L - 1) == 0:
        m = L.bit_length() - 1
        return h_squared <= 5 * m * m
    rhs = 5 * math.log2(L) ** 2
    lhs = float(h_squared)
    if abs(lhs - rhs) > 1e-9 * max(1.0, rhs):
        return lhs < rhs
    with mpmath.workdps(60):
        exact_rhs = 5 * mpmath.log(L, 2) ** 2
        return mpmath.mpf(h_squared.numerator) / h_squared.denominator <= exact_rhs


def bound(L: int) -> float:
    return BOUND_FACTOR * math.log2(L) if L >= 1 else 0.0


@dataclass(frozen=True)
class BoundCheck:
    holds: bool
    vacuous: bool
    hausdorff: Distance
    L: int

    def __bool__(self) -> bool:
        return self.holds


def check_bound(seg: Sequence[Point]) -> BoundCheck:
    """Does ``seg`` stay within ``sqrt(5) * log2(L)`` of its chord?

    Segments with fewer than two steps are reported as vacuously true.
    """
    seg = tuple(tuple(u) for u in seg)
    L = l1_length(seg[0], seg[-1])
    h = hausdorff_distance(seg)
    if L < 2:
        return BoundCheck(True, True, h, L)
    return BoundCheck(within_bound(h.squared, L), False, h, L)


def check_subsegment_inequality(order: TotalOrder, p: Point, q: Point, r: Point, s: Point) -> bool:
    """Check that S(r, s) is at most twice as far from its chord as S(p, q)."""
    system = OrderSystem(order)
    outer = system.segment(p, q)
    if r not in outer or s not in outer:
        raise PreconditionError("r and s must lie on S(p, q)", (p, q, r, s))
    h_outer = hausdorff_distance(outer)
    h_inner = hausdorff_distance(system.segment(r, s))
    return h_inner.squared <= 4 * h_outer.squared


def class_key(p: Point, q: Point) -> tuple[int, int, int]:
    """``(start diagonal, dx, dy)`` of the non-negative slope pair a segment reduces to.

    Order-derived segments depend on nothing else: a shift along the
    anti-diagonal moves them rigidly, and negative slopes are mirrored.
    """
    a, b = (p, q) if p <= q else (q, p)
    dx = b[0] - a[0]
    if a[1] <= b[1]:
        return a[0] + a[1], dx, b[1] - a[1]
    return -b[0] + b[1], dx, a[1] - b[1]


# --- vectorized sweeps -----------------------------------------------------


def interval_ranks(order: TotalOrder, lo: int, hi: int) -> np.ndarray:
    """Rank (0 = least) of every element of ``[lo, hi]``, as an int64 array."""
    n = hi - lo + 1
    if isinstance(order, Pow2Order):
        bits = max(1, (hi - lo).bit_length())
        vals = np.arange(lo, hi + 1, dtype=np.int64)
        comp = ~vals & ((1 << bits) - 1)
        key = np.zeros(n, dtype=np.int64)
        for i in range(bits):
            key |= ((comp >> i) & 1) << (bits - 1 - i)
        ascending = np.argsort(key, kind="stable")
    else:
        ascending = np.asarray(order.sorted_range(lo, hi), dtype=np.int64) - lo
    ranks = np.empty(n, dtype=np.int64)
    ranks[ascending] = np.arange(n, dtype=np.int64)
    return ranks


def _max_cross(ranks: np.ndarray, ks: np.ndarray) -> np.ndarray:
    """For each up-count ``k``, the largest ``|L*y_i - k*i|`` along the walk.

    That quantity over ``sqrt(dx^2 + dy^2)`` is the distance of the i-th
    walk point to the chord; points inside the box never clamp.
    """
    L = len(ranks)
    ups = ranks[None, :] >= (L - ks)[:, None]
    y = np.zeros((len(ks), L + 1), dtype=np.int64)
    np.cumsum(ups, axis=1, out=y[:, 1:])
    i = np.arange(L + 1, dtype=np.int64)
    cross = L * y - ks[:, None] * i[None, :]
    return np.abs(cross).max(axis=1)


def class_hausdorff_squared(order: TotalOrder, start: int, dx: int, dy: int) -> Fraction:
    L = dx + dy
    if L == 0:
        return Fraction(0)
    ranks = interval_ranks(order, start, start + L - 1)
    c = int(_max_cross(ranks, np.array([dy], dtype=np.int64))[0])
    return Fraction(c * c, dx * dx + dy * dy)


@dataclass(frozen=True)
class SweepRow:
    p: Point
    q: Point
    L: int
    hausdorff_squared: Fraction

    @property
    def hausdorff(self) -> float:
        return math.sqrt(self.hausdorff_squared)

    @property
    def bound(self) -> float:
        return bound(self.L)

    @property
    def ratio(self) -> float:
        return self.hausdorff / math.log2(self.L)

    @property
    def within_bound(self) -> bool:
        return within_bound(self.hausdorff_squared, self.L)

    def csv(self) -> str:
        return ",".join(
            [str(v) for v in (*self.p, *self.q, self.L)]
            + [f"{v:.12g}" for v in (self.hausdorff, self.bound, self.ratio)]
        )


CSV_HEADER = "px,py,qx,qy,L,hausdorff,bound,ratio"


@dataclass
class SweepResult:
    rows: list[SweepRow]
    pairs: int
    violations: list[tuple[Point, Point]]

    @property
    def max_ratio(self) -> float:
        return max((r.ratio for r in self.rows), default=0.0)

    def csv_lines(self) -> Iterator[str]:
        yield CSV_HEADER
        for row in self.rows:
            yield row.csv()


def _keep_max(best: dict, L: int, num: int, den: int, pair: tuple[Point, Point]) -> None:
    cur = best.get(L)
    if cur is None:
        best[L] = (num, den, pair)
        return
    cnum, cden, cpair = cur
    lhs, rhs = num * cden, cnum * den
    if lhs > rhs or (lhs == rhs and pair < cpair):
        best[L] = (num, den, pair)


def sweep_exhaustive(order: TotalOrder, lo: int, hi: int, limit_violations: int = 100) -> SweepResult:
    """Every pair of points in ``[lo, hi]^2`` with at least two steps between them.

    Pairs are grouped into classes (see :func:`class_key`) and each class is
    measured once; every member of a class has the same distance. Each row
    reports the largest distance seen for one ``L`` together with the
    lexicographically first pair attaining it.
    """
    side = hi - lo
    best: dict[int, tuple[int, int, tuple[Point, Point]]] = {}
    violations: list[tuple[Point, Point]] = []
    pairs = 0
    # positive classes start at px + py, mirrored ones at qy - qx
    for start in range(min(2 * lo, -side), max(2 * hi, side) + 1):
        for L in range(2, 2 * side + 1):
            ks = np.arange(max(0, L - side), min(L, side) + 1, dtype=np.int64)
            if len(ks) == 0:
                continue
            classes = []
            for k in ks.tolist():
                dx, dy = L - k, k
                pos = _positive_reps(start, dx, dy, lo, hi)
                neg = _negative_reps(start, dx, dy, lo, hi) if dx and dy else (0, None)
                if pos[0] or neg[0]:
                    classes.append((k, pos, neg))
            if not classes:
                continue
            ranks = interval_ranks(order, start, start + L - 1)
            kk = np.array([c[0] for c in classes], dtype=np.int64)
            crosses = _max_cross(ranks, kk).tolist()
            for (k, pos, neg), c in zip(classes, crosses):
                dx, dy = L - k, k
                num, den = c * c, dx * dx + dy * dy
                ok = within_bound(Fraction(num, den), L)
                for count, pair in (pos, neg):
                    if not count:
                        continue
                    pairs += count
                    _keep_max(best, L, num, den, pair)
                    if not ok and len(violations) < limit_violations:
                        violations.append(pair)
    rows = [SweepRow(*best[L][2], L, Fraction(best[L][0], best[L][1])) for L in sorted(best)]
    return SweepResult(rows, pairs, sorted(violations))


def _positive_reps(start: int, dx: int, dy: int, lo: int, hi: int) -> tuple[int, tuple[Point, Point] | None]:
    """Unordered pairs p <= q in the window with p on diagonal ``start``."""
    x_min = max(lo, start - (hi - dy))
    x_max = min(hi - dx, start - lo)
    if x_min > x_max:
        return 0, None
    p = (x_min, start - x_min)
    return x_max - x_min + 1, (p, (p[0] + dx, p[1] + dy))


def _negative_reps(start: int, dx: int, dy: int, lo: int, hi: int) -> tuple[int, tuple[Point, Point] | None]:
    """Pairs p = (px, py), q = (px + dx, py - dy) whose mirror starts on ``start``.

    The mirrored lower-left point is ``(-qx, qy)``, so ``py - px = start + dx + dy``.
    """
    shift = start + dx + dy
    x_min = max(lo, lo + dy - shift)
    x_max = min(hi - dx, hi - shift)
    if x_min > x_max:
        return 0, None
    p = (x_min, x_min + shift)
    return x_max - x_min + 1, (p, (p[0] + dx, p[1] - dy))


def sweep_random(
    order: TotalOrder, count: int, max_l: int, seed: int, coord_range: int = 1 << 20, limit_violations: int = 100
) -> SweepResult:
    """``count`` seeded random pairs with ``2 <= L <= max_l`` and either slope sign."""
    rng = np.random.default_rng(seed)
    best: dict[int, tuple[int, int, tuple[Point, Point]]] = {}
    violations: list[tuple[Point, Point]] = []
    for _ in range(count):
        L = int(rng.integers(2, max_l + 1))
        dy = int(rng.integers(0, L + 1))
        dx = L - dy
        negative = bool(rng.integers(0, 2)) and dx > 0 and dy > 0
        px, py = (int(v) for v in rng.integers(-coord_range, coord_range, size=2))
        p = (px, py)
        q = (px + dx, py - dy) if negative else (px + dx, py + dy)
        start, cdx, cdy = class_key(p, q)
        h2 = class_hausdorff_squared(order, start, cdx, cdy)
        _keep_max(best, L, h2.numerator, h2.denominator, (p, q))
        if not within_bound(h2, L) and len(violations) < limit_violations:
            violations.append((p, q))
    rows = [SweepRow(*best[L][2], L, Fraction(best[L][0], best[L][1])) for L in sorted(best)]
    return SweepResult(rows, count, violations)


def sweep(order: TotalOrder, exhaustive: tuple[int, int] | None = None,
          random: tuple[int, int, int] | None = None) -> SweepResult:
    """Run an exhaustive ``(lo, hi)`` or random ``(count, max_l, seed)`` sweep."""
    if (exhaustive is None) == (random is None):
        raise ValueError("choose exactly one of exhaustive or random")
    if exhaustive is not None:
        return sweep_exhaustive(order, *exhaustive)
    return sweep_random(order, *random)


def subsegment_sweep(order: TotalOrder, lo: int, hi: int) -> list[tuple[Point, Point, Point, Point]]:
    """Check the halving inequality for every pair of points on every segment
    with endpoints in ``[lo, hi]^2``; returns the failing ``(p, q, r, s)``.

    Segments are built once per class and distances memoized per class.
    """
    system = OrderSystem(order)
    h_memo: dict[tuple[int, int, int], tuple[int, int]] = {}

    def h2(a: Point, b: Point) -> tuple[int, int]:
        key = class_key(a, b)
        got = h_memo.get(key)
        if got is None:
            f = hausdorff_distance(system.segment(a, b)).squared
            got = h_memo[key] = (f.numerator, f.denominator)
        return got

    failures = []
    seen: set[tuple[int, int, int]] = set()
    pts = [(x, y) for x in range(lo, hi + 1) for y in range(lo, hi + 1)]
    for p in pts:
        for q in pts:
            if q <= p:
                continue
            key = class_key(p, q)
            if key in seen:
                continue
            seen.add(key)
            seg = system.segment(p, q)
            onum, oden = h2(p, q)
            for i, r in enumerate(seg):
                for s in seg[i + 1:]:
                    num, den = h2(r, s)
                    if num * oden > 4 * onum * den:
                        failures.append((p, q, r, s))
    return failures


def corner_deviation(x: float) -> float:
    """``(x + 1/2) / sqrt(x^2 + 1)``: the detour offset as a function of the chord's aspect ratio."""
    return (x + 0.5) / math.sqrt(x * x + 1)
