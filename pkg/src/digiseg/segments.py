"""Digital segment systems.

A system maps a pair of lattice points to a grid path between them. Points
are plain ``(x, y)`` tuples and segments are tuples of points running from
the first requested endpoint to the second.

Every built-in system canonicalizes the endpoint pair (lexicographically
smaller point first) before building the path, so ``segment(p, q)`` and
``segment(q, p)`` are the same point set by construction.
"""

from __future__ import annotations

import shlex
import subprocess
import threading
from abc import ABC, abstractmethod
from typing import Sequence

from .errors import DomainError, OracleError
from .order import NATURAL, IntegerInterval, TotalOrder, parse_order

Point = tuple[int, int]
Segment = tuple[Point, ...]


class SegmentSystem(ABC):
    name: str = "system"

    def segment(self, p: Sequence[int], q: Sequence[int]) -> Segment:
        p = (int(p[0]), int(p[1]))
        q = (int(q[0]), int(q[1]))
        if p <= q:
            return self._build(p, q)
        return self._build(q, p)[::-1]

    @abstractmethod
    def _build(self, a: Point, b: Point) -> Segment:
        """Path from ``a`` to ``b`` where ``a`` is lexicographically <= ``b``."""

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


def _mirror_x(path: Segment) -> Segment:
    return tuple((-x, y) for x, y in path)


class OrderSystem(SegmentSystem):
    """Segments derived from a total order on the diagonal sums ``x + y``.

    On a non-negative slope pair the walk goes up at ``(x, y)`` iff
    ``x + y`` is among the ``dy`` greatest elements of the segment interval
    ``[px + py, qx + qy - 1]``. Negative slopes reuse the same walk on the
    pair reflected over the y-axis.
    """

    def __init__(self, order: TotalOrder):
        self.order = order
        self.name = f"order:{order.name}"

    def _build(self, a: Point, b: Point) -> Segment:
        if a[1] <= b[1]:
            return self.walk(a, b)
        # a is top-left, b bottom-right: reflect, build lower-left to upper-right, reflect back
        reflected = self.walk((-b[0], b[1]), (-a[0], a[1]))
        return _mirror_x(reflected)[::-1]

    def walk(self, a: Point, b: Point) -> Segment:
        ax, ay = a
        bx, by = b
        start, end = ax + ay, bx + by
        if start == end:
            return (a,)
        ups = self.order.top_k(start, end - 1, by - ay)
        x, y = a
        pts = [a]
        for c in range(start, end):
            if c in ups:
                y += 1
            else:
                x += 1
            pts.append((x, y))
        return tuple(pts)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, OrderSystem) and other.order == self.order

    def __hash__(self) -> int:
        return hash(("order", self.order))


class BoxSystem(SegmentSystem):
    """Follow the boundary of the box: horizontal at the lower endpoint's
    height, vertical at the upper endpoint's column."""

    name = "box"

    def _build(self, a: Point, b: Point) -> Segment:
        return box_path(a, b)


def box_path(a: Point, b: Point) -> Segment:
    (ax, ay), (bx, by) = a, b
    if ay <= by:
        return tuple((x, ay) for x in range(ax, bx + 1)) + tuple((bx, y) for y in range(ay + 1, by + 1))
    return tuple((ax, y) for y in range(ay, by - 1, -1)) + tuple((x, by) for x in range(ax + 1, bx + 1))


class MonotonePath:
    """A finite monotone staircase with positive slope.

    Column ``x`` strictly between the first and last point is occupied on
    the rows ``[low(x), high(x)]``; those are the only columns where the
    staircase is known, so queries must stay strictly inside its bounding box.
    """

    def __init__(self, points: Sequence[Sequence[int]]):
        pts = [(int(x), int(y)) for x, y in points]
        if len(pts) < 2:
            raise ValueError("staircase needs at least two points")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if (x1 - x0, y1 - y0) not in ((1, 0), (0, 1)):
                raise ValueError(f"not a monotone grid path at {(x0, y0)} -> {(x1, y1)}")
        if pts[0][0] == pts[-1][0] or pts[0][1] == pts[-1][1]:
            raise ValueError("staircase must not lie in one horizontal or vertical line")
        self.points = tuple(pts)
        self.index = {p: i for i, p in enumerate(pts)}
        self.low: dict[int, int] = {}
        self.high: dict[int, int] = {}
        for x, y in pts:
            self.low.setdefault(x, y)
            self.high[x] = y
        (self.x0, self.y0), (self.x1, self.y1) = pts[0], pts[-1]

    @classmethod
    def from_file(cls, path: str) -> MonotonePath:
        with open(path) as fh:
            rows = [line.split() for line in fh if line.strip() and not line.startswith("#")]
        return cls([(int(r[0]), int(r[1])) for r in rows])

    def covers(self, p: Point) -> bool:
        return self.x0 < p[0] < self.x1 and self.y0 < p[1] < self.y1

    def side(self, p: Point) -> int:
        """+1 above the staircase, -1 below, 0 on it."""
        x, y = p
        if y > self.high[x]:
            return 1
        if y < self.low[x]:
            return -1
        return 0

    def successor(self, p: Point) -> Point:
        return self.points[self.index[p] + 1]


class SpecialLineSystem(SegmentSystem):
    """Route non-negative slope segments around a monotone staircase.

    Above it go right then up, below it go up then right, and once the
    staircase is hit follow it until a coordinate matches the destination.
    Negative slopes follow the box rule.
    """

    def __init__(self, line: MonotonePath, name: str = "specialline"):
        self.line = line
        self.name = name

    def _build(self, a: Point, b: Point) -> Segment:
        if a[1] > b[1]:
            return box_path(a, b)
        for p in (a, b):
            if not self.check_covered(p):
                raise DomainError(f"{p} outside the window covered by {self.name}")
        return self._route(a, b)

    def check_covered(self, p: Point) -> bool:
        return self.line.covers(p)

    def _route(self, a: Point, b: Point) -> Segment:
        bx, by = b
        u = a
        pts = [u]
        while u != b:
            x, y = u
            if x == bx:
                u = (x, y + 1)
            elif y == by:
                u = (x + 1, y)
            else:
                side = self._side(u)
                if side > 0:
                    u = (x + 1, y)
                elif side < 0:
                    u = (x, y + 1)
                else:
                    u = self._follow(u)
            pts.append(u)
        return tuple(pts)

    def _side(self, u: Point) -> int:
        return self.line.side(u)

    def _follow(self, u: Point) -> Point:
        return self.line.successor(u)


class WaterlineSystem(SpecialLineSystem):
    """The special-line construction with the x-axis as the staircase."""

    name = "waterline"

    def __init__(self) -> None:
        pass

    def check_covered(self, p: Point) -> bool:
        return True

    def _side(self, u: Point) -> int:
        return (u[1] > 0) - (u[1] < 0)

    def _follow(self, u: Point) -> Point:
        return (u[0] + 1, u[1])


class ExternalSystem(SegmentSystem):
    """A segment oracle living in a child process.

    Line protocol over the child's stdin/stdout: the request
    ``SEG px py qx qy`` is answered by ``n x1 y1 ... xn yn``. Requests are
    passed through uncanonicalized so the oracle's own symmetry is what gets
    tested, and access is serialized with a lock.
    """

    def __init__(self, command: str | Sequence[str]):
        self.command = command
        self.name = f"extern:{command if isinstance(command, str) else shlex.join(command)}"
        argv = shlex.split(command) if isinstance(command, str) else list(command)
        self._lock = threading.Lock()
        try:
            self._proc = subprocess.Popen(
                argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
            )
        except OSError as exc:
            raise OracleError(f"cannot start oracle {argv!r}: {exc}") from exc

    def segment(self, p: Sequence[int], q: Sequence[int]) -> Segment:
        request = f"SEG {int(p[0])} {int(p[1])} {int(q[0])} {int(q[1])}\n"
        with self._lock:
            try:
                self._proc.stdin.write(request)
                self._proc.stdin.flush()
                reply = self._proc.stdout.readline()
            except (OSError, ValueError) as exc:
                raise OracleError(f"oracle transport failed: {exc}") from exc
        return parse_reply(reply)

    def _build(self, a: Point, b: Point) -> Segment:  # pragma: no cover - segment() is overridden
        return self.segment(a, b)

    def close(self) -> None:
        if self._proc.poll() is None:
            try:
                self._proc.stdin.close()
            except OSError:
                pass
            self._proc.wait(timeout=5)

    def __enter__(self) -> ExternalSystem:
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def parse_reply(reply: str) -> Segment:
    if not reply.endswith("\n"):
        raise OracleError("oracle closed the stream or sent a truncated reply")
    try:
        nums = [int(t) for t in reply.split()]
    except ValueError:
        raise OracleError(f"malformed oracle reply {reply!r}") from None
    if not nums or len(nums) != 1 + 2 * nums[0] or nums[0] < 1:
        raise OracleError(f"malformed oracle reply {reply!r}")
    return tuple(zip(nums[1::2], nums[2::2]))


def format_reply(seg: Segment) -> str:
    return " ".join([str(len(seg))] + [f"{x} {y}" for x, y in seg]) + "\n"


def parse_system(spec: str) -> SegmentSystem:
    """Parse ``order:<orderspec>``, ``box``, ``waterline``,
    ``specialline:<path-file>`` or ``extern:<command>``."""
    if spec.startswith("order:"):
        return OrderSystem(parse_order(spec[len("order:"):]))
    if spec == "box":
        return BoxSystem()
    if spec == "waterline":
        return WaterlineSystem()
    if spec.startswith("specialline:"):
        path = spec[len("specialline:"):]
        return SpecialLineSystem(MonotonePath.from_file(path), name=spec)
    if spec.startswith("extern:"):
        return ExternalSystem(spec[len("extern:"):])
    raise ValueError(f"unknown system spec {spec!r}")


def segment(system: SegmentSystem, p: Sequence[int], q: Sequence[int]) -> Segment:
    return system.segment(p, q)


def prolong(system: OrderSystem, p: Point, q: Point) -> tuple[Point, bool]:
    """One-step prolongation of a non-negative slope segment beyond ``q``.

    Returns ``(r, split)``: ``r`` is the point above ``q`` when ``qx + qy``
    is among the ``dy + 1`` greatest of ``[px + py, qx + qy]``, otherwise
    the point to its right. ``split`` is set when ``qx + qy`` is exactly the
    ``(dy + 1)``-th greatest, in which case both extensions contain the segment.
    """
    if not (p[0] <= q[0] and p[1] <= q[1]):
        raise DomainError("prolong expects p lower-left of q")
    order = system.order
    lo, hi, k = p[0] + p[1], q[0] + q[1], q[1] - p[1]
    top = order.top_k(lo, hi, k + 1)
    if hi in top:
        split = hi not in order.top_k(lo, hi, k)
        return (q[0], q[1] + 1), split
    return (q[0] + 1, q[1]), False


def translate_diagonal(seg: Sequence[Point], t: int) -> Segment:
    return tuple((x + t, y - t) for x, y in seg)


def segment_interval(p: Point, q: Point) -> IntegerInterval:
    """Diagonal sums stepped over by a non-negative slope segment from ``p`` to ``q``."""
    return IntegerInterval(p[0] + p[1], q[0] + q[1] - 1)


BOX = BoxSystem()
NATURAL_SYSTEM = OrderSystem(NATURAL)
