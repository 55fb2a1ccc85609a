from __future__ import annotations

import math
import sys

import pytest
from hypothesis import settings

from digiseg.segments import OrderSystem, SegmentSystem

settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")


class RoundingSystem(SegmentSystem):
    """Textbook rounding: one point per column, y rounded half up.

    Steep pairs are handled by swapping the roles of x and y. Not a CDS.
    """

    name = "rounding"

    def _build(self, a, b):
        (ax, ay), (bx, by) = a, b
        dx, dy = bx - ax, by - ay
        if dx == 0 and dy == 0:
            return (a,)
        if abs(dy) <= abs(dx):
            return tuple((x, math.floor((x - ax) * dy / dx + ay + 0.5)) for x in range(ax, bx + 1))
        step = 1 if dy > 0 else -1
        return tuple((math.floor((y - ay) * dx / dy + ax + 0.5), y) for y in range(ay, by + step, step))


class PatchedSystem(SegmentSystem):
    """Wrap a system and override the answers for a few ordered pairs."""

    def __init__(self, base: SegmentSystem, patches: dict):
        self.base = base
        self.patches = patches
        self.name = f"patched:{base.name}"

    def segment(self, p, q):
        p, q = tuple(p), tuple(q)
        if (p, q) in self.patches:
            return self.patches[p, q]
        return self.base.segment(p, q)

    def _build(self, a, b):  # pragma: no cover
        return self.base.segment(a, b)


@pytest.fixture
def rounding():
    return RoundingSystem()


def oracle_command(spec: str) -> list[str]:
    return [sys.executable, "-m", "digiseg.serve", spec]


@pytest.fixture
def order_system():
    def make(order):
        return OrderSystem(order)

    return make
