from __future__ import annotations

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from digiseg.hausdorff import class_hausdorff_squared, class_key, hausdorff_distance, within_bound, l1_length
from digiseg.order import POW2, pow2_predecessor, pow2_successor
from digiseg.segments import OrderSystem

coord = st.integers(-10**6, 10**6)
small = st.integers(-40, 40)
point = st.tuples(small, small)
system = OrderSystem(POW2)


@given(coord, coord, coord)
def test_pow2_is_transitive(a, b, c):
    if POW2.compare(a, b) < 0 and POW2.compare(b, c) < 0:
        assert POW2.compare(a, c) < 0


@given(coord, coord)
def test_pow2_antisymmetric(a, b):
    assert POW2.compare(a, b) == -POW2.compare(b, a)
    assert (POW2.compare(a, b) == 0) == (a == b)


@given(st.integers(1, 10**9))
def test_successor_is_immediate(x):
    y = pow2_successor(x)
    assert POW2.compare(x, y) < 0
    assert pow2_predecessor(y) == x
    # nothing near either end lands strictly between
    near = [*range(x - 64, x + 65), *range(y - 64, y + 65)]
    assert not any(POW2.compare(x, z) < 0 < POW2.compare(y, z) for z in near)


@given(point, point)
def test_segment_shape(p, q):
    s = system.segment(p, q)
    assert s[0] == p and s[-1] == q
    assert len(s) == abs(q[0] - p[0]) + abs(q[1] - p[1]) + 1
    assert all(abs(u[0] - v[0]) + abs(u[1] - v[1]) == 1 for u, v in zip(s, s[1:]))
    assert system.segment(q, p) == s[::-1]


@given(point, point, st.data())
def test_subsegments(p, q, data):
    s = system.segment(p, q)
    i = data.draw(st.integers(0, len(s) - 1))
    assert system.segment(p, s[i]) == s[:i + 1]


@given(point, point, st.integers(-50, 50), st.integers(-50, 50))
def test_diagonal_translation_for_positive_pairs(p, q, t, u):
    if (q[0] - p[0]) * (q[1] - p[1]) < 0:
        return
    s = system.segment(p, q)
    moved = system.segment((p[0] + t, p[1] - t), (q[0] + t, q[1] - t))
    assert moved == tuple((x + t, y - t) for x, y in s)


@settings(max_examples=60)
@given(st.tuples(st.integers(-300, 300), st.integers(-300, 300)), st.integers(0, 120), st.integers(0, 120))
def test_bound_and_class_reduction(p, dx, dy):
    q = (p[0] + dx, p[1] + dy)
    h2 = hausdorff_distance(system.segment(p, q)).squared
    L = l1_length(p, q)
    assert class_hausdorff_squared(POW2, *class_key(p, q)) == h2
    if L >= 2:
        assert within_bound(h2, L)
    assert isinstance(h2, Fraction)
