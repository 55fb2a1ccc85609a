"""Total orders on the integers.

Three kinds are provided: the natural order, the 2-adic order (``pow2``) in
which the integer divisible by the higher power of two is the greater one,
and finite permutation orders defined on a window of integers.

Comparisons return ``-1`` when ``a`` is below ``b``, ``0`` on equality and
``1`` otherwise, so ``functools.cmp_to_key`` works directly.
"""

from __future__ import annotations

import math
import random
from abc import ABC, abstractmethod
from dataclasses import dataclass
from functools import cmp_to_key, lru_cache
from typing import Callable, Iterable, Iterator, Sequence

from .errors import DomainError

INFINITY = math.inf
"""Valuation of zero; greater than every finite valuation."""


@dataclass(frozen=True)
class IntegerInterval:
    """Inclusive integer interval ``[lo, hi]``."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    def __len__(self) -> int:
        return self.hi - self.lo + 1

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.lo, self.hi + 1))

    def __contains__(self, x: object) -> bool:
        return isinstance(x, int) and self.lo <= x <= self.hi

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


def two_adic_valuation(k: int) -> int | float:
    """Exponent of the largest power of two dividing ``k``; ``INFINITY`` for 0."""
    if k == 0:
        return INFINITY
    return (k & -k).bit_length() - 1


class TotalOrder(ABC):
    """A strict total order on (a window of) the integers."""

    name: str

    @abstractmethod
    def compare(self, a: int, b: int) -> int: ...

    def in_domain(self, x: int) -> bool:
        return True

    def key_for(self, lo: int, hi: int) -> Callable[[int], object]:
        """Sort key that agrees with :meth:`compare` on ``[lo, hi]``.

        The default wraps :meth:`compare`; subclasses supply faster keys.
        """
        return cmp_to_key(self.compare)

    def sorted_range(self, lo: int, hi: int) -> tuple[int, ...]:
        """Elements of ``[lo, hi]`` in increasing order (cached)."""
        return _sorted_range(self, lo, hi)

    def top_k(self, lo: int, hi: int, k: int) -> frozenset[int]:
        """The ``k`` greatest elements of ``[lo, hi]``."""
        if k <= 0:
            return frozenset()
        ranked = self.sorted_range(lo, hi)
        return frozenset(ranked[len(ranked) - k:])

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.name}>"


@lru_cache(maxsize=1 << 14)
def _sorted_range(order: TotalOrder, lo: int, hi: int) -> tuple[int, ...]:
    for x in (lo, hi):
        if not order.in_domain(x):
            raise DomainError(f"{x} outside the domain of {order.name}")
    return tuple(sorted(range(lo, hi + 1), key=order.key_for(lo, hi)))


class NaturalOrder(TotalOrder):
    name = "natural"

    def compare(self, a: int, b: int) -> int:
        return (a > b) - (a < b)

    def key_for(self, lo: int, hi: int) -> Callable[[int], object]:
        return int

    def __eq__(self, other: object) -> bool:
        return isinstance(other, NaturalOrder)

    def __hash__(self) -> int:
        return hash("natural")


def pow2_compare_steps(a: int, b: int) -> tuple[int, int]:
    """Run the 2-adic comparison loop and report how many steps it took.

    Walk ``i = 0, 1, 2, ...`` and stop at the first ``i`` where ``a - i`` and
    ``b - i`` have different valuations; the operand with the smaller
    valuation is the smaller one. Returns ``(result, steps)``.
    """
    if a == b:
        return 0, 0
    i = 0
    while True:
        va = two_adic_valuation(a - i)
        vb = two_adic_valuation(b - i)
        i += 1
        if va != vb:
            return (-1 if va < vb else 1), i


def pow2_key(x: int, bits: int) -> int:
    """Integer key ranking ``x`` in the 2-adic order among numbers within ``2**bits``.

    Two integers closer than ``2**bits`` first differ in one of the low
    ``bits`` bits; the one holding a zero there is the greater. Complementing
    and reversing the low bits turns that into plain integer comparison.
    """
    v = ~x & ((1 << bits) - 1)
    return int(format(v, f"0{bits}b")[::-1], 2)


def pow2_successor(x: int) -> int | None:
    """Immediate successor of ``x`` in the 2-adic order, if it has one.

    Exactly the positive integers have one: with ``2**j`` the top bit of
    ``x`` it is ``x - 3 * 2**j``, which agrees with ``x`` below bit ``j``,
    holds a zero there and ones above, so nothing fits in between.
    """
    if x <= 0:
        return None
    return x - 3 * (1 << (x.bit_length() - 1))


def pow2_predecessor(y: int) -> int | None:
    """Immediate predecessor of ``y`` in the 2-adic order; exists iff ``y < -1`` (-1 is least)."""
    if y >= -1:
        return None
    j = (~y).bit_length() - 1
    return y % (1 << j) + (1 << j)


class Pow2Order(TotalOrder):
    """Order by 2-adic valuation, ties broken by stepping both operands down."""

    name = "pow2"

    def compare(self, a: int, b: int) -> int:
        # the loop in pow2_compare_steps is the reference; the key gives the same answer in O(1)
        if a == b:
            return 0
        bits = (a - b).bit_length() + 1
        return -1 if pow2_key(a, bits) < pow2_key(b, bits) else 1

    def key_for(self, lo: int, hi: int) -> Callable[[int], object]:
        bits = max(1, (hi - lo).bit_length())
        return lambda x: pow2_key(x, bits)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Pow2Order)

    def __hash__(self) -> int:
        return hash("pow2")


class PermutationOrder(TotalOrder):
    """An arbitrary total order on the window ``[lo, hi]`` given by ranks."""

    def __init__(self, lo: int, hi: int, ranks: Sequence[int], name: str | None = None):
        if len(ranks) != hi - lo + 1 or sorted(ranks) != list(range(hi - lo + 1)):
            raise ValueError("ranks must be a permutation of 0..hi-lo")
        self.lo = lo
        self.hi = hi
        self.rank_table = {lo + i: r for i, r in enumerate(ranks)}
        self.name = name or f"perm:{lo}:{hi}"
        self._hash = hash((lo, hi, tuple(ranks)))

    @classmethod
    def seeded(cls, seed: int, lo: int, hi: int) -> PermutationOrder:
        ranks = list(range(hi - lo + 1))
        random.Random(seed).shuffle(ranks)
        return cls(lo, hi, ranks, name=f"perm:{seed}:{lo}:{hi}")

    @classmethod
    def from_sequence(cls, increasing: Sequence[int], name: str | None = None) -> PermutationOrder:
        """Build the order listing ``increasing`` from least to greatest."""
        lo, hi = min(increasing), max(increasing)
        ranks = [0] * (hi - lo + 1)
        if len(increasing) != len(ranks):
            raise ValueError("sequence must cover a contiguous window exactly once")
        for r, x in enumerate(increasing):
            ranks[x - lo] = r
        return cls(lo, hi, ranks, name=name)

    def in_domain(self, x: int) -> bool:
        return self.lo <= x <= self.hi

    def rank(self, x: int) -> int:
        try:
            return self.rank_table[x]
        except KeyError:
            raise DomainError(f"{x} outside window [{self.lo}, {self.hi}] of {self.name}") from None

    def compare(self, a: int, b: int) -> int:
        ra, rb = self.rank(a), self.rank(b)
        return (ra > rb) - (ra < rb)

    def key_for(self, lo: int, hi: int) -> Callable[[int], object]:
        return self.rank

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, PermutationOrder)
            and (self.lo, self.hi) == (other.lo, other.hi)
            and self.rank_table == other.rank_table
        )

    def __hash__(self) -> int:
        return self._hash


NATURAL = NaturalOrder()
POW2 = Pow2Order()


def parse_order(spec: str) -> TotalOrder:
    """Parse ``natural``, ``pow2`` or ``perm:<seed>:<lo>:<hi>``."""
    if spec == "natural":
        return NATURAL
    if spec == "pow2":
        return POW2
    if spec.startswith("perm:"):
        try:
            seed, lo, hi = (int(t) for t in spec.split(":")[1:])
        except ValueError:
            raise ValueError(f"bad permutation order spec {spec!r}") from None
        return PermutationOrder.seeded(seed, lo, hi)
    raise ValueError(f"unknown order spec {spec!r}")


def compare(order: TotalOrder, a: int, b: int) -> int:
    return order.compare(a, b)


def sort_interval(order: TotalOrder, iv: IntegerInterval) -> list[int]:
    """Elements of ``iv`` in increasing order."""
    return list(order.sorted_range(iv.lo, iv.hi))


def is_among_k_greatest(order: TotalOrder, s: int, iv: IntegerInterval, k: int) -> bool:
    """True iff fewer than ``k`` elements of ``iv`` lie above ``s``.

    This is the single-pass counting form; segment construction uses the
    cached :meth:`TotalOrder.top_k` which must agree with it.
    """
    if s not in iv:
        raise DomainError(f"{s} not in {iv}")
    if not 0 <= k <= len(iv):
        raise ValueError(f"k={k} out of range for {iv}")
    above = 0
    for t in iv:
        if order.compare(s, t) < 0:
            above += 1
            if above >= k:
                return False
    return above < k


def vdc_index(x: int, n: int) -> int:
    """1-based position of ``0.5 - x / 2**(n+1)`` in the base-2 van der Corput sequence.

    Within ``(-2**n, 2**n)`` the 2-adic order is the reverse of this index.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if not -(1 << n) < x < (1 << n):
        raise DomainError(f"{x} outside (-2^{n}, 2^{n})")
    numerator = (1 << n) - x  # the dyadic value is numerator / 2**(n+1)
    return int(format(numerator, f"0{n + 1}b")[::-1], 2)


def is_strict_total_order(order: TotalOrder, values: Iterable[int]) -> tuple[int, ...] | None:
    """Exhaustively check the strict total order laws on ``values``.

    Returns ``None`` when they hold, otherwise an offending tuple.
    """
    vals = list(values)
    cmp = {(a, b): order.compare(a, b) for a in vals for b in vals}
    for a in vals:
        if cmp[a, a] != 0:
            return (a,)
    for a in vals:
        for b in vals:
            if a != b and (cmp[a, b] == 0 or cmp[a, b] != -cmp[b, a]):
                return (a, b)
    # Transitivity: a tournament is transitive iff its score sequence is 0..n-1.
    scores = sorted(sum(cmp[a, b] > 0 for b in vals) for a in vals)
    if scores != list(range(len(vals))):
        for a in vals:
            for b in vals:
                for c in vals:
                    if cmp[a, b] < 0 and cmp[b, c] < 0 and cmp[a, c] >= 0:
                        return (a, b, c)
    return None
