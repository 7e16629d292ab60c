"""Finite integer domains stored as sorted, disjoint, non-adjacent interval lists.

The textual form is the Prolog FD-set notation used in traces:
``[[1|2],[4|6]]`` is the set {1, 2, 4, 5, 6}.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator

from .terms import CELL, Compound, Int, List, Term, cell

# Bounds of the representable integer range; a fresh variable starts here.
INF = -(2**28)
SUP = 2**28 - 1


def _normalize(pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    out: list[tuple[int, int]] = []
    for lo, hi in sorted((lo, hi) for lo, hi in pairs if lo <= hi):
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


@dataclass(frozen=True)
class FiniteDomain:
    intervals: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if _normalize(self.intervals) != tuple(self.intervals):
            raise ValueError(f"intervals not normalized: {self.intervals!r}")
        object.__setattr__(self, "intervals", tuple(tuple(p) for p in self.intervals))

    @classmethod
    def _trusted(cls, intervals: tuple) -> FiniteDomain:
        # for results that are normalized by construction
        d = object.__new__(cls)
        object.__setattr__(d, "intervals", intervals)
        return d

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]]) -> FiniteDomain:
        return cls._trusted(_normalize(pairs))

    @classmethod
    def range(cls, lo: int, hi: int) -> FiniteDomain:
        return cls.of([(lo, hi)])

    @classmethod
    def values(cls, vals: Iterable[int]) -> FiniteDomain:
        return cls.of((v, v) for v in vals)

    @classmethod
    def full(cls) -> FiniteDomain:
        return cls(((INF, SUP),))

    def __bool__(self) -> bool:
        return bool(self.intervals)

    def __len__(self) -> int:
        return sum(hi - lo + 1 for lo, hi in self.intervals)

    def __iter__(self) -> Iterator[int]:
        for lo, hi in self.intervals:
            yield from range(lo, hi + 1)

    def __contains__(self, v: int) -> bool:
        for lo, hi in self.intervals:
            if v < lo:
                return False
            if v <= hi:
                return True
        return False

    @property
    def min(self) -> int:
        if not self.intervals:
            raise ValueError("min of empty domain")
        return self.intervals[0][0]

    @property
    def max(self) -> int:
        if not self.intervals:
            raise ValueError("max of empty domain")
        return self.intervals[-1][1]

    @property
    def size(self) -> int:
        return len(self)

    def is_ground(self) -> bool:
        return len(self.intervals) == 1 and self.intervals[0][0] == self.intervals[0][1]

    def value(self) -> int:
        if not self.is_ground():
            raise ValueError(f"domain {self} is not ground")
        return self.intervals[0][0]

    def __and__(self, other: FiniteDomain) -> FiniteDomain:
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo <= hi:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return FiniteDomain._trusted(tuple(out))

    def __or__(self, other: FiniteDomain) -> FiniteDomain:
        return FiniteDomain.of(self.intervals + other.intervals)

    def __sub__(self, other: FiniteDomain) -> FiniteDomain:
        out = []
        b = other.intervals
        j = 0
        for lo, hi in self.intervals:
            while j < len(b) and b[j][1] < lo:
                j += 1
            k = j
            cur = lo
            while k < len(b) and b[k][0] <= hi:
                if b[k][0] > cur:
                    out.append((cur, b[k][0] - 1))
                cur = max(cur, b[k][1] + 1)
                k += 1
            if cur <= hi:
                out.append((cur, hi))
        return FiniteDomain._trusted(tuple(out))

    def issubset(self, other: FiniteDomain) -> bool:
        return not (self - other)

    def isdisjoint(self, other: FiniteDomain) -> bool:
        return not (self & other)

    def __str__(self) -> str:
        return "[" + ",".join(f"[{lo}|{hi}]" for lo, hi in self.intervals) + "]"

    def __repr__(self) -> str:
        return f"FiniteDomain({self})"


# Propagation sets and explanation sets share the representation.
IntSet = FiniteDomain

EMPTY = FiniteDomain()


def from_intervals(pairs: Iterable[tuple[int, int]]) -> FiniteDomain:
    """Build a normalized domain from arbitrary pairs; pairs with lo > hi are dropped."""
    return FiniteDomain.of(pairs)


def remove_set(d: FiniteDomain, s: IntSet) -> tuple[FiniteDomain, bool]:
    result = d - s
    return result, result != d


def intersect(d: FiniteDomain, s: IntSet) -> tuple[FiniteDomain, bool]:
    result = d & s
    return result, result != d


def domain_to_term(d: FiniteDomain) -> List:
    return List(tuple(cell(lo, hi) for lo, hi in d.intervals))


def term_to_domain(t: Term) -> FiniteDomain:
    """Inverse of domain_to_term; the cells must already be normalized."""
    if not isinstance(t, List):
        raise ValueError(f"not a domain: {t}")
    pairs = []
    for c in t.elems:
        match c:
            case Compound(functor=f, args=(Int(value=lo), Int(value=hi))) if f == CELL:
                pairs.append((lo, hi))
            case _:
                raise ValueError(f"not an interval cell: {c}")
    return FiniteDomain(tuple(pairs))
