"""Reference implementations the solver is checked against.

Everything here works on plain Python ints, sets and tuples and shares no
code with the package, so agreement is evidence rather than tautology.
"""

from __future__ import annotations

import itertools
from typing import Callable, Sequence

# -- domains as bitsets -------------------------------------------------------


def to_bits(values, offset: int) -> int:
    bits = 0
    for v in values:
        bits |= 1 << (v - offset)
    return bits


def from_bits(bits: int, offset: int) -> set[int]:
    out = set()
    i = 0
    while bits:
        if bits & 1:
            out.add(i + offset)
        bits >>= 1
        i += 1
    return out


def intervals_of(values) -> list[tuple[int, int]]:
    """Maximal runs of consecutive integers, ascending."""
    runs: list[list[int]] = []
    for v in sorted(set(values)):
        if runs and runs[-1][1] == v - 1:
            runs[-1][1] = v
        else:
            runs.append([v, v])
    return [tuple(r) for r in runs]


# -- constraints as predicates over complete assignments -----------------------

Tuple = tuple[int, ...]


def all_different_ok(values: Sequence[int]) -> bool:
    return len(set(values)) == len(values)


def element_ok(x: int, table: Sequence[int], y: int) -> bool:
    return 1 <= x <= len(table) and table[x - 1] == y


def solutions(domains: Sequence[set[int]], ok: Callable[[Tuple], bool]) -> list[Tuple]:
    """All tuples of the product, lexicographic order, that satisfy ``ok``."""
    return [t for t in itertools.product(*(sorted(d) for d in domains)) if ok(t)]


def gac(domains: Sequence[set[int]], ok: Callable[[Tuple], bool]) -> list[set[int]]:
    """Generalized arc consistency by enumeration: the values that have a support."""
    sols = solutions(domains, ok)
    return [{t[i] for t in sols} for i in range(len(domains))]


# -- naive all_different: pairwise disequality to a fixpoint -------------------


def pairwise_fixpoint(domains: Sequence[set[int]]) -> list[set[int]] | None:
    """Repeatedly remove each singleton's value from every other domain.

    Returns None when a domain empties or two singletons clash.
    """
    doms = [set(d) for d in domains]
    changed = True
    while changed:
        changed = False
        for i, d in enumerate(doms):
            if len(d) != 1:
                continue
            (v,) = d
            for j, e in enumerate(doms):
                if j != i and v in e:
                    e.discard(v)
                    changed = True
                    if not e:
                        return None
    return doms


# -- chaotic iteration over projection rules -----------------------------------


def chaotic_fixpoint(domains: dict[str, set[int]], rules: list[Callable[[dict], dict]]) -> dict[str, set[int]] | None:
    """Apply narrowing rules in round-robin until none changes anything.

    A rule maps the current domains to (possibly smaller) domains for some
    variables. The result does not depend on rule order because every rule
    is monotone and contracting.
    """
    doms = {k: set(v) for k, v in domains.items()}
    changed = True
    while changed:
        changed = False
        for rule in rules:
            for k, narrowed in rule(doms).items():
                new = doms[k] & narrowed
                if new != doms[k]:
                    doms[k] = new
                    changed = True
                    if not new:
                        return None
    return doms


def pairwise_rule(names: Sequence[str | int]) -> Callable[[dict], dict]:
    """The naive all_different rule over names and integer constants."""

    def rule(doms: dict) -> dict:
        def dom(n):
            return {n} if isinstance(n, int) else doms[n]

        out: dict = {}
        for i, a in enumerate(names):
            if isinstance(a, int):
                continue
            taken = set()
            for j, b in enumerate(names):
                if j != i and len(dom(b)) == 1:
                    taken |= dom(b)
            out[a] = doms[a] - taken
        return out

    return rule


def element_rule(x: str, table: Sequence[int], y: str) -> Callable[[dict], dict]:
    """Both projections of element(X, table, Y): X and Y lose unsupported values."""

    def rule(doms: dict) -> dict:
        xs = {i for i in doms[x] if 1 <= i <= len(table) and table[i - 1] in doms[y]}
        return {x: xs, y: {table[i - 1] for i in xs}}

    return rule
