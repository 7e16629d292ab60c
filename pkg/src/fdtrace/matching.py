"""Variable/value matching for all_distinct: maximum matching, Hall sets and
the edges that belong to no maximum matching.

Only matched values are ever materialized, so variables with very large
domains cost no more than small ones.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .domain import FiniteDomain

Matching = list  # position -> value or None


def _first_free(dom: FiniteDomain, owner: dict[int, int]) -> int | None:
    # at most len(owner) values can be taken, so the scan is short
    for v in dom:
        if v not in owner:
            return v
    return None


def max_matching(doms: Sequence[FiniteDomain]) -> Matching:
    """Maximum matching by augmenting paths; ties broken towards small values."""
    match: Matching = [None] * len(doms)
    owner: dict[int, int] = {}

    def augment(i: int, seen: set[int]) -> bool:
        v = _first_free(doms[i], owner)
        if v is not None:
            match[i] = v
            owner[v] = i
            return True
        for v in sorted(owner):
            if v in seen or v not in doms[i]:
                continue
            seen.add(v)
            # owner[v] keeps v while it looks elsewhere, so v is never "free" to it
            if augment(owner[v], seen):
                match[i] = v
                owner[v] = i
                return True
        return False

    for i in range(len(doms)):
        augment(i, set())
    return match


def hall_violator(doms: Sequence[FiniteDomain], match: Matching) -> list[int]:
    """Positions reachable from unmatched positions by alternating paths.

    Under a maximum matching this set has more members than values in the
    union of its domains.
    """
    return closure(doms, match, [i for i, v in enumerate(match) if v is None])


def closure(doms: Sequence[FiniteDomain], match: Matching, start: Iterable[int]) -> list[int]:
    """Positions reachable from ``start`` going position -> any value -> its owner."""
    owner = {v: i for i, v in enumerate(match) if v is not None}
    seen = set(start)
    todo = list(seen)
    while todo:
        i = todo.pop()
        for v in sorted(owner):
            if v in doms[i] and owner[v] not in seen:
                seen.add(owner[v])
                todo.append(owner[v])
    return sorted(seen)


def _sccs(nodes: list, succ: dict) -> dict:
    """Tarjan's algorithm; returns node -> component index."""
    index: dict = {}
    low: dict = {}
    comp: dict = {}
    stack: list = []
    on_stack: set = set()
    counter = [0]
    ncomp = [0]

    def visit(n) -> None:
        index[n] = low[n] = counter[0]
        counter[0] += 1
        stack.append(n)
        on_stack.add(n)
        for m in succ.get(n, ()):
            if m not in index:
                visit(m)
                low[n] = min(low[n], low[m])
            elif m in on_stack:
                low[n] = min(low[n], index[m])
        if low[n] == index[n]:
            while True:
                m = stack.pop()
                on_stack.discard(m)
                comp[m] = ncomp[0]
                if m == n:
                    break
            ncomp[0] += 1

    for n in nodes:
        if n not in index:
            visit(n)
    return comp


def unsupported_values(doms: Sequence[FiniteDomain], match: Matching) -> dict[int, FiniteDomain]:
    """Values, per position, that appear in no maximum matching.

    ``match`` must cover every position. Orient matched edges position ->
    value and the others value -> position; an edge survives if it is
    matched, reaches a free value along an alternating path, or joins two
    nodes of one strongly connected component.
    """
    owner = {v: i for i, v in enumerate(match)}
    matched = FiniteDomain.values(owner)
    on_free_path = {i for i, d in enumerate(doms) if d - matched}
    todo = list(on_free_path)
    while todo:
        i = todo.pop()
        v = match[i]
        for j, d in enumerate(doms):
            if j not in on_free_path and j != owner[v] and v in d:
                on_free_path.add(j)
                todo.append(j)
    free_reachable_values = {match[i] for i in on_free_path}

    nodes: list = [("x", i) for i in range(len(doms))] + [("v", v) for v in sorted(owner)]
    succ: dict = {("x", i): [("v", match[i])] for i in range(len(doms))}
    for v in sorted(owner):
        succ[("v", v)] = [("x", j) for j, d in enumerate(doms) if v in d and owner[v] != j]
    comp = _sccs(nodes, succ)

    out = {}
    for i, d in enumerate(doms):
        bad = [
            v
            for v in sorted(owner)
            if v in d
            and v != match[i]
            and v not in free_reachable_values
            and comp[("v", v)] != comp[("x", i)]
        ]
        if bad:
            out[i] = FiniteDomain.values(bad)
    return out
