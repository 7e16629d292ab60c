"""Paths: position selectors into a constraint representation.

A path is a list of steps. Each step selects one argument (``2``), several
(``[1,3]``) or all of them (``[*]``) of whatever the previous step selected;
a ``#`` prefix means the selection is inside a list. ``P\\Q`` subtracts the
positions of ``Q`` from those of ``P`` and ``P/F`` applies ``min``, ``max``
or ``length`` to each selected entity.
"""

from __future__ import annotations

from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass

from .domain import FiniteDomain
from .terms import Atom, Compound, Int, List, Term, Var, parse_term, render

Position = tuple[int, ...]
FUNCTIONS = ("min", "max", "length")


class PathError(ValueError):
    pass


@dataclass(frozen=True)
class Step:
    """One path element; ``indices is None`` stands for ``[*]``."""

    indices: tuple[int, ...] | None
    multi: bool = False
    hashed: bool = False

    def __post_init__(self) -> None:
        if self.indices is not None:
            if not self.indices or any(i < 1 for i in self.indices):
                raise PathError(f"bad step indices {self.indices}")
            if any(a >= b for a, b in zip(self.indices, self.indices[1:])):
                raise PathError("step indices must be strictly increasing")
            if not self.multi and len(self.indices) != 1:
                raise PathError("single-position step with several indices")


def pos(i: int, hashed: bool = False) -> Step:
    return Step((i,), False, hashed)


def posset(indices: Sequence[int], hashed: bool = False) -> Step:
    return Step(tuple(indices), True, hashed)


def every(hashed: bool = False) -> Step:
    return Step(None, True, hashed)


@dataclass(frozen=True)
class Path:
    steps: tuple[Step, ...]
    minus: Path | None = None
    func: str | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "steps", tuple(self.steps))
        if not self.steps:
            raise PathError("empty path")
        if self.func is not None and self.func not in FUNCTIONS:
            raise PathError(f"unknown path function {self.func!r}")
        if self.minus is not None and self.minus.func is not None:
            raise PathError("function inside subtracted path")

    def __str__(self) -> str:
        return render_path(self)


# -- term conversion ----------------------------------------------------------


def _step_term(s: Step) -> Term:
    if s.indices is None:
        t: Term = List((Atom("*"),))
    elif s.multi:
        t = List(tuple(Int(i) for i in s.indices))
    else:
        t = Int(s.indices[0])
    return Compound("#", (t,)) if s.hashed else t


def path_to_term(p: Path) -> Term:
    t: Term = List(tuple(_step_term(s) for s in p.steps))
    if p.minus is not None:
        t = Compound("\\", (t, path_to_term(p.minus)))
    if p.func is not None:
        t = Compound("/", (t, Atom(p.func)))
    return t


def _term_step(t: Term) -> Step:
    hashed = False
    if isinstance(t, Compound) and t.functor == "#" and len(t.args) == 1:
        hashed, t = True, t.args[0]
    match t:
        case Int(value=i):
            return pos(i, hashed)
        case List(elems=(Atom(name="*"),)):
            return every(hashed)
        case List(elems=elems) if elems and all(isinstance(e, Int) for e in elems):
            return posset([e.value for e in elems], hashed)
    raise PathError(f"not a path element: {render(t)}")


def term_to_path(t: Term) -> Path:
    func = None
    if isinstance(t, Compound) and t.functor == "/" and len(t.args) == 2:
        f = t.args[1]
        if not isinstance(f, Atom):
            raise PathError(f"bad path function: {render(f)}")
        func, t = f.name, t.args[0]
    minus = None
    if isinstance(t, Compound) and t.functor == "\\" and len(t.args) == 2:
        minus = term_to_path(t.args[1])
        t = t.args[0]
    if not isinstance(t, List) or not t.elems:
        raise PathError(f"not a path: {render(t)}")
    return Path(tuple(_term_step(e) for e in t.elems), minus, func)


def render_path(p: Path) -> str:
    return render(path_to_term(p))


def parse_path(text: str) -> Path:
    return term_to_path(parse_term(text))


# -- resolution ---------------------------------------------------------------


def _children(t: Term, hashed: bool) -> tuple[Term, ...]:
    if hashed:
        if not isinstance(t, List):
            raise PathError(f"'#' step applied to non-list {render(t)}")
        return t.elems
    if not isinstance(t, Compound):
        raise PathError(f"cannot descend into {render(t)}")
    return t.args


def _resolve_steps(steps: tuple[Step, ...], ctx: Term) -> list[tuple[Position, Term]]:
    current: list[tuple[Position, Term]] = [((), ctx)]
    for s in steps:
        nxt = []
        for position, t in current:
            kids = _children(t, s.hashed)
            indices = range(1, len(kids) + 1) if s.indices is None else s.indices
            for i in indices:
                if i > len(kids):
                    raise PathError(f"index {i} out of range in {render(t)}")
                nxt.append((position + (i,), kids[i - 1]))
        current = nxt
    return current


def resolve(p: Path, ctx: Term) -> list[tuple[Position, Term]]:
    """The (position, sub-term) pairs a path addresses, in index order.

    Any function suffix is ignored here; see apply_function.
    """
    found = _resolve_steps(p.steps, ctx)
    if p.minus is not None:
        drop = {position for position, _ in resolve(p.minus, ctx)}
        found = [(position, t) for position, t in found if position not in drop]
    return found


DomainLookup = Callable[[Var], FiniteDomain] | Mapping[Var, FiniteDomain]


def lookup_domain(domains: DomainLookup, v: Var) -> FiniteDomain:
    return domains[v] if isinstance(domains, Mapping) else domains(v)


def function_values(p: Path, ctx: Term, domains: DomainLookup) -> list[int]:
    """Apply the path's function to every addressed entity (unsimplified)."""
    if p.func is None:
        raise PathError("path has no function")
    out = []
    for _, t in resolve(p, ctx):
        match (p.func, t):
            case ("length", List(elems=elems)):
                out.append(len(elems))
            case ("min" | "max", Int(value=v)):
                out.append(v)
            case ("min", Var()):
                out.append(lookup_domain(domains, t).min)
            case ("max", Var()):
                out.append(lookup_domain(domains, t).max)
            case _:
                raise PathError(f"cannot apply {p.func} to {render(t)}")
    return out


def apply_function(p: Path, ctx: Term, domains: DomainLookup) -> int | list[int]:
    """Like function_values, but a one-element result is returned bare."""
    vals = function_values(p, ctx, domains)
    return vals[0] if len(vals) == 1 else vals


def path_for(positions: Sequence[Position], ctx: Term) -> Path:
    """The shortest path of the step forms above addressing exactly ``positions``.

    Positions must share a common prefix and differ only in their last index,
    which covers every path the kernel and the shipped constraints emit.
    """
    if not positions:
        raise PathError("no positions")
    depth = len(positions[0])
    prefix = positions[0][:-1]
    if depth == 0 or any(len(q) != depth or q[:-1] != prefix for q in positions):
        raise PathError(f"positions do not share a parent: {positions}")
    steps = []
    node = ctx
    for i in prefix:
        hashed = isinstance(node, List)
        steps.append(pos(i, hashed))
        node = _children(node, hashed)[i - 1]
    hashed = isinstance(node, List)
    last = sorted({q[-1] for q in positions})
    if len(last) == 1:
        steps.append(pos(last[0], hashed))
    else:
        steps.append(posset(last, hashed))
    return Path(tuple(steps))
