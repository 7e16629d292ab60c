"""The constraint library.

Each constraint knows its posting rule and its demon; a demon's filtering
algorithm is split into named methods, and every method that changes
something is traced as a method block around its prune blocks.

Shipped: ``domain/3``, ``in/2`` (``X in L..H``), ``in_set/2``,
``all_different/1`` (pairwise disequality strength), ``all_distinct/1``
(matching-based, domain consistent) and ``element/3`` over a ground list.
"""

from __future__ import annotations

from typing import Sequence

from . import matching
from .domain import FiniteDomain, term_to_domain
from .events import PruneFact, RemoveValue, RemoveValues, WakeCond
from .explain import ALL, Cond, Eq, Explanation, InSet, NotInSet
from .kernel import ConstraintCell, Demon, Kernel, PropEvent, vlist_of
from .model import intern_constraint
from .paths import Path, Position, every, parse_path, path_for, pos
from .terms import Compound, Int, List, SrcVar, Term, Var, compound, render


class Constraint:
    functor = ""
    dtype = ""
    wake_conds: tuple[WakeCond, ...] = ()

    def __init__(self, cell: ConstraintCell) -> None:
        self.cell = cell
        cell.impl = self

    def post(self, kernel: Kernel, cell: ConstraintCell) -> bool:
        """Posting rule; returns True when the constraint is already entailed."""
        return False

    def demons(self, kernel: Kernel, cell: ConstraintCell) -> list[Demon]:
        return [Demon(cell.id, self.dtype, self.wake_conds, self.filter)]

    def filter(self, kernel: Kernel, cell: ConstraintCell) -> bool:
        raise NotImplementedError


def entity_dom(kernel: Kernel, t: Term) -> FiniteDomain:
    if isinstance(t, Int):
        return FiniteDomain.values([t.value])
    if isinstance(t, Var):
        return kernel.dom(t)
    raise TypeError(f"not a domain entity: {render(t)}")


def narrow(
    kernel: Kernel,
    cell: ConstraintCell,
    intention: PruneFact,
    targets: Sequence[tuple[Position, Term, FiniteDomain]],
    explanation: Explanation | None,
) -> bool:
    """Restrict each target entity to its keep-set as one prune block.

    An integer literal outside its keep-set cannot be pruned, so it makes
    the constraint fail with the same explanation.
    """
    events = []
    for position, t, keep in targets:
        if isinstance(t, Int):
            if t.value not in keep:
                kernel.fail(cell, explanation)
        else:
            events.append(PropEvent(t, keep, cell.id, position))
    return kernel.enqueue_event(cell, intention, events, explanation)


def _all_but(s: FiniteDomain) -> FiniteDomain:
    return FiniteDomain.full() - s


def _is_entity(t: Term) -> bool:
    return isinstance(t, (Int, Var, SrcVar))


# -- unary range constraints --------------------------------------------------


class Domain(Constraint):
    """``domain(Vars, Lo, Hi)``: entails right after posting."""

    functor = "domain"

    def post(self, kernel: Kernel, cell: ConstraintCell) -> bool:
        vars_, lo, hi = cell.rep.args
        keep = FiniteDomain.range(lo.value, hi.value)
        targets = [((1, i), t, keep) for i, t in enumerate(vars_.elems, 1)]
        expl = Explanation(1, (Cond(ALL, parse_path("[[2,3]]"), (Eq(lo.value), Eq(hi.value))),))
        return _post_unary(kernel, cell, targets, keep, expl)


def _post_unary(kernel, cell, targets, keep, explanation) -> bool:
    # unary constraints are entailed once their variables are narrowed
    removed = FiniteDomain()
    for _, t, _ in targets:
        removed = removed | (entity_dom(kernel, t) - keep)
    if removed:
        narrow(kernel, cell, RemoveValues(removed), targets, explanation)
    return True


class InRange(Constraint):
    """``X in Lo..Hi``."""

    functor = "in"

    def post(self, kernel: Kernel, cell: ConstraintCell) -> bool:
        x, rng = cell.rep.args
        lo, hi = rng.args
        keep = FiniteDomain.range(lo.value, hi.value)
        expl = Explanation(1, (Cond(ALL, parse_path("[2,[1,2]]"), (Eq(lo.value), Eq(hi.value))),))
        return _post_unary(kernel, cell, [((1,), x, keep)], keep, expl)


class Member(Constraint):
    """``X in_set FDSet``; carries no explanation, the set is the reason."""

    functor = "in_set"

    def post(self, kernel: Kernel, cell: ConstraintCell) -> bool:
        x, s = cell.rep.args
        keep = term_to_domain(s)
        return _post_unary(kernel, cell, [((1,), x, keep)], keep, None)


# -- all_different -----------------------------------------------------------


class AllDifferent(Constraint):
    functor = "all_different"
    dtype = "all_different_1"
    wake_conds = (WakeCond(Path((pos(1), every(hashed=True))), "val"),)

    def filter(self, kernel: Kernel, cell: ConstraintCell) -> bool:
        entities = cell.rep.args[0].elems
        done: set[int] = set()
        progress = True
        while progress:
            progress = False
            for i, t in enumerate(entities, 1):
                d = entity_dom(kernel, t)
                if i in done or not d.is_ground():
                    continue
                done.add(i)
                if self.propagate_ground_variable(kernel, cell, entities, i, d.value()):
                    progress = True
        return all(entity_dom(kernel, t).is_ground() for t in entities)

    def propagate_ground_variable(self, kernel, cell, entities, i, v) -> bool:
        clash = []
        others = []
        for j, t in enumerate(entities, 1):
            if j == i:
                continue
            d = entity_dom(kernel, t)
            if d.is_ground() and d.value() == v:
                clash.append(j)
            elif not d.is_ground() and v in d:
                others.append(j)
        if not clash and not others:
            return False
        here = path_for([(1, i)], cell.rep)
        with kernel.method("propagate_ground_variable"):
            kernel.info(cell, "ground_variable", here, Int(v))
            if clash:
                both = path_for([(1, i), (1, clash[0])], cell.rep)
                kernel.fail(cell, Explanation(1, (Cond(ALL, both, InSet(FiniteDomain.values([v]))),)))
            keep = _all_but(FiniteDomain.values([v]))
            narrow(
                kernel,
                cell,
                RemoveValue(v),
                [((1, j), entities[j - 1], keep) for j in others],
                Explanation(1, (Cond(1, here, Eq(v)),)),
            )
        return True


# -- all_distinct ------------------------------------------------------------


class AllDistinct(Constraint):
    functor = "all_distinct"
    dtype = "all_distinct_1"
    wake_conds = (WakeCond(Path((pos(1), every(hashed=True))), "dom"),)

    def filter(self, kernel: Kernel, cell: ConstraintCell) -> bool:
        entities = cell.rep.args[0].elems
        doms = [entity_dom(kernel, t) for t in entities]
        match = matching.max_matching(doms)
        if None in match:
            self.match_and_check(kernel, cell, doms, match)
        self.prune_matching(kernel, cell, entities, doms, match)
        return all(entity_dom(kernel, t).is_ground() for t in entities)

    def _hall_expl(self, cell, doms, members) -> Explanation:
        union = FiniteDomain()
        for i in members:
            union = union | doms[i]
        where = path_for([(1, i + 1) for i in members], cell.rep)
        return Explanation(1, (Cond(ALL, where, InSet(union)),))

    def match_and_check(self, kernel, cell, doms, match) -> None:
        hall = matching.hall_violator(doms, match)
        with kernel.method("match_and_check"):
            kernel.fail(cell, self._hall_expl(cell, doms, hall))

    def prune_matching(self, kernel, cell, entities, doms, match) -> None:
        removals = matching.unsupported_values(doms, match)
        if not removals:
            return
        owner = {v: i for i, v in enumerate(match)}
        with kernel.method("prune_matching"):
            for i in sorted(removals):
                gone = removals[i]
                # values taken by a closed set of positions that excludes i
                hall = matching.closure(doms, match, sorted({owner[v] for v in gone}))
                narrow(
                    kernel,
                    cell,
                    RemoveValues(gone),
                    [((1, i + 1), entities[i], _all_but(gone))],
                    self._hall_expl(cell, doms, hall),
                )


# -- element -------------------------------------------------------------------


class Element(Constraint):
    """``element(X, List, Y)``: Y is the X-th (1-based) member of a ground List."""

    functor = "element"
    dtype = "element_3"
    wake_conds = (
        WakeCond(Path((pos(1),)), "dom"),
        WakeCond(Path((pos(2), every(hashed=True))), "minmax"),
        WakeCond(Path((pos(3),)), "minmax"),
    )

    @property
    def values(self) -> list[int]:
        return [t.value for t in self.cell.rep.args[1].elems]

    def post(self, kernel: Kernel, cell: ConstraintCell) -> bool:
        n = len(self.values)
        kernel.new_ctr_because(cell, Explanation(1, (Cond(1, parse_path("[2]/length"), Eq(n)),)))
        x = cell.rep.args[0]
        kernel._connect(build(kernel, compound("in", x, compound("..", Int(1), Int(n)))))
        return False

    def filter(self, kernel: Kernel, cell: ConstraintCell) -> bool:
        x, _, y = cell.rep.args
        self.prune_y(kernel, cell)
        self.prune_x(kernel, cell)
        dx, dy = entity_dom(kernel, x), entity_dom(kernel, y)
        return dx.is_ground() and dy.is_ground() and self.values[dx.value() - 1] == dy.value()

    def _indices(self, dx: FiniteDomain) -> list[int]:
        return [i for i in range(1, len(self.values) + 1) if i in dx]

    def prune_y(self, kernel, cell) -> None:
        x, _, y = cell.rep.args
        dx, dy = entity_dom(kernel, x), entity_dom(kernel, y)
        indices = self._indices(dx)
        support = FiniteDomain.values(self.values[i - 1] for i in indices)
        removal = dy - support
        if not removal:
            return
        if support:
            span = FiniteDomain.range(support.min, support.max)
            phases = [s for s in (removal - span, removal & span) if s]
        else:
            phases = [removal]
        with kernel.method("prune_y"):
            for s in phases:
                narrow(kernel, cell, RemoveValues(s), [((3,), y, _all_but(s))], self._y_expl(cell, dx, indices, s))

    def _y_expl(self, cell, dx, indices, s) -> Explanation:
        outside = NotInSet(s)
        if len(indices) == len(self.values):
            return Explanation(1, (Cond(ALL, Path((pos(2), every(hashed=True))), outside),))
        conds = [Cond(ALL, Path((pos(1),)), InSet(dx))]
        if indices:
            conds.append(Cond(ALL, path_for([(2, i) for i in indices], cell.rep), outside))
        return Explanation(len(conds), tuple(conds))

    def prune_x(self, kernel, cell) -> None:
        x, _, y = cell.rep.args
        dy = entity_dom(kernel, y)
        bad = [i for i in self._indices(entity_dom(kernel, x)) if self.values[i - 1] not in dy]
        if not bad:
            return
        with kernel.method("prune_x"):
            for i in bad:
                s = FiniteDomain.values([i])
                not_y = NotInSet(FiniteDomain.values([self.values[i - 1]]))
                narrow(
                    kernel,
                    cell,
                    RemoveValues(s),
                    [((1,), x, _all_but(s))],
                    Explanation(1, (Cond(1, Path((pos(3),)), not_y),)),
                )


# -- construction --------------------------------------------------------------


def check_shape(source: Term) -> type[Constraint]:
    def bad(why: str) -> ValueError:
        return ValueError(f"unsupported constraint {render(source)}: {why}")

    if not isinstance(source, Compound):
        raise bad("not a compound")
    args = source.args
    match (source.functor, len(args)):
        case ("domain", 3):
            if not isinstance(args[0], List) or not all(map(_is_entity, args[0].elems)):
                raise bad("first argument must be a list of variables")
            if not (isinstance(args[1], Int) and isinstance(args[2], Int)):
                raise bad("bounds must be integers")
            return Domain
        case ("in", 2):
            rng = args[1]
            if not _is_entity(args[0]):
                raise bad("left side must be a variable or integer")
            if not (isinstance(rng, Compound) and rng.functor == ".." and all(isinstance(b, Int) for b in rng.args)):
                raise bad("right side must be Lo..Hi")
            return InRange
        case ("in_set", 2):
            if not _is_entity(args[0]):
                raise bad("left side must be a variable or integer")
            term_to_domain(args[1])
            return Member
        case ("all_different" | "all_distinct", 1):
            if not isinstance(args[0], List) or not all(map(_is_entity, args[0].elems)):
                raise bad("argument must be a list of variables and integers")
            if source.functor == "all_distinct":
                named = [t for t in args[0].elems if isinstance(t, (Var, SrcVar)) and t != SrcVar("_")]
                if len(set(named)) != len(named):
                    raise bad("repeated variable")
                return AllDistinct
            return AllDifferent
        case ("element", 3):
            if not (_is_entity(args[0]) and _is_entity(args[2])):
                raise bad("index and value must be variables or integers")
            if not isinstance(args[1], List) or not args[1].elems or not all(isinstance(t, Int) for t in args[1].elems):
                raise bad("list must be a non-empty list of integers")
            return Element
    raise bad("unknown constraint")


def build(kernel: Kernel, source: Term) -> Constraint:
    """Check, intern and wrap a constraint term; does not connect it."""
    cls = check_shape(source)
    ctr_id, rep = intern_constraint(source, kernel.registry)
    for v in vlist_of(rep):
        kernel.cell(v)
    return cls(ConstraintCell(ctr_id, rep, vlist_of(rep)))
