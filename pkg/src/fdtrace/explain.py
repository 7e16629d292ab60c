"""Explanations ``N-[cond(M,Path,Props),...]`` and their evaluation.

An explanation holds iff at least N of its conds hold. A cond holds iff at
least M (or ``all``) of the entities its path addresses satisfy their
property; a single property applies to every entity, a list pairs up with
the entities by index.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .domain import FiniteDomain, IntSet, domain_to_term, term_to_domain
from .paths import (
    DomainLookup,
    Path,
    function_values,
    lookup_domain,
    path_to_term,
    resolve,
    term_to_path,
)
from .terms import Atom, Compound, Int, List, Term, Var, parse_term, render


@dataclass(frozen=True)
class Eq:
    value: int


@dataclass(frozen=True)
class Neq:
    value: int


@dataclass(frozen=True)
class InSet:
    values: IntSet


@dataclass(frozen=True)
class NotInSet:
    values: IntSet


Property = Union[Eq, Neq, InSet, NotInSet]

ALL = "all"


@dataclass(frozen=True)
class Cond:
    m: int | str
    path: Path
    props: Property | tuple[Property, ...]

    def __post_init__(self) -> None:
        if isinstance(self.props, list):
            object.__setattr__(self, "props", tuple(self.props))
        if self.m != ALL and (not isinstance(self.m, int) or self.m < 1):
            raise ValueError(f"bad cond threshold {self.m!r}")


@dataclass(frozen=True)
class Explanation:
    n: int
    conds: tuple[Cond, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "conds", tuple(self.conds))
        if self.n < 1:
            raise ValueError(f"bad explanation threshold {self.n}")

    def __str__(self) -> str:
        return render(explanation_to_term(self))


def entity_satisfies(entity: Term | int, prop: Property, domains: DomainLookup) -> bool:
    if isinstance(entity, int):
        dom = FiniteDomain.values([entity])
    elif isinstance(entity, Int):
        dom = FiniteDomain.values([entity.value])
    elif isinstance(entity, Var):
        dom = lookup_domain(domains, entity)
    else:
        raise TypeError(f"property applied to non-numeric entity {render(entity)}")
    match prop:
        case Eq(value=i):
            return i in dom
        case Neq(value=i):
            return bool(dom - FiniteDomain.values([i]))
        case InSet(values=s):
            return dom.issubset(s)
        case NotInSet(values=s):
            return dom.isdisjoint(s)
    raise TypeError(f"unknown property {prop!r}")


def cond_holds(c: Cond, ctx: Term, domains: DomainLookup) -> bool:
    if c.path.func is not None:
        entities: list = function_values(c.path, ctx, domains)
    else:
        entities = [t for _, t in resolve(c.path, ctx)]
    if isinstance(c.props, tuple):
        if len(c.props) != len(entities):
            raise ValueError(f"{len(c.props)} properties for {len(entities)} entities")
        props = c.props
    else:
        props = (c.props,) * len(entities)
    satisfied = sum(entity_satisfies(e, p, domains) for e, p in zip(entities, props))
    if c.m == ALL:
        return satisfied == len(entities)
    return satisfied >= c.m


def holds(e: Explanation, ctx: Term, domains: DomainLookup) -> bool:
    return sum(cond_holds(c, ctx, domains) for c in e.conds) >= e.n


# -- term conversion ----------------------------------------------------------


def _prop_term(p: Property) -> Term:
    match p:
        case Eq(value=i):
            return Compound("eq", (Int(i),))
        case Neq(value=i):
            return Compound("neq", (Int(i),))
        case InSet(values=s):
            return Compound("inset", (domain_to_term(s),))
        case NotInSet(values=s):
            return Compound("notinset", (domain_to_term(s),))
    raise TypeError(f"unknown property {p!r}")


def _term_prop(t: Term) -> Property:
    match t:
        case Compound(functor="eq", args=(Int(value=i),)):
            return Eq(i)
        case Compound(functor="neq", args=(Int(value=i),)):
            return Neq(i)
        case Compound(functor="inset", args=(s,)):
            return InSet(term_to_domain(s))
        case Compound(functor="notinset", args=(s,)):
            return NotInSet(term_to_domain(s))
    raise ValueError(f"not a property: {render(t)}")


def explanation_to_term(e: Explanation) -> Term:
    conds = []
    for c in e.conds:
        m = Atom(ALL) if c.m == ALL else Int(c.m)
        if isinstance(c.props, tuple):
            props: Term = List(tuple(_prop_term(p) for p in c.props))
        else:
            props = _prop_term(c.props)
        conds.append(Compound("cond", (m, path_to_term(c.path), props)))
    return Compound("-", (Int(e.n), List(tuple(conds))))


def term_to_explanation(t: Term) -> Explanation:
    match t:
        case Compound(functor="-", args=(Int(value=n), List(elems=elems))):
            pass
        case _:
            raise ValueError(f"not an explanation: {render(t)}")
    conds = []
    for c in elems:
        match c:
            case Compound(functor="cond", args=(m, pa, pl)):
                pass
            case _:
                raise ValueError(f"not a cond: {render(c)}")
        match m:
            case Atom(name="all"):
                threshold: int | str = ALL
            case Int(value=k):
                threshold = k
            case _:
                raise ValueError(f"bad cond threshold: {render(m)}")
        props = tuple(_term_prop(p) for p in pl.elems) if isinstance(pl, List) else _term_prop(pl)
        conds.append(Cond(threshold, term_to_path(pa), props))
    return Explanation(n, tuple(conds))


def parse_explanation(text: str) -> Explanation:
    return term_to_explanation(parse_term(text))
