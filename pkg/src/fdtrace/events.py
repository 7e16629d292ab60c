"""Trace events, the append-only event log, text serialization and queries.

Every event serializes to one Prolog fact-like line whose first argument is
the event id, e.g. ``end_new_ctr(22,delay)``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Any, Callable, ClassVar, Iterable, Iterator, NamedTuple, Union

from .domain import FiniteDomain, IntSet, domain_to_term, term_to_domain
from .explain import Explanation, explanation_to_term, term_to_explanation
from .model import CtrId
from .paths import Path, path_to_term, term_to_path
from .terms import Atom, Compound, Int, List, SrcVar, Term, parse_term, render

CTR_RESULTS = ("fail", "delay", "entail")
PRUNE_RESULTS = ("succeed", "fail")
WAKE_CONDS = ("min", "max", "minmax", "val", "dom")


@dataclass(frozen=True)
class RemoveValue:
    value: int


@dataclass(frozen=True)
class RemoveValues:
    values: IntSet


PruneFact = Union[RemoveValue, RemoveValues]


def removal_fact(s: IntSet) -> PruneFact:
    """The canonical fact for an actual removal: remove_value for singletons."""
    return RemoveValue(s.value()) if s.is_ground() else RemoveValues(s)


def fact_set(f: PruneFact) -> IntSet:
    if isinstance(f, RemoveValue):
        return FiniteDomain.values([f.value])
    return f.values


class WakeCond(NamedTuple):
    path: Path
    cond: str


class Info(NamedTuple):
    path: Path
    entity: Term


# -- field codecs ---------------------------------------------------------------


@dataclass(frozen=True)
class Codec:
    to_term: Callable[[Any], Term]
    from_term: Callable[[Term], Any]


def _atom_of(t: Term) -> str:
    if not isinstance(t, Atom):
        raise ValueError(f"expected an atom, got {render(t)}")
    return t.name


def _choice(options: tuple[str, ...]) -> Codec:
    def decode(t: Term) -> str:
        name = _atom_of(t)
        if name not in options:
            raise ValueError(f"{name!r} is not one of {options}")
        return name

    return Codec(Atom, decode)


def _fact_term(f: PruneFact) -> Term:
    if isinstance(f, RemoveValue):
        return Compound("remove_value", (Int(f.value),))
    return Compound("remove_values", (domain_to_term(f.values),))


def _term_fact(t: Term) -> PruneFact:
    match t:
        case Compound(functor="remove_value", args=(Int(value=v),)):
            return RemoveValue(v)
        case Compound(functor="remove_values", args=(s,)):
            return RemoveValues(term_to_domain(s))
    raise ValueError(f"not a pruning fact: {render(t)}")


def _pair(t: Term) -> tuple[Term, Term]:
    match t:
        case Compound(functor="-", args=(a, b)):
            return a, b
    raise ValueError(f"expected a pair A-B, got {render(t)}")


def _list_of(t: Term) -> tuple[Term, ...]:
    if not isinstance(t, List):
        raise ValueError(f"expected a list, got {render(t)}")
    return t.elems


def _int_of(t: Term) -> int:
    if not isinstance(t, Int):
        raise ValueError(f"expected an integer, got {render(t)}")
    return t.value


ID = Codec(Int, _int_of)
CTR = Codec(CtrId.to_term, lambda t: CtrId.parse(_atom_of(t)))
ATOM = Codec(Atom, _atom_of)
TERM = Codec(lambda t: t, lambda t: t)
PATH = Codec(path_to_term, term_to_path)
FACT = Codec(_fact_term, _term_fact)
EXPL = Codec(explanation_to_term, term_to_explanation)
COND = _choice(WAKE_CONDS)
CTR_RESULT = _choice(CTR_RESULTS)
PRUNE_RESULT = _choice(PRUNE_RESULTS)
DOMAINS = Codec(
    lambda ds: List(tuple(domain_to_term(d) for d in ds)),
    lambda t: tuple(term_to_domain(d) for d in _list_of(t)),
)
WAKES = Codec(
    lambda ws: List(tuple(Compound("-", (path_to_term(w.path), Atom(w.cond))) for w in ws)),
    lambda t: tuple(
        WakeCond(term_to_path(p), COND.from_term(c)) for p, c in map(_pair, _list_of(t))
    ),
)
INFO = Codec(
    lambda i: Compound("-", (path_to_term(i.path), i.entity)),
    lambda t: Info(term_to_path(_pair(t)[0]), _pair(t)[1]),
)


def _f(codec: Codec) -> Any:
    return field(metadata={"codec": codec})


# -- events -----------------------------------------------------------------------


@dataclass(frozen=True)
class Event:
    KIND: ClassVar[str] = ""
    id: int = _f(ID)

    def to_term(self) -> Compound:
        args = tuple(f.metadata["codec"].to_term(getattr(self, f.name)) for f in dataclasses.fields(self))
        return Compound(self.KIND, args)

    def __str__(self) -> str:
        return render(self.to_term())


EVENT_TYPES: dict[str, type[Event]] = {}


def _event(kind: str):
    def register(cls):
        cls.KIND = kind
        cls = dataclass(frozen=True)(cls)
        EVENT_TYPES[kind] = cls
        return cls

    return register


@_event("begin_new_ctr")
class BeginNewCtr(Event):
    ctr: CtrId = _f(CTR)
    rep: Term = _f(TERM)


@_event("end_new_ctr")
class EndNewCtr(Event):
    result: str = _f(CTR_RESULT)


@_event("new_demon")
class NewDemon(Event):
    demon: CtrId = _f(CTR)
    dtype: str = _f(ATOM)
    wake_conds: tuple[WakeCond, ...] = _f(WAKES)
    rep: Term = _f(TERM)


@_event("push_demon")
class PushDemon(Event):
    demon: CtrId = _f(CTR)
    dtype: str = _f(ATOM)


@_event("begin_wake_demon")
class BeginWakeDemon(Event):
    demon: CtrId = _f(CTR)
    dtype: str = _f(ATOM)


@_event("end_wake_demon")
class EndWakeDemon(Event):
    result: str = _f(CTR_RESULT)


@_event("begin_prune")
class BeginPrune(Event):
    intention: PruneFact = _f(FACT)
    rep: Term = _f(TERM)


@_event("end_prune")
class EndPrune(Event):
    result: str = _f(PRUNE_RESULT)


@_event("prune")
class Prune(Event):
    ctr: CtrId = _f(CTR)
    pruned_vars: Path = _f(PATH)
    pruning: PruneFact = _f(FACT)
    rep: Term = _f(TERM)
    result: str = _f(PRUNE_RESULT)


@_event("before_prune")
class BeforePrune(Event):
    pruned_vars: Path = _f(PATH)
    domains: tuple[FiniteDomain, ...] = _f(DOMAINS)
    rep: Term = _f(TERM)


@_event("after_prune")
class AfterPrune(Event):
    pruned_vars: Path = _f(PATH)
    domains: tuple[FiniteDomain, ...] = _f(DOMAINS)
    rep: Term = _f(TERM)


@_event("fail")
class Fail(Event):
    rep: Term = _f(TERM)


@_event("push_demon_because")
class PushDemonBecause(Event):
    vars: Path = _f(PATH)
    cond: str = _f(COND)
    rep: Term = _f(TERM)


@_event("prune_because")
class PruneBecause(Event):
    ctr: CtrId = _f(CTR)
    expl: Explanation = _f(EXPL)
    rep: Term = _f(TERM)


@_event("fail_because")
class FailBecause(Event):
    ctr: CtrId = _f(CTR)
    expl: Explanation = _f(EXPL)
    rep: Term = _f(TERM)


@_event("new_ctr_because")
class NewCtrBecause(Event):
    ctr: CtrId = _f(CTR)
    expl: Explanation = _f(EXPL)
    rep: Term = _f(TERM)


@_event("begin_method")
class BeginMethod(Event):
    name: str = _f(ATOM)


@_event("end_method")
class EndMethod(Event):
    result: str = _f(PRUNE_RESULT)


@_event("info_method")
class InfoMethod(Event):
    info_name: str = _f(ATOM)
    info: Info = _f(INFO)
    rep: Term = _f(TERM)


BECAUSE_TYPES = (PruneBecause, FailBecause, NewCtrBecause)

# begin kind -> end kind
BLOCKS = {
    "begin_new_ctr": "end_new_ctr",
    "begin_wake_demon": "end_wake_demon",
    "begin_prune": "end_prune",
    "begin_method": "end_method",
}
_BLOCK_OF_END = {end: begin for begin, end in BLOCKS.items()}


def event_from_term(t: Term) -> Event:
    if not isinstance(t, Compound) or t.functor not in EVENT_TYPES:
        raise ValueError(f"not a trace event: {render(t)}")
    cls = EVENT_TYPES[t.functor]
    fields = dataclasses.fields(cls)
    if len(fields) != len(t.args):
        raise ValueError(f"{t.functor} takes {len(fields)} arguments, got {len(t.args)}")
    values = {f.name: f.metadata["codec"].from_term(a) for f, a in zip(fields, t.args)}
    return cls(**values)


def serialize(e: Event) -> str:
    return str(e)


def parse_event(text: str) -> Event:
    return event_from_term(parse_term(text.strip()))


# -- the log ----------------------------------------------------------------------


class EventLog:
    """Append-only event sequence; ids run 1..n in order."""

    def __init__(self) -> None:
        self._events: list[Event] = []

    def emit(self, cls: type[Event], **fields: Any) -> int:
        eid = len(self._events) + 1
        self._events.append(cls(id=eid, **fields))
        return eid

    @property
    def next_id(self) -> int:
        return len(self._events) + 1

    def __len__(self) -> int:
        return len(self._events)

    def __iter__(self) -> Iterator[Event]:
        return iter(list(self._events))

    def __getitem__(self, eid: int) -> Event:
        if not 1 <= eid <= len(self._events):
            raise KeyError(eid)
        return self._events[eid - 1]

    def events(self) -> list[Event]:
        return list(self._events)

    def dumps(self) -> str:
        return "".join(str(e) + "\n" for e in self._events)


def loads(text: str) -> list[Event]:
    """Parse a trace file: one event per line, blank lines ignored."""
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            out.append(parse_event(line))
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from exc
    return out


# -- selectors --------------------------------------------------------------


def _match(pattern: Term, t: Term, bindings: dict[str, Term]) -> bool:
    match pattern:
        case SrcVar(name="_"):
            return True
        case SrcVar(name=name):
            if name in bindings:
                return bindings[name] == t
            bindings[name] = t
            return True
        case Compound(functor=f, args=pargs):
            return (
                isinstance(t, Compound)
                and t.functor == f
                and len(t.args) == len(pargs)
                and all(_match(p, a, bindings) for p, a in zip(pargs, t.args))
            )
        case List(elems=pelems):
            return (
                isinstance(t, List)
                and len(t.elems) == len(pelems)
                and all(_match(p, a, bindings) for p, a in zip(pelems, t.elems))
            )
    return pattern == t


def selector_matches(selector: int | str | Term, e: Event) -> bool:
    match selector:
        case int() | Int():
            return e.id == (selector if isinstance(selector, int) else selector.value)
        case str() | Atom():
            return e.KIND == (selector if isinstance(selector, str) else selector.name)
        case Compound():
            return _match(selector, e.to_term(), {})
    raise ValueError(f"bad selector: {selector!r}")


def get_events(log: Iterable[Event], selector: int | str | Term) -> list[Event]:
    """Events matching an id, an event-type name or a pattern with ``_`` slots."""
    if isinstance(selector, (SrcVar, List)):
        raise ValueError(f"bad selector: {render(selector)}")
    return [e for e in log if selector_matches(selector, e)]


# -- structural checks ------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    id: int
    kind: str
    message: str

    def __str__(self) -> str:
        return f"event {self.id}: {self.kind}: {self.message}"


def validate_nesting(log: Iterable[Event]) -> list[Violation]:
    """Check begin/end pairing and the before_prune/prune/after_prune triple."""
    events = list(log)
    out: list[Violation] = []
    stack: list[Event] = []
    for k, e in enumerate(events):
        if e.KIND in BLOCKS:
            stack.append(e)
        elif e.KIND in _BLOCK_OF_END:
            want = _BLOCK_OF_END[e.KIND]
            if stack and stack[-1].KIND == want:
                stack.pop()
            elif any(b.KIND == want for b in stack):
                idx = max(i for i, b in enumerate(stack) if b.KIND == want)
                opened = stack.pop(idx)
                out.append(
                    Violation(e.id, "improper-nesting", f"{e.KIND} closes {opened.KIND}({opened.id}) across an open block")
                )
            else:
                out.append(Violation(e.id, "unmatched-end", f"{e.KIND} without {want}"))
        elif e.KIND == "prune":
            before = events[k - 1] if k > 0 else None
            after = events[k + 1] if k + 1 < len(events) else None
            if not isinstance(before, BeforePrune) or before.pruned_vars != e.pruned_vars:
                out.append(Violation(e.id, "prune-triple", "prune not immediately preceded by matching before_prune"))
            if not isinstance(after, AfterPrune) or after.pruned_vars != e.pruned_vars:
                out.append(Violation(e.id, "prune-triple", "prune not immediately followed by matching after_prune"))
        if e.KIND in ("before_prune", "after_prune"):
            nb = events[k + 1] if e.KIND == "before_prune" and k + 1 < len(events) else None
            pb = events[k - 1] if e.KIND == "after_prune" and k > 0 else None
            partner = nb if e.KIND == "before_prune" else pb
            if not isinstance(partner, Prune):
                out.append(Violation(e.id, "prune-triple", f"{e.KIND} not adjacent to a prune event"))
    for b in stack:
        out.append(Violation(b.id, "unclosed", f"{b.KIND} never closed"))
    return out


def validate_results(log: Iterable[Event]) -> list[Violation]:
    """Check end-event results against what happened inside each block.

    end_prune and end_method are ``fail`` iff a failing prune or a ``fail``
    event occurs inside; end_new_ctr and end_wake_demon are ``fail`` under the
    same condition. Assumes a well-nested log.
    """
    out: list[Violation] = []
    stack: list[list] = []  # [begin event, failure seen]
    for e in log:
        failed_here = isinstance(e, Fail) or (isinstance(e, Prune) and e.result == "fail")
        if failed_here:
            for frame in stack:
                frame[1] = True
        if e.KIND in BLOCKS:
            stack.append([e, False])
        elif e.KIND in _BLOCK_OF_END and stack:
            begin, failed = stack.pop()
            result = getattr(e, "result")
            if (result == "fail") != failed:
                out.append(
                    Violation(e.id, "result", f"{e.KIND} result {result} but block {'has' if failed else 'has no'} failure")
                )
    return out
