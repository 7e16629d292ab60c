"""Replay a trace against a fresh model of the variable store.

Domains start full and follow each after_prune. Labeling backtracks without
trace events, so before a labeling prune the replay jumps back to the state
it saw when that variable was last labeled (if it is still on the current
branch). Checks made along the way:

- before_prune domains equal the replayed domains;
- after_prune domains equal before_prune domains minus the pruning;
- every ``*_because`` explanation holds at its replayed state;
- a ``val`` push_demon_because names only ground variables.
"""

from __future__ import annotations

from typing import Iterable

from .domain import FiniteDomain
from .events import (
    AfterPrune,
    BeforePrune,
    BeginNewCtr,
    Event,
    Prune,
    PushDemonBecause,
    Violation,
    fact_set,
    validate_nesting,
    validate_results,
)
from .explain import holds
from .model import CtrId
from .paths import PathError, resolve
from .terms import Term, Var

Store = dict[Var, FiniteDomain]


class Replay:
    def __init__(self) -> None:
        self.store: Store = {}
        self.violations: list[Violation] = []
        # event id of each *_because -> replayed domains at that point
        self.states: dict[int, Store] = {}
        self.depth = 0
        self.labeling: CtrId | None = None
        self.bottom: Store = {}
        self.choices: list[tuple[tuple, Store]] = []
        # the open before_prune/prune triple
        self.pending: tuple[list[Term], tuple] | None = None
        self.fact: FiniteDomain | None = None

    def dom(self, v: Var) -> FiniteDomain:
        return self.store.get(v, FiniteDomain.full())

    def _entities(self, e: Event, path, rep: Term) -> list[Term] | None:
        try:
            return [t for _, t in resolve(path, rep)]
        except PathError as exc:
            self.violations.append(Violation(e.id, "path", str(exc)))
            return None

    def _flag(self, e: Event, kind: str, message: str) -> None:
        self.violations.append(Violation(e.id, kind, message))

    def _labeling_step(self, prune: Prune) -> None:
        if prune.ctr != self.labeling:
            self.labeling = prune.ctr
            self.bottom = dict(self.store)
            self.choices = []
        key = (prune.ctr, prune.pruned_vars)
        for k, (seen, saved) in enumerate(self.choices):
            if seen == key:
                self.store = dict(saved)
                del self.choices[k:]
                break
        self.choices.append((key, dict(self.store)))

    def feed(self, e: Event, lookahead: Event | None) -> None:
        match e:
            case BeginNewCtr():
                if self.depth == 0 and self.labeling is not None:
                    self.store = self.bottom
                    self.labeling = None
                self.depth += 1
            case _ if e.KIND == "end_new_ctr":
                self.depth -= 1
            case BeforePrune():
                if isinstance(lookahead, Prune) and lookahead.ctr.functor == "labeling":
                    self._labeling_step(lookahead)
                ents = self._entities(e, e.pruned_vars, e.rep)
                if ents is None:
                    return
                if len(ents) != len(e.domains):
                    self._flag(e, "replay", "path and domain list differ in length")
                    return
                for t, d in zip(ents, e.domains):
                    if isinstance(t, Var) and self.dom(t) != d:
                        self._flag(e, "replay", f"{t} recorded as {d}, replayed as {self.dom(t)}")
                self.pending = (ents, e.domains)
            case Prune():
                self.fact = fact_set(e.pruning)
            case AfterPrune():
                if self.pending is None:
                    return
                (ents, before), fact = self.pending, self.fact
                self.pending = self.fact = None
                if len(ents) != len(e.domains):
                    return
                for t, b, a in zip(ents, before, e.domains):
                    if fact is not None and a != b - fact:
                        self._flag(e, "replay", f"{t}: {a} is not {b} minus the pruning")
                    if isinstance(t, Var):
                        self.store[t] = a
            case PushDemonBecause():
                ents = self._entities(e, e.vars, e.rep)
                if ents is not None and e.cond == "val":
                    for t in ents:
                        if isinstance(t, Var) and not self.dom(t).is_ground():
                            self._flag(e, "soundness", f"{t} woke a val demon but is not ground")
            case _ if hasattr(e, "expl"):
                self.states[e.id] = dict(self.store)
                try:
                    ok = holds(e.expl, e.rep, self.dom)
                except (PathError, ValueError, TypeError) as exc:
                    self._flag(e, "soundness", f"explanation cannot be evaluated: {exc}")
                    return
                if not ok:
                    self._flag(e, "soundness", f"explanation {e.expl} does not hold")


def replay(log: Iterable[Event]) -> Replay:
    events = list(log)
    r = Replay()
    for k, e in enumerate(events):
        r.feed(e, events[k + 1] if k + 1 < len(events) else None)
    return r


def check(log: Iterable[Event]) -> list[Violation]:
    """All structural and replay violations, in event order."""
    events = list(log)
    out = validate_nesting(events)
    if not out:
        out += validate_results(events)
    out += replay(events).violations
    return sorted(out, key=lambda v: v.id)
