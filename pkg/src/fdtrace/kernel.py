"""The propagation kernel: variables, constraints, demons, the two queues and
the services that move work between them, emitting trace events as it goes.
"""

from __future__ import annotations

import contextlib
from collections import deque
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Callable, Iterator

from .domain import FiniteDomain
from .events import (
    AfterPrune,
    BeforePrune,
    BeginMethod,
    BeginNewCtr,
    BeginPrune,
    BeginWakeDemon,
    EndMethod,
    EndNewCtr,
    EndPrune,
    EndWakeDemon,
    EventLog,
    Fail,
    FailBecause,
    InfoMethod,
    Info,
    NewCtrBecause,
    NewDemon,
    Prune,
    PruneBecause,
    PruneFact,
    PushDemon,
    PushDemonBecause,
    WakeCond,
    removal_fact,
)
from .explain import Explanation
from .model import CtrId, DemonId, IdRegistry
from .paths import Path, Position, path_for, resolve
from .terms import Term, Var, variables

if TYPE_CHECKING:
    from .constraints import Constraint


class Inconsistency(Exception):
    """Raised inside the kernel when a domain empties or a constraint fails."""


@dataclass
class VariableCell:
    id: Var
    domain: FiniteDomain
    clist: list[CtrId] = field(default_factory=list)


@dataclass(eq=False)
class Demon:
    id: DemonId
    dtype: str
    wake_conds: tuple[WakeCond, ...]
    filter: Callable[[Kernel, ConstraintCell], bool]
    # An idempotent demon is not woken by its own prunings.
    idempotent: bool = True


@dataclass(eq=False)
class ConstraintCell:
    id: CtrId
    rep: Term
    vlist: list[Var]
    impl: Constraint | None = None
    dlist: list[Demon] = field(default_factory=list)
    status: str = "active"


@dataclass(frozen=True)
class PropEvent:
    """``var in_set set``, requested by constraint ``source`` at ``position``."""

    var: Var
    set: FiniteDomain
    source: CtrId
    position: Position


@dataclass(frozen=True)
class Notification:
    """A narrowing that has been applied and awaits dispatch to the CList."""

    var: Var
    before: FiniteDomain
    after: FiniteDomain
    source: CtrId


def wake_fires(cond: str, before: FiniteDomain, after: FiniteDomain) -> bool:
    if not after or before == after:
        return False
    match cond:
        case "dom":
            return True
        case "min":
            return before.min != after.min
        case "max":
            return before.max != after.max
        case "minmax":
            return before.min != after.min or before.max != after.max
        case "val":
            return after.is_ground() and not before.is_ground()
    raise ValueError(f"unknown wake condition {cond!r}")


@dataclass
class Snapshot:
    domains: dict[Var, FiniteDomain]
    clists: dict[Var, list[CtrId]]
    constraints: dict[CtrId, ConstraintCell]
    statuses: dict[CtrId, str]
    ready_queue: list[Demon]
    propagation_queue: list[Notification]
    failed: bool


class Kernel:
    def __init__(self, record_states: bool = False) -> None:
        self.log = EventLog()
        self.registry = IdRegistry()
        self.variables: dict[Var, VariableCell] = {}
        # ConstraintList holds connected constraints; all_cells every one ever posted.
        self.constraints: dict[CtrId, ConstraintCell] = {}
        self.all_cells: dict[CtrId, ConstraintCell] = {}
        self.ready_queue: deque[Demon] = deque()
        self.propagation_queue: deque[Notification] = deque()
        self.failed = False
        # event id of each *_because -> domains when it was emitted
        self.record_states = record_states
        self.because_states: dict[int, dict[Var, FiniteDomain]] = {}

    # -- variables ----------------------------------------------------------

    def new_var(self) -> Var:
        v = self.registry.new_var()
        self.cell(v)
        return v

    def cell(self, v: Var) -> VariableCell:
        if v not in self.variables:
            self.variables[v] = VariableCell(v, FiniteDomain.full())
        return self.variables[v]

    def dom(self, v: Var) -> FiniteDomain:
        return self.cell(v).domain

    def domains(self) -> dict[Var, FiniteDomain]:
        return {v: c.domain for v, c in self.variables.items()}

    # -- posting ------------------------------------------------------------

    def post(self, source: Term) -> str:
        """Intern and connect a constraint given as a term; returns its result."""
        from .constraints import build

        return self.connect_ctr(build(self, source))

    def connect_ctr(self, constraint: Constraint) -> str:
        try:
            return self._connect(constraint)
        except Inconsistency:
            return "fail"

    def _connect(self, constraint: Constraint) -> str:
        cell = constraint.cell
        if cell.id in self.constraints:
            raise ValueError(f"{cell.id} already connected")
        self.constraints[cell.id] = cell
        self.all_cells[cell.id] = cell
        for v in cell.vlist:
            self.cell(v).clist.append(cell.id)
        self.log.emit(BeginNewCtr, ctr=cell.id, rep=cell.rep)
        try:
            entailed = constraint.post(self, cell)
            if entailed:
                self.disconnect_ctr(cell.id)
            else:
                cell.dlist = constraint.demons(self, cell)
                for d in cell.dlist:
                    self.log.emit(NewDemon, demon=d.id, dtype=d.dtype, wake_conds=d.wake_conds, rep=cell.rep)
                for d in cell.dlist:
                    if cell.status == "active":
                        self._wake(d, cell)
            self.run_to_fixpoint()
        except Inconsistency:
            self._fail_state()
            self.log.emit(EndNewCtr, result="fail")
            raise
        result = "entail" if cell.status == "entailed" else "delay"
        self.log.emit(EndNewCtr, result=result)
        return result

    def disconnect_ctr(self, c: CtrId) -> None:
        cell = self.constraints.pop(c, None)
        if cell is None:
            return
        cell.status = "entailed"
        for v in cell.vlist:
            clist = self.cell(v).clist
            if c in clist:
                clist.remove(c)
        for d in cell.dlist:
            if d in self.ready_queue:
                self.ready_queue.remove(d)

    def new_ctr_because(self, cell: ConstraintCell, expl: Explanation) -> None:
        eid = self.log.emit(NewCtrBecause, ctr=cell.id, expl=expl, rep=cell.rep)
        self._record(eid)

    # -- demon scheduling ---------------------------------------------------

    def enqueue_ctr(self, c: CtrId, note: Notification) -> None:
        cell = self.constraints.get(c)
        if cell is None:
            return
        for demon in cell.dlist:
            if demon.idempotent and note.source == c:
                continue
            if demon in self.ready_queue:
                continue
            for wc in demon.wake_conds:
                hits = [p for p, t in resolve(wc.path, cell.rep) if t == note.var]
                if hits and wake_fires(wc.cond, note.before, note.after):
                    self.log.emit(PushDemonBecause, vars=path_for(hits, cell.rep), cond=wc.cond, rep=cell.rep)
                    self.log.emit(PushDemon, demon=demon.id, dtype=demon.dtype)
                    self.ready_queue.append(demon)
                    break

    def dispatch_ctr(self) -> None:
        demon = self.ready_queue.popleft()
        self._wake(demon, self.constraints[demon.id])

    def _wake(self, demon: Demon, cell: ConstraintCell) -> None:
        self.log.emit(BeginWakeDemon, demon=demon.id, dtype=demon.dtype)
        try:
            entailed = demon.filter(self, cell)
        except Inconsistency:
            self.log.emit(EndWakeDemon, result="fail")
            raise
        if entailed:
            self.disconnect_ctr(cell.id)
        self.log.emit(EndWakeDemon, result="entail" if entailed else "delay")

    # -- propagation events -------------------------------------------------

    def enqueue_event(
        self,
        cell: ConstraintCell,
        intention: PruneFact,
        events: list[PropEvent],
        explanation: Explanation | None = None,
    ) -> bool:
        """Apply a group of narrowings as one traced prune block.

        Narrowings that change nothing are dropped; if none is left no events
        are emitted and False is returned. Otherwise returns True, or raises
        Inconsistency after closing the block when some domain empties.
        """
        changes: dict[Var, tuple[Position, FiniteDomain, FiniteDomain]] = {}
        for e in events:
            if e.var in changes:
                position, before, current = changes[e.var]
            else:
                position, before, current = e.position, self.dom(e.var), self.dom(e.var)
            changes[e.var] = (position, before, current & e.set)
        changes = {v: c for v, c in changes.items() if c[1] != c[2]}
        if not changes:
            return False
        order = sorted(changes.items(), key=lambda kv: kv[1][0])
        path = path_for([position for _, (position, _, _) in order], cell.rep)
        removed = FiniteDomain()
        for _, (_, before, after) in order:
            removed = removed | (before - after)
        failed = any(not after for _, (_, _, after) in order)
        result = "fail" if failed else "succeed"

        self.log.emit(BeginPrune, intention=intention, rep=cell.rep)
        if explanation is not None:
            eid = self.log.emit(PruneBecause, ctr=cell.id, expl=explanation, rep=cell.rep)
            self._record(eid)
        self.log.emit(BeforePrune, pruned_vars=path, domains=tuple(b for _, (_, b, _) in order), rep=cell.rep)
        for v, (_, _, after) in order:
            self.cell(v).domain = after
        self.log.emit(Prune, ctr=cell.id, pruned_vars=path, pruning=removal_fact(removed), rep=cell.rep, result=result)
        self.log.emit(AfterPrune, pruned_vars=path, domains=tuple(a for _, (_, _, a) in order), rep=cell.rep)
        if not failed:
            for v, (_, before, after) in order:
                self.propagation_queue.append(Notification(v, before, after, cell.id))
        self.log.emit(EndPrune, result=result)
        if failed:
            raise Inconsistency(f"domain wiped out by {cell.id}")
        return True

    def dispatch_event(self) -> None:
        note = self.propagation_queue.popleft()
        for c in list(self.cell(note.var).clist):
            self.enqueue_ctr(c, note)

    def run_to_fixpoint(self) -> None:
        try:
            while self.propagation_queue or self.ready_queue:
                if self.propagation_queue:
                    self.dispatch_event()
                else:
                    self.dispatch_ctr()
        except Inconsistency:
            self._fail_state()
            raise

    def _fail_state(self) -> None:
        self.failed = True
        self.ready_queue.clear()
        self.propagation_queue.clear()

    # -- services for filtering methods -------------------------------------

    @contextlib.contextmanager
    def method(self, name: str) -> Iterator[None]:
        self.log.emit(BeginMethod, name=name)
        try:
            yield
        except Inconsistency:
            self.log.emit(EndMethod, result="fail")
            raise
        self.log.emit(EndMethod, result="succeed")

    def info(self, cell: ConstraintCell, name: str, path: Path, entity: Term) -> None:
        self.log.emit(InfoMethod, info_name=name, info=Info(path, entity), rep=cell.rep)

    def fail(self, cell: ConstraintCell, explanation: Explanation | None = None) -> None:
        """Report a violated necessary condition; always raises Inconsistency."""
        if explanation is not None:
            eid = self.log.emit(FailBecause, ctr=cell.id, expl=explanation, rep=cell.rep)
            self._record(eid)
        self.log.emit(Fail, rep=cell.rep)
        raise Inconsistency(f"{cell.id} failed")

    def _record(self, eid: int) -> None:
        if self.record_states:
            self.because_states[eid] = self.domains()

    # -- backtracking -------------------------------------------------------

    def snapshot(self) -> Snapshot:
        return Snapshot(
            domains=self.domains(),
            clists={v: list(c.clist) for v, c in self.variables.items()},
            constraints=dict(self.constraints),
            statuses={cid: c.status for cid, c in self.all_cells.items()},
            ready_queue=list(self.ready_queue),
            propagation_queue=list(self.propagation_queue),
            failed=self.failed,
        )

    def restore(self, snap: Snapshot) -> None:
        for v in list(self.variables):
            if v not in snap.domains:
                del self.variables[v]
        for v, d in snap.domains.items():
            cell = self.cell(v)
            cell.domain = d
            cell.clist = list(snap.clists[v])
        self.constraints = dict(snap.constraints)
        for cid, status in snap.statuses.items():
            self.all_cells[cid].status = status
        self.ready_queue = deque(snap.ready_queue)
        self.propagation_queue = deque(snap.propagation_queue)
        self.failed = snap.failed


def vlist_of(rep: Term) -> list[Var]:
    return list(dict.fromkeys(variables(rep)))
