"""Constraint programs: one goal per line, each ending in ``.``.

    % comment
    domain([X,Y],1,3).
    all_different([X,Y]).
    labeling([leftmost],[X,Y]).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constraints import check_shape
from .kernel import Kernel
from .search import labeling
from .terms import Atom, Compound, List, SrcVar, Term, TermSyntaxError, parse_term, render


class ProgramError(ValueError):
    def __init__(self, lineno: int, msg: str) -> None:
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _check_labeling(goal: Compound) -> None:
    opts, vars_ = goal.args
    if opts != List((Atom("leftmost"),)):
        raise ValueError(f"only [leftmost] labeling is supported, got {render(opts)}")
    if not isinstance(vars_, List) or not all(isinstance(v, SrcVar) for v in vars_.elems):
        raise ValueError("labeling needs a list of variables")


def parse_program(text: str) -> list[Term]:
    goals = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("%", 1)[0].strip()
        if not line:
            continue
        if not line.endswith("."):
            raise ProgramError(lineno, "goal must end with '.'")
        try:
            goal = parse_term(line[:-1])
            if isinstance(goal, Compound) and goal.functor == "labeling" and len(goal.args) == 2:
                _check_labeling(goal)
            else:
                check_shape(goal)
        except (TermSyntaxError, ValueError) as exc:
            raise ProgramError(lineno, str(exc)) from exc
        goals.append(goal)
    return goals


@dataclass
class Outcome:
    failed: bool = False
    solutions: list[dict[str, int]] = field(default_factory=list)
    labeled: bool = False
    residual: dict[str, str] = field(default_factory=dict)

    def lines(self) -> list[str]:
        if self.failed:
            return ["fail"]
        if self.labeled:
            return [", ".join(f"{n} = {v}" for n, v in s.items()) for s in self.solutions]
        if self.residual:
            return [", ".join(f"{n} {d}" for n, d in self.residual.items())]
        return ["true"]


def run_program(goals: list[Term], kernel: Kernel, max_solutions: int | None = 1) -> Outcome:
    out = Outcome()
    for goal in goals:
        if isinstance(goal, Compound) and goal.functor == "labeling":
            vars_ = [kernel.registry.bind(v) for v in goal.args[1].elems]
            names = {v: n for n, v in kernel.registry.names.items()}
            found = labeling(kernel, vars_, max_solutions)
            out.labeled = True
            if not found:
                out.failed = True
                return out
            for sol in found:
                out.solutions.append({names.get(v, str(v)): sol[v] for v in vars_})
        elif kernel.post(goal) == "fail":
            out.failed = True
            return out
    for name, v in kernel.registry.names.items():
        d = kernel.dom(v)
        out.residual[name] = f"= {d.value()}" if d.is_ground() else f"in_set {d}"
    return out
