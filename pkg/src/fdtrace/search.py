"""Depth-first labeling: leftmost variable, smallest value first."""

from __future__ import annotations

from typing import Sequence

from .domain import FiniteDomain
from .events import RemoveValues
from .kernel import ConstraintCell, Inconsistency, Kernel, PropEvent
from .terms import Atom, List, Var, compound


def labeling(kernel: Kernel, vars_: Sequence[Var], limit: int | None = 1) -> list[dict[Var, int]]:
    """Enumerate up to ``limit`` solutions (all when None).

    Every choice is traced as a prune block of a pseudo-constraint
    ``labeling([leftmost],Vars)`` that narrows the chosen variable to its
    value. The kernel is restored to its entry state on return.
    """
    if kernel.failed:
        return []
    vars_ = list(vars_)
    ctr_id = kernel.registry.new_ctr_id("labeling")
    rep = compound("labeling", List((Atom("leftmost"),)), List(tuple(vars_)))
    cell = ConstraintCell(ctr_id, rep, list(dict.fromkeys(vars_)))
    top = kernel.snapshot()
    solutions: list[dict[Var, int]] = []

    def search() -> bool:
        """Returns True once enough solutions are found."""
        k = next((i for i, v in enumerate(vars_) if not kernel.dom(v).is_ground()), None)
        if k is None:
            solutions.append({v: kernel.dom(v).value() for v in vars_})
            return limit is not None and len(solutions) >= limit
        var = vars_[k]
        dom = kernel.dom(var)
        for value in dom:
            snap = kernel.snapshot()
            keep = FiniteDomain.values([value])
            try:
                kernel.enqueue_event(cell, RemoveValues(dom - keep), [PropEvent(var, keep, ctr_id, (2, k + 1))])
                kernel.run_to_fixpoint()
            except Inconsistency:
                kernel.restore(snap)
                continue
            done = search()
            kernel.restore(snap)
            if done:
                return True
        return False

    try:
        search()
    finally:
        kernel.restore(top)
    return solutions
