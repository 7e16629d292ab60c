"""Identifiers for constraints, variables and demons, and constraint interning."""

from __future__ import annotations

import re
from collections import defaultdict
from dataclasses import dataclass, field

from .terms import Atom, Compound, List, SrcVar, Term, Var

_CTR_ID = re.compile(r"ctr_([a-z][a-zA-Z0-9_]*)_([1-9]\d*)")


@dataclass(frozen=True, order=True)
class CtrId:
    functor: str
    n: int

    def __str__(self) -> str:
        return f"ctr_{self.functor}_{self.n}"

    def to_term(self) -> Atom:
        return Atom(str(self))

    @classmethod
    def parse(cls, text: str) -> CtrId:
        m = _CTR_ID.fullmatch(text)
        if not m:
            raise ValueError(f"not a constraint id: {text!r}")
        return cls(m.group(1), int(m.group(2)))


# With one demon per constraint the demon shares its constraint's id.
DemonId = CtrId


@dataclass
class IdRegistry:
    """Allocates fdvar numbers and per-functor constraint numbers."""

    next_var: int = 1
    ctr_counts: dict[str, int] = field(default_factory=lambda: defaultdict(int))
    names: dict[str, Var] = field(default_factory=dict)

    def new_var(self) -> Var:
        v = Var(self.next_var)
        self.next_var += 1
        return v

    def new_ctr_id(self, functor: str) -> CtrId:
        self.ctr_counts[functor] += 1
        return CtrId(functor, self.ctr_counts[functor])

    def bind(self, t: Term) -> Term:
        """Replace source variables by variable ids, allocating on first sight."""
        match t:
            case SrcVar(name="_"):
                return self.new_var()
            case SrcVar(name=name):
                if name not in self.names:
                    self.names[name] = self.new_var()
                return self.names[name]
            case Compound(functor=f, args=args):
                return Compound(f, tuple(self.bind(a) for a in args))
            case List(elems=elems):
                return List(tuple(self.bind(e) for e in elems))
        return t


def intern_constraint(source: Term, registry: IdRegistry) -> tuple[CtrId, Term]:
    """Give a constraint its id and its representation with variables replaced."""
    if not isinstance(source, Compound):
        raise ValueError(f"not a constraint: {source}")
    rep = registry.bind(source)
    return registry.new_ctr_id(source.functor), rep
