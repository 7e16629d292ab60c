"""Prolog-style terms as they appear in trace lines, paths and program files.

The grammar is small: integers, atoms, ``fdvar_N`` variable ids, source
variables (``X``, ``_``), compounds, lists, the interval cell ``[lo|hi]``,
the prefix marker ``#`` and the infix operators ``in``, ``in_set``, ``..``,
``-``, ``\\`` and ``/``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, NamedTuple, Union


@dataclass(frozen=True)
class Int:
    value: int

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom:
    name: str

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Var:
    """A domain variable known to the kernel, rendered ``fdvar_N``."""

    n: int

    def __str__(self) -> str:
        return f"fdvar_{self.n}"


@dataclass(frozen=True)
class SrcVar:
    """A source-level logic variable (program files, selector wildcards)."""

    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple[Term, ...]

    def __post_init__(self) -> None:
        if not self.args:
            raise ValueError("compound needs at least one argument")
        object.__setattr__(self, "args", tuple(self.args))

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class List:
    elems: tuple[Term, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "elems", tuple(self.elems))

    def __str__(self) -> str:
        return render(self)


Term = Union[Int, Atom, Var, SrcVar, Compound, List]

# The interval cell [lo|hi] is a compound with this functor.
CELL = "|"

# functor -> (priority, type); lower priority binds tighter.
INFIX = {
    "in": (700, "xfx"),
    "in_set": (700, "xfx"),
    "..": (600, "xfx"),
    "-": (500, "yfx"),
    "\\": (400, "yfx"),
    "/": (400, "yfx"),
}
WORD_OPS = {"in", "in_set"}
PREFIX_HASH = 100


def compound(functor: str, *args: Term) -> Compound:
    return Compound(functor, args)


def cell(lo: int, hi: int) -> Compound:
    return Compound(CELL, (Int(lo), Int(hi)))


def variables(t: Term) -> Iterator[Var]:
    """Yield the Var nodes of ``t`` in depth-first, left-to-right order."""
    match t:
        case Var():
            yield t
        case Compound(args=args):
            for a in args:
                yield from variables(a)
        case List(elems=elems):
            for e in elems:
                yield from variables(e)


# -- printing ---------------------------------------------------------------


def _priority(t: Term) -> int:
    if isinstance(t, Compound) and len(t.args) == 2 and t.functor in INFIX:
        return INFIX[t.functor][0]
    return 0


def render(t: Term) -> str:
    match t:
        case Int(value=v):
            return str(v)
        case Atom(name=name):
            return name
        case Var() | SrcVar():
            return str(t)
        case List(elems=elems):
            return "[" + ",".join(render(e) for e in elems) + "]"
        case Compound(functor=f, args=(lo, hi)) if f == CELL:
            return f"[{render(lo)}|{render(hi)}]"
        case Compound(functor="#", args=(arg,)):
            inner = render(arg)
            return f"#({inner})" if _priority(arg) > 0 else "#" + inner
        case Compound(functor=f, args=(left, right)) if f in INFIX:
            prio, kind = INFIX[f]
            lmax = prio if kind == "yfx" else prio - 1
            ls, rs = render(left), render(right)
            if _priority(left) > lmax:
                ls = f"({ls})"
            if _priority(right) > prio - 1:
                rs = f"({rs})"
            if f in WORD_OPS:
                return f"{ls} {f} {rs}"
            return f"{ls}{f}{rs}"
        case Compound(functor=f, args=args):
            return f + "(" + ",".join(render(a) for a in args) + ")"
    raise TypeError(f"not a term: {t!r}")


# -- parsing ----------------------------------------------------------------


class TermSyntaxError(ValueError):
    def __init__(self, msg: str, pos: int, text: str) -> None:
        super().__init__(f"{msg} at position {pos}: {text!r}")
        self.pos = pos


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<name>[a-z][a-zA-Z0-9_]*)
  | (?P<var>[A-Z_][a-zA-Z0-9_]*)
  | (?P<sym>\.\.|[()\[\],|#*\-\\/])
    """,
    re.VERBOSE,
)
_FDVAR = re.compile(r"fdvar_([1-9]\d*)")


class _Tok(NamedTuple):
    kind: str
    text: str
    pos: int
    glued: bool  # no whitespace before this token


def _tokenize(text: str) -> list[_Tok]:
    toks: list[_Tok] = []
    pos = 0
    glued = True
    for m in _TOKEN.finditer(text):
        if m.start() != pos:
            break
        kind = m.lastgroup
        if kind == "ws":
            glued = False
        else:
            toks.append(_Tok(kind, m.group(), pos, glued))
            glued = True
        pos = m.end()
    if pos != len(text):
        raise TermSyntaxError("unexpected character", pos, text)
    toks.append(_Tok("end", "", len(text), glued))
    return toks


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, msg: str) -> TermSyntaxError:
        return TermSyntaxError(msg, self.tok.pos, self.text)

    def expect(self, text: str) -> None:
        if self.tok.text != text or self.tok.kind == "end":
            raise self.error(f"expected {text!r}")
        self.i += 1

    def infix_op(self) -> str | None:
        t = self.tok
        if t.kind == "sym" and t.text in INFIX:
            return t.text
        if t.kind == "name" and t.text in WORD_OPS:
            return t.text
        return None

    def parse(self, max_prio: int = 1200) -> Term:
        left = self.primary()
        left_prio = 0
        while True:
            op = self.infix_op()
            if op is None:
                return left
            prio, kind = INFIX[op]
            lmax = prio if kind == "yfx" else prio - 1
            if prio > max_prio or left_prio > lmax:
                return left
            self.i += 1
            right = self.parse(prio - 1)
            left = Compound(op, (left, right))
            left_prio = prio

    def primary(self) -> Term:
        t = self.tok
        if t.kind == "int":
            self.i += 1
            return Int(int(t.text))
        if t.kind == "sym" and t.text == "-":
            nxt = self.toks[self.i + 1]
            if nxt.kind == "int" and nxt.glued:
                self.i += 2
                return Int(-int(nxt.text))
            raise self.error("unexpected '-'")
        if t.kind == "name":
            self.i += 1
            if self.tok.text == "(" and self.tok.glued and self.tok.kind == "sym":
                self.i += 1
                args = [self.parse(999)]
                while self.tok.text == ",":
                    self.i += 1
                    args.append(self.parse(999))
                self.expect(")")
                return Compound(t.text, tuple(args))
            m = _FDVAR.fullmatch(t.text)
            if m:
                return Var(int(m.group(1)))
            return Atom(t.text)
        if t.kind == "var":
            self.i += 1
            return SrcVar(t.text)
        if t.kind == "sym":
            if t.text == "(":
                self.i += 1
                inner = self.parse(1200)
                self.expect(")")
                return inner
            if t.text == "[":
                return self.list_()
            if t.text == "#":
                self.i += 1
                return Compound("#", (self.primary(),))
            if t.text == "*":
                self.i += 1
                return Atom("*")
        raise self.error("unexpected token" if t.kind != "end" else "unexpected end of input")

    def list_(self) -> Term:
        self.expect("[")
        if self.tok.text == "]" and self.tok.kind == "sym":
            self.i += 1
            return List(())
        elems = [self.parse(999)]
        if self.tok.text == "|":
            self.i += 1
            tail = self.parse(999)
            self.expect("]")
            return Compound(CELL, (elems[0], tail))
        while self.tok.text == ",":
            self.i += 1
            elems.append(self.parse(999))
        self.expect("]")
        return List(tuple(elems))


def parse_term(text: str) -> Term:
    """Parse one term; raises TermSyntaxError with the offending position."""
    p = _Parser(text)
    t = p.parse()
    if p.tok.kind != "end":
        raise p.error("trailing input")
    return t
