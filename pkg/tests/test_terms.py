import pytest

from fdtrace.terms import (
    Atom,
    Compound,
    Int,
    List,
    SrcVar,
    TermSyntaxError,
    Var,
    cell,
    parse_term,
    render,
    variables,
)


@pytest.mark.parametrize(
    "text",
    [
        "all_different([fdvar_1,fdvar_2,3,fdvar_3,8,fdvar_4])",
        "element(fdvar_1,[2,4,3,8],fdvar_2)",
        "fdvar_1 in 1..4",
        "[2,#[*]]\\[2,#1]",
        "[1]/length",
        "1-[cond(all,[1,#[2,3,4,5]],inset([[1|2]]))]",
        "[[-268435456|0],[7|268435455]]",
        "labeling([leftmost],[fdvar_1])",
    ],
)
def test_round_trip(text):
    assert render(parse_term(text)) == text


def test_structure():
    t = parse_term("element(X,[2,4],fdvar_7)")
    assert t == Compound("element", (SrcVar("X"), List((Int(2), Int(4))), Var(7)))
    assert parse_term("[1|2]") == cell(1, 2)
    assert parse_term("-3") == Int(-3)
    assert parse_term("[]") == List(())


def test_operator_priorities():
    t = parse_term("[2,#[*]]\\[2,#1]/max")
    assert t.functor == "/"
    assert t.args[0].functor == "\\"
    assert render(Compound("-", (Compound("-", (Int(1), Int(2))), Int(3)))) == "1-2-3"
    assert render(Compound("-", (Int(1), Compound("-", (Int(2), Int(3)))))) == "1-(2-3)"


def test_subtraction_versus_negative_literal():
    assert parse_term("1-2") == Compound("-", (Int(1), Int(2)))
    assert parse_term("[-2]") == List((Int(-2),))


def test_variables_in_order():
    t = parse_term("f(fdvar_2,[fdvar_1,3,fdvar_2])")
    assert list(variables(t)) == [Var(2), Var(1), Var(2)]


@pytest.mark.parametrize("bad", ["f(", "[1,2", "f(a) g", "1..", "@"])
def test_syntax_errors(bad):
    with pytest.raises(TermSyntaxError):
        parse_term(bad)


def test_error_position():
    with pytest.raises(TermSyntaxError) as info:
        parse_term("f(a,@)")
    assert info.value.pos == 4


def test_atoms():
    assert parse_term("leftmost") == Atom("leftmost")
    assert render(Atom("*")) == "*"
