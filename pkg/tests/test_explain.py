import pytest

from fdtrace.domain import FiniteDomain
from fdtrace.explain import (
    ALL,
    Cond,
    Eq,
    Explanation,
    InSet,
    Neq,
    NotInSet,
    entity_satisfies,
    holds,
    parse_explanation,
)
from fdtrace.paths import parse_path
from fdtrace.terms import Int, Var, parse_term

ALLDISTINCT = parse_term("all_distinct([fdvar_1,fdvar_2,fdvar_3,fdvar_4,fdvar_5])")
ELEMENT = parse_term("element(fdvar_1,[2,4,3,8],fdvar_2)")


def doms(**kw):
    return {Var(int(k[1:])): v for k, v in kw.items()}


def test_properties_read_as_possibility():
    d = {Var(1): FiniteDomain.range(1, 3)}
    assert entity_satisfies(Var(1), Eq(2), d)
    assert not entity_satisfies(Var(1), Eq(5), d)
    assert entity_satisfies(Var(1), Neq(2), d)
    assert not entity_satisfies(Int(2), Neq(2), d)
    assert entity_satisfies(Var(1), InSet(FiniteDomain.range(0, 3)), d)
    assert not entity_satisfies(Var(1), InSet(FiniteDomain.range(2, 3)), d)
    assert entity_satisfies(Var(1), NotInSet(FiniteDomain.values([7])), d)
    assert not entity_satisfies(3, NotInSet(FiniteDomain.values([3])), d)


def test_hall_failure_explanation():
    e = parse_explanation("1-[cond(all,[1,#[2,3,4,5]],inset([[1|2]]))]")
    two = FiniteDomain.range(1, 2)
    state = doms(v1=FiniteDomain.range(1, 6), v2=two, v3=two, v4=two, v5=two)
    assert holds(e, ALLDISTINCT, state)
    state[Var(3)] = FiniteDomain.range(1, 3)
    assert not holds(e, ALLDISTINCT, state)


def test_threshold_counts():
    c = Cond(2, parse_path("[2,#[*]]"), NotInSet(FiniteDomain.values([4, 8])))
    assert holds(Explanation(1, (c,)), ELEMENT, {})
    c3 = Cond(3, c.path, c.props)
    assert not holds(Explanation(1, (c3,)), ELEMENT, {})


def test_function_path_cond():
    e = parse_explanation("1-[cond(1,[2]/length,eq(4))]")
    assert holds(e, ELEMENT, {})
    assert not holds(parse_explanation("1-[cond(1,[2]/length,eq(3))]"), ELEMENT, {})


def test_property_list_pairs_with_entities():
    rep = parse_term("domain([fdvar_1],1,6)")
    assert holds(parse_explanation("1-[cond(all,[[2,3]],[eq(1),eq(6)])]"), rep, {})
    assert not holds(parse_explanation("1-[cond(all,[[2,3]],[eq(6),eq(1)])]"), rep, {})
    with pytest.raises(ValueError):
        holds(parse_explanation("1-[cond(all,[[2,3]],[eq(1)])]"), rep, {})


def test_n_of_conds():
    e = parse_explanation(
        "2-[cond(all,[1],inset([[1|2],[4|4]])),cond(all,[2,#[1,2,4]],notinset([[1|1]]))]"
    )
    good = doms(v1=FiniteDomain.values([1, 2, 4]), v2=FiniteDomain.range(1, 6))
    assert holds(e, ELEMENT, good)
    assert not holds(e, ELEMENT, doms(v1=FiniteDomain.range(1, 4), v2=FiniteDomain.range(1, 6)))


def test_round_trip_and_validation():
    text = "1-[cond(all,[1,#[2,3,4,5]],inset([[1|2]]))]"
    e = parse_explanation(text)
    assert str(e) == text
    assert e.conds[0].m == ALL
    with pytest.raises(ValueError):
        parse_explanation("0-[cond(1,[1],eq(1))]")
    with pytest.raises(ValueError):
        parse_explanation("1-[cond(0,[1],eq(1))]")
    with pytest.raises(ValueError):
        parse_explanation("1-[cond(1,[1],equals(1))]")
