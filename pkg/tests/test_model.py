import pytest

from fdtrace.model import CtrId, IdRegistry, intern_constraint
from fdtrace.terms import Var, parse_term, render


def test_ctr_id_text():
    c = CtrId("all_different", 1)
    assert str(c) == "ctr_all_different_1"
    assert CtrId.parse("ctr_all_different_1") == c
    with pytest.raises(ValueError):
        CtrId.parse("ctr_x_0")
    with pytest.raises(ValueError):
        CtrId.parse("fdvar_1")


def test_interning_numbers_variables_on_first_sight():
    reg = IdRegistry()
    cid, rep = intern_constraint(parse_term("domain([X,Y,V1,V2],1,6)"), reg)
    assert str(cid) == "ctr_domain_1"
    cid, rep = intern_constraint(parse_term("all_different([X,Y,3,V1,8,V2])"), reg)
    assert render(rep) == "all_different([fdvar_1,fdvar_2,3,fdvar_3,8,fdvar_4])"
    cid, rep = intern_constraint(parse_term("element(X,[2,4,3,8],Y)"), reg)
    assert render(rep) == "element(fdvar_1,[2,4,3,8],fdvar_2)"
    assert str(cid) == "ctr_element_1"
    assert reg.names["V2"] == Var(4)


def test_anonymous_variables_are_fresh():
    reg = IdRegistry()
    _, rep = intern_constraint(parse_term("all_different([_,_])"), reg)
    assert render(rep) == "all_different([fdvar_1,fdvar_2])"


def test_counters_are_per_functor():
    reg = IdRegistry()
    ids = [str(intern_constraint(parse_term(t), reg)[0]) for t in ["a(X)", "b(X)", "a(Y)"]]
    assert ids == ["ctr_a_1", "ctr_b_1", "ctr_a_2"]
