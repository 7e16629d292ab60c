import pytest

from fdtrace.domain import (
    INF,
    SUP,
    FiniteDomain,
    domain_to_term,
    intersect,
    remove_set,
    term_to_domain,
)
from fdtrace.terms import parse_term, render


def test_render_interval_list():
    assert str(FiniteDomain.values([1, 2, 4, 5, 6])) == "[[1|2],[4|6]]"
    assert str(FiniteDomain()) == "[]"


def test_normalization_merges_adjacent_and_overlapping():
    d = FiniteDomain.of([(4, 6), (1, 2), (3, 3), (5, 9)])
    assert d.intervals == ((1, 9),)


def test_constructor_rejects_unnormalized():
    with pytest.raises(ValueError):
        FiniteDomain(((1, 2), (3, 4)))
    with pytest.raises(ValueError):
        FiniteDomain(((4, 6), (1, 2)))


def test_full_domain_bounds():
    d = FiniteDomain.full()
    assert (d.min, d.max) == (INF, SUP)
    assert len(d) == 2**29


def test_min_max_of_empty_raise():
    with pytest.raises(ValueError):
        FiniteDomain().min
    with pytest.raises(ValueError):
        FiniteDomain().max


def test_ground():
    assert FiniteDomain.values([3]).is_ground()
    assert FiniteDomain.values([3]).value() == 3
    assert not FiniteDomain.range(1, 2).is_ground()
    with pytest.raises(ValueError):
        FiniteDomain.range(1, 2).value()


def test_set_algebra_small():
    a = FiniteDomain.range(1, 6)
    b = FiniteDomain.values([3])
    assert str(a - b) == "[[1|2],[4|6]]"
    assert str((a - b) | b) == "[[1|6]]"
    assert str(a & FiniteDomain.range(5, 9)) == "[[5|6]]"
    assert b.issubset(a) and not a.issubset(b)
    assert (a - b).isdisjoint(b)


def test_remove_and_intersect_report_change():
    d = FiniteDomain.range(1, 4)
    assert remove_set(d, FiniteDomain.values([9])) == (d, False)
    assert remove_set(d, FiniteDomain.values([4])) == (FiniteDomain.range(1, 3), True)
    assert intersect(d, FiniteDomain.range(0, 10)) == (d, False)
    assert intersect(d, FiniteDomain.range(2, 2))[1]


def test_term_round_trip():
    t = parse_term("[[1|2],[4|6]]")
    d = term_to_domain(t)
    assert d == FiniteDomain.values([1, 2, 4, 5, 6])
    assert render(domain_to_term(d)) == "[[1|2],[4|6]]"


def test_term_to_domain_rejects_unnormalized():
    with pytest.raises(ValueError):
        term_to_domain(parse_term("[[1|2],[3|4]]"))
    with pytest.raises(ValueError):
        term_to_domain(parse_term("[[3|1]]"))
