import pytest

from fdtrace.domain import FiniteDomain
from fdtrace.paths import (
    Path,
    PathError,
    apply_function,
    every,
    function_values,
    parse_path,
    path_for,
    pos,
    posset,
    render_path,
    resolve,
)
from fdtrace.terms import Int, Var, parse_term

ELEMENT = parse_term("element(fdvar_1,[2,4,3,8],fdvar_2)")
ALLDIFF = parse_term("all_different([fdvar_1,fdvar_2,3,fdvar_3,8,fdvar_4])")


def addressed(path_text, ctx):
    return [t for _, t in resolve(parse_path(path_text), ctx)]


def test_top_level_positions():
    assert addressed("[[1,3]]", ELEMENT) == [Var(1), Var(2)]
    assert addressed("[2]", ELEMENT) == [parse_term("[2,4,3,8]")]


def test_inside_a_list():
    assert addressed("[2,#[1,2]]", ELEMENT) == [Int(2), Int(4)]
    assert addressed("[1,#3]", ALLDIFF) == [Int(3)]


def test_every_and_subtraction():
    assert addressed("[2,#[*]]", ELEMENT) == [Int(2), Int(4), Int(3), Int(8)]
    assert addressed("[2,#[*]]\\[2,#1]", ELEMENT) == [Int(4), Int(3), Int(8)]


def test_positions_are_reported():
    assert [p for p, _ in resolve(parse_path("[1,#[2,4]]"), ALLDIFF)] == [(1, 2), (1, 4)]


def test_hash_must_match_the_container():
    with pytest.raises(PathError):
        resolve(parse_path("[2,1]"), ELEMENT)
    with pytest.raises(PathError):
        resolve(parse_path("[#1]"), ELEMENT)
    with pytest.raises(PathError):
        resolve(parse_path("[5]"), ELEMENT)


def test_functions():
    doms = {Var(1): FiniteDomain.values([1, 2, 4, 5, 6]), Var(2): FiniteDomain.range(1, 6)}
    assert apply_function(parse_path("[2]/length"), ELEMENT, doms) == 4
    assert apply_function(parse_path("[1]/min"), ELEMENT, doms) == 1
    assert apply_function(parse_path("[[1,3]]/max"), ELEMENT, doms) == [6, 6]
    assert function_values(parse_path("[1]/min"), ELEMENT, doms) == [1]
    with pytest.raises(PathError):
        apply_function(parse_path("[1]/length"), ELEMENT, doms)


def test_function_needs_known_name():
    with pytest.raises(PathError):
        Path((pos(1),), func="sum")


@pytest.mark.parametrize("text", ["[1]", "[[1,3]]", "[2,#[*]]", "[2,#[*]]\\[2,#1]", "[[1,3]]/max", "[2,[1,2]]"])
def test_render_round_trip(text):
    assert render_path(parse_path(text)) == text


def test_structure_of_parsed_path():
    p = parse_path("[2,#[*]]\\[2,#1]")
    assert p.steps == (pos(2), every(hashed=True))
    assert p.minus == Path((pos(2), pos(1, hashed=True)))


def test_path_for_builds_minimal_paths():
    assert str(path_for([(1, 3)], ALLDIFF)) == "[1,#3]"
    assert str(path_for([(1, 1), (1, 2), (1, 4), (1, 6)], ALLDIFF)) == "[1,#[1,2,4,6]]"
    assert str(path_for([(1,), (3,)], ELEMENT)) == "[[1,3]]"
    assert path_for([(1, 2), (1, 4)], ALLDIFF) == Path((pos(1), posset([2, 4], hashed=True)))
    with pytest.raises(PathError):
        path_for([(1,), (2, 1)], ELEMENT)


def test_malformed_paths():
    for bad in ["[]", "[0]", "[[3,1]]", "[1]/length/max", "foo"]:
        with pytest.raises(ValueError):
            parse_path(bad)
