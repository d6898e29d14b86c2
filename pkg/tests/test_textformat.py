import os

import pytest
from hypothesis import given, strategies as st

from conftest import FIXTURES, fixture_path

from arcover.algebra import DanglingName
from arcover.field import Field
from arcover.textformat import (
    ParseError,
    algebra_spec_from,
    dump,
    dump_tq,
    format_combination,
    load,
    parse,
    parse_combination,
)
from arcover.translation_quiver import validate_tq

ALL = sorted(f for f in os.listdir(FIXTURES) if f.endswith((".alg", ".tq")))


@pytest.mark.parametrize("name", ALL)
def test_fixture_parses_and_validates(name):
    ws = load(fixture_path(name))
    assert ws.order
    for spec in ws.algebras.values():
        assert spec.build().validate().admissible
    for G in ws.tqs.values():
        assert validate_tq(G).valid


@pytest.mark.parametrize("name", ALL)
def test_dump_parse_round_trip(name):
    ws = load(fixture_path(name))
    text = dump(ws)
    again = parse(text)
    assert dump(again) == text
    assert again.order == ws.order
    for n, G in ws.tqs.items():
        assert dump_tq(again.tqs[n]) == dump_tq(G)


@pytest.mark.parametrize("name", ["example_a.alg", "riedtmann.alg", "example_c.alg"])
def test_algebra_spec_from_rebuilds(name):
    A = load(fixture_path(name)).first("algebra").build()
    B = algebra_spec_from(A).build()
    assert B.dim == A.dim
    assert [str(p) for p in B.basis] == [str(p) for p in A.basis]


coefs = st.fractions(min_value=-5, max_value=5, max_denominator=4).filter(lambda c: c != 0)
term_words = st.lists(st.sampled_from(["a", "b", "rho", "d1"]), min_size=1, max_size=3).map(tuple)


@given(st.lists(st.tuples(coefs, term_words), min_size=1, max_size=4, unique_by=lambda t: t[1]))
def test_combination_round_trip(terms):
    assert parse_combination(format_combination(terms)) == [(c, w) for c, w in terms]


@pytest.mark.parametrize(
    "text, line",
    [
        ("blah x\n", 1),
        ("algebra A\nfield GF(4)\n", 2),
        ("tq T\ntqvertex x\ntau x = y\n", 1),
        ("# comment\n\nvertex 1\n", 3),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse(text, "t.txt")
    assert info.value.line == line
    assert "t.txt" in str(info.value)


def test_dangling_arrow_detected_on_build():
    ws = parse("algebra A\nvertex 1\narrow a: 1 -> 2\n")
    with pytest.raises(DanglingName):
        ws.first("algebra").build()


def test_field_override():
    spec = load(fixture_path("riedtmann.alg")).first("algebra")
    assert spec.field == Field(2)
    assert spec.build(Field(0)).F == Field(0)


def test_resolve_by_path():
    ws = load(fixture_path("riedtmann_window.alg"))
    assert ws.resolve("algebra", "riedtmann.alg").name == "riedtmann"
    with pytest.raises(ParseError):
        ws.resolve("algebra", "missing.alg")
