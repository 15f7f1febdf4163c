from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncrewrite.freealg import (Alphabet, AlphabetMismatch, NCPoly, ParseError, UnknownGenerator, apply_hom,
                               compose_assignments, parse, solve_in_span)

A = Alphabet(("x", "y", "z"))
words = st.lists(st.sampled_from(A.names), max_size=4).map(tuple)
coefs = st.fractions(min_value=-4, max_value=4, max_denominator=5)
ncpolys = st.dictionaries(words, coefs, max_size=4).map(lambda d: NCPoly(d, A))


@given(ncpolys, ncpolys, ncpolys)
def test_free_algebra_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c
    assert a + NCPoly.zero(A) == a
    assert a * NCPoly.one(A) == a == NCPoly.one(A) * a


@given(ncpolys)
def test_print_parse_roundtrip(p):
    assert parse(str(p), A) == p


def test_generators_do_not_commute():
    x, y = NCPoly.gen(A, "x"), NCPoly.gen(A, "y")
    assert x * y != y * x


@given(ncpolys, ncpolys)
def test_degree_is_additive(a, b):
    if a and b:
        assert (a * b).degree == a.degree + b.degree


@given(ncpolys, ncpolys, ncpolys, ncpolys)
def test_substitution_is_multiplicative(a, b, fx, fy):
    img = {"x": fx, "y": fy, "z": NCPoly.gen(A, "z")}
    assert apply_hom(img, a * b) == apply_hom(img, a) * apply_hom(img, b)


def test_compose_assignments_matches_sequential_substitution():
    g = {"x": parse("y*z", A), "y": parse("x + 1", A), "z": parse("z", A)}
    h = {"x": parse("x^2", A), "y": parse("y", A), "z": parse("x - z", A)}
    p = parse("x*y - 2*z*x", A)
    gh = compose_assignments(g, h, A)
    assert apply_hom(gh, p) == apply_hom(g, apply_hom(h, p))


def test_parse_examples():
    assert parse("(x+y)^2", A) == parse("x^2 + x*y + y*x + y^2", A)
    assert parse("1/2*x - 2/4*x", A) == NCPoly.zero(A)
    assert parse("2*x*y - 3*y^2 + 1/2", A).coefficient(("y", "y")) == -3


@pytest.mark.parametrize("text, exc", [("x+*", ParseError), ("w", UnknownGenerator), ("(x", ParseError),
                                       ("x^", ParseError)])
def test_parse_errors(text, exc):
    with pytest.raises(exc):
        parse(text, A)


def test_non_unital_alphabet_has_no_constants():
    B = Alphabet(("a",), False)
    with pytest.raises(ParseError):
        parse("1", B)


def test_mixing_alphabets_is_refused():
    with pytest.raises(AlphabetMismatch):
        parse("x", A) + parse("a", Alphabet(("a",)))


def test_solve_in_span():
    vecs = [parse("x", A), parse("y + x", A)]
    assert solve_in_span(parse("3*x + 2*y", A), vecs) == [Fraction(1), Fraction(2)]
    assert solve_in_span(parse("z", A), vecs) is None
