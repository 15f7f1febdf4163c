from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncrewrite.exactnum import Poly, rising
from ncrewrite.freealg import NCPoly
from ncrewrite.rewrite import (BUILTIN_NAMES, Budget, BudgetExceeded, NotInWPrime, PresentationError,
                               builtin, critical_pairs, e_ij, get_system, make_skew, make_weyl_n,
                               parse_presentation, renamed, s_image, skew_from_dict, skew_mul, skew_to_dict,
                               tensor_system, toeplitz_assemble, toeplitz_split, verify_identity,
                               wprime_basis, wprime_decompose, wprime_reassemble)

coefs = st.integers(-3, 3)


def polys_over(name, max_len=4):
    A = builtin(name).alphabet
    words = st.lists(st.sampled_from(A.names), max_size=max_len).map(tuple)
    return st.dictionaries(words, coefs, max_size=4).map(lambda d: NCPoly(d, A))


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtins_are_confluent(name):
    rep = critical_pairs(builtin(name), 8)
    assert rep.ok, [str(p.word) for p in rep.unresolved]


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_rules_are_consequences_of_relations(name):
    sys_ = builtin(name)
    for rel in sys_.relations:
        assert not sys_.normal_form(rel)


@given(polys_over("weyl"), polys_over("weyl"))
def test_normal_form_is_compatible_with_products(p, q):
    W = builtin("weyl")
    assert W.normal_form(p * q) == W.normal_form(W.normal_form(p) * W.normal_form(q))
    assert W.normal_form(W.normal_form(p)) == W.normal_form(p)


@given(polys_over("toeplitz"))
def test_normal_words_are_irreducible(p):
    T = builtin("toeplitz")
    assert all(T.is_irreducible(w) for w in T.normal_form(p).terms)


@given(st.integers(1, 7))
def test_weyl_commutator_with_powers(m):
    # [x, y^m] = m y^(m-1) is the derivative rule in the Fock model
    W = builtin("weyl")
    lhs = W.parse(f"x*y^{m} - y^{m}*x")
    assert verify_identity(lhs, W.parse(f"{m}*y^{m - 1}"), W).passed


@given(st.integers(0, 6))
def test_x_power_y_power_is_rising_factorial(n):
    # x^n y^n = f_n(yx) with f_n(t) = t(t+1)...(t+n-1) shifted by one
    W = builtin("weyl")
    yx = W.parse("y*x")
    rhs = rising(n)(yx + 1) if n else W.one()
    assert verify_identity(W.parse(f"x^{n}*y^{n}") if n else W.one(), rhs, W).passed


def test_weyl2_factors_commute():
    W2 = make_weyl_n(2)
    assert verify_identity(W2.parse("x1*y2"), W2.parse("y2*x1"), W2).passed
    assert verify_identity(W2.parse("x2*y2 - y2*x2"), W2.one(), W2).passed


@given(polys_over("skew", 3), polys_over("skew", 3))
def test_skew_mul_agrees_with_rewriting(a, b):
    S = builtin("skew")
    assert skew_mul(a, b, S) == S.normal_form(a * b)


@given(st.fractions(min_value=-3, max_value=3, max_denominator=3).filter(bool),
       st.fractions(min_value=-3, max_value=3, max_denominator=3))
def test_skew_conjugation(a, b):
    S = make_skew(a, b)
    lhs = S.parse("u*D*uinv")
    assert S.normal_form(lhs) == S.normal_form(S.parse("D").scale(a) + S.one().scale(b))


def test_skew_dict_roundtrip():
    S = builtin("skew")
    d = {2: Poly.from_list([1, 0, 3], "D"), -1: Poly.from_list([0, -2], "D")}
    assert skew_to_dict(skew_from_dict(d, S), S) == d


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_toeplitz_matrix_units(i, j, k, l):
    T = builtin("toeplitz")
    prod = T.normal_form(e_ij(i, j) * e_ij(k, l))
    assert prod == (T.normal_form(e_ij(i, l)) if j == k else NCPoly.zero(T.alphabet))


@given(polys_over("toeplitz"))
def test_toeplitz_split_roundtrip(p):
    T = builtin("toeplitz")
    mat, lau = toeplitz_split(p)
    assert T.normal_form(toeplitz_assemble(mat, lau)) == T.normal_form(p)


@given(polys_over("wprime"))
def test_wprime_decomposition_roundtrip(p):
    W = builtin("wprime")
    d = wprime_decompose(p, allow_unit=True)
    assert wprime_reassemble(d) == W.normal_form(p)


def test_wprime_defining_relations():
    W = builtin("wprime")
    for lhs, rhs in [("(x'*y' - y'*x')*y'", "y'"), ("x'*(x'*y' - y'*x')", "x'"), ("f*y'", "0"),
                     ("x'*f", "0"), ("f*x'*y'", "f + f^2"), ("x'*y'*f", "f + f^2")]:
        assert verify_identity(W.parse(lhs), W.parse(rhs), W).passed, lhs


def test_unit_dependent_elements_are_refused():
    # f itself involves the adjoined unit; x'y' f = t.f is a genuine element
    W = builtin("wprime")
    for text in ("1", "f", "f + f^2 - x'*y'*f + 1"):
        with pytest.raises(NotInWPrime):
            wprime_decompose(W.parse(text))
    d = wprime_decompose(W.parse("x'*y'*f"))
    assert d.is_ideal and d.i_part == {(0, 0): Poly.t()}


def test_basis_and_splitting_images():
    W = builtin("wprime")
    assert wprime_decompose(wprime_basis(2, 1, Poly.t())).i_part == {(2, 1): Poly.t()}
    assert wprime_decompose(s_image(1, 2)).w_part == {(1, 2): Fraction(1)}


def test_tensor_system_commutes_factors():
    TT = tensor_system(builtin("weyl"), builtin("laurent"))
    assert verify_identity(TT.parse("z*x"), TT.parse("x*z"), TT).passed
    assert critical_pairs(TT, 6).ok


def test_renamed_copy():
    T2 = renamed(builtin("toeplitz"), "2")
    assert T2.alphabet.names == ("v2", "vstar2", "e2")
    assert verify_identity(T2.parse("vstar2*v2"), T2.one(), T2).passed


def test_budget_is_enforced():
    sys_ = builtin("weyl")
    small = type(sys_)(sys_.name, sys_.alphabet, [(r.lhs, r.rhs) for r in sys_.rules], sys_.precedence)
    small.budget = Budget(max_terms=5, max_word_length=64)
    with pytest.raises(BudgetExceeded):
        small.normal_form(small.parse("x^6*y^6"))


def test_presentation_parsing():
    text = """
    # the first Weyl algebra, typed in
    alphabet: p q
    order: deglex p > q
    rule: p*q -> q*p + 1
    """
    sys_ = parse_presentation(text)
    assert critical_pairs(sys_, 6).ok
    assert verify_identity(sys_.parse("p*q^2"), sys_.parse("q^2*p + 2*q"), sys_).passed


@pytest.mark.parametrize("text", ["rule: a -> b", "alphabet: a b\nrule: a -> a*a", "alphabet: a\nbogus: 1",
                                  "alphabet: a\norder: lex a", "alphabet: a b\nrule: a*b - b"])
def test_bad_presentations(text):
    with pytest.raises(PresentationError):
        parse_presentation(text)


def test_unknown_system():
    with pytest.raises(KeyError):
        get_system("nope")
