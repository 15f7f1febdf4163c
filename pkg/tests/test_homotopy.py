from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncrewrite import homotopy as H
from ncrewrite.exactnum import Poly
from ncrewrite.rewrite import builtin

# rational points on the unit circle, so relations survive evaluation
CIRCLE = [(Fraction(3, 5), Fraction(4, 5)), (Fraction(-5, 13), Fraction(12, 13)), (Fraction(8, 17), Fraction(-15, 17))]


@pytest.mark.parametrize("name", H.FAMILY_NAMES)
def test_family_relations_hold_symbolically(name):
    rep = H.hom_relations_check(H.build_family(name))
    assert rep.passed, str(rep)


@pytest.mark.parametrize("name", H.FAMILY_NAMES)
def test_family_printing_roundtrips(name):
    assert H.roundtrip_ok(H.build_family(name))


@pytest.mark.parametrize("name", ["PAIR_UT", "PAIR_UT_PRIME", "WPRIME_PHI_T"])
@pytest.mark.parametrize("c, s", CIRCLE)
def test_families_at_circle_points(name, c, s):
    fam = H.build_family(name).at(c, s)
    assert not fam.symbolic
    assert H.hom_relations_check(fam).passed


@pytest.mark.parametrize("uname", ["U_PAIR", "U_PAIR_PRIME", "U_WPRIME"])
def test_unitaries_invert(uname):
    u, sys_ = H.unitary(uname)
    assert H.invert_check(u, H.negate_angle(u), sys_).passed
    for c, s in CIRCLE:
        assert H.invert_check(H.at_angle(u, c, s), H.at_angle(u, c, -s), sys_).passed


def test_isometry_is_not_invertible():
    T = builtin("toeplitz")
    rep = H.invert_check(T.gen("v"), T.gen("vstar"), T)
    assert not rep.passed
    assert [i.residual for i in rep.failures()] == ["-e"]


def test_leg_endpoints():
    psi, phi, phip = (H.build_family(n) for n in ("PAIR_PSI", "PAIR_PHI", "PAIR_PHI_PRIME"))
    ut, utp = H.build_family("PAIR_UT"), H.build_family("PAIR_UT_PRIME")
    assert H.families_equal(ut.at(*H.T_ZERO), psi)[0]
    assert H.families_equal(ut.at(*H.T_HALF_PI), phi)[0]
    assert H.families_equal(utp.at(*H.T_HALF_PI), phip)[0]
    assert not H.families_equal(phi, phip)[0]


def test_interpolation_and_embedding():
    assert H.interpolation_check().passed
    assert H.canonical_embedding_check().passed


def test_wprime_family_starts_at_the_shift():
    fam = H.build_family("WPRIME_PHI_T").at(*H.T_ZERO)
    T = fam.target
    assert fam.assignment["x'"] == T.parse("x'*vstar")
    assert fam.assignment["y'"] == T.parse("y'*v")


b_terms = st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.lists(st.integers(-2, 2), max_size=3)),
                   min_size=1, max_size=3)


def _b_sum(terms):
    out, want = None, {}
    for n, m, cs in terms:
        c = Poly.from_list(cs)
        if n == m == 0:
            c = c * Poly.t()
        if not c:
            continue
        el = H.b_element(n, m, c)
        out = el if out is None else out + el
        want[(n, m)] = want[(n, m)] + c if (n, m) in want else c
    return out, {k: v for k, v in want.items() if v}


@given(b_terms)
def test_b_decompose_recovers_coefficients(terms):
    p, want = _b_sum(terms)
    if p is None:
        return
    assert H.b_decompose(p) == want


@given(b_terms, b_terms)
def test_b_injection_is_multiplicative(s, t):
    p, _ = _b_sum(s)
    q, _ = _b_sum(t)
    if p is None or q is None:
        return
    assert H.b_injection_check([(p, q)]).passed


def test_b_membership_negatives():
    WT = builtin("wprime_toeplitz")
    assert not H.in_b(WT.parse("x'*e"))          # x' sits against e_00, not e_01
    assert not H.in_b(WT.parse("x'*y'*v"))       # no matrix unit
    assert not H.in_b(WT.parse("y'*e*vstar"))     # y' needs e_10
    assert H.in_b(WT.parse("x'*y'*e"))
    with pytest.raises(H.NotInB):
        H.b_decompose(H.build_family("WPRIME_PHI_T")("x'"))


@pytest.mark.parametrize("k", range(3))
def test_quasihom_specs(k):
    spec = H.wprime_quasihom_specs()[k]
    assert H.quasihom_check(spec).passed


def test_quasihom_check_detects_a_bad_target():
    spec = H.wprime_quasihom_specs()[1]
    spec.member = H.in_b
    assert not H.quasihom_check(spec).passed


def test_orthogonal_difference():
    rep = H.orthogonal_difference_check(H.build_family("WPRIME_PHI_T").at(*H.T_HALF_PI),
                                        H.build_family("WPRIME_PHIBAR"), max_length=3)
    assert rep.passed, str(rep)


@pytest.mark.parametrize("ctx", H.builtin_morita_contexts(), ids=lambda c: c.name)
def test_morita_contexts(ctx):
    rep = H.morita_check(ctx)
    assert rep.passed, str(rep)


def test_morita_check_detects_a_missing_unit():
    ctx = H.corner_context()
    ctx.xi = [H.PMatrix.unit(0, 0, Poly.const(2))]
    assert not H.morita_check(ctx).passed


def test_unknown_family():
    with pytest.raises(KeyError):
        H.build_family("NOPE")
