import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncrewrite.exactnum import Poly
from ncrewrite.freealg import parse
from ncrewrite.models import IdealElem, KMatrix, ideal_mul, kmatrix_mul
from ncrewrite.rewrite import builtin
from ncrewrite.seminorms import (CertificationError, KindMismatch, SamplerConfig, alpha_psi, beta_phi,
                                 certify_monotone, custom, eval_seminorm, find_submult_witness, hat, hat_compare,
                                 laurent_mul, laurent_weight, mixed_check, p_n, phi0, phi_make, phi_prime, psi,
                                 q_n, submult_check, tensor_bound_sweep, weighted_l1)
from ncrewrite.tensor import TensorAlgebra

index = st.integers(0, 5)
entries = st.fractions(min_value=-5, max_value=5, max_denominator=4)
kmatrices = st.dictionaries(st.tuples(index, index), entries, max_size=6).map(KMatrix)
laurents = st.dictionaries(st.integers(-4, 4), entries, max_size=5)
small_polys = st.lists(st.integers(-3, 3), max_size=4).map(Poly.from_list)


@st.composite
def ideal_elems(draw):
    out = {}
    for _ in range(draw(st.integers(1, 3))):
        k, l = draw(st.integers(0, 4)), draw(st.integers(0, 4))
        P = draw(small_polys)
        out[(k, l)] = P * Poly.t() if (k, l) == (0, 0) else P
    return IdealElem(out)


def test_phi0_values():
    # least integer >= sqrt(2 (k+2)!), checked by brute force
    for k in range(12):
        target = 2 * math.factorial(k + 2)
        v = phi0()(k)
        assert v.denominator == 1 and (v - 1) ** 2 < target <= v ** 2
    assert [phi0()(k) for k in range(3)] == [2, 4, 7]


def test_phi_prime_formula():
    p, pp = phi0(), phi_prime(phi0())
    assert all(pp(k) == 4 * math.factorial(k + 1) * p(2 * k) for k in range(6))


@pytest.mark.parametrize("j", range(6))
def test_psi_is_the_supremum(j):
    p, s = phi0(), psi(phi0())
    ratios = [p(l + j) / p(2 * l) for l in range(4 * j + 12)]
    assert s(j) == max(ratios)


def test_psi_needs_monotonicity():
    with pytest.raises(CertificationError):
        psi(custom(lambda k: 1 + (k % 2), "ZIGZAG"))
    assert certify_monotone(phi0(), 30)
    assert phi_make("PSI", phi0())(2) == psi(phi0())(2)
    with pytest.raises(ValueError):
        phi_make("PHI_PRIME")


@pytest.mark.parametrize("n", range(4))
@given(a=kmatrices, b=kmatrices)
def test_p_n_submultiplicative(n, a, b):
    spec = p_n(n)
    assert eval_seminorm(spec, kmatrix_mul(a, b)) <= eval_seminorm(spec, a) * eval_seminorm(spec, b)


@pytest.mark.parametrize("n", range(3))
@given(a=laurents, b=laurents)
def test_q_n_submultiplicative(n, a, b):
    spec = q_n(n)
    assert eval_seminorm(spec, laurent_mul(a, b)) <= eval_seminorm(spec, a) * eval_seminorm(spec, b)


def test_displayed_q_weight_degenerates():
    # |1 + k|^n vanishes at k = -1, so that reading is not a norm
    assert eval_seminorm(q_n(1, displayed=True), {-1: Fraction(1)}) == 0
    assert eval_seminorm(q_n(1), {-1: Fraction(1)}) == 2


@given(ideal_elems(), ideal_elems())
def test_beta_phi0_submultiplicative(a, b):
    spec = beta_phi(phi0())
    assert eval_seminorm(spec, ideal_mul(a, b)) <= eval_seminorm(spec, a) * eval_seminorm(spec, b)


def test_constant_weight_has_a_witness():
    v = find_submult_witness(beta_phi(custom(lambda k: 1, "ONE")))
    assert v is not None and v.lhs > v.rhs
    assert find_submult_witness(beta_phi(phi0())) is None


def test_evaluation_examples():
    assert eval_seminorm(p_n(1), KMatrix({(0, 3): 1})) == 4
    assert eval_seminorm(q_n(0), {1: 1, -1: 1}) == 2
    assert eval_seminorm(alpha_psi(custom(lambda k: k + 1)), {(1, 2): Fraction(-2)}) == 12
    A = builtin("weyl").alphabet
    assert eval_seminorm(weighted_l1(lambda w: len(w) + 1), parse("2*x*y - y", A)) == 8


def test_kind_mismatch():
    with pytest.raises(KindMismatch):
        eval_seminorm(p_n(1), {0: 1})
    with pytest.raises(KindMismatch):
        eval_seminorm(beta_phi(phi0()), KMatrix({}))


def test_sampled_sweeps_are_deterministic():
    cfg = SamplerConfig(trials=30, seed=4, dim=6)
    a = submult_check(p_n(2), trials=30, seed=4, cfg=cfg)
    b = submult_check(p_n(2), trials=30, seed=4, cfg=cfg)
    assert a.ok and a.summary() == b.summary()


def test_mixed_inequalities_small():
    assert mixed_check(phi0(), trials=40, seed=3).ok


def test_hat_bound_on_a_laurent_tensor():
    base = builtin("laurent")
    tens = TensorAlgebra(base, 4)
    beta = laurent_weight(1)
    alpha = lambda t: eval_seminorm(hat(lambda w: Fraction(beta(w), 2)), t)  # noqa: E731
    letters = [("z",), ("zinv",)]
    elem = tens.curvature(("z",), ("zinv",))
    rep = hat_compare(beta, elem, alpha, tens, letters)
    assert rep.conclusion_ok


@pytest.mark.parametrize("n, seed", [(1, 0), (2, 3)])
def test_tensor_bound_sweep(n, seed):
    assert tensor_bound_sweep(trials=40, seed=seed, n=n).ok
