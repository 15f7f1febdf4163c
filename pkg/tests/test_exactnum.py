from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ncrewrite.exactnum import Poly, Radical, TrigScalar, rising, split_square

small = st.integers(-6, 6)
fractions = st.fractions(min_value=-5, max_value=5, max_denominator=7)
polys = st.lists(fractions, max_size=5).map(Poly.from_list)
radicals = st.dictionaries(st.integers(1, 30), fractions, max_size=3).map(Radical)
trigs = st.dictionaries(st.tuples(st.integers(0, 3), st.integers(0, 3)), small, max_size=4).map(TrigScalar)


@given(polys, polys, polys)
def test_poly_ring_axioms(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a * b == b * a
    assert a - a == Poly()


@given(polys, polys, fractions)
def test_poly_evaluation_is_a_homomorphism(a, b, x):
    assert (a * b)(x) == a(x) * b(x)
    assert (a + b)(x) == a(x) + b(x)


@given(polys, polys)
def test_degree_of_product(a, b):
    if a and b:
        assert (a * b).degree == a.degree + b.degree


@given(st.integers(0, 8), st.integers(-4, 10))
def test_rising_factorial_values(n, x):
    expected = 1
    for r in range(n):
        expected *= x + r
    assert rising(n)(x) == expected


def test_rising_small_cases():
    assert rising(0) == Poly.const(1)
    assert rising(2) == Poly.from_list([0, 1, 1])
    assert rising(3)(1) == 6


@given(st.integers(1, 5000))
def test_split_square(n):
    s, d = split_square(n)
    assert s * s * d == n
    assert all(d % (p * p) for p in range(2, int(d ** 0.5) + 1))


def test_split_square_rejects_nonpositive():
    with pytest.raises(ValueError):
        split_square(0)


@given(radicals, radicals, radicals)
def test_radical_field_ops(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == Radical()


@given(st.fractions(min_value=0, max_value=9, max_denominator=9))
def test_sqrt_squares_back(q):
    r = Radical.sqrt(q)
    assert (r * r).is_rational
    assert (r * r).to_rational() == q


def test_sqrt_normalises_square_factors():
    assert Radical.sqrt(8) == Radical({2: 2})
    assert Radical.sqrt(Fraction(1, 4)) == Radical.rational(Fraction(1, 2))
    with pytest.raises(ValueError):
        Radical.sqrt(-1)


def test_sqrt2_is_irrational():
    assert not Radical.sqrt(2).is_rational
    assert abs(float(Radical.sqrt(2)) - 2 ** 0.5) < 1e-12


@given(trigs, trigs)
def test_trig_ring_ops_commute_with_evaluation(a, b):
    # (3/5, 4/5) lies on the unit circle, so evaluation respects s^2 = 1 - c^2
    c, s = Fraction(3, 5), Fraction(4, 5)
    assert (a * b).at(c, s) == a.at(c, s) * b.at(c, s)
    assert (a + b).at(c, s) == a.at(c, s) + b.at(c, s)


def test_pythagoras_reduces_to_one():
    c, s = TrigScalar.cos(), TrigScalar.sin()
    one = c * c + s * s
    assert one.is_constant and one.constant() == 1


@given(trigs)
def test_negate_angle_is_an_involution(a):
    assert a.negate_angle().negate_angle() == a
    assert a.negate_angle().at(Fraction(3, 5), Fraction(4, 5)) == a.at(Fraction(3, 5), Fraction(-4, 5))
