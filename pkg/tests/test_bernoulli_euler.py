from fractions import Fraction

from hypothesis import given, settings, strategies as st

from qchar.bernoulli_euler import (bernoulli_number, bernoulli_poly,
                                   check_euler_bernoulli_identity,
                                   euler_number, euler_poly,
                                   higher_bernoulli_poly, verify_S_identity)


def test_bernoulli_numbers_table():
    table = {0: Fraction(1), 1: Fraction(-1, 2), 2: Fraction(1, 6),
             4: Fraction(-1, 30), 6: Fraction(1, 42), 8: Fraction(-1, 30),
             10: Fraction(5, 66), 12: Fraction(-691, 2730)}
    for k, v in table.items():
        assert bernoulli_number(k) == v
    for k in (3, 5, 7, 9, 11):
        assert bernoulli_number(k) == 0


def test_bernoulli_poly_basics():
    # B_n(0) = B_n, B_n(1) = B_n for n != 1, difference formula
    for n in range(0, 10):
        assert bernoulli_poly(n, Fraction(0)) == bernoulli_number(n)
    for n in range(2, 10):
        assert bernoulli_poly(n, Fraction(1)) == bernoulli_number(n)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=12),
       st.fractions(min_value=-2, max_value=2, max_denominator=6))
def test_bernoulli_difference(n, x):
    assert bernoulli_poly(n, x + 1) - bernoulli_poly(n, x) == \
        n * x ** (n - 1)


def test_euler_numbers_table():
    table = {0: 1, 2: -1, 4: 5, 6: -61, 8: 1385, 10: -50521}
    for k, v in table.items():
        assert euler_number(k) == v
    for k in (1, 3, 5, 7):
        assert euler_number(k) == 0


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=0, max_value=12),
       st.fractions(min_value=-2, max_value=2, max_denominator=6))
def test_euler_poly_sum_rule(n, x):
    assert euler_poly(n, x + 1) + euler_poly(n, x) == 2 * x ** n


def test_higher_bernoulli_reduces_to_ordinary():
    for n in range(0, 8):
        assert higher_bernoulli_poly(n, 1, Fraction(0)) == \
            bernoulli_number(n)
        assert higher_bernoulli_poly(n, 1, Fraction(1, 2)) == \
            bernoulli_poly(n, Fraction(1, 2))


def test_higher_bernoulli_spot_value():
    assert higher_bernoulli_poly(2, 3, Fraction(3, 2)) == Fraction(-1, 4)


def test_euler_bernoulli_identity_sweep():
    for n in range(0, 21):
        for m in (2, 4):
            for x in (Fraction(0), Fraction(1, 3), Fraction(1, 2)):
                assert check_euler_bernoulli_identity(n, m, x)


def test_S_series_identity():
    assert verify_S_identity(31)
