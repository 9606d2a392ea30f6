from fractions import Fraction
from math import comb

import mpmath as mp
import pytest

from qchar.characters import (CharacterParams, F_ls_exact, F_ls_numeric,
                              F_ls_via_H, H_value, RouteMismatchError,
                              central_charge, character_ch,
                              coeff_series_exact,
                              fourier_coeff_by_quadrature, h_s)
from qchar.modular_objects import cexp, eta

PREC = 128


def test_params_validation():
    with pytest.raises(ValueError):
        CharacterParams(1, 0, 10)
    with pytest.raises(ValueError):
        CharacterParams(3, -1, 10)
    with pytest.raises(ValueError):
        CharacterParams(3, 0, 0)


def test_weights_and_charge():
    assert h_s(3, 0) == 0
    assert h_s(3, 1) == Fraction(1, 6) + Fraction(1, 2)
    assert h_s(4, 3) == Fraction(9, 8) + Fraction(3, 2)
    assert central_charge(3) == -4


def test_route_equivalence_small_sweep():
    for ell in (3, 4):
        for s in (0, 1, 2):
            params = CharacterParams(ell, s, 25)
            assert F_ls_via_H(params) == F_ls_exact(params)


def test_constant_term():
    for ell in (2, 3, 4, 5):
        for s in (0, 1, 2, 3):
            f = F_ls_exact(CharacterParams(ell, s, 6))
            assert f.coefficient(0) == comb(s + ell - 1, ell - 1)


def test_extraction_series_nonnegative_integers():
    g = coeff_series_exact(3, 2, 30)
    for e, c in g.terms():
        assert c.denominator == 1 and c >= 0


def test_character_leading_and_positivity():
    for ell, s in ((3, 0), (3, 2), (4, 1)):
        ch = character_ch(CharacterParams(ell, s, 20))
        lead = h_s(ell, s) - Fraction(central_charge(ell), 24)
        assert ch.min_exp == lead * ch.D
        assert ch.coefficient(lead) == comb(s + ell - 1, ell - 1)
        for _, c in ch.terms():
            assert c.denominator == 1 and c >= 0


def test_route_mismatch_error_payload():
    err = RouteMismatchError(3, 1, Fraction(7))
    assert err.ell == 3 and err.s == 1 and err.first_exponent == 7
    assert "ell=3" in str(err)


def test_H_value_matches_quadrature():
    with mp.workprec(PREC + 16):
        tau = mp.mpc("0.1", "0.9")
        for s in (0, 1):
            a = H_value(3, s, tau, PREC)
            b = fourier_coeff_by_quadrature(3, s, tau, prec=PREC)
            assert abs(a - b) <= mp.mpf("1e-30") * max(1, abs(a))


def test_character_value_equals_H_over_eta5():
    # degree 3: ch = i H_{s+3/2} / eta^5, checked numerically at tau = i
    with mp.workprec(PREC + 16):
        tau = mp.mpc(0, 1)
        for s in (0, 1):
            ch = character_ch(CharacterParams(3, s, 60))
            val = sum((mp.mpf(c.numerator) * cexp(tau * e)
                       for e, c in ch.terms()), mp.mpc(0))
            ref = 1j * H_value(3, s, tau, PREC) / eta(tau, PREC) ** 5
            assert abs(val - ref) <= mp.mpf("1e-25") * abs(ref)


def test_F_numeric_certified_against_series():
    with mp.workprec(PREC + 16):
        t = mp.mpf("1.0")
        q = mp.exp(-t)
        for s in (0, 1):
            f = F_ls_exact(CharacterParams(3, s, 100))
            direct = sum((mp.mpf(c.numerator) * q ** e
                          for e, c in f.terms()), mp.mpf(0))
            value, bound = F_ls_numeric(3, s, t, PREC)
            # the dropped exact-series tail at trunc 100 is below e^{-90}
            assert abs(value - direct) <= bound + mp.mpf("1e-38")
            assert bound <= mp.mpf("1e-12") * abs(value)
