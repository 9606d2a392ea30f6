import json
import random
from fractions import Fraction

import mpmath as mp
import pytest

from qchar.modular_objects import (NearPoleError, QuasimodularPoly, cexp,
                                   divisor_sigma_list, eisenstein_G2k, eta,
                                   eta_qseries, euler_phi_numeric, g_ell,
                                   ghat_qseries, ghat_value,
                                   laurent_coefficients_D, qpoch_inf, theta,
                                   theta_product)

PREC = 128
TOL = mp.mpf(2) ** (-PREC + 20)


def random_tau_z(rng):
    tau = mp.mpc(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 1.6))
    z = mp.mpc(rng.uniform(-0.6, 0.6), rng.uniform(-0.4, 0.4))
    return tau, z


def test_divisor_sigma():
    assert divisor_sigma_list(1, 6) == [0, 1, 3, 4, 7, 6, 12]
    assert divisor_sigma_list(3, 4) == [0, 1, 9, 28, 73]


def test_theta_sum_equals_product():
    rng = random.Random(7)
    with mp.workprec(PREC + 16):
        for _ in range(20):
            tau, z = random_tau_z(rng)
            a = theta(z, tau, PREC)
            b = theta_product(z, tau, PREC)
            assert abs(a - b) <= TOL * max(1, abs(a))


def test_theta_functional_equations():
    rng = random.Random(11)
    with mp.workprec(PREC + 16):
        for _ in range(8):
            tau, z = random_tau_z(rng)
            t0 = theta(z, tau, PREC)
            assert abs(theta(z + 1, tau, PREC) + t0) <= TOL
            shift = -cexp(-tau / 2 - z) * t0
            assert abs(theta(z + tau, tau, PREC) - shift) <= \
                TOL * max(1, abs(shift))
            assert abs(theta(-z, tau, PREC) + t0) <= TOL
        assert abs(theta(mp.mpc(0), mp.mpc(0, 1), PREC)) <= TOL


def test_eta_special_value_and_laws():
    with mp.workprec(PREC + 16):
        i = mp.mpc(0, 1)
        want = mp.gamma(mp.mpf(1) / 4) / (2 * mp.pi ** mp.mpf("0.75"))
        assert abs(eta(i, PREC) - want) <= TOL
        rng = random.Random(3)
        for _ in range(5):
            tau, _ = random_tau_z(rng)
            e = eta(tau, PREC)
            assert abs(eta(tau + 1, PREC) - cexp(Fraction(1, 24)) * e) <= \
                TOL * abs(e)
            assert abs(eta(-1 / tau, PREC) - mp.sqrt(-1j * tau) * e) <= \
                TOL * abs(e)


def test_eta_qseries_matches_value():
    with mp.workprec(PREC + 16):
        tau = mp.mpc("0.13", "1.1")
        q = cexp(tau)
        series = eta_qseries(60)
        val = sum((mp.mpf(c.numerator) / c.denominator
                   * cexp(tau * mp.mpf(e.numerator) / e.denominator)
                   for e, c in series.terms()), mp.mpc(0))
        assert abs(val - eta(tau, PREC)) <= mp.mpf("1e-25") * abs(val)
        assert abs(q) ** 60 < mp.mpf("1e-25")


def test_eisenstein_modularity():
    with mp.workprec(PREC + 16):
        rng = random.Random(19)
        for _ in range(4):
            tau, _ = random_tau_z(rng)
            for k in (2, 3, 4):
                lhs = eisenstein_G2k(k, -1 / tau, PREC)
                rhs = tau ** (2 * k) * eisenstein_G2k(k, tau, PREC)
                assert abs(lhs - rhs) <= TOL * max(1, abs(rhs))
            # weight-2 anomaly
            lhs = eisenstein_G2k(1, -1 / tau, PREC)
            rhs = tau ** 2 * eisenstein_G2k(1, tau, PREC) - 2j * mp.pi * tau
            assert abs(lhs - rhs) <= TOL * max(1, abs(rhs))


def test_eisenstein_small_imaginary_part():
    # values far below Im tau = 1/2 route through the S-transform
    with mp.workprec(PREC + 16):
        tau = mp.mpc("0.02", "0.05")
        lhs = eisenstein_G2k(2, tau, PREC)
        rhs = tau ** (-4) * eisenstein_G2k(2, -1 / tau, PREC)
        assert abs(lhs - rhs) <= TOL * abs(lhs)


def test_ghat_qseries_matches_value():
    with mp.workprec(PREC + 16):
        tau = mp.mpc("0.07", "1.3")
        for k2 in (2, 4, 6):
            series = ghat_qseries(k2, 50)
            val = sum((mp.mpf(c.numerator) / c.denominator * cexp(tau * e)
                       for e, c in series.terms()), mp.mpc(0))
            ref = ghat_value(k2, tau, PREC)
            assert abs(val - ref) <= mp.mpf("1e-25") * max(1, abs(ref))


def test_laurent_coefficients_by_contour():
    # extract D_{-j} from g_ell by a small-circle contour integral
    prec = 96
    with mp.workprec(prec + 16):
        tau = mp.mpc("0.1", "0.9")
        r = mp.mpf("0.05")
        N = 256
        for ell in (2, 3, 4, 5):
            D = laurent_coefficients_D(ell)
            for j in range(1, ell + 1):
                nodes = []
                for k in range(N):
                    z = r * cexp(mp.mpf(k) / N)
                    nodes.append(g_ell(z, tau, ell, prec) * z ** j)
                got = (2j * mp.pi) ** j * mp.fsum(
                    [mp.re(x) for x in nodes]) / N \
                    + 1j * (2j * mp.pi) ** j * mp.fsum(
                    [mp.im(x) for x in nodes]) / N
                want = D[j - 1].evaluate(tau, prec)
                if D[j - 1].is_zero:
                    assert abs(got) < mp.mpf("1e-15")
                else:
                    assert abs(got - want) <= mp.mpf("1e-15") * \
                        max(1, abs(want))


def test_D_weight_and_parity_bookkeeping():
    for ell in range(1, 9):
        D = laurent_coefficients_D(ell)
        assert len(D) == ell
        for j in range(1, ell + 1):
            assert D[j - 1].weight == ell - j
            if (ell - j) % 2:
                assert D[j - 1].is_zero
    # D_{-ell} is the pure constant (-i)^ell
    assert laurent_coefficients_D(3)[2].evaluate(mp.mpc(0, 1), 64) == \
        pytest.approx((-1j) ** 3)


def test_D_growth_law():
    # |D_{-j}(i t/(2 pi))| stays bounded by a power law t^{j - ell} as t -> 0
    prec = 96
    with mp.workprec(prec + 16):
        ell = 5
        D = laurent_coefficients_D(ell)
        for j in (1, 3, 5):
            vals = []
            for t in (mp.mpf("0.2"), mp.mpf("0.1")):
                tau = 1j * t / (2 * mp.pi)
                vals.append(abs(D[j - 1].evaluate(tau, prec)))
            order = mp.log(vals[0] / vals[1]) / mp.log(2)
            assert order >= (j - ell) - mp.mpf("0.5")


def test_quasimodular_json_roundtrip():
    for ell in (3, 6):
        for P in laurent_coefficients_D(ell):
            blob = json.loads(json.dumps(P.to_json()))
            assert QuasimodularPoly.from_json(blob) == P


def test_g_ell_near_pole_raises():
    with pytest.raises(NearPoleError):
        g_ell(mp.mpc(0), mp.mpc(0, 1), 3, 64)


def test_euler_phi_and_qpoch():
    with mp.workprec(PREC + 16):
        q = mp.mpf("0.3")
        tol = mp.mpf(2) ** (-PREC)
        phi = euler_phi_numeric(q, tol)
        series = eta_qseries(120)
        # eta q-series without its q^{1/24} prefactor is (q)_inf
        val = sum((mp.mpf(c.numerator) / c.denominator
                   * q ** (mp.mpf(e.numerator) / e.denominator
                           - mp.mpf(1) / 24)
                   for e, c in series.terms()), mp.mpf(0))
        assert abs(phi - val) <= mp.mpf("1e-25")
        assert abs(qpoch_inf(q, q, tol) - phi) <= tol * 10
