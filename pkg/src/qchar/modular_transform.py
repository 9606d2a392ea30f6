"""Modular transformation laws for partial theta functions.

The transformed partial theta equals a sum of Mordell-type integrals
(Gaussian against a trigonometric kernel) plus, when Im z < 0, explicit
theta-function correction terms.  Everything here is verified numerically:
the left side by direct summation at the transformed argument, the right
side from quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath as mp

from .modular_objects import (DEFAULT_PREC, _GUARD_BITS, _require_upper_half,
                              cexp, theta)
from .partial_theta import PartialThetaParams, partial_theta


class PoleNearContourError(ValueError):
    """A kernel pole sits too close to the integration path; perturb z."""


@dataclass(frozen=True)
class SL2Matrix:
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError("determinant must be 1")

    def act(self, tau):
        return (self.a * tau + self.b) / (self.c * tau + self.d)


S_MATRIX = SL2Matrix(0, -1, 1, 0)

_POLE_DISTANCE_MIN = mp.mpf("0.01")


def _gauss_cutoff(decay_rate, prec: int):
    """Half-width X with e^{-decay_rate X^2} below the working tolerance."""
    return mp.sqrt(((prec + 32) * mp.log(2)) / decay_rate) + 1


def _quad_panels(f, X):
    return mp.quad(f, [-X, -X / 3, 0, X / 3, X])


def mordell_integral(params: PartialThetaParams, z, tau, j: int,
                     gamma: SL2Matrix, prec: int = DEFAULT_PREC):
    """integral over R of

        e^{pi i (c tau + d) x^2/2 - (pi i/sqrt(cM)) (r - 2Mj) x}
        / (1 - e^{2 pi i z 4cM} e^{4 pi i sqrt(cM) x}) dx.

    Denominator zeros sit at Im x = -2 sqrt(cM) Im z, so z off the real
    axis keeps the path clear; checked before integrating.
    """
    if gamma.c <= 0:
        raise ValueError("need c > 0 for a convergent Gaussian")
    _require_upper_half(tau)
    r, M, c = params.r, params.M, gamma.c
    with mp.workprec(prec + _GUARD_BITS):
        cM = mp.mpf((c * M).numerator) / (c * M).denominator
        scM = mp.sqrt(cM)
        pole_im = 2 * scM * abs(mp.im(z))
        if pole_im < _POLE_DISTANCE_MIN:
            raise PoleNearContourError(
                "denominator pole within {} of the real axis; shift z"
                .format(mp.nstr(pole_im, 3)))
        ctd = gamma.c * tau + gamma.d
        rj = Fraction(r) - 2 * Fraction(M) * j
        rjf = mp.mpf(rj.numerator) / rj.denominator
        zfac = cexp(4 * z * cM)

        def f(x):
            num = mp.exp(mp.pi * 1j * ctd * x * x / 2
                         - mp.pi * 1j / scM * rjf * x)
            den = 1 - zfac * mp.exp(4j * mp.pi * scM * x)
            return num / den

        X = _gauss_cutoff(mp.pi * gamma.c * mp.im(tau) / 2, prec)
        return _quad_panels(f, X)


def _root_of_unity(exponent: Fraction):
    """e^{2 pi i exponent} with the rational exponent reduced mod 1 first."""
    exponent = Fraction(exponent)
    exponent -= exponent.numerator // exponent.denominator
    return cexp(mp.mpf(exponent.numerator) / exponent.denominator)


def general_transform_rhs(params: PartialThetaParams, z, tau,
                          gamma: SL2Matrix, prec: int = DEFAULT_PREC):
    """Right side of the general transformation law:

    sqrt(-i (c tau + d)/2) * sum_{j=0}^{2c-1} (-1)^{j eps}
      e^{2 pi i a (2Mj - r)^2/(4cM)} *
      ( e^{2 pi i z(2Mj - r)} * mordell_integral(j)
        + [Im z < 0] * (1/(2 sqrt(cM))) * e^{2 pi i (2Mj - r)/(8cM)}
          * e^{2 pi i cM (c tau + d)(z - 1/(8cM))^2}
          * theta((c tau+d)/2 (z - 1/(8cM)) - 1/2 + (r-2Mj)/(4cM);
                  (c tau+d)/(8cM)) ).
    """
    if gamma.c <= 0:
        raise ValueError("need c > 0")
    r, eps, M = params.r, params.epsilon, params.M
    c = gamma.c
    with mp.workprec(prec + _GUARD_BITS):
        if mp.im(z) == 0:
            raise ValueError("z must not be real")
        wall = mp.im(z) < 0
        ctd = c * tau + gamma.d
        cM = Fraction(c) * M
        cMf = mp.mpf(cM.numerator) / cM.denominator
        scM = mp.sqrt(cMf)
        total = mp.mpc(0)
        for j in range(2 * c):
            mj = 2 * M * j - Fraction(r)  # 2Mj - r
            mjf = mp.mpf(mj.numerator) / mj.denominator
            phase = (-1) ** (j * eps) * _root_of_unity(
                gamma.a * mj * mj / (4 * cM))
            term = mp.exp(2j * mp.pi * z * mjf) * mordell_integral(
                params, z, tau, j, gamma, prec)
            if wall:
                shift = 1 / (8 * cMf)
                arg = ctd / 2 * (z - shift) - mp.mpf(1) / 2 - mjf / (4 * cMf)
                term += (1 / (2 * scM) * _root_of_unity(mj / (8 * cM))
                         * mp.exp(2j * mp.pi * cMf * ctd * (z - shift) ** 2)
                         * theta(arg, ctd / (8 * cMf), prec))
            total += phase * term
        return mp.sqrt(-1j * ctd / 2) * total


def verify_general_transform(params: PartialThetaParams, z, tau,
                             gamma: SL2Matrix,
                             prec: int = DEFAULT_PREC) -> dict:
    """Compare direct summation at gamma(tau) with the integral formula."""
    with mp.workprec(prec + _GUARD_BITS):
        lhs = partial_theta(params, z, gamma.act(tau), prec)
        rhs = general_transform_rhs(params, z, tau, gamma, prec)
        return {"lhs": lhs, "rhs": rhs, "abs_err": abs(lhs - rhs)}


def s_transform_rhs(ell: int, s: int, z, tau, prec: int = DEFAULT_PREC):
    """Right side of the S-transform specialization
    (-i tau)^{-1/2} theta_plus_{s+ell/2, eps, ell/2}(z; -1/tau) = ...

    odd ell (cosine kernel):
        (1/2) int e^{pi i tau x^2}
              e^{(2 pi i/sqrt(ell))(s+ell)(x - sqrt(ell) z)}
              / cos(sqrt(ell) pi (x - sqrt(ell) z)) dx
        + [Im z < 0] (1/sqrt(ell)) e^{pi i ell tau z^2}
              theta(tau z + s/ell; tau/ell)

    even ell (sine kernel):
        -(i/2) int (same numerator)/sin(...) dx
        + [Im z < 0] (1/(i sqrt(ell))) e^{-pi i s/ell}
              e^{pi i ell tau (z - 1/(2 ell))^2}
              theta(tau z + s/ell - tau/(2 ell); tau/ell)
    """
    _require_upper_half(tau)
    with mp.workprec(prec + _GUARD_BITS):
        if mp.im(z) == 0:
            raise ValueError("z must not be real")
        sl = mp.sqrt(mp.mpf(ell))
        if sl * abs(mp.im(z)) < _POLE_DISTANCE_MIN:
            raise PoleNearContourError("kernel pole near the path; shift z")
        wall = mp.im(z) < 0

        def num(x):
            u = x - sl * z
            return mp.exp(mp.pi * 1j * tau * x * x
                          + 2j * mp.pi / sl * (s + ell) * u)

        X = _gauss_cutoff(mp.pi * mp.im(tau), prec)
        if ell % 2:
            val = _quad_panels(lambda x: num(x) / mp.cos(sl * mp.pi
                                                         * (x - sl * z)),
                               X) / 2
            if wall:
                val += (1 / sl * mp.exp(mp.pi * 1j * ell * tau * z * z)
                        * theta(tau * z + mp.mpf(s) / ell, tau / ell, prec))
        else:
            val = _quad_panels(lambda x: num(x) / mp.sin(sl * mp.pi
                                                         * (x - sl * z)),
                               X) * (-1j) / 2
            if wall:
                zs = z - mp.mpf(1) / (2 * ell)
                val += (1 / (1j * sl) * mp.exp(-mp.pi * 1j * s / ell)
                        * mp.exp(mp.pi * 1j * ell * tau * zs * zs)
                        * theta(tau * z + mp.mpf(s) / ell
                                - tau / (2 * ell), tau / ell, prec))
        return val


def verify_S_transform(ell: int, s: int, z, tau,
                       prec: int = DEFAULT_PREC) -> dict:
    """Compare both sides of the S-transform law; eps = ell mod 2 on the
    partial-theta side (the odd case uses the alternating sum)."""
    with mp.workprec(prec + _GUARD_BITS):
        eps = ell % 2
        params = PartialThetaParams(Fraction(s) + Fraction(ell, 2), eps,
                                    Fraction(ell, 2))
        lhs = (-1j * tau) ** (-mp.mpf(1) / 2) \
            * partial_theta(params, z, -1 / tau, prec)
        rhs = s_transform_rhs(ell, s, z, tau, prec)
        return {"lhs": lhs, "rhs": rhs, "abs_err": abs(lhs - rhs)}


def half_index_identity_check(z, tau, prec: int = DEFAULT_PREC):
    """|(1/2) e^{-pi i z/2 - pi i/4 + pi i tau/16}
        (theta(z/2 - tau/8 - 1/4; tau/4) + i theta(z/2 - tau/8 + 1/4; tau/4))
        - theta(z; tau)|."""
    with mp.workprec(prec + _GUARD_BITS):
        pref = mp.exp(-mp.pi * 1j * z / 2 - mp.pi * 1j / 4
                      + mp.pi * 1j * tau / 16) / 2
        lhs = pref * (theta(z / 2 - tau / 8 - mp.mpf(1) / 4, tau / 4, prec)
                      + 1j * theta(z / 2 - tau / 8 + mp.mpf(1) / 4, tau / 4,
                                   prec))
        return abs(lhs - theta(z, tau, prec))
