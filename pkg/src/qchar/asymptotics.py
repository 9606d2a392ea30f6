"""Leading asymptotics, the constant families C_ell and C*_ell, the exact
residue/binomial identity suite, the full degree-3 expansion, and quantum
dimension ratios.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

import mpmath as mp

from .bernoulli_euler import euler_poly, higher_bernoulli_poly
from .characters import H_value
from .modular_objects import DEFAULT_PREC, _GUARD_BITS
from .partial_theta import AsympExpansion, GradedCoeff, PiGradedRational

__all__ = [
    "PiGradedRational", "C_ell", "C_ell_star", "binomial_reciprocal_identity",
    "exp_pole_residue", "exp_pole_residue_I", "verify_appendix",
    "leading_asym_F", "leading_asym_ch", "sl3_bracket_coefficient",
    "sl3_bracket_expansion", "full_expansion_sl3", "sl3_bracket_value",
    "qdim_ratio", "qdim_slope_report",
]


def C_ell(ell: int) -> PiGradedRational:
    """2^{1-2 ell} (ell-1)! / Gamma((ell+1)/2)^2, kept exact.

    Odd ell: Gamma((ell+1)/2) is an integer factorial, so the value is a
    plain rational.  Even ell: Gamma((ell+1)/2)^2 = pi * (odd factorial
    ratio)^2, so the value carries pi^{-1}.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    base = Fraction(factorial(ell - 1), 2 ** (2 * ell - 1))
    if ell % 2:
        m = (ell - 1) // 2
        return PiGradedRational(base / Fraction(factorial(m)) ** 2, 0)
    m = ell // 2
    # Gamma(m + 1/2) = (2m)! sqrt(pi) / (4^m m!)
    g = Fraction(factorial(2 * m), 4 ** m * factorial(m))
    return PiGradedRational(base / g ** 2, -1)


def C_ell_star(ell: int) -> PiGradedRational:
    """Higher-order-Bernoulli form of the same constant:

    odd ell:  (-1)^{(ell-1)/2} B^{(ell)}_{ell-1}(ell/2) / (2 (ell-1)!),
    even ell: (-1)^{ell/2+1} (1/(2 pi)) B^{(ell)}_{ell-2}(ell/2) / (ell-2)!.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    x = Fraction(ell, 2)
    if ell % 2:
        val = (Fraction((-1) ** ((ell - 1) // 2))
               * higher_bernoulli_poly(ell - 1, ell, x)
               / (2 * factorial(ell - 1)))
        return PiGradedRational(val, 0)
    if ell < 2:
        raise ValueError("even branch needs ell >= 2")
    val = (Fraction((-1) ** (ell // 2 + 1), 2)
           * higher_bernoulli_poly(ell - 2, ell, x) / factorial(ell - 2))
    return PiGradedRational(val, -1)


def binomial_reciprocal_identity(n: int, c: int) -> bool:
    """sum_{k=0}^{n} C(n,k) (-1)^k / (k+c) = n! (c-1)! / (n+c)!, exactly."""
    lhs = sum((Fraction(comb(n, k) * (-1) ** k, k + c)
               for k in range(n + 1)), Fraction(0))
    rhs = Fraction(factorial(n) * factorial(c - 1), factorial(n + c))
    return lhs == rhs


def _binom_general(top: Fraction, k: int) -> Fraction:
    out = Fraction(1)
    for i in range(k):
        out *= top - i
    return out / factorial(k)


def exp_pole_residue(ell: int) -> Fraction:
    """Residue at z=0 of e^{ell z/2}/(e^z - 1)^ell, via exact series:
    coefficient of z^{ell-1} in e^{ell z/2} (z/(e^z-1))^ell,
    i.e. B^{(ell)}_{ell-1}(ell/2)/(ell-1)!."""
    return higher_bernoulli_poly(ell - 1, ell, Fraction(ell, 2)) \
        / factorial(ell - 1)


def exp_pole_residue_I(ell: int) -> Fraction:
    """Residue at z=0 of z e^{ell z/2}/(e^z - 1)^ell (nonzero for even ell):
    B^{(ell)}_{ell-2}(ell/2)/(ell-2)!."""
    if ell < 2:
        raise ValueError("ell must be >= 2")
    return higher_bernoulli_poly(ell - 2, ell, Fraction(ell, 2)) \
        / factorial(ell - 2)


def verify_appendix(ell_max: int = 20) -> dict:
    """Exact identity suite for the constants; raises on any failure."""
    report = {"ell_max": ell_max, "equal": [], "recurrence": [],
              "binomial": True, "residues": []}
    for ell in range(1, ell_max + 1):
        if C_ell(ell) != C_ell_star(ell):
            raise AssertionError(f"C_ell != C_ell_star at ell={ell}")
        report["equal"].append(ell)
    for ell in range(1, ell_max - 1):
        lhs = C_ell(ell + 2)
        rhs = PiGradedRational(Fraction(ell, 4 * (ell + 1))) * C_ell(ell)
        if lhs != rhs:
            raise AssertionError(f"recurrence fails at ell={ell}")
        report["recurrence"].append(ell)
    for n in range(0, 21):
        for c in range(1, 21):
            if not binomial_reciprocal_identity(n, c):
                raise AssertionError(f"binomial identity fails at n={n}, c={c}")
    for ell in range(2, ell_max + 1):
        if ell % 2:
            # closed form: generalized binomial C(ell/2 - 1, ell - 1)
            want = _binom_general(Fraction(ell, 2) - 1, ell - 1)
            got = exp_pole_residue(ell)
        else:
            half = ell // 2
            want = Fraction((-1) ** (half + 1)
                            * factorial(half - 1) ** 2, factorial(ell - 1))
            got = exp_pole_residue_I(ell)
        if want != got:
            raise AssertionError(f"residue closed form fails at ell={ell}")
        report["residues"].append(ell)
    return report


def leading_asym_F(ell: int, s: int) -> AsympExpansion:
    """One-term model C_ell (t/2pi)^{1 - ell^2/2} e^{-pi^2 (ell^2-2 ell)/(6t)}
    for F_{ell,s}(e^{-t}); independent of s by construction."""
    if ell < 3:
        raise ValueError("ell must be >= 3")
    C = C_ell(ell)
    p = Fraction(2 - ell * ell, 2)  # 1 - ell^2/2
    coeff = GradedCoeff(C.rat, -p, Fraction(C.pi_pow) - p)
    return AsympExpansion(a_rat=-Fraction(ell * ell - 2 * ell, 6), a_pi_pow=2,
                          terms={p: coeff}, order=p + 1)


def leading_asym_ch(ell: int, s: int) -> AsympExpansion:
    """One-term model C_ell sqrt(t/2pi) e^{pi^2 (2 ell - 1)/(6t)} for the
    character value at q = e^{-t}; independent of s."""
    if ell < 3:
        raise ValueError("ell must be >= 3")
    C = C_ell(ell)
    p = Fraction(1, 2)
    coeff = GradedCoeff(C.rat, -p, Fraction(C.pi_pow) - p)
    return AsympExpansion(a_rat=Fraction(2 * ell - 1, 6), a_pi_pow=2,
                          terms={p: coeff}, order=p + 1)


def sl3_bracket_coefficient(s: int, m: int) -> tuple:
    """Collected t^m coefficient (m >= -2) of the bracket

        X(t) = (pi^2/(4 t^2) - 3/(4 t)) sum_n E_{2n}(x_s)/n! (-3t/2)^n
               + (9/4) sum_n E_{2n+2}(x_s)/n! (-3t/2)^n,

    with x_s = 1/2 - s/3; returned as a tuple of :class:`GradedCoeff`
    (a pi^2 part and a rational part)."""
    if m < -2:
        raise ValueError("m must be >= -2")
    x_s = Fraction(1, 2) - Fraction(s, 3)
    pi2 = Fraction(0)
    rat = Fraction(0)
    if m + 2 >= 0:
        pi2 += Fraction(1, 4) * euler_poly(2 * m + 4, x_s) \
            * Fraction(-3, 2) ** (m + 2) / factorial(m + 2)
    if m + 1 >= 0:
        rat -= Fraction(3, 4) * euler_poly(2 * m + 2, x_s) \
            * Fraction(-3, 2) ** (m + 1) / factorial(m + 1)
    if m >= 0:
        rat += Fraction(9, 4) * euler_poly(2 * m + 2, x_s) \
            * Fraction(-3, 2) ** m / factorial(m)
    return tuple(c for c in (GradedCoeff(pi2, Fraction(0), Fraction(2)),
                             GradedCoeff(rat)) if c.rat)


def sl3_bracket_expansion(s: int, N: int) -> AsympExpansion:
    """sum_{m=-2}^{N} x_m t^m with the collected coefficients above;
    error O(t^{N+1})."""
    terms = {Fraction(m): sl3_bracket_coefficient(s, m)
             for m in range(-2, N + 1)}
    return AsympExpansion(terms=terms, order=Fraction(N + 1))


def full_expansion_sl3(s: int, N: int) -> AsympExpansion:
    """Character expansion at q = e^{-t} for degree 3:

        ch = e^{5 pi^2/(6t)} (t/2pi)^{5/2} [ sum_{m=-2}^{N} x_m t^m
                                             + O(t^{N+1}) ].
    """
    shift = Fraction(5, 2)
    terms = {}
    for m in range(-2, N + 1):
        cs = sl3_bracket_coefficient(s, m)
        terms[Fraction(m) + shift] = tuple(
            GradedCoeff(c.rat, c.two_pow - shift, c.pi_pow - shift)
            for c in cs)
    return AsympExpansion(a_rat=Fraction(5, 6), a_pi_pow=2, terms=terms,
                          order=shift + N + 1)


def sl3_bracket_value(s: int, t, prec: int = DEFAULT_PREC):
    """Numeric bracket X(t) = i * H_{s+3/2}(i t / (2 pi)); real up to
    exponentially small error."""
    with mp.workprec(prec + _GUARD_BITS):
        t = mp.mpf(t)
        tau = 1j * t / (2 * mp.pi)
        return mp.re(1j * H_value(3, s, tau, prec))


def qdim_ratio(ell: int, s: int, t, prec: int = DEFAULT_PREC):
    """ch[V_s]/ch[V_0] at tau = i t; the eta factors cancel, leaving
    H_{s+ell/2}(it)/H_{ell/2}(it)."""
    if s == 0:
        return mp.mpf(1)
    with mp.workprec(prec + _GUARD_BITS):
        tau = 1j * mp.mpf(t)
        num = H_value(ell, s, tau, prec)
        den = H_value(ell, 0, tau, prec)
        return mp.re(num / den)


def qdim_slope_report(ell: int = 3, s: int = 1,
                      t_pair=("0.02", "0.01"),
                      prec: int = DEFAULT_PREC) -> dict:
    """Richardson estimate of the small-t slope of the quantum-dimension
    ratio, compared against the reference value -s^2 (pi^2 - 1)/(3 pi).

    The measured slope is what the code trusts; the comparison outcome is
    reported, not asserted.
    """
    with mp.workprec(prec + _GUARD_BITS):
        t1, t2 = (mp.mpf(x) for x in t_pair)
        s1 = (qdim_ratio(ell, s, t1, prec) - 1) / t1
        s2 = (qdim_ratio(ell, s, t2, prec) - 1) / t2
        # slope(t) = a + b t + ...; eliminate b with the two-point rule
        richardson = (t1 * s2 - t2 * s1) / (t1 - t2)
        reference = -s * s * (mp.pi ** 2 - 1) / (3 * mp.pi)
        rel_dev = abs(richardson - reference) / abs(reference)
        return {
            "measured_slope": richardson,
            "reference_slope": reference,
            "relative_deviation": rel_dev,
            "within_5_percent": bool(rel_dev <= mp.mpf("0.05")),
        }
