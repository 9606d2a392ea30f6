"""Exact character series and their two computation routes.

F_{ell,s}(q) is defined by coefficient extraction from an infinite
Pochhammer ratio:

    F_{ell,s}(q) = (q)_inf^{ell^2} * coeff_{zeta^s}
                   [ 1 / ((zeta)_inf^ell (zeta^{-1} q)_inf^ell) ],

and independently by a partial-theta / quasimodular sum.  Exact agreement of
the two routes is the primary correctness alarm of the whole package.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import mpmath as mp

from .exact_series import (ExactQSeries, euler_product, euler_product_pow,
                           poch_ratio_bivariate)
from .modular_objects import (DEFAULT_PREC, _GUARD_BITS, _require_upper_half,
                              NearPoleError, cexp, euler_phi_numeric, g_ell,
                              laurent_coefficients_D, qpoch_inf, _tol)


class RouteMismatchError(ValueError):
    """The two exact routes to F_{ell,s} disagree."""

    def __init__(self, ell, s, first_exponent):
        self.ell = ell
        self.s = s
        self.first_exponent = first_exponent
        super().__init__(
            f"route mismatch for ell={ell}, s={s}: first differing "
            f"q-exponent {first_exponent}")


@dataclass(frozen=True)
class CharacterParams:
    ell: int
    s: int
    trunc: int

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError("ell must be >= 2")
        if self.s < 0:
            raise ValueError("s must be >= 0")
        if self.trunc < 1:
            raise ValueError("trunc must be >= 1")


def h_s(ell: int, s: int) -> Fraction:
    """Conformal weight s^2/(2 ell) + s/2."""
    return Fraction(s * s, 2 * ell) + Fraction(s, 2)


def central_charge(ell: int) -> int:
    return -(ell + 1)


# ------------------------------------------------ route 1: extraction


_bivar_lock = threading.Lock()
_bivar_cache: dict[tuple, object] = {}


def _bivariate_state(ell: int, s_max: int, trunc: int):
    key = (ell, s_max, trunc)
    with _bivar_lock:
        hit = _bivar_cache.get(key)
    if hit is not None:
        return hit
    state = poch_ratio_bivariate(ell, s_max, trunc)
    with _bivar_lock:
        _bivar_cache[key] = state
    return state


def coeff_series_exact(ell: int, s: int, trunc: int) -> ExactQSeries:
    """coeff_{zeta^s} [1/((zeta)_inf^ell (zeta^{-1}q)_inf^ell)] to q^trunc.

    All coefficients are nonnegative integers (the ratio is a product of
    geometric series with nonnegative coefficients); asserted.
    """
    series = _bivariate_state(ell, s, trunc).zeta_coefficient(s)
    for e, c in series.coeffs.items():
        if c.denominator != 1 or c < 0:
            raise AssertionError(
                f"extraction produced non-integer/negative coefficient at "
                f"q^{e}")
    return series


def F_ls_exact(params: CharacterParams) -> ExactQSeries:
    """F_{ell,s} by coefficient extraction; integer coefficients asserted."""
    ell, s, trunc = params.ell, params.s, params.trunc
    series = coeff_series_exact(ell, s, trunc)
    out = (euler_product_pow(ell * ell, trunc) * series).truncate(trunc)
    for e, c in out.coeffs.items():
        if c.denominator != 1:
            raise AssertionError(f"non-integer coefficient at q^{e}")
    return out


# ------------------------------------- route 2: partial theta / quasimodular


def _lattice_exponent(ell: int, s: int, n: int) -> int:
    """Exponent of q in q^{-h_s - ell/8} q^{(ell n + ell/2 - s)^2/(2 ell)};
    always an integer."""
    a = Fraction(2 * ell * n + ell - 2 * s, 2)  # ell n + ell/2 - s
    e = a * a / (2 * ell) - h_s(ell, s) - Fraction(ell, 8)
    assert e.denominator == 1, "lattice exponent not integral"
    assert e == Fraction((ell * n - 2 * s) * (n + 1), 2)
    return int(e)


def _F_ls_via_H_series(ell: int, s: int, trunc: int) -> ExactQSeries:
    """The partial-theta route without the cross-check (see F_ls_via_H)."""
    T2 = trunc + s + 1
    D_polys = laurent_coefficients_D(ell)
    total = ExactQSeries.zero(trunc)
    for j in range(1, ell + 1):
        if (ell - j) % 2:
            continue
        # rational part of i^ell D_{-j}: the phases cancel exactly
        ehat = D_polys[j - 1].as_qseries(T2)
        inner: dict[int, Fraction] = {}
        n = 0
        while True:
            e = _lattice_exponent(ell, s, n)
            if e >= T2:
                break
            a = Fraction(2 * ell * n + ell - 2 * s, 2)
            c = Fraction((-1) ** (n * ell)) * a ** (j - 1)
            inner[e] = inner.get(e, Fraction(0)) + c
            n += 1
        S_j = ExactQSeries(1, inner, T2)
        total = total + (ehat * S_j) * Fraction(1, factorial(j - 1))
    out = total * euler_product_pow(ell * ell - 2 * ell, trunc + s + 1)
    return out.truncate(trunc)


def F_ls_via_H(params: CharacterParams) -> ExactQSeries:
    """F_{ell,s} via the quasimodular/partial-theta representation.

    Asserted identical to the extraction route; a mismatch raises
    :class:`RouteMismatchError` carrying the first differing exponent.
    """
    out = _F_ls_via_H_series(params.ell, params.s, params.trunc)
    ref = F_ls_exact(params)
    diff = out.first_difference(ref)
    if diff is not None:
        raise RouteMismatchError(params.ell, params.s, diff)
    return out


# ----------------------------------------------------------------- character


def character_ch(params: CharacterParams) -> ExactQSeries:
    """Character series q^{h_s - c/24} (q)_inf * coeff_{zeta^s}[...].

    Coefficients are nonnegative integers (graded multiplicities); the
    leading term is binomial(s+ell-1, ell-1) q^{h_s - c/24}.
    """
    ell, s, trunc = params.ell, params.s, params.trunc
    series = coeff_series_exact(ell, s, trunc)
    ch = (euler_product(trunc) * series).truncate(trunc)
    for e, c in ch.coeffs.items():
        if c.denominator != 1 or c < 0:
            raise ValueError(
                f"character coefficient at q^{e} is not a nonnegative "
                f"integer: {c}")
    lead = h_s(ell, s) - Fraction(central_charge(ell), 24)
    ch = ch.shift(lead)
    assert ch.coefficient(lead) == comb(s + ell - 1, ell - 1)
    return ch


# ------------------------------------------------------------ numeric routes


def H_value(ell: int, s: int, tau, prec: int = DEFAULT_PREC):
    """H_{s + ell/2}(tau) = (-1)^ell sum_{j = ell (mod 2)} D_{-j}(tau)/(j-1)!
    * sum_{n>=0} (-1)^{n eps} (ell n + ell/2 - s)^{j-1}
      e^{2 pi i tau (ell n + ell/2 - s)^2 / (2 ell)},  eps = ell mod 2."""
    _require_upper_half(tau)
    eps = ell % 2
    D_polys = laurent_coefficients_D(ell)
    with mp.workprec(prec + _GUARD_BITS):
        v = mp.im(tau)
        log_tol = -(prec + 8) * mp.log(2)
        acc = mp.mpc(0)
        for j in range(1, ell + 1):
            if (ell - j) % 2:
                continue
            Dval = D_polys[j - 1].evaluate(tau, prec)
            inner = mp.mpc(0)
            n = 0
            while True:
                a = mp.mpf(2 * ell * n + ell - 2 * s) / 2
                inner += (-1) ** (n * eps) * a ** (j - 1) * mp.exp(
                    2j * mp.pi * tau * a * a / (2 * ell))
                log_bound = (-2 * mp.pi * v * a * a / (2 * ell)
                             + (j - 1) * mp.log(abs(a) + 2))
                if a > 0 and log_bound < log_tol:
                    break
                n += 1
            acc += Dval / factorial(j - 1) * inner
        return (-1) ** ell * acc


def fourier_coeff_by_quadrature(ell: int, s: int, tau, z0_imag=None,
                                prec: int = DEFAULT_PREC,
                                max_doublings: int = 22):
    """q^{r^2/(2 ell)} * integral over [z0, z0+1] of g_ell(z) e^{-2 pi i r z} dz
    with r = s + ell/2, along the horizontal contour Im z = z0_imag.

    Trapezoid rule with node doubling; the integrand is 1-periodic and
    analytic on the contour, so convergence is exponential.
    """
    _require_upper_half(tau)
    with mp.workprec(prec + _GUARD_BITS):
        v = mp.im(tau)
        y0 = mp.mpf(z0_imag) if z0_imag is not None else v / 2
        if not 0 < y0 < v:
            raise ValueError("contour height must satisfy 0 < y0 < Im tau")
        r = mp.mpf(2 * s + ell) / 2
        tol = _tol(prec - 10)

        def f(x):
            z = x + 1j * y0
            return g_ell(z, tau, ell, prec) * mp.exp(-2j * mp.pi * r * z)

        N = 32
        vals = [f(mp.mpf(k) / N) for k in range(N)]
        est = mp.fsum(vals) / N
        for _ in range(max_doublings):
            new = [f(mp.mpf(2 * k + 1) / (2 * N)) for k in range(N)]
            est2 = (mp.fsum(vals) + mp.fsum(new)) / (2 * N)
            vals = vals + new
            N *= 2
            if abs(est2 - est) < tol * max(1, abs(est2)):
                est = est2
                break
            est = est2
        else:
            raise RuntimeError("quadrature did not stabilize")
        return mp.exp(2j * mp.pi * tau * r * r / (2 * ell)) * est


def F_ls_numeric(ell: int, s: int, t, prec: int = DEFAULT_PREC,
                 rel_tol=mp.mpf("1e-12")):
    """Certified numeric value of F_{ell,s}(e^{-t}) for real t > 0.

    The head comes from the exact partial-theta-route series; the dropped
    tail of the nonnegative-coefficient extraction series G_s is bounded by

        sum_{n>=T} b_n q^n <= q1^{-s/2} Phi(q1) (q/q1)^T / (1 - q/q1),

    with q1 = sqrt(q) and Phi(q1) = (q1; q1^2)_inf^{-2 ell}, valid because
    b_n <= x^{-s} q1^{-n} * [value of the bivariate product at (x, q1)] for
    any admissible x; x = q1^{1/2} keeps every factor convergent.
    Returns (value, certified absolute error bound).
    """
    with mp.workprec(prec + _GUARD_BITS):
        t = mp.mpf(t)
        if t <= 0:
            raise ValueError("t must be positive")
        q = mp.exp(-t)
        q1 = mp.sqrt(q)
        phi = euler_phi_numeric(q, _tol(prec))
        Phi = qpoch_inf(q1 ** mp.mpf("0.5"), q1, _tol(prec)) ** (-2 * ell)
        T = max(40, int(8 / t))
        while True:
            series = _F_ls_via_H_series(ell, s, T)
            # G_s = F / (q)^{ell^2}; recovered cheaply and positivity-checked
            G = (series * euler_product_pow(-ell * ell, T)).truncate(T)
            bad = [e for e, c in G.coeffs.items()
                   if c.denominator != 1 or c < 0]
            if bad:
                raise AssertionError(
                    f"extraction series has unexpected coefficient at "
                    f"q^{min(bad)}")
            head = mp.fsum(
                mp.mpf(c.numerator) * q ** e for e, c in sorted(G.coeffs.items()))
            tail = (q1 ** (-mp.mpf(s) / 2) * Phi * (q / q1) ** T
                    / (1 - q / q1))
            value = phi ** (ell * ell) * head
            bound = phi ** (ell * ell) * tail
            if bound <= rel_tol * abs(value):
                return value, bound
            if T > 100_000:
                raise RuntimeError("tail bound not met at feasible order")
            T *= 2
