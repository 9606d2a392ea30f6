"""Exact Bernoulli and Euler machinery.

Everything here is computed from generating functions by exact series
arithmetic; the classical recurrences only appear in the test suite as
independent oracles.  All values are rational and exact.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import comb, factorial

from .exact_series import ExactQSeries, log1p_series

_cache_lock = threading.Lock()
_bernoulli_cache: list[Fraction] = []


def _exp_w(x: Fraction, trunc: int) -> ExactQSeries:
    """Series of e^{x w} to order w^trunc."""
    x = Fraction(x)
    return ExactQSeries(1, {n: x ** n / factorial(n) for n in range(trunc)},
                        trunc)


def _expm1_over_w(trunc: int) -> ExactQSeries:
    """(e^w - 1)/w to order w^trunc."""
    return ExactQSeries(1, {n: Fraction(1, factorial(n + 1))
                            for n in range(trunc)}, trunc)


def bernoulli_number(k: int) -> Fraction:
    """B_k, from the generating function w/(e^w - 1)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    with _cache_lock:
        if k >= len(_bernoulli_cache):
            n = max(k + 1, 2 * len(_bernoulli_cache), 16)
            gen = _expm1_over_w(n + 1).invert()
            _bernoulli_cache.clear()
            _bernoulli_cache.extend(
                gen.coefficient(j) * factorial(j) for j in range(n))
        return _bernoulli_cache[k]


def bernoulli_poly(n: int, x) -> Fraction:
    x = Fraction(x)
    return sum((comb(n, j) * bernoulli_number(j) * x ** (n - j)
                for j in range(n + 1)), Fraction(0))


def higher_bernoulli_poly(n: int, r: int, x) -> Fraction:
    """B_n^{(r)}(x), coefficient of w^n/n! in (w/(e^w-1))^r e^{xw}."""
    if r < 1:
        raise ValueError("order r must be a positive integer")
    base = _expm1_over_w(n + 1).invert() ** r
    series = base * _exp_w(Fraction(x), n + 1)
    return series.coefficient(n) * factorial(n)


def euler_poly(n: int, x) -> Fraction:
    """E_n(x), coefficient of w^n/n! in 2 e^{xw}/(e^w + 1)."""
    half = ExactQSeries(1, {m: Fraction(1, 2 * factorial(m))
                            for m in range(n + 1)}, n + 1)
    half = half + Fraction(1, 2)  # (e^w + 1)/2
    series = half.invert() * _exp_w(Fraction(x), n + 1)
    return series.coefficient(n) * factorial(n)


def euler_number(n: int) -> Fraction:
    """E_n = 2^n E_n(1/2); cross-checked against the sech series."""
    val = 2 ** n * euler_poly(n, Fraction(1, 2))
    # independent route: sech(w) = 2/(e^w + e^{-w}) = sum E_n w^n / n!
    cosh = ExactQSeries(1, {2 * m: Fraction(1, factorial(2 * m))
                            for m in range(n // 2 + 1)}, n + 1)
    alt = cosh.invert().coefficient(n) * factorial(n)
    assert val == alt, "Euler number routes disagree"
    return val


def check_euler_bernoulli_identity(n: int, m: int, x) -> bool:
    """E_n(m x) = -(2/(n+1)) m^n sum_{k<m} (-1)^k B_{n+1}(x + k/m), m even."""
    if m % 2:
        raise ValueError("m must be even")
    x = Fraction(x)
    lhs = euler_poly(n, m * x)
    rhs = Fraction(-2, n + 1) * m ** n * sum(
        ((-1) ** k * bernoulli_poly(n + 1, x + Fraction(k, m))
         for k in range(m)), Fraction(0))
    return lhs == rhs


def S_coefficients(trunc: int) -> ExactQSeries:
    """The even series sum_{k>=1} B_{2k} w^{2k} / (2k (2k)!)."""
    return ExactQSeries(1, {
        2 * k: bernoulli_number(2 * k) / (2 * k * factorial(2 * k))
        for k in range(1, (trunc + 1) // 2)}, trunc)


def verify_S_identity(trunc: int) -> bool:
    """Check S(w) = Log((e^w - 1)/w) - w/2 coefficientwise."""
    rhs = log1p_series(_expm1_over_w(trunc) - 1) - \
        ExactQSeries(1, {1: Fraction(1, 2)}, trunc)
    return S_coefficients(trunc) == rhs
