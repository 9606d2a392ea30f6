"""Numeric eta/theta/Eisenstein evaluation and quasimodular Laurent data.

Numeric routines work at a caller-chosen binary precision (default 256 bits)
and stop their series/products only once a certified geometric tail bound
drops below the target tolerance.

Branch rule used throughout: powers q^x with non-integer x are never formed
from a complex q; exponentials are always assembled as e^{2*pi*i*tau*x}.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from math import factorial

import mpmath as mp

from .bernoulli_euler import bernoulli_number
from .exact_series import ExactQSeries

DEFAULT_PREC = 256
_GUARD_BITS = 24


class NearPoleError(ValueError):
    """Evaluation point too close to a pole/zero for the working precision."""


def cexp(w):
    """e^{2 pi i w}."""
    return mp.exp(2j * mp.pi * w)


def _require_upper_half(tau):
    if not mp.im(tau) > 0:
        raise ValueError("tau must lie in the upper half-plane")


def _tol(prec: int):
    return mp.mpf(2) ** (-prec)


def divisor_sigma_list(power: int, n_max: int) -> list[int]:
    """[sigma_power(0..n_max)] by sieve; index 0 unused (set to 0)."""
    out = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        dp = d ** power
        for n in range(d, n_max + 1, d):
            out[n] += dp
    return out


def euler_phi_numeric(q, tol):
    """(q)_infty via the pentagonal-number sum, tail-certified."""
    total = mp.mpf(1)
    k = 1
    absq = abs(q)
    if not absq < 1:
        raise ValueError("need |q| < 1")
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        total += (-1) ** k * (q ** e1 + q ** e2)
        # remaining exponents are >= (k+1)(3k+2)/2; geometric domination
        bound = 2 * absq ** ((k + 1) * (3 * k + 2) // 2) / (1 - absq)
        if bound < tol:
            return total
        k += 1


def qpoch_inf(a, q, tol):
    """(a; q)_infty = prod_{j>=0} (1 - a q^j), tail-certified."""
    absq = abs(q)
    if not absq < 1:
        raise ValueError("need |q| < 1")
    total = mp.mpf(1)
    fac = mp.mpf(1) * a
    j = 0
    while True:
        total *= 1 - fac
        fac *= q
        j += 1
        bound = abs(fac) / (1 - absq)
        if bound < tol / 2:
            # log(1-x) ~ -x domination for the remaining factors
            return total
        if j > 10_000_000:
            raise RuntimeError("qpoch_inf failed to converge")


def eta(tau, prec: int = DEFAULT_PREC):
    """Dedekind eta, q^{1/24}(q)_infty."""
    _require_upper_half(tau)
    with mp.workprec(prec + _GUARD_BITS):
        q = cexp(tau)
        return cexp(tau / 24) * euler_phi_numeric(q, _tol(prec))


def eta_qseries(trunc: int) -> ExactQSeries:
    """Exact series q^{1/24} prod (1-q^n), on the 1/24 lattice."""
    from .exact_series import euler_product
    return euler_product(trunc).shift(Fraction(1, 24))


def theta(z, tau, prec: int = DEFAULT_PREC):
    """Odd Jacobi theta, sum over n in 1/2+Z of q^{n^2/2} e^{2 pi i n(z+1/2)}."""
    _require_upper_half(tau)
    with mp.workprec(prec + _GUARD_BITS):
        tol = _tol(prec)
        v = mp.im(tau)
        y = abs(mp.im(z))
        total = mp.mpc(0)
        m = 0
        while True:
            n = m + mp.mpf(1) / 2
            for sgn in (1, -1):
                nn = sgn * n
                total += mp.exp(mp.pi * 1j * tau * nn * nn
                                + 2j * mp.pi * nn * (z + mp.mpf(1) / 2))
            # |term| <= e^{-pi v n^2 + 2 pi y n}; ratio of consecutive bounds
            # is e^{-pi v (2n+1) + 2 pi y}, eventually < 1/2
            bound = 2 * mp.exp(-mp.pi * v * n * n + 2 * mp.pi * y * n)
            if m > (2 * y + 1) / v and bound < tol:
                return total
            m += 1


def theta_product(z, tau, prec: int = DEFAULT_PREC):
    """Triple-product route: -i q^{1/8} zeta^{-1/2} (q)(zeta)(zeta^{-1}q)."""
    _require_upper_half(tau)
    with mp.workprec(prec + _GUARD_BITS):
        tol = _tol(prec)
        q = cexp(tau)
        zeta = cexp(z)
        return (-1j * cexp(tau / 8) * cexp(-z / 2)
                * euler_phi_numeric(q, tol)
                * qpoch_inf(zeta, q, tol)
                * qpoch_inf(q / zeta, q, tol))


def _G2k_series_value(k: int, tau, prec: int):
    tol = _tol(prec)
    q = cexp(tau)
    absq = abs(q)
    two_pi_i = 2j * mp.pi
    const = -(two_pi_i ** (2 * k)) * mp.mpf(
        bernoulli_number(2 * k).numerator) / bernoulli_number(2 * k).denominator \
        / factorial(2 * k)
    # choose N with sigma_{2k-1}(n) <= n^{2k} and n^{2k}|q|^n geometric beyond N
    N = 8
    while True:
        bound = (2 * abs(two_pi_i ** (2 * k)) / factorial(2 * k - 1)
                 * mp.mpf(N + 1) ** (2 * k) * absq ** (N + 1)
                 / (1 - absq ** mp.mpf("0.5")))
        # successive-term ratio <= e^{2k/(N+1)} |q| must stay below sqrt|q|
        if bound < tol and mp.exp(mp.mpf(2 * k) / (N + 1)) * absq \
                <= absq ** mp.mpf("0.5"):
            break
        N *= 2
        if N > 60_000_000:
            raise RuntimeError("Eisenstein series not converging; transform tau")
    sig = divisor_sigma_list(2 * k - 1, N)
    qn = mp.mpc(1)
    acc = mp.mpc(0)
    for n in range(1, N + 1):
        qn *= q
        acc += sig[n] * qn
    return const + 2 * two_pi_i ** (2 * k) / factorial(2 * k - 1) * acc


def eisenstein_G2k(k: int, tau, prec: int = DEFAULT_PREC, _depth: int = 0):
    """G_{2k}(tau); applies the S-transform when |q| is close to 1.

    G_{2k}(tau) = tau^{-2k} G_{2k}(-1/tau), with the extra 2*pi*i/tau
    anomaly for k = 1.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    _require_upper_half(tau)
    with mp.workprec(prec + _GUARD_BITS):
        if mp.im(tau) < mp.mpf(1) / 2 and _depth < 3:
            inner = eisenstein_G2k(k, -1 / tau, prec, _depth + 1)
            val = tau ** (-2 * k) * inner
            if k == 1:
                val += 2j * mp.pi / tau
            return val
        return _G2k_series_value(k, tau, prec)


def ghat_value(k2: int, tau, prec: int = DEFAULT_PREC):
    """G_{2k}/(2 pi i)^{2k} for even k2 = 2k."""
    if k2 % 2:
        raise ValueError("k2 must be even")
    with mp.workprec(prec + _GUARD_BITS):
        return eisenstein_G2k(k2 // 2, tau, prec) / (2j * mp.pi) ** k2


def ghat_qseries(k2: int, trunc: int) -> ExactQSeries:
    """Exact q-expansion of G_{2k}/(2 pi i)^{2k}:
    -B_{2k}/(2k)! + (2/(2k-1)!) sum sigma_{2k-1}(n) q^n."""
    if k2 % 2 or k2 < 2:
        raise ValueError("k2 must be a positive even integer")
    sig = divisor_sigma_list(k2 - 1, max(trunc - 1, 0))
    coeffs = {0: -bernoulli_number(k2) / factorial(k2)}
    for n in range(1, trunc):
        coeffs[n] = Fraction(2 * sig[n], factorial(k2 - 1))
    return ExactQSeries(1, coeffs, trunc)


_MONO_EMPTY: tuple = ()


def _mono_mul(a: tuple, b: tuple) -> tuple:
    d: dict[int, int] = {}
    for k, m in a:
        d[k] = d.get(k, 0) + m
    for k, m in b:
        d[k] = d.get(k, 0) + m
    return tuple(sorted(d.items()))


def _mono_weight(mono: tuple) -> int:
    return sum(k * m for k, m in mono)


class QuasimodularPoly:
    """Polynomial in normalized Eisenstein series Ghat_{2k} = G_{2k}/(2 pi i)^{2k},
    with rational coefficients and a global phase i^i_power.

    A monomial key is a sorted tuple of (2k, multiplicity) pairs; every
    monomial must have total weight (sum of 2k*multiplicity) equal to the
    declared weight.
    """

    __slots__ = ("weight", "i_power", "monomials")

    def __init__(self, weight: int, i_power: int, monomials: dict):
        self.weight = int(weight)
        self.i_power = int(i_power) % 4
        clean = {}
        for mono, coeff in monomials.items():
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            if _mono_weight(mono) != self.weight:
                raise ValueError(
                    f"monomial {mono} has weight {_mono_weight(mono)}, "
                    f"declared {self.weight}")
            clean[tuple(mono)] = coeff
        self.monomials = clean

    @property
    def is_zero(self) -> bool:
        return not self.monomials

    def evaluate(self, tau, prec: int = DEFAULT_PREC):
        with mp.workprec(prec + _GUARD_BITS):
            acc = mp.mpc(0)
            for mono, coeff in sorted(self.monomials.items()):
                term = mp.mpf(coeff.numerator) / coeff.denominator
                for k2, mult in mono:
                    term *= ghat_value(k2, tau, prec) ** mult
                acc += term
            return (1j) ** self.i_power * acc

    def as_qseries(self, trunc: int) -> ExactQSeries:
        """Exact rational q-expansion, dropping the i^i_power phase
        (the caller owns the phase; see i_power)."""
        acc = ExactQSeries.zero(trunc)
        for mono, coeff in sorted(self.monomials.items()):
            term = ExactQSeries.one(trunc) * coeff
            for k2, mult in mono:
                term = term * (ghat_qseries(k2, trunc) ** mult)
            acc = acc + term
        return acc

    def __eq__(self, other):
        if not isinstance(other, QuasimodularPoly):
            return NotImplemented
        if self.is_zero and other.is_zero:
            return self.weight == other.weight
        return (self.weight == other.weight
                and self.i_power == other.i_power
                and self.monomials == other.monomials)

    def __repr__(self):
        return (f"QuasimodularPoly(weight={self.weight}, "
                f"i_power={self.i_power}, monomials={self.monomials})")

    def to_json(self) -> dict:
        return {
            "weight": self.weight,
            "i_power": self.i_power,
            "monomials": [
                {"coeff": f"{c.numerator}/{c.denominator}",
                 "powers": {f"G{k2}": m for k2, m in mono}}
                for mono, c in sorted(self.monomials.items())],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "QuasimodularPoly":
        monos = {}
        for entry in obj["monomials"]:
            mono = tuple(sorted((int(name[1:]), int(m))
                                for name, m in entry["powers"].items()))
            monos[mono] = Fraction(entry["coeff"])
        return cls(obj["weight"], obj["i_power"], monos)


_D_cache_lock = threading.Lock()
_D_cache: dict[int, list[QuasimodularPoly]] = {}


def laurent_coefficients_D(ell: int) -> list[QuasimodularPoly]:
    """[D_{-1}, ..., D_{-ell}] for g_ell(z) = sum_j D_{-j}/(2 pi i z)^j + O(1).

    Derived from theta(z) = -2 pi z eta^3 exp(-sum G_{2k}/(2k) z^{2k}):
    D_{-j} = (-i)^ell * [u^{ell-j}] exp(ell * sum_k Ghat_{2k} u^{2k}/(2k)),
    so each D_{-j} is i^{-ell} times a rational polynomial in the Ghat's,
    homogeneous of weight ell - j, and vanishes unless j = ell (mod 2).
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    with _D_cache_lock:
        if ell in _D_cache:
            return _D_cache[ell]
    L = ell  # track u-powers 0..ell-1
    # A(u) = ell * sum Ghat_{2k} u^{2k}/(2k)
    A: list[dict] = [dict() for _ in range(L)]
    for k2 in range(2, L, 2):
        A[k2] = {((k2, 1),): Fraction(ell, k2)}
    E: list[dict] = [dict() for _ in range(L)]
    E[0] = {_MONO_EMPTY: Fraction(1)}
    Apow: list[dict] = [dict() for _ in range(L)]
    Apow[0] = {_MONO_EMPTY: Fraction(1)}
    for p in range(1, L):
        new: list[dict] = [dict() for _ in range(L)]
        for i, layer in enumerate(Apow):
            for mono1, c1 in layer.items():
                for j2 in range(2, L - i):
                    for mono2, c2 in A[j2].items():
                        mono = _mono_mul(mono1, mono2)
                        tgt = new[i + j2]
                        tgt[mono] = tgt.get(mono, Fraction(0)) + c1 * c2
        Apow = new
        fp = Fraction(1, factorial(p))
        for i in range(L):
            for mono, c in Apow[i].items():
                E[i][mono] = E[i].get(mono, Fraction(0)) + c * fp
    i_power = (-ell) % 4
    out = []
    for j in range(1, ell + 1):
        if (ell - j) % 2:
            out.append(QuasimodularPoly(ell - j, i_power, {}))
        else:
            out.append(QuasimodularPoly(ell - j, i_power, E[ell - j]))
    with _D_cache_lock:
        _D_cache[ell] = out
    return out


def g_ell(z, tau, ell: int, prec: int = DEFAULT_PREC):
    """eta(tau)^{3 ell} / theta(z; tau)^ell; errors out near theta zeros."""
    _require_upper_half(tau)
    with mp.workprec(prec + _GUARD_BITS):
        th = theta(z, tau, prec)
        if abs(th) < mp.mpf(2) ** (-prec // 2):
            raise NearPoleError("z too close to a lattice point of theta")
        return eta(tau, prec) ** (3 * ell) / th ** ell
