"""Exact truncated series arithmetic.

Two kinds of objects live here:

* :class:`ExactQSeries` -- truncated Laurent series in ``q^(1/D)`` with exact
  rational coefficients.  All exponents are stored as integers over a
  per-series lattice denominator ``D``, so arithmetic never touches floating
  point.  Truncation orders are tracked through every operation: a series
  knows exactly up to which exponent its coefficients are guaranteed.

* :class:`ZetaQSeries` -- a bivariate series in an auxiliary variable
  ``zeta`` and integer powers of ``q``, used to extract Fourier coefficients
  of infinite Pochhammer products expanded in the region ``|q| < |zeta| < 1``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from math import comb, gcd, factorial


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class ExactQSeries:
    """Truncated series ``sum_e c_e q^(e/D)`` with rational ``c_e``.

    Coefficients are valid strictly below ``trunc`` (in units of ``1/D``).
    """

    __slots__ = ("D", "coeffs", "trunc")

    def __init__(self, D: int, coeffs: dict, trunc: int):
        if D <= 0:
            raise ValueError("lattice denominator must be positive")
        self.D = D
        self.trunc = trunc
        self.coeffs = {int(e): Fraction(c) for e, c in coeffs.items()
                       if c and e < trunc}

    # ---------------------------------------------------------- constructors

    @classmethod
    def from_terms(cls, terms: dict, trunc, D: int = 1) -> "ExactQSeries":
        """Build from a map ``Fraction exponent -> coefficient``.

        ``D`` is enlarged as needed so every exponent lands on the lattice.
        """
        D_all = D
        items = []
        for e, c in terms.items():
            e = Fraction(e)
            items.append((e, Fraction(c)))
            D_all = _lcm(D_all, e.denominator)
        trunc = Fraction(trunc)
        D_all = _lcm(D_all, trunc.denominator)
        return cls(D_all,
                   {int(e * D_all): c for e, c in items},
                   int(trunc * D_all))

    @classmethod
    def one(cls, trunc: int, D: int = 1) -> "ExactQSeries":
        return cls(D, {0: Fraction(1)}, trunc)

    @classmethod
    def zero(cls, trunc: int, D: int = 1) -> "ExactQSeries":
        return cls(D, {}, trunc)

    @classmethod
    def monomial(cls, exp, coeff, trunc, D: int = 1) -> "ExactQSeries":
        return cls.from_terms({Fraction(exp): Fraction(coeff)}, trunc, D)

    # -------------------------------------------------------------- queries

    @property
    def min_exp(self) -> int:
        """Smallest stored exponent in units of ``1/D`` (trunc if zero)."""
        return min(self.coeffs) if self.coeffs else self.trunc

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exp) -> Fraction:
        """Coefficient of ``q^exp`` (``exp`` a Fraction or int)."""
        e = Fraction(exp) * self.D
        if e.denominator != 1:
            return Fraction(0)
        e = int(e)
        if e >= self.trunc:
            raise ValueError(
                f"coefficient at q^{exp} is beyond the truncation order")
        return self.coeffs.get(e, Fraction(0))

    def trunc_exponent(self) -> Fraction:
        return Fraction(self.trunc, self.D)

    def terms(self):
        """Sorted list of ``(Fraction exponent, coefficient)`` pairs."""
        return [(Fraction(e, self.D), c) for e, c in sorted(self.coeffs.items())]

    # ------------------------------------------------------------ rescaling

    def rescale(self, D_new: int) -> "ExactQSeries":
        if D_new == self.D:
            return self
        if D_new % self.D:
            raise ValueError("can only rescale to a multiple of D")
        f = D_new // self.D
        return ExactQSeries(D_new, {e * f: c for e, c in self.coeffs.items()},
                            self.trunc * f)

    def _common(self, other: "ExactQSeries"):
        D = _lcm(self.D, other.D)
        return self.rescale(D), other.rescale(D)

    # ----------------------------------------------------------- arithmetic

    def __neg__(self) -> "ExactQSeries":
        return ExactQSeries(self.D, {e: -c for e, c in self.coeffs.items()},
                            self.trunc)

    def __add__(self, other) -> "ExactQSeries":
        if isinstance(other, (int, Fraction)):
            other = ExactQSeries(self.D, {0: Fraction(other)}, self.trunc)
        a, b = self._common(other)
        trunc = min(a.trunc, b.trunc)
        out = dict(a.coeffs)
        for e, c in b.coeffs.items():
            out[e] = out.get(e, Fraction(0)) + c
        return ExactQSeries(a.D, out, trunc)

    __radd__ = __add__

    def __sub__(self, other) -> "ExactQSeries":
        return self + (-other if isinstance(other, ExactQSeries) else -Fraction(other))

    def __rsub__(self, other) -> "ExactQSeries":
        return (-self) + other

    def __mul__(self, other) -> "ExactQSeries":
        if isinstance(other, (int, Fraction)):
            c0 = Fraction(other)
            return ExactQSeries(self.D, {e: c * c0 for e, c in self.coeffs.items()},
                                self.trunc)
        a, b = self._common(other)
        # standard truncation rule: the unknown tail of one factor meets the
        # lowest exponent of the other
        trunc = min(a.trunc + b.min_exp, b.trunc + a.min_exp)
        out: dict = {}
        for e1, c1 in a.coeffs.items():
            for e2, c2 in b.coeffs.items():
                e = e1 + e2
                if e < trunc:
                    out[e] = out.get(e, Fraction(0)) + c1 * c2
        return ExactQSeries(a.D, out, trunc)

    __rmul__ = __mul__

    def shift(self, exp) -> "ExactQSeries":
        """Multiply by the monomial ``q^exp``."""
        exp = Fraction(exp)
        D = _lcm(self.D, exp.denominator)
        s = self.rescale(D)
        d = int(exp * D)
        return ExactQSeries(D, {e + d: c for e, c in s.coeffs.items()},
                            s.trunc + d)

    def truncate(self, new_trunc) -> "ExactQSeries":
        t = Fraction(new_trunc) * self.D
        if t.denominator != 1:
            raise ValueError("truncation order must lie on the lattice")
        t = min(int(t), self.trunc)
        return ExactQSeries(self.D, {e: c for e, c in self.coeffs.items() if e < t}, t)

    def invert(self) -> "ExactQSeries":
        """Multiplicative inverse; requires a nonzero leading coefficient."""
        if self.is_zero():
            raise ZeroDivisionError("non-invertible: zero series")
        m = self.min_exp
        c0 = self.coeffs[m]
        rel = self.trunc - m  # relative order of knowledge
        # dense coefficients of a / (c0 q^(m/D)), a power series with constant 1
        a = [Fraction(0)] * rel
        for e, c in self.coeffs.items():
            a[e - m] = c / c0
        b = [Fraction(0)] * rel
        b[0] = Fraction(1)
        for n in range(1, rel):
            s = Fraction(0)
            for k in range(1, n + 1):
                if a[k]:
                    s += a[k] * b[n - k]
            b[n] = -s
        return ExactQSeries(self.D, {n - m: c / c0 for n, c in enumerate(b) if c},
                            rel - m)

    def __pow__(self, n: int) -> "ExactQSeries":
        if n < 0:
            return self.invert() ** (-n)
        base = self
        result = None
        while True:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if not n:
                break
            base = base * base
        if result is None:
            # x^0: exact 1, but knowledge limited by this series' window
            return ExactQSeries.one(self.trunc - self.min_exp, self.D)
        return result

    # ----------------------------------------------------------- comparison

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactQSeries):
            return NotImplemented
        a, b = self._common(other)
        t = min(a.trunc, b.trunc)
        keys = {e for e in a.coeffs if e < t} | {e for e in b.coeffs if e < t}
        return all(a.coeffs.get(e, 0) == b.coeffs.get(e, 0) for e in keys)

    def __hash__(self):
        return hash((self.D, self.trunc, tuple(sorted(self.coeffs.items()))))

    def first_difference(self, other) -> Fraction | None:
        """Smallest exponent where the two series differ, or None."""
        a, b = self._common(other)
        t = min(a.trunc, b.trunc)
        keys = sorted({e for e in a.coeffs if e < t} |
                      {e for e in b.coeffs if e < t})
        for e in keys:
            if a.coeffs.get(e, 0) != b.coeffs.get(e, 0):
                return Fraction(e, a.D)
        return None

    def __repr__(self):
        head = ", ".join(f"{c}*q^({Fraction(e, self.D)})"
                         for e, c in sorted(self.coeffs.items())[:6])
        return f"ExactQSeries({head}{', ...' if len(self.coeffs) > 6 else ''}; O(q^{Fraction(self.trunc, self.D)}))"

    # -------------------------------------------------------- serialization

    def to_json(self) -> str:
        return json.dumps({
            "D": self.D,
            "min_exp": self.min_exp,
            "trunc": self.trunc,
            "coeffs": [[e, f"{c.numerator}/{c.denominator}"]
                       for e, c in sorted(self.coeffs.items())],
        })

    @classmethod
    def from_json(cls, s: str) -> "ExactQSeries":
        d = json.loads(s)
        return cls(d["D"], {int(e): Fraction(c) for e, c in d["coeffs"]},
                   d["trunc"])


# ------------------------------------------------------------------ helpers


def exp_series(a: ExactQSeries) -> ExactQSeries:
    """exp of a series with positive valuation."""
    if not a.is_zero() and a.min_exp <= 0:
        raise ValueError("exp requires positive valuation")
    result = ExactQSeries.one(a.trunc, a.D)
    term = ExactQSeries.one(a.trunc, a.D)
    if a.is_zero():
        return result
    kmax = a.trunc // a.min_exp + 1
    for k in range(1, kmax + 1):
        term = term * a * Fraction(1, k)
        if term.is_zero():
            break
        result = result + term
    return ExactQSeries(a.D, result.coeffs, a.trunc)

def log1p_series(a: ExactQSeries) -> ExactQSeries:
    """log(1 + a) for a series with positive valuation."""
    if not a.is_zero() and a.min_exp <= 0:
        raise ValueError("log1p requires positive valuation")
    result = ExactQSeries.zero(a.trunc, a.D)
    if a.is_zero():
        return result
    term = ExactQSeries.one(a.trunc, a.D)
    kmax = a.trunc // a.min_exp + 1
    for k in range(1, kmax + 1):
        term = term * a
        if term.is_zero():
            break
        result = result + term * Fraction((-1) ** (k + 1), k)
    return ExactQSeries(a.D, result.coeffs, a.trunc)


def euler_product(trunc: int) -> ExactQSeries:
    """(q; q)_infinity to the stated order, via the pentagonal number series."""
    coeffs = {0: Fraction(1)}
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        e2 = k * (3 * k + 1) // 2
        if e1 >= trunc and e2 >= trunc:
            break
        if e1 < trunc:
            coeffs[e1] = Fraction((-1) ** k)
        if e2 < trunc:
            coeffs[e2] = Fraction((-1) ** k)
        k += 1
    return ExactQSeries(1, coeffs, trunc)


def euler_product_pow(power: int, trunc: int) -> ExactQSeries:
    """(q; q)_infinity^power (any integer power) to the stated order."""
    e = euler_product(trunc)
    if power >= 0:
        return e ** power if power else ExactQSeries.one(trunc)
    return e.invert() ** (-power)


# ----------------------------------------------------------- bivariate part


class ZetaQSeries:
    """Bivariate series ``sum c_{m,n} zeta^m q^n`` with a diagonal window.

    Entries are kept only when ``0 <= n < q_trunc`` and
    ``zeta_lo_base - n <= m <= zeta_hi_base - n``.  The window is sound for
    products of Pochhammer factors in which every factor either raises the
    zeta-power at a nonnegative q-cost or lowers it at a q-cost of at least
    one: an entry outside the band can then never contribute to a kept
    coefficient, regardless of the order in which factors are multiplied.
    """

    __slots__ = ("data", "q_trunc", "zeta_lo_base", "zeta_hi_base")

    def __init__(self, data: dict, q_trunc: int, zeta_lo_base: int,
                 zeta_hi_base: int):
        self.q_trunc = q_trunc
        self.zeta_lo_base = zeta_lo_base
        self.zeta_hi_base = zeta_hi_base
        self.data = {
            (m, n): c for (m, n), c in data.items()
            if c and 0 <= n < q_trunc
            and zeta_lo_base - n <= m <= zeta_hi_base - n
        }

    @classmethod
    def unit(cls, q_trunc: int, zeta_lo_base: int, zeta_hi_base: int):
        return cls({(0, 0): 1}, q_trunc, zeta_lo_base, zeta_hi_base)

    def zeta_powers(self):
        return sorted({m for m, _ in self.data})

    def mul_factor(self, zeta_pow: int, q_pow: int, power: int) -> "ZetaQSeries":
        """Multiply by ``(1 - zeta^zeta_pow q^q_pow)^power``."""
        if zeta_pow == 0 and q_pow == 0:
            if power >= 0:
                return ZetaQSeries({}, self.q_trunc, self.zeta_lo_base,
                                   self.zeta_hi_base) if power else self
            raise ValueError("divergent factor: (1 - 1) to a negative power")
        T = self.q_trunc
        lo, hi = self.zeta_lo_base, self.zeta_hi_base
        # expansion coefficients of (1 - x)^power in x
        if power < 0:
            P = -power
            def coef(k):
                return comb(k + P - 1, P - 1)
        else:
            def coef(k):
                return comb(power, k) * (-1) ** k if k <= power else 0

        def kmax_for(m, n):
            # each step adds zeta_pow to m and q_pow to n; solve for the last
            # k that can still land inside the window
            ks = []
            if q_pow > 0:
                ks.append((T - 1 - n) // q_pow)
            drift = zeta_pow + q_pow
            if drift > 0:
                ks.append((hi - n - m) // drift)
            elif drift < 0:
                ks.append((m + n - lo) // (-drift))
            if power >= 0:
                ks.append(power)
            if not ks:
                raise ValueError("unbounded factor expansion")
            return max(min(ks), -1)

        out: dict = {}
        for (m, n), c in self.data.items():
            K = kmax_for(m, n)
            for k in range(0, K + 1):
                cf = coef(k)
                if not cf:
                    continue
                mm = m + zeta_pow * k
                nn = n + q_pow * k
                if nn >= T or not (lo - nn <= mm <= hi - nn):
                    continue
                key = (mm, nn)
                out[key] = out.get(key, 0) + c * cf
        return ZetaQSeries(out, T, lo, hi)

    def zeta_coefficient(self, m: int) -> ExactQSeries:
        """Extract the coefficient of ``zeta^m`` as an exact q-series."""
        trunc = min(self.q_trunc, self.zeta_hi_base - m + 1)
        return ExactQSeries(1, {n: Fraction(c) for (mm, n), c in self.data.items()
                                if mm == m and n < trunc}, trunc)


def pochhammer_inf(zeta_pow: int, q_pow: int, power: int, trunc: int,
                   zeta_lo_base: int = 0,
                   zeta_hi_base: int | None = None) -> ZetaQSeries:
    """Expansion of ``(zeta^zeta_pow q^q_pow; q)_infinity^power``.

    Valid in the region ``|q| < |zeta| < 1`` (each factor is expanded by the
    binomial/geometric series in its own monomial).  ``q_pow = 0`` is allowed
    only when ``zeta_pow != 0``.
    """
    if zeta_hi_base is None:
        zeta_hi_base = trunc - 1
    if q_pow < 0:
        raise ValueError("q_pow must be nonnegative")
    if q_pow == 0 and zeta_pow == 0:
        raise ValueError("divergent configuration")
    state = ZetaQSeries.unit(trunc, zeta_lo_base, zeta_hi_base)
    for j in range(trunc - q_pow):
        state = state.mul_factor(zeta_pow, q_pow + j, power)
    return state


def poch_ratio_bivariate(ell: int, s_max: int, trunc: int) -> ZetaQSeries:
    """Windowed expansion of ``1 / ((zeta)_inf^ell (zeta^{-1} q)_inf^ell)``.

    The window keeps exactly the entries that can still contribute to
    ``coeff_{zeta^s} q^n`` with ``s <= s_max`` and ``n < trunc``.
    """
    state = ZetaQSeries.unit(trunc, 0, s_max + trunc - 1)
    state = state.mul_factor(1, 0, -ell)
    for j in range(1, trunc):
        state = state.mul_factor(1, j, -ell)
        state = state.mul_factor(-1, j, -ell)
    return state
