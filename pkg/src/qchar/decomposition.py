"""Multivariate Fourier coefficients of the Pochhammer product and their
theta/partial-theta decomposition.

Two independent routes to the same number:

* contour quadrature of the product
  F_ell(zeta_1,...,zeta_ell) = (q)_inf * prod_{j=1}^{ell} prod_{k>=1}
      1/((1 - Z_j^{-1} q^k)(1 - Z_j q^{k-1})),   Z_j = zeta_j ... zeta_ell,
  against e^{-2 pi i s z_ell} along a horizontal contour, and

* the residue-sum decomposition into partial theta over theta quotients.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath as mp

from .characters import central_charge, h_s
from .modular_objects import (DEFAULT_PREC, _GUARD_BITS, NearPoleError,
                              _require_upper_half, _tol, cexp, eta,
                              euler_phi_numeric, theta)
from .partial_theta import PartialThetaParams, partial_theta


class DegenerateWVectorError(ValueError):
    """Two of the w_j coincide (mod the lattice); the simple-pole residue
    formula does not apply."""


@dataclass
class MultivarPoint:
    """Evaluation data (z_1, ..., z_{ell-1}; tau) with the derived vector
    w_j = -(z_j + ... + z_{ell-1}) for j < ell and w_ell = 0.

    Admissibility: 0 < Im z_j < Im(tau)/ell for every j (equivalent to
    |q| < |zeta_j|^ell < 1), and the w_j pairwise distinct in the
    theta-metric.
    """
    zs: tuple
    tau: complex
    prec: int = DEFAULT_PREC
    ws: tuple = field(init=False)

    def __post_init__(self):
        self.zs = tuple(mp.mpc(z) for z in self.zs)
        self.tau = mp.mpc(self.tau)
        _require_upper_half(self.tau)
        ell = len(self.zs) + 1
        v = mp.im(self.tau)
        for j, z in enumerate(self.zs, start=1):
            if not 0 < mp.im(z) < v / ell:
                raise ValueError(
                    f"z_{j} violates 0 < Im z < Im(tau)/ell")
        ws = [-sum(self.zs[j:], mp.mpc(0)) for j in range(ell - 1)]
        ws.append(mp.mpc(0))
        self.ws = tuple(ws)
        thresh = mp.mpf(2) ** (-self.prec // 4)
        for a in range(ell):
            for b in range(a + 1, ell):
                if abs(theta(self.ws[a] - self.ws[b], self.tau, self.prec)) \
                        < thresh:
                    raise DegenerateWVectorError(
                        f"w_{a+1} and w_{b+1} collide in the theta metric")

    @property
    def ell(self) -> int:
        return len(self.zs) + 1

    def contour_height_range(self):
        """Admissible strip (0, c_max) for Im z_ell: the integrand's poles
        sit at Im z_ell = Im w_j - k Im(tau) (k >= 0, below 0) and at
        Im w_j + k Im(tau) (k >= 1, at or above c_max)."""
        v = mp.im(self.tau)
        c_max = v + min(mp.im(w) for w in self.ws)
        return mp.mpf(0), c_max


def F_ell_product(zs_full, tau, prec: int = DEFAULT_PREC):
    """(q)_inf prod_{j=1}^{ell} prod_{k>=1}
    1/((1 - Z_j^{-1} q^k)(1 - Z_j q^{k-1})) with Z_j = e^{2 pi i
    (z_j + ... + z_ell)}; certified tails, pole-proximity guarded."""
    _require_upper_half(tau)
    with mp.workprec(prec + _GUARD_BITS):
        tol = _tol(prec)
        q = cexp(tau)
        absq = abs(q)
        thresh = mp.mpf(2) ** (-prec // 4)
        val = euler_phi_numeric(q, tol)
        ell = len(zs_full)
        for j in range(ell):
            Z = cexp(sum(zs_full[j:], mp.mpc(0)))
            f1 = q / Z
            f2 = Z
            while True:
                d1, d2 = 1 - f1, 1 - f2
                if abs(d1) < thresh or abs(d2) < thresh:
                    raise NearPoleError(
                        f"Pochhammer factor for j={j+1} vanishes to working "
                        "precision")
                val /= d1 * d2
                f1 *= q
                f2 *= q
                if abs(f1) < tol and abs(f2) < tol and \
                        (abs(f1) + abs(f2)) / (1 - absq) < tol:
                    break
        return val


def F_ls_multivar_quadrature(ell: int, s, point: MultivarPoint,
                             contour_imag=None, prec: int = DEFAULT_PREC,
                             rel_tol=None, max_doublings: int = 16):
    """Fourier coefficient at zeta_ell^s of the product, by trapezoid
    quadrature with node doubling over z_ell = x + i c, x in [0, 1).

    ``s`` may be a half-integer (the proof route uses indices in
    Z + ell/2); the integrand is then anti-periodic-compensated by the
    e^{-2 pi i s z} factor which is still well-defined via s as a number.
    """
    if point.ell != ell:
        raise ValueError("point dimension does not match ell")
    with mp.workprec(prec + _GUARD_BITS):
        lo, hi = point.contour_height_range()
        c = mp.mpf(contour_imag) if contour_imag is not None else hi / 2
        if not lo < c < hi:
            raise ValueError("contour height outside the admissible strip")
        if rel_tol is None:
            rel_tol = mp.mpf(2) ** (-(prec // 2))
        sf = mp.mpf(Fraction(s).numerator) / Fraction(s).denominator

        def f(x):
            z = x + 1j * c
            return F_ell_product(list(point.zs) + [z], point.tau, prec) \
                * mp.exp(-2j * mp.pi * sf * z)

        N = 16
        vals = [f(mp.mpf(k) / N) for k in range(N)]
        est = mp.fsum(vals) / N
        for _ in range(max_doublings):
            new = [f(mp.mpf(2 * k + 1) / (2 * N)) for k in range(N)]
            est2 = (mp.fsum(vals) + mp.fsum(new)) / (2 * N)
            vals = vals + new
            N *= 2
            if abs(est2 - est) < rel_tol * max(1, abs(est2)):
                return est2
            est = est2
        raise RuntimeError("quadrature did not stabilize")


def script_F_value(w, point: MultivarPoint, prec: int = DEFAULT_PREC):
    """(-1)^ell / prod_{j=1}^{ell} theta(w_j - w); simple poles at w = w_j."""
    with mp.workprec(prec + _GUARD_BITS):
        den = mp.mpc(1)
        for wj in point.ws:
            den *= theta(wj - w, point.tau, prec)
        if abs(den) < mp.mpf(2) ** (-prec // 2):
            raise NearPoleError("w too close to one of the w_j")
        return (-1) ** point.ell / den


def F_ls_decomposed(ell: int, s: int, point: MultivarPoint,
                    prec: int = DEFAULT_PREC):
    """Residue-sum value

        -i^{ell+1} q^{-h_s + c/24} eta^{ell-2} prod_j zeta_j^{j s/ell}
          * sum_{nu=1}^{ell} theta_plus_{s-ell/2, eps, ell/2}
                (w_nu - (1/ell) sum_j w_j) / prod_{j != nu} theta(w_nu - w_j),

    with eps = ell mod 2 and zeta_j^{j s/ell} := e^{2 pi i z_j j s/ell}
    (branch fixed through z_j, not through a root of zeta_j).
    """
    if point.ell != ell:
        raise ValueError("point dimension does not match ell")
    with mp.workprec(prec + _GUARD_BITS):
        tau = point.tau
        eps = ell % 2
        params = PartialThetaParams(Fraction(s) - Fraction(ell, 2), eps,
                                    Fraction(ell, 2))
        exp_pref = -h_s(ell, s) + Fraction(central_charge(ell), 24)
        pref = -(1j) ** (ell + 1) * cexp(tau * (
            mp.mpf(exp_pref.numerator) / exp_pref.denominator)) \
            * eta(tau, prec) ** (ell - 2)
        for j, z in enumerate(point.zs, start=1):
            pref *= cexp(z * mp.mpf(j * s) / ell)
        wm = sum(point.ws, mp.mpc(0)) / ell
        total = mp.mpc(0)
        for nu in range(ell):
            num = partial_theta(params, point.ws[nu] - wm, tau, prec)
            den = mp.mpc(1)
            for j in range(ell):
                if j != nu:
                    den *= theta(point.ws[nu] - point.ws[j], tau, prec)
            total += num / den
        return pref * total


def random_admissible_point(ell: int, tau, rng: random.Random,
                            prec: int = DEFAULT_PREC,
                            max_tries: int = 200) -> MultivarPoint:
    """Rejection-sample z_j with 0 < Im z_j < Im(tau)/ell and
    non-degenerate w-vector, deterministically from ``rng``."""
    v = float(mp.im(tau))
    for _ in range(max_tries):
        zs = [mp.mpc(rng.uniform(-0.45, 0.45),
                     rng.uniform(0.08, 0.92) * v / ell)
              for _ in range(ell - 1)]
        try:
            return MultivarPoint(tuple(zs), tau, prec)
        except (ValueError, DegenerateWVectorError):
            continue
    raise RuntimeError("could not sample an admissible point")
