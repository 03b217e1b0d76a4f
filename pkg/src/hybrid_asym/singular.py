"""Log-power series at a root of unity and polylogarithm expansions.

A :class:`LogPowerSeries` centred at ``zeta`` is a finite sum of monomials
``c * X^alpha * Lam^k`` with ``X = 1 - z/zeta`` and ``Lam = log(1/X)``,
known up to ``O(X^t)`` (possibly times powers of ``Lam``).  Exponents are
exact :class:`~fractions.Fraction` values, so grouping never needs a
tolerance.

Polylogarithms enter through ``tau = -log z``: at a point where the argument
``w`` of ``Li_nu(w)`` tends to 1 we write ``-log w = m * tau(X)`` with
``tau(X) = sum X^l / l`` and rewrite the classical ``tau`` expansion in
``X`` and ``Lam``.
"""

from __future__ import annotations

from fractions import Fraction
import math
from typing import Mapping

import mpmath
from mpmath import mpf, mpc

from .numerics import ONE, RootOfUnity, gamma, harmonic, hurwitz_zeta, to_mp, zeta
from .series import TruncatedSeries, series_log, series_pow

__all__ = [
    "LogPowerSeries",
    "tau_series",
    "lps_mul",
    "lps_exp",
    "lps_log",
    "polylog_singular",
    "polylog_eval",
    "polylog_tau_sum",
    "expand_polylog_power",
    "analytic_lps",
]



def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def _is_zero(c) -> bool:
    return c == 0


class LogPowerSeries:
    """``sum c * X^alpha * Lam^k + O(X^order)`` at ``center``.

    ``order=None`` means the sum is exact.  Monomials with ``alpha >= order``
    are dropped on construction.
    """

    __slots__ = ("center", "terms", "order")

    def __init__(self, terms: Mapping | None = None, order=None, center: RootOfUnity = ONE):
        self.center = center
        self.order = None if order is None else _frac(order)
        clean = {}
        for (a, k), c in (terms or {}).items():
            a = _frac(a)
            if k < 0:
                raise ValueError("log power must be >= 0")
            if self.order is not None and a >= self.order:
                continue
            if _is_zero(c):
                continue
            clean[(a, k)] = c
        self.terms = clean

    # -- construction helpers
    @classmethod
    def constant(cls, c, order=None, center: RootOfUnity = ONE) -> "LogPowerSeries":
        return cls({(Fraction(0), 0): c}, order, center)

    @classmethod
    def monomial(cls, alpha, k: int = 0, c=1, order=None, center: RootOfUnity = ONE):
        return cls({(_frac(alpha), k): c}, order, center)

    # -- inspection
    def min_alpha(self) -> Fraction | None:
        return min((a for a, _ in self.terms), default=None)

    def coefficient(self, alpha, k: int = 0):
        return self.terms.get((_frac(alpha), k), 0)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], -kv[0][1]))

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        body = " + ".join(
            f"({mpmath.nstr(c, 8)})*X^{a}*Lam^{k}" for (a, k), c in self.sorted_terms()[:6]
        )
        more = " + ..." if len(self.terms) > 6 else ""
        return f"LogPowerSeries[{self.center}]({body}{more}, O(X^{self.order}))"

    # -- arithmetic
    def _check(self, other: "LogPowerSeries") -> None:
        if self.center != other.center:
            raise ValueError(f"centres differ: {self.center} vs {other.center}")

    def __add__(self, other):
        if not isinstance(other, LogPowerSeries):
            other = LogPowerSeries.constant(other, None, self.center)
        self._check(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, 0) + c
        return LogPowerSeries(out, _min_order(self.order, other.order), self.center)

    __radd__ = __add__

    def __neg__(self):
        return LogPowerSeries({k: -c for k, c in self.terms.items()}, self.order, self.center)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, LogPowerSeries):
            return lps_mul(self, other)
        return LogPowerSeries({k: c * other for k, c in self.terms.items()}, self.order, self.center)

    __rmul__ = __mul__

    def truncate(self, order) -> "LogPowerSeries":
        return LogPowerSeries(self.terms, _min_order(self.order, _frac(order)), self.center)

    def shift(self, alpha) -> "LogPowerSeries":
        """Multiply by ``X^alpha``."""
        alpha = _frac(alpha)
        order = None if self.order is None else self.order + alpha
        return LogPowerSeries({(a + alpha, k): c for (a, k), c in self.terms.items()}, order, self.center)

    def with_center(self, center: RootOfUnity) -> "LogPowerSeries":
        return LogPowerSeries(self.terms, self.order, center)

    # -- evaluation
    def value_at_x(self, x):
        """Value at ``X = x`` (``z = zeta (1 - x)``), principal logarithm."""
        x = to_mp(x)
        lam = -mpmath.log(x)
        total = mpc(0)
        for (a, k), c in self.terms.items():
            total += to_mp(c) * mpmath.power(x, to_mp(a)) * lam**k
        return total

    def __call__(self, z):
        return self.value_at_x(1 - to_mp(z) / self.center.value())


def _min_order(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def lps_mul(a: LogPowerSeries, b: LogPowerSeries) -> LogPowerSeries:
    """Product; error order ``min(t_a + min alpha_b, t_b + min alpha_a)``."""
    a._check(b)
    order = None
    if a.order is not None and b.terms:
        order = a.order + b.min_alpha()
    if b.order is not None and a.terms:
        order = _min_order(order, b.order + a.min_alpha())
    if not a.terms or not b.terms:
        # product of an O(X^t) remainder with something exact
        order = _min_order(a.order, b.order)
    out: dict = {}
    for (a1, k1), c1 in a.terms.items():
        for (a2, k2), c2 in b.terms.items():
            key = (a1 + a2, k1 + k2)
            if order is not None and key[0] >= order:
                continue
            out[key] = out.get(key, 0) + c1 * c2
    return LogPowerSeries(out, order, a.center)


def _as_rational(c, what: str) -> Fraction:
    c = to_mp(c)
    if isinstance(c, mpc):
        if abs(c.imag) > mpmath.power(10, -mpmath.mp.dps // 2):
            raise ValueError(f"{what} must be real, got {c}")
        c = c.real
    q = Fraction(mpmath.nstr(c, mpmath.mp.dps // 2)).limit_denominator(10**6)
    if abs(c - to_mp(q)) > mpmath.power(10, -mpmath.mp.dps // 2):
        raise ValueError(f"{what} {c} is not a small rational")
    return q


def lps_exp(a: LogPowerSeries) -> LogPowerSeries:
    """``exp(a)``.

    The constant ``c0`` and a ``Lam``-linear term ``lam * Lam`` are split
    off first: ``exp(c0 + lam*Lam) = e^c0 * X^(-lam)``, which needs ``lam``
    rational.  Every other monomial must have ``alpha > 0``.
    """
    if a.order is None:
        raise ValueError("exp of an exact log-power sum needs an error order")
    c0 = a.terms.get((Fraction(0), 0), 0)
    lam = a.terms.get((Fraction(0), 1), 0)
    rest = {}
    for (al, k), c in a.terms.items():
        if al == 0 and k in (0, 1):
            continue
        if al <= 0:
            raise ValueError(f"exp of X^{al} Lam^{k} is not a log-power series")
        rest[(al, k)] = c
    shift = Fraction(0)
    if lam != 0:
        shift = -_as_rational(lam, "Lam coefficient")
    t = a.order
    r = LogPowerSeries(rest, t, a.center)
    out = LogPowerSeries.constant(mpc(1), t, a.center)
    if r.terms:
        amin = r.min_alpha()
        jmax = math.ceil(t / amin)
        power = LogPowerSeries.constant(mpc(1), t, a.center)
        for j in range(1, jmax + 1):
            power = lps_mul(power, r).truncate(t)
            out = out + power * (mpf(1) / mpmath.factorial(j))
    out = out * mpmath.exp(to_mp(c0))
    return out.shift(shift)


def lps_log(a: LogPowerSeries) -> LogPowerSeries:
    """``log(a)`` when ``a = c X^alpha0 (1 + r)`` with ``r`` of positive order."""
    if not a.terms or a.order is None:
        raise ValueError("log needs a nonzero series with an error order")
    a0 = a.min_alpha()
    lead = [(k, c) for (al, k), c in a.terms.items() if al == a0]
    if len(lead) != 1 or lead[0][0] != 0:
        raise ValueError("leading part must be a single pure power c X^alpha0")
    c = lead[0][1]
    rel = {(al - a0, k): v / c for (al, k), v in a.terms.items() if al != a0}
    t = a.order - a0
    r = LogPowerSeries(rel, t, a.center)
    out = LogPowerSeries(
        {(Fraction(0), 0): mpmath.log(to_mp(c)), (Fraction(0), 1): -to_mp(a0)}, t, a.center
    )
    if r.terms:
        amin = r.min_alpha()
        jmax = math.ceil(t / amin)
        power = LogPowerSeries.constant(mpc(1), t, a.center)
        for j in range(1, jmax + 1):
            power = lps_mul(power, r).truncate(t)
            out = out + power * (mpf((-1) ** (j + 1)) / j)
    return out


# ---------------------------------------------------------------- tau device


def tau_series(N: int) -> TruncatedSeries:
    """``tau = -log(1 - X) = sum_{l>=1} X^l / l`` modulo ``X^(N+1)``."""
    return TruncatedSeries([Fraction(0)] + [Fraction(1, l) for l in range(1, N + 1)], N)


def _tau_ratio(N: int) -> TruncatedSeries:
    # tau / X = 1 + X/2 + X^2/3 + ...
    return TruncatedSeries([Fraction(1, l + 1) for l in range(N + 1)], N)


def analytic_lps(coeffs, order, center: RootOfUnity = ONE, shift=0) -> LogPowerSeries:
    """``X^shift * sum coeffs[i] X^i`` as a log-power series."""
    shift = _frac(shift)
    return LogPowerSeries({(shift + i, 0): c for i, c in enumerate(coeffs)}, order, center)


def _analytic_degree(t: Fraction) -> int:
    """Largest integer power strictly below ``t`` (``-1`` if none)."""
    return math.ceil(t) - 1


def polylog_singular(nu, t, scale: int = 1) -> LogPowerSeries:
    """Expansion of ``Li_nu(w)`` at ``w -> 1`` where ``-log w = scale * tau(X)``.

    With ``scale = 1`` this is ``Li_nu(z)`` at ``z = 1``; ``scale = m``
    gives ``Li_nu(z^m)`` at any ``zeta`` with ``zeta^m = 1``.
    """
    nu = _frac(nu)
    t = _frac(t)
    D = _analytic_degree(t)
    s = Fraction(scale)
    out: dict = {}

    def add(key, c):
        if key[0] < t:
            out[key] = out.get(key, 0) + c

    N = max(D, 0) + max(0, math.ceil(t - nu + 1)) + 1
    ratio = _tau_ratio(N)
    # regular part: sum_j zeta(nu - j) (-scale tau)^j / j!
    is_pos_int = nu.denominator == 1 and nu >= 1
    m = int(nu) if is_pos_int else None
    tau_pow = TruncatedSeries.one(N)
    for j in range(0, D + 1):
        if j > 0:
            tau_pow = tau_pow * ratio  # (tau/X)^j
        if m is not None and j == m - 1:
            continue
        zc = zeta(nu - j) * to_mp((-s) ** j) / mpmath.factorial(j)
        for i in range(0, D - j + 1):
            coef = tau_pow[i]
            if coef != 0:
                add((Fraction(j + i), 0), zc * to_mp(coef))
    if m is None:
        # Gamma(1 - nu) (scale tau)^(nu - 1)
        g = gamma(1 - nu) * mpmath.power(to_mp(s), to_mp(nu - 1))
        pw = series_pow(ratio, nu - 1)
        for i in range(N + 1):
            if nu - 1 + i >= t:
                break
            add((nu - 1 + i, 0), g * to_mp(pw[i]))
    else:
        # (-1)^m/(m-1)! (scale tau)^(m-1) (log(scale tau) - H_{m-1}),
        # log tau = -Lam + log(tau/X)
        pre = to_mp(Fraction((-1) ** m, math.factorial(m - 1)) * s ** (m - 1))
        pw = series_pow(ratio, m - 1)
        logr = series_log(ratio)
        const = mpmath.log(to_mp(s)) - to_mp(harmonic(m - 1))
        inner = [to_mp(logr[i]) for i in range(N + 1)]
        inner[0] += const
        for i in range(N + 1):
            a = Fraction(m - 1 + i)
            if a >= t:
                break
            # X^(m-1) pw * (inner - Lam)
            acc = mpf(0)
            for r in range(i + 1):
                acc += to_mp(pw[r]) * inner[i - r]
            add((a, 0), pre * acc)
            add((a, 1), -pre * to_mp(pw[i]))
    return LogPowerSeries(out, t, ONE)


def polylog_tau_sum(nu, z, terms: int = 30):
    """``Li_nu(z)`` summed from its ``tau = -log z`` series (first ``terms`` regular terms)."""
    nu = _frac(nu)
    tau = -mpmath.log(to_mp(z))
    is_pos_int = nu.denominator == 1 and nu >= 1
    total = mpf(0)
    if is_pos_int:
        m = int(nu)
        total += (
            (-1) ** m / mpmath.factorial(m - 1) * tau ** (m - 1) * (mpmath.log(tau) - to_mp(harmonic(m - 1)))
        )
    else:
        total += gamma(1 - nu) * mpmath.power(tau, to_mp(nu - 1))
    for j in range(terms):
        if is_pos_int and j == int(nu) - 1:
            continue
        total += (-1) ** j / mpmath.factorial(j) * zeta(nu - j) * tau**j
    return total


# ---------------------------------------------------------------- evaluation


def polylog_eval(nu, w):
    """``Li_nu(w)`` for ``|w| <= 1``.

    ``w`` may be a :class:`RootOfUnity`; then the value comes from Hurwitz
    zeta values, ``Li_s(e^(2 i pi p/q)) = q^-s sum_r e^(2 i pi p r/q) zeta(s, r/q)``.
    """
    nu = _frac(nu)
    if isinstance(w, RootOfUnity):
        if w.is_one:
            if nu <= 1:
                raise ValueError(f"Li_{nu}(1) diverges")
            return zeta(nu)
        if nu == 1:
            return -mpmath.log(1 - w.value())
        s = to_mp(nu)
        if s > mpmath.mp.prec:
            return w.value() + w.power(2).value() * mpmath.power(2, -s)
        q = w.order
        total = mpc(0)
        for r in range(1, q + 1):
            total += w.power(r).value() * hurwitz_zeta(s, mpf(r) / q)
        return total * mpmath.power(q, -s)
    w = to_mp(w)
    if abs(w) > 1:
        raise ValueError("polylog_eval needs |w| <= 1")
    if w == 1:
        if nu <= 1:
            raise ValueError(f"Li_{nu}(1) diverges")
        return zeta(nu)
    return mpmath.polylog(to_mp(nu), w)


def expand_polylog_power(
    nu,
    m: int,
    center: RootOfUnity,
    t,
    phase: RootOfUnity = ONE,
    subtract_first: bool = False,
) -> LogPowerSeries:
    """Expansion at ``center`` of ``Li_nu(phase * z^m)``, minus ``phase * z^m`` if asked.

    Singular when ``phase * center^m = 1`` (rescaled ``tau`` expansion);
    otherwise the Taylor series from the ladder
    ``Li_nu(w0 e^-u) = sum_i Li_{nu-i}(w0) (-u)^i / i!`` with ``u = m tau(X)``.
    """
    nu = _frac(nu)
    t = _frac(t)
    w0 = phase * center.power(m)
    D = _analytic_degree(t)
    if D >= 0 and nu - D > 26:
        coeffs = _direct_coefficients(nu, m, w0, D, start=2 if subtract_first else 1)
        return analytic_lps(coeffs, t, center)
    if w0.is_one:
        out = polylog_singular(nu, t, scale=m).with_center(center)
    else:
        coeffs = [mpc(0)] * (D + 1)
        if D >= 0:
            ratio = _tau_ratio(D)
            tau_pow = TruncatedSeries.one(D)
            for i in range(D + 1):
                if i > 0:
                    tau_pow = tau_pow * ratio
                li = polylog_eval(nu - i, w0) * to_mp(Fraction((-m) ** i, math.factorial(i)))
                for r in range(D - i + 1):
                    if tau_pow[r] != 0:
                        coeffs[i + r] += li * to_mp(tau_pow[r])
        out = analytic_lps(coeffs, t, center)
    if subtract_first and D >= 0:
        v = w0.value()
        sub = [-v * (-1) ** j * math.comb(m, j) for j in range(D + 1)]
        out = out + analytic_lps(sub, t, center)
    return out


def _direct_coefficients(nu: Fraction, m: int, w0: RootOfUnity, D: int, start: int) -> list:
    """``[X^j] sum_{n>=start} w0^n n^-nu (1-X)^(n m)`` by direct summation (large ``nu``)."""
    s = to_mp(nu)
    eps = mpmath.power(10, -mpmath.mp.dps - 5)
    coeffs = [mpc(0)] * (D + 1)
    n = start
    while True:
        base = w0.power(n).value() * mpmath.power(n, -s)
        big = mpf(0)
        for j in range(D + 1):
            term = base * (-1) ** j * math.comb(n * m, j)
            coeffs[j] += term
            big = max(big, abs(term))
        if big < eps:
            break
        n += 1
    return coeffs
