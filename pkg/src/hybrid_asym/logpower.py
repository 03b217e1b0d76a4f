"""Coefficients of log-power monomials ``c (1 - z/zeta)^alpha L(z/zeta)^k``.

Two evaluators live here: :func:`transfer_exact` gives ``[z^n]`` for one
``n`` in rational arithmetic, :func:`transfer_asymptotic` gives the expansion
in descending powers of ``n``.  Both differentiate in ``alpha`` through a
truncated series in a small shift ``eps`` (``alpha -> alpha + eps``), so
``(-1)^k d^k/dalpha^k`` becomes ``(-1)^k k! [eps^k]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math
from typing import Iterable, Sequence

import mpmath
from mpmath import mpf, mpc

from .numerics import ONE, RootOfUnity, bernoulli_numbers, to_mp
from .series import TruncatedSeries, series_mul

__all__ = [
    "LogPowerMonomial",
    "AsymptoticExpansion",
    "coefficient_exact",
    "transfer_exact",
    "transfer_asymptotic",
    "evaluate_expansion",
    "hermite_interpolate",
    "polyval",
]



@dataclass(frozen=True)
class LogPowerMonomial:
    """``c * (1 - z/zeta)^alpha * L(z/zeta)^k`` with ``L(w) = log 1/(1-w)``."""

    alpha: Fraction
    k: int = 0
    c: object = 1
    zeta: RootOfUnity = ONE

    def __post_init__(self):
        if self.k < 0:
            raise ValueError("log power k must be >= 0")
        object.__setattr__(self, "alpha", Fraction(self.alpha))


@dataclass
class AsymptoticExpansion:
    """Finite sum ``sum amp * zeta^(-n) * n^(-beta) * (log n)^j``.

    ``terms`` maps ``(zeta, beta, j)`` to the amplitude.  ``error_order`` is
    the exponent ``u`` of the neglected ``o(n^-u)`` remainder when known.
    """

    terms: dict = field(default_factory=dict)
    error_order: Fraction | None = None

    def add_term(self, zeta: RootOfUnity, beta, j: int, amp) -> None:
        key = (zeta, Fraction(beta), j)
        self.terms[key] = self.terms.get(key, 0) + amp

    def __add__(self, other: "AsymptoticExpansion") -> "AsymptoticExpansion":
        out = AsymptoticExpansion(dict(self.terms))
        for (z, b, j), a in other.terms.items():
            out.add_term(z, b, j, a)
        orders = [u for u in (self.error_order, other.error_order) if u is not None]
        out.error_order = min(orders) if orders else None
        return out

    def scaled(self, factor) -> "AsymptoticExpansion":
        return AsymptoticExpansion({k: a * factor for k, a in self.terms.items()}, self.error_order)

    def truncated(self, max_beta) -> "AsymptoticExpansion":
        """Keep only terms with ``beta <= max_beta``."""
        max_beta = Fraction(max_beta)
        kept = {k: a for k, a in self.terms.items() if k[1] <= max_beta}
        return AsymptoticExpansion(kept, self.error_order)

    def at(self, zeta: RootOfUnity) -> "AsymptoticExpansion":
        return AsymptoticExpansion(
            {k: a for k, a in self.terms.items() if k[0] == zeta}, self.error_order
        )

    def sorted_terms(self) -> list:
        """Terms ordered by ``(root order, root index, beta, -j)``."""
        return sorted(
            self.terms.items(),
            key=lambda kv: (kv[0][0].order, kv[0][0].index, kv[0][1], -kv[0][2]),
        )

    def roots(self) -> list:
        return sorted({k[0] for k in self.terms}, key=lambda z: (z.order, z.index))

    def coefficient(self, zeta: RootOfUnity, beta, j: int):
        return self.terms.get((zeta, Fraction(beta), j), 0)

    def __call__(self, n: int):
        return evaluate_expansion(self, n)

    def __len__(self) -> int:
        return len(self.terms)


# ---------------------------------------------------------------- eps-series
# Truncated series in the alpha-shift eps, stored as plain lists.


def _emul(a: Sequence, b: Sequence, K: int) -> list:
    out = [0] * (K + 1)
    for i, x in enumerate(a[: K + 1]):
        if x == 0:
            continue
        for j in range(min(len(b), K + 1 - i)):
            out[i + j] += x * b[j]
    return out


def _eexp(a: Sequence, K: int) -> list:
    """``exp`` of an eps-series with zero constant term."""
    a = list(a) + [0] * (K + 1 - len(a))
    b = [1] + [0] * K
    for m in range(1, K + 1):
        s = 0
        for j in range(1, m + 1):
            if a[j] != 0:
                s += j * a[j] * b[m - j]
        b[m] = s / m
    return b


def _bernoulli_poly_shift(m: int, x0: Fraction, K: int) -> list:
    """``B_m(x0 - eps)`` as an eps-series."""
    B = bernoulli_numbers(m + 1)
    out = [Fraction(0)] * (K + 1)
    for j in range(m + 1):
        p = m - j
        coef = Fraction(math.comb(m, j)) * B[j]
        if coef == 0:
            continue
        # (x0 - eps)^p
        for r in range(min(p, K) + 1):
            out[r] += coef * math.comb(p, r) * x0 ** (p - r) * (-1) ** r
    return out


@lru_cache(maxsize=512)
def _gamma_ratio_coeffs(alpha: Fraction, depth: int, K: int) -> tuple:
    """``E_i(eps)`` with ``Gamma(n-a)/Gamma(n+1) = n^(-a-1) sum_i E_i n^-i``, ``a = alpha+eps``.

    Built from the Bernoulli-polynomial expansion of ``log Gamma(n+x)``.
    """
    a = -alpha  # Gamma(n + a - eps) / Gamma(n + 1)
    c = [[Fraction(0)] * (K + 1) for _ in range(depth + 1)]
    for k in range(1, depth + 1):
        top = _bernoulli_poly_shift(k + 1, a, K)
        b1 = _bernoulli_poly_shift(k + 1, Fraction(1), 0)[0]
        top[0] -= b1
        sgn = 1 if k % 2 else -1
        c[k] = [sgn * t / (k * (k + 1)) for t in top]
    E = [[Fraction(1)] + [Fraction(0)] * K] + [[Fraction(0)] * (K + 1) for _ in range(depth)]
    for m in range(1, depth + 1):
        acc = [Fraction(0)] * (K + 1)
        for j in range(1, m + 1):
            prod = _emul(c[j], E[m - j], K)
            for r in range(K + 1):
                acc[r] += j * prod[r]
        E[m] = [x / m for x in acc]
    return tuple(tuple(e) for e in E)


def _rgamma_shift(alpha: Fraction, K: int) -> list:
    """``1/Gamma(-alpha-eps)`` as an eps-series (numeric)."""
    x = -alpha
    if x.denominator == 1 and x <= 0:
        r0 = -x.numerator  # alpha = r0 is a nonnegative integer
        # 1/Gamma(-r0-eps) = (-1)^(r0+1) Gamma(1+r0+eps) sin(pi eps)/pi
        lg = [mpf(0)] + [mpmath.psi(r - 1, 1 + r0) / mpmath.factorial(r) for r in range(1, K + 1)]
        gam = [mpmath.factorial(r0) * t for t in _eexp(lg, K)]
        sinus = [mpf(0)] * (K + 1)
        for j in range(0, (K - 1) // 2 + 1):
            sinus[2 * j + 1] = (-1) ** j * mpmath.pi ** (2 * j) / mpmath.factorial(2 * j + 1)
        sign = -1 if r0 % 2 == 0 else 1
        return [sign * t for t in _emul(gam, sinus, K)]
    xm = to_mp(x)
    # log Gamma(x - eps) - log Gamma(x) = sum_r psi^(r-1)(x) (-eps)^r / r!
    lg = [mpf(0)] + [
        -mpmath.psi(r - 1, xm) * (-1) ** r / mpmath.factorial(r) for r in range(1, K + 1)
    ]
    base = mpmath.rgamma(xm)
    return [base * t for t in _eexp(lg, K)]


# ---------------------------------------------------------------- exact


@lru_cache(maxsize=64)
def _log_power_series(k: int, N: int) -> TruncatedSeries:
    L = TruncatedSeries([Fraction(0)] + [Fraction(1, j) for j in range(1, N + 1)], N)
    out = TruncatedSeries.one(N)
    for _ in range(k):
        out = series_mul(out, L)
    return out


def coefficient_exact(alpha, k: int, n: int) -> Fraction:
    """``[z^n] (1-z)^alpha L(z)^k`` exactly, for rational ``alpha``."""
    alpha = Fraction(alpha)
    if n < 0:
        return Fraction(0)
    if k == 0:
        p = Fraction(1)
        for j in range(n):
            p *= (j - alpha) / (j + 1)
        return p
    if alpha.denominator == 1 and 0 <= alpha < n:
        # a factor of prod (j - alpha) vanishes: convolve the polynomial with L^k
        r = int(alpha)
        Lk = _log_power_series(k, max(64, 1 << (n - 1).bit_length()))
        return sum(
            (Fraction(math.comb(r, i) * (-1) ** i) * Lk[n - i] for i in range(r + 1) if n - i >= 0),
            Fraction(0),
        )
    p = Fraction(1)
    for j in range(n):
        p *= (j - alpha) / (j + 1)
    # log P(alpha+eps) - log P(alpha) = -sum_r eps^r T_r / r,  T_r = sum_j (j-alpha)^-r
    inv = [1 / (j - alpha) for j in range(n)]
    powers = list(inv)
    logser = [Fraction(0)] * (k + 1)
    for r in range(1, k + 1):
        if r > 1:
            powers = [x * y for x, y in zip(powers, inv)]
        logser[r] = -sum(powers, Fraction(0)) / r
    ser = _eexp(logser, k)
    return (-1) ** k * math.factorial(k) * p * ser[k]


def transfer_exact(m: LogPowerMonomial, n: int):
    """``[z^n]`` of the monomial as an mpmath complex number."""
    v = coefficient_exact(m.alpha, m.k, n)
    out = to_mp(m.c) * to_mp(v)
    if not m.zeta.is_one:
        out = out * m.zeta.power(-n).value()
    return mpc(out)


# ---------------------------------------------------------------- asymptotic


def transfer_asymptotic(m: LogPowerMonomial, depth: int = 2, max_beta=None) -> AsymptoticExpansion:
    """Descending expansion of ``[z^n]`` of the monomial.

    ``depth`` is the number of powers kept, ``n^(-alpha-1) .. n^(-alpha-depth)``,
    so the remainder is ``O(n^(-alpha-1-depth) log^k n)``.  ``max_beta``
    optionally drops powers ``n^-beta`` beyond it.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    alpha, k = m.alpha, m.k
    out = AsymptoticExpansion()
    if alpha.denominator == 1 and alpha >= 0 and k == 0:
        return out  # polynomial: coefficients vanish for n > alpha
    g = _rgamma_shift(alpha, k)
    E = _gamma_ratio_coeffs(alpha, depth - 1, k)
    c = to_mp(m.c)
    for i in range(depth):
        beta = alpha + 1 + i
        if max_beta is not None and beta > Fraction(max_beta):
            break
        G = _emul(g, [to_mp(x) for x in E[i]], k)
        for p in range(k + 1):
            amp = G[k - p] * ((-1) ** (k + p) * math.factorial(k)) / math.factorial(p)
            if amp != 0:
                out.add_term(m.zeta, beta, p, c * amp)
    return out


def evaluate_expansion(e: AsymptoticExpansion, n: int):
    """Numeric value of the expansion at integer ``n >= 2`` (principal ``log n``)."""
    total = mpc(0)
    ln = mpmath.log(n)
    for (zeta, beta, j), amp in e.terms.items():
        t = to_mp(amp) * mpmath.power(n, -to_mp(beta)) * ln**j
        if not zeta.is_one:
            t = t * zeta.power(-n).value()
        total += t
    return total


# ---------------------------------------------------------------- Hermite


def hermite_interpolate(nodes: Iterable) -> tuple:
    """Polynomial matching prescribed derivatives at distinct nodes.

    ``nodes`` is a list of ``(x, [f(x), f'(x), ..., f^(c-1)(x)])`` with the
    same ``c`` everywhere.  Returns ascending coefficients of the unique
    polynomial of degree ``<= c*m - 1``; rational input stays rational.
    """
    nodes = [(x, list(vals)) for x, vals in nodes]
    if not nodes:
        raise ValueError("need at least one node")
    c = len(nodes[0][1])
    if c < 1 or any(len(v) != c for _, v in nodes):
        raise ValueError("every node needs the same number c >= 1 of derivative values")
    xs = [x for x, _ in nodes]
    for i in range(len(xs)):
        for j in range(i):
            if xs[i] == xs[j]:
                raise ValueError(f"duplicate interpolation node {xs[i]}")
    z = [x for x in xs for _ in range(c)]
    owner = [i for i in range(len(xs)) for _ in range(c)]
    size = len(z)
    table = [[None] * size for _ in range(size)]
    for i in range(size):
        table[i][i] = nodes[owner[i]][1][0]
    for width in range(1, size):
        for i in range(size - width):
            j = i + width
            if owner[i] == owner[j]:
                d = nodes[owner[i]][1][width]
                table[i][j] = d / math.factorial(width) if not isinstance(d, int) else Fraction(d, math.factorial(width))
            else:
                table[i][j] = (table[i + 1][j] - table[i][j - 1]) / (z[j] - z[i])
    # Newton form -> monomial basis
    coeffs = [0] * size
    basis = [1]  # prod_{r<i} (x - z_r)
    for i in range(size):
        a = table[0][i]
        for d, b in enumerate(basis):
            coeffs[d] = coeffs[d] + a * b
        nb = [0] * (len(basis) + 1)
        for d, b in enumerate(basis):
            nb[d + 1] = nb[d + 1] + b
            nb[d] = nb[d] - z[i] * b
        basis = nb
    return tuple(coeffs)


def polyval(coeffs: Sequence, x, derivative: int = 0):
    """Evaluate the ``derivative``-th derivative of an ascending-coefficient polynomial."""
    acc = 0
    for d in range(len(coeffs) - 1, derivative - 1, -1):
        f = math.perm(d, derivative)
        acc = acc * x + coeffs[d] * f
    return acc
