"""Arbitrary-precision scalars and the special functions the expansions use.

Everything runs on :mod:`mpmath`.  Precision is the ambient ``mpmath.mp``
precision; callers pin it with :func:`precision` (a thin wrapper around
``mpmath.workdps``) so the digit count travels with the computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
import math

import mpmath
from mpmath import mpf, mpc

__all__ = [
    "DEFAULT_DPS",
    "ONE",
    "PoleError",
    "precision",
    "RootOfUnity",
    "gamma",
    "rgamma",
    "polygamma",
    "zeta",
    "zeta_reference",
    "hurwitz_zeta",
    "tangent_numbers",
    "bernoulli_numbers",
    "harmonic",
    "euler_gamma",
    "euler_gamma_em",
    "exp_neg_gamma_product",
    "constants",
    "to_mp",
]

DEFAULT_DPS = 50


class PoleError(ValueError):
    """Argument sits on a pole of the requested function."""


def precision(dps: int = DEFAULT_DPS):
    return mpmath.workdps(dps)


def to_mp(x):
    """Convert ints, Fractions, floats and mpmath numbers to mpmath scalars."""
    if isinstance(x, Fraction):
        return mpf(x.numerator) / x.denominator
    if isinstance(x, (mpf, mpc)):
        return x
    if isinstance(x, complex):
        return mpc(x)
    return mpf(x)


@dataclass(frozen=True)
class RootOfUnity:
    """``exp(2 i pi index / order)`` kept in lowest terms."""

    order: int
    index: int = 0

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be >= 1")
        g = math.gcd(self.index % self.order, self.order)
        q = self.order // g if g else 1
        p = (self.index % self.order) // g if g else 0
        object.__setattr__(self, "order", q)
        object.__setattr__(self, "index", p)

    @classmethod
    def parse(cls, text: str) -> "RootOfUnity":
        """Read ``"l/j"`` meaning ``exp(2 i pi j / l)``."""
        try:
            l, j = text.split("/")
            return cls(int(l), int(j))
        except ValueError as exc:
            raise ValueError(f"root must look like 'l/j', got {text!r}") from exc

    @property
    def turn(self) -> Fraction:
        return Fraction(self.index, self.order)

    @property
    def is_one(self) -> bool:
        return self.index == 0

    def power(self, m: int) -> "RootOfUnity":
        return RootOfUnity(self.order, self.index * m)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        t = self.turn + other.turn
        return RootOfUnity(t.denominator, t.numerator)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity(self.order, -self.index)

    def value(self) -> mpc:
        if self.is_one:
            return mpc(1)
        if self.order == 2:
            return mpc(-1)
        if self.order == 4:
            return mpc(0, 1) if self.index == 1 else mpc(0, -1)
        t = mpf(self.index) / self.order
        return mpc(mpmath.cospi(2 * t), mpmath.sinpi(2 * t))

    def __str__(self) -> str:
        return f"{self.order}/{self.index}"


ONE = RootOfUnity(1, 0)


def _is_nonpositive_integer(x) -> bool:
    if isinstance(x, Fraction):
        return x.denominator == 1 and x <= 0
    x = to_mp(x)
    if isinstance(x, mpc):
        if x.imag != 0:
            return False
        x = x.real
    return x <= 0 and x == mpmath.floor(x)


def gamma(x):
    """Euler's Gamma function at real or complex ``x``."""
    if _is_nonpositive_integer(x):
        raise PoleError(f"Gamma has a pole at the nonpositive integer {x}")
    return mpmath.gamma(to_mp(x))


def rgamma(x):
    """``1/Gamma(x)``, entire, zero at nonpositive integers."""
    return mpmath.rgamma(to_mp(x))


def polygamma(m: int, x):
    """``psi^(m)(x)``; ``m = 0`` is the digamma function."""
    if m < 0:
        raise ValueError("polygamma order must be >= 0")
    if _is_nonpositive_integer(x):
        raise PoleError(f"polygamma has a pole at {x}")
    return mpmath.psi(m, to_mp(x))


@lru_cache(maxsize=64)
def _borwein_weights(n: int, prec: int) -> tuple:
    with mpmath.workprec(prec):
        d = []
        term = mpf(0)  # terms of n * sum (n+i-1)! 4^i / ((n-i)! (2i)!)
        acc = mpf(0)
        for i in range(n + 1):
            if i == 0:
                term = mpmath.factorial(n - 1) / mpmath.factorial(n)
            else:
                term *= mpf(4) * (n + i - 1) * (n - i + 1) / ((2 * i - 1) * (2 * i))
            acc += term
            d.append(n * acc)
        return tuple(d)


def _zeta_borwein(s):
    # alternating-series acceleration, valid for Re(s) >= 0, s != 1
    prec = mpmath.mp.prec
    n = int(prec * 0.4) + 10
    d = _borwein_weights(n, prec + 20)
    with mpmath.workprec(prec + 20):
        dn = d[n]
        acc = mpf(0)
        for k in range(n):
            t = (d[k] - dn) / mpmath.power(k + 1, s)
            acc = acc - t if k % 2 else acc + t
        out = -acc / (dn * (1 - mpmath.power(2, 1 - s)))
    return +out


def zeta(s):
    """Riemann zeta at real ``s != 1``.

    Borwein's accelerated alternating series for ``s >= 0`` and the
    functional equation below that.
    """
    s = to_mp(s)
    if s == 1:
        raise PoleError("zeta has a pole at s = 1")
    if s >= 0:
        if s > mpmath.mp.prec:
            return mpf(1) + mpmath.power(2, -s)
        return _zeta_borwein(s)
    # zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s) zeta(1-s)
    sn = mpmath.sinpi(s / 2)
    if sn == 0:
        return mpf(0)
    return mpmath.power(2, s) * mpmath.power(mpmath.pi, s - 1) * sn * mpmath.gamma(1 - s) * _zeta_borwein(1 - s)


def zeta_reference(s):
    """mpmath's Euler-Maclaurin zeta; the second route for cross-checks."""
    return mpmath.zeta(to_mp(s))


def hurwitz_zeta(s, a):
    return mpmath.zeta(to_mp(s), to_mp(a))


def tangent_numbers(count: int) -> list[Fraction]:
    """Normalized tangent numbers ``tau_m`` with ``tan z = sum tau_m z^(2m+1)``.

    Generated from ``tan' = 1 + tan^2``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    size = 2 * count + 2
    a = [Fraction(0)] * size
    for n in range(size - 1):
        s = Fraction(1) if n == 0 else Fraction(0)
        for i in range(n + 1):
            if a[i] and a[n - i]:
                s += a[i] * a[n - i]
        a[n + 1] = s / (n + 1)
    return [a[2 * m + 1] for m in range(count)]


def bernoulli_numbers(count: int) -> list[Fraction]:
    """``B_0 .. B_{count-1}`` exactly (convention ``B_1 = -1/2``)."""
    B = [Fraction(0)] * count
    for m in range(count):
        B[m] = Fraction(1) if m == 0 else -sum(
            Fraction(math.comb(m + 1, k)) * B[k] for k in range(m)
        ) / (m + 1)
    return B


def harmonic(m: int) -> Fraction:
    return sum((Fraction(1, k) for k in range(1, m + 1)), Fraction(0))


def euler_gamma():
    return +mpmath.euler


def euler_gamma_em():
    """Euler's constant from ``H_N - log N`` with an Euler-Maclaurin correction."""
    dps = mpmath.mp.dps
    N = dps + 10
    K = dps // 2 + 10
    B = bernoulli_numbers(2 * K + 2)
    with mpmath.workdps(dps + 15):
        H = mpmath.fsum(mpf(1) / k for k in range(1, N + 1))
        g = H - mpmath.log(N) - mpf(1) / (2 * N)
        for k in range(1, K + 1):
            b = B[2 * k]
            g += mpf(b.numerator) / b.denominator / (2 * k * mpmath.power(N, 2 * k))
    return +g


def exp_neg_gamma_product(N: int = 1000):
    """``prod_{k>=1} (1 + 1/k) e^{-1/k}`` truncated at ``N`` plus its tail.

    The tail ``sum_{k>N} log(1+1/k) - 1/k = sum_{j>=2} (-1)^(j-1) zeta(j, N+1)/j``
    converges geometrically with ratio ``1/(N+1)``.
    """
    with mpmath.workdps(mpmath.mp.dps + 10):
        head = mpmath.fsum(mpmath.log1p(mpf(1) / k) - mpf(1) / k for k in range(1, N + 1))
        eps = mpmath.power(10, -mpmath.mp.dps)
        tail = mpf(0)
        j = 2
        while True:
            t = mpmath.zeta(j, N + 1) / j
            tail += t if j % 2 else -t
            if abs(t) < eps:
                break
            j += 1
        out = mpmath.exp(head + tail)
    return +out


def constants() -> dict:
    """Named constants at the ambient precision."""
    return {
        "euler_gamma": euler_gamma(),
        "pi": +mpmath.pi,
        "log2": mpmath.log(2),
        "log3": mpmath.log(3),
        "zeta3": zeta(3),
    }
