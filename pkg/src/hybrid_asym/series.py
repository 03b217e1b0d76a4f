"""Truncated power series with exact coefficients.

Coefficients are usually :class:`fractions.Fraction`; nothing here rounds, so a
series built from rationals stays rational.  The arithmetic is written against
the generic number protocol, which lets a caller feed ``mpmath.mpf`` values
when an exponent such as ``k**(-3/2)`` has no rational form.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import math
from typing import Callable, Iterable, Sequence

__all__ = [
    "TruncatedSeries",
    "FactorGenerator",
    "series_mul",
    "series_exp",
    "series_log",
    "series_inverse",
    "series_pow",
    "substitute_power",
    "product_expand",
    "one_plus_factors",
]


class TruncatedSeries:
    """Power series ``sum c_n z^n`` known modulo ``z^(order+1)``."""

    __slots__ = ("_c",)

    def __init__(self, coeffs: Iterable, order: int | None = None):
        c = list(coeffs)
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("truncation order must be >= 0")
        if len(c) > order + 1:
            c = c[: order + 1]
        else:
            c.extend([Fraction(0)] * (order + 1 - len(c)))
        self._c = tuple(c)

    @classmethod
    def one(cls, order: int) -> "TruncatedSeries":
        return cls([Fraction(1)], order)

    @classmethod
    def zero(cls, order: int) -> "TruncatedSeries":
        return cls([], order)

    @classmethod
    def monomial(cls, coeff, power: int, order: int) -> "TruncatedSeries":
        c = [Fraction(0)] * (order + 1)
        if power <= order:
            c[power] = coeff
        return cls(c, order)

    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def order(self) -> int:
        return len(self._c) - 1

    def __len__(self) -> int:
        return len(self._c)

    def __getitem__(self, n):
        return self._c[n]

    def __iter__(self):
        return iter(self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._c == other._c

    def __hash__(self) -> int:
        return hash(self._c)

    def __repr__(self) -> str:
        shown = ", ".join(str(x) for x in self._c[:8])
        more = ", ..." if len(self._c) > 8 else ""
        return f"TruncatedSeries([{shown}{more}], order={self.order})"

    def truncate(self, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self._c, min(order, self.order))

    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries([other], self.order)

    def __add__(self, other):
        other = self._coerce(other)
        n = min(self.order, other.order)
        return TruncatedSeries([self._c[i] + other._c[i] for i in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-x for x in self._c], self.order)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return series_mul(self, other)
        return TruncatedSeries([x * other for x in self._c], self.order)

    def __rmul__(self, other):
        return self * other

    def derivative(self) -> "TruncatedSeries":
        n = self.order
        return TruncatedSeries([k * self._c[k] for k in range(1, n + 1)], max(n - 1, 0))

    def shift(self, m: int) -> "TruncatedSeries":
        """Multiply by ``z^m`` keeping the truncation order."""
        return TruncatedSeries([Fraction(0)] * m + list(self._c), self.order)

    def evaluate(self, z):
        acc = 0
        for c in reversed(self._c):
            acc = acc * z + c
        return acc


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated at the smaller of the two orders."""
    n = min(a.order, b.order)
    ac, bc = a.coeffs, b.coeffs
    out = [Fraction(0)] * (n + 1)
    nz = [(j, bc[j]) for j in range(n + 1) if bc[j] != 0]
    for i in range(n + 1):
        x = ac[i]
        if x == 0:
            continue
        for j, y in nz:
            if i + j > n:
                break
            out[i + j] += x * y
    return TruncatedSeries(out, n)


def _div(s, m: int):
    # an empty sum is the int 0, which must not decay to a float
    return Fraction(s, m) if isinstance(s, int) else s / m


def series_exp(a: TruncatedSeries) -> TruncatedSeries:
    """``exp(a)`` via ``(exp a)' = a' exp a``; ``a`` must have zero constant term."""
    if a[0] != 0:
        raise ValueError("series_exp needs a zero constant term; split e^{a0} off first")
    n = a.order
    ka = [k * a[k] for k in range(n + 1)]
    nz = [k for k in range(1, n + 1) if ka[k] != 0]
    b = [Fraction(1)] + [Fraction(0)] * n
    for m in range(1, n + 1):
        s = 0
        for k in nz:
            if k > m:
                break
            s += ka[k] * b[m - k]
        b[m] = _div(s, m)
    return TruncatedSeries(b, n)


def series_log(a: TruncatedSeries) -> TruncatedSeries:
    """``log(a)`` by integrating ``a'/a``; ``a`` must have constant term 1."""
    if a[0] != 1:
        raise ValueError("series_log needs constant term exactly 1")
    n = a.order
    l = [Fraction(0)] * (n + 1)
    for m in range(1, n + 1):
        s = m * a[m]
        for k in range(1, m):
            if l[k] != 0 and a[m - k] != 0:
                s -= k * l[k] * a[m - k]
        l[m] = s / m
    return TruncatedSeries(l, n)


def series_inverse(a: TruncatedSeries) -> TruncatedSeries:
    if a[0] == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    n = a.order
    inv0 = 1 / a[0] if not isinstance(a[0], int) else Fraction(1, a[0])
    b = [inv0] + [Fraction(0)] * n
    for m in range(1, n + 1):
        s = 0
        for k in range(1, m + 1):
            if a[k] != 0:
                s += a[k] * b[m - k]
        b[m] = -s * inv0
    return TruncatedSeries(b, n)


def series_pow(a: TruncatedSeries, e) -> TruncatedSeries:
    """``a**e`` for a series with constant term 1 and any exponent ``e``.

    Uses the J.C.P. Miller recurrence ``a * (a^e)' = e * a' * a^e``.
    """
    if a[0] != 1:
        raise ValueError("series_pow needs constant term exactly 1")
    n = a.order
    b = [Fraction(1)] + [Fraction(0)] * n
    for m in range(1, n + 1):
        s = 0
        for k in range(1, m + 1):
            if a[k] != 0:
                s += (e * k - (m - k)) * a[k] * b[m - k]
        b[m] = _div(s, m)
    return TruncatedSeries(b, n)


def substitute_power(a: TruncatedSeries, m: int) -> TruncatedSeries:
    """``a(z^m)`` at the same truncation order."""
    if m < 1:
        raise ValueError("m must be >= 1")
    n = a.order
    out = [Fraction(0)] * (n + 1)
    for i, c in enumerate(a.coeffs):
        if i * m > n:
            break
        out[i * m] = c
    return TruncatedSeries(out, n)


@dataclass(frozen=True)
class FactorGenerator:
    """Rule producing the ``k``-th factor ``a_k(z) = 1 + O(z^k)`` of a product.

    ``rule(k, N)`` must return the factor exactly modulo ``z^(N+1)``.
    """

    name: str
    rule: Callable[[int, int], TruncatedSeries]

    def factor(self, k: int, N: int) -> TruncatedSeries:
        return self.rule(k, N)


def one_plus_factors(name: str, r: Callable[[int], object]) -> FactorGenerator:
    """Generator for ``prod_k (1 + r(k) z^k)``."""

    def rule(k: int, N: int) -> TruncatedSeries:
        return TruncatedSeries([Fraction(1)], N) + TruncatedSeries.monomial(r(k), k, N)

    return FactorGenerator(name, rule)


def _mul_sparse_inplace(acc: list, fac: Sequence) -> None:
    # fac[0] == 1; sweeping downwards reads acc[i - j] before it is updated
    terms = [(j, c) for j, c in enumerate(fac) if j > 0 and c != 0]
    for i in range(len(acc) - 1, 0, -1):
        s = 0
        for j, c in terms:
            if j > i:
                break
            x = acc[i - j]
            if x != 0:
                s += x * c
        if s != 0:
            acc[i] = acc[i] + s


def _is_rational(c) -> bool:
    return isinstance(c, (int, Fraction))


def _product_rational(g: FactorGenerator, N: int) -> TruncatedSeries | None:
    """Integer numerators over one common denominator; avoids a gcd per operation."""
    num = [1] + [0] * N
    den = 1
    for k in range(1, N + 1):
        fac = g.factor(k, N).coeffs
        if fac[0] != 1:
            raise ValueError(f"factor {k} of {g.name!r} does not start with 1")
        if not all(_is_rational(c) for c in fac):
            return None
        d = math.lcm(*(Fraction(c).denominator for c in fac))
        terms = [(j, int(Fraction(c) * d)) for j, c in enumerate(fac) if j > 0 and c != 0]
        for i in range(N, -1, -1):
            s = num[i] * d
            for j, c in terms:
                if j > i:
                    break
                x = num[i - j]
                if x:
                    s += x * c
            num[i] = s
        den *= d
        if k % 16 == 0 or k == N:
            r = den
            for x in num:
                if r == 1:
                    break
                if x:
                    r = math.gcd(r, x)
            if r > 1:
                num = [x // r for x in num]
                den //= r
    return TruncatedSeries([Fraction(x, den) for x in num], N)


def product_expand(g: FactorGenerator, N: int) -> TruncatedSeries:
    """``prod_{k=1}^{N} a_k(z) mod z^(N+1)``; exact for the infinite product.

    Rational factors go through an integer common-denominator kernel; other
    coefficient types (e.g. ``mpf``) use plain in-place multiplication.
    """
    if N < 0:
        raise ValueError("N must be >= 0")
    out = _product_rational(g, N)
    if out is not None:
        return out
    acc = [Fraction(1)] + [Fraction(0)] * N
    for k in range(1, N + 1):
        fac = g.factor(k, N).coeffs
        if fac[0] != 1:
            raise ValueError(f"factor {k} of {g.name!r} does not start with 1")
        _mul_sparse_inplace(acc, fac)
    return TruncatedSeries(acc, N)
