"""The hybrid method: radial expansions at roots of unity, then coefficient transfer.

A generating function is described declaratively by a :class:`GFSpec`::

    f(z) = prod_j (1 - z^j)^(e_j) * B(z) * exp( sum_l T_l(z) + S(z) )

where ``B`` is entire (given by its Taylor coefficients), each ``T_l`` is a
finite list of :class:`PolylogTerm` values ``c * [Li_nu(phase z^m) - phase z^m]``
(the subtraction is optional) and ``S`` is analytic beyond the unit circle.
Near a root of unity every piece has an explicit local expansion; their
product is the radial expansion, and each of its monomials transfers to
descending powers of ``n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import math
from typing import Callable, Iterable

import mpmath
from mpmath import mpf, mpc

from .logpower import AsymptoticExpansion, LogPowerMonomial, evaluate_expansion, transfer_asymptotic
from .numerics import ONE, RootOfUnity, to_mp
from .series import FactorGenerator, TruncatedSeries, product_expand, series_exp, series_pow
from .singular import (
    LogPowerSeries,
    analytic_lps,
    expand_polylog_power,
    lps_exp,
    lps_mul,
)

__all__ = [
    "PolylogTerm",
    "GFSpec",
    "ValidationError",
    "DecompositionError",
    "exp_log_decompose",
    "radial_expansion",
    "roots_up_to",
    "assemble",
    "ProfileRow",
    "error_profile",
    "register_decomposition",
]



class ValidationError(ArithmeticError):
    """Two independent computations of the same quantity disagree."""


class DecompositionError(ValidationError):
    """An exp-log representation does not reproduce the product's coefficients."""

    def __init__(self, name: str, index: int, expected, got):
        super().__init__(f"{name}: coefficient {index} differs ({expected} != {got})")
        self.index = index


@dataclass(frozen=True)
class PolylogTerm:
    """``coeff * Li_nu(phase * z^power)``, minus ``coeff * phase * z^power`` if ``subtract_first``."""

    coeff: object
    nu: Fraction
    power: int
    phase: RootOfUnity = ONE
    subtract_first: bool = False


@dataclass
class GFSpec:
    """Declarative description of ``f`` (see the module docstring).

    ``terms(l)`` returns the polylog terms of index ``l >= 1``; every term of
    index ``l`` must have ``power >= l`` so truncations are finite.
    ``closed_forms`` maps a root to a zero-argument callable giving the
    leading coefficient of the radial expansion there, used as a cross-check.
    """

    name: str
    prefactor: dict = field(default_factory=dict)
    entire: Callable[[int], object] | None = None
    terms: Callable[[int], list] = lambda l: []
    analytic_extra: Callable[[int], object] | None = None
    factors: FactorGenerator | None = None
    coefficients: Callable[[int], TruncatedSeries] | None = None
    closed_forms: dict = field(default_factory=dict)
    global_order: Fraction = Fraction(0)
    smoothness: int = 2
    real: bool = True

    @property
    def u0(self) -> int:
        """Guaranteed transfer order ``floor((s + floor(a)) / 2)``."""
        return (self.smoothness + math.floor(self.global_order)) // 2

    def exact_coefficients(self, N: int) -> TruncatedSeries:
        if self.coefficients is not None:
            return self.coefficients(N)
        if self.factors is None:
            raise ValueError(f"{self.name}: no way to enumerate coefficients")
        return product_expand(self.factors, N)

    def reconstruct(self, N: int) -> TruncatedSeries:
        """Series of the exp-log form mod ``z^(N+1)``; exact when all inputs are rational."""
        acc = TruncatedSeries.one(N)
        for j, e in sorted(self.prefactor.items()):
            base = TruncatedSeries.one(N) - TruncatedSeries.monomial(Fraction(1), j, N)
            acc = acc * series_pow(base, Fraction(e))
        if self.entire is not None:
            acc = acc * TruncatedSeries([self.entire(n) for n in range(N + 1)], N)
        expo = [Fraction(0)] * (N + 1)
        l = 1
        while l <= N:
            for term in self.terms(l):
                _add_term_series(expo, term, N)
            l += 1
        if self.analytic_extra is not None:
            for n in range(1, N + 1):
                expo[n] += self.analytic_extra(n)
        return acc * series_exp(TruncatedSeries(expo, N))


def _add_term_series(expo: list, term: PolylogTerm, N: int) -> None:
    m = term.power
    n = 2 if term.subtract_first else 1
    while n * m <= N:
        ph = term.phase.power(n)
        if not ph.is_one:
            raise ValueError("exact reconstruction supports phase 1 only")
        nu = Fraction(term.nu)
        if nu.denominator == 1:
            val = Fraction(1, n ** int(nu)) if nu >= 0 else Fraction(n ** int(-nu))
        else:
            val = mpmath.power(n, -to_mp(nu))
        expo[n * m] = expo[n * m] + term.coeff * val
        n += 1


_DECOMPOSITIONS: dict = {}


def register_decomposition(name: str, builder: Callable[[], GFSpec]) -> None:
    _DECOMPOSITIONS[name] = builder


def exp_log_decompose(g: FactorGenerator, rule: Callable[[], GFSpec] | None = None, N: int = 64) -> GFSpec:
    """Exp-log representation of ``prod a_k(z)``, checked coefficient by coefficient.

    ``rule`` builds the candidate :class:`GFSpec`; without it the rule
    registered under ``g.name`` is used.  Rational inputs are compared
    exactly, others to ``10^-(P/2)``.
    """
    if rule is None:
        try:
            rule = _DECOMPOSITIONS[g.name]
        except KeyError:
            raise ValueError(f"no exp-log rule registered for {g.name!r}") from None
    spec = rule()
    want = product_expand(g, N)
    got = spec.reconstruct(N)
    tol = mpmath.power(10, -mpmath.mp.dps // 2)
    for i in range(N + 1):
        a, b = want[i], got[i]
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            ok = a == b
        else:
            ok = abs(to_mp(a) - to_mp(b)) <= tol * max(1, abs(to_mp(a)))
        if not ok:
            raise DecompositionError(g.name, i, a, b)
    return spec


# ---------------------------------------------------------------- radial expansion


def _taylor_at(coef: Callable[[int], object], zeta: RootOfUnity, degree: int, eps) -> list:
    """``[X^i] sum_N coef(N) zeta^N (1-X)^N`` for ``i <= degree`` by direct summation."""
    out = [mpc(0)] * (degree + 1)
    quiet = 0
    n = 0
    while True:
        c = coef(n)
        big = mpf(0)
        if c != 0:
            base = to_mp(c) * zeta.power(n).value()
            for i in range(min(degree, n) + 1):
                t = base * (-1) ** i * math.comb(n, i)
                out[i] += t
                big = max(big, abs(t))
        quiet = quiet + 1 if big < eps else 0
        if quiet >= 8 and n > 2 * degree + 8:
            return out
        n += 1
        if n > 200000:
            raise ValidationError("analytic factor Taylor sum does not converge")


def _prefactor_lps(j: int, e: Fraction, zeta: RootOfUnity, rel: Fraction) -> LogPowerSeries:
    """``(1 - z^j)^e`` at ``zeta`` with relative order ``rel``."""
    D = max(math.ceil(rel) - 1, 0) + 1
    if zeta.power(j).is_one:
        # 1 - (1-X)^j = j X (1 + rho(X))
        inner = TruncatedSeries(
            [Fraction((-1) ** i * math.comb(j, i + 1), j) for i in range(D + 1)], D
        )
        pw = series_pow(inner, e)
        lead = mpmath.power(j, to_mp(e))
        return analytic_lps([lead * to_mp(c) for c in pw], e + rel, zeta, shift=e)
    w = zeta.power(j).value()
    a0 = 1 - w
    coeffs = [mpc(1)] + [-w * (-1) ** i * math.comb(j, i) / a0 for i in range(1, D + 1)]
    pw = series_pow(TruncatedSeries(coeffs, D), to_mp(e))
    lead = mpmath.power(a0, to_mp(e))
    return analytic_lps([lead * c for c in pw], rel, zeta)


def _lam_coefficient(spec: GFSpec, zeta: RootOfUnity, scan: int = 8) -> Fraction:
    """Coefficient of ``Lam`` in the exponent at ``zeta`` (from ``Li_1`` terms)."""
    lam = Fraction(0)
    for l in range(1, scan + 1):
        for t in spec.terms(l):
            if Fraction(t.nu) == 1 and (t.phase * zeta.power(t.power)).is_one:
                lam += Fraction(t.coeff)
    return lam


def _exponent_lps(spec: GFSpec, zeta: RootOfUnity, order: Fraction, eps) -> LogPowerSeries:
    total = LogPowerSeries({}, order, zeta)
    quiet = 0
    l = 1
    while True:
        big = mpf(0)
        for term in spec.terms(l):
            part = expand_polylog_power(
                term.nu, term.power, zeta, order, term.phase, term.subtract_first
            ) * to_mp(term.coeff)
            for c in part.terms.values():
                big = max(big, abs(c))
            total = total + part
        quiet = quiet + 1 if big < eps else 0
        if quiet >= 3 and l >= 8:
            break
        l += 1
        if l > 5000:
            raise ValidationError(f"{spec.name}: exponent sum does not converge at {zeta}")
    if spec.analytic_extra is not None:
        D = math.ceil(order) - 1
        if D >= 0:
            extra = spec.analytic_extra
            total = total + analytic_lps(_taylor_at(lambda n: extra(n) if n else 0, zeta, D, eps), order, zeta)
    return total


def radial_expansion(spec: GFSpec, zeta: RootOfUnity, t, check: bool = True) -> LogPowerSeries:
    """``asymp(f, zeta, t)``: all monomials ``X^alpha Lam^k`` with ``alpha < t``.

    The leading coefficient is compared with ``spec.closed_forms[zeta]`` when
    registered; a gap beyond ``10^-(P/2)`` raises :class:`ValidationError`.
    """
    t = Fraction(t)
    dps = mpmath.mp.dps
    with mpmath.workdps(dps + 15):
        eps = mpmath.power(10, -(dps + 10))
        lam = _lam_coefficient(spec, zeta)
        sing = [(j, Fraction(e)) for j, e in spec.prefactor.items() if zeta.power(j).is_one]
        lead = sum((e for _, e in sing), Fraction(0)) - lam
        rel = t - lead
        if rel <= 0:
            return LogPowerSeries({}, t, zeta)
        out = LogPowerSeries.constant(mpc(1), rel, zeta)
        for j, e in sorted(spec.prefactor.items()):
            out = lps_mul(out, _prefactor_lps(j, Fraction(e), zeta, rel))
        if spec.entire is not None:
            D = math.ceil(rel) - 1
            out = lps_mul(out, analytic_lps(_taylor_at(spec.entire, zeta, D, eps), rel, zeta))
        expo = _exponent_lps(spec, zeta, rel, eps)
        if any(a < 0 or (a == 0 and k > 1) for (a, k) in expo.terms):
            raise ValidationError(f"{spec.name}: exponent is singular at {zeta}")
        out = lps_mul(out, lps_exp(expo)).truncate(t)
        out = LogPowerSeries({k: +c for k, c in out.terms.items()}, out.order, zeta)
    if check and zeta in spec.closed_forms:
        _check_leading(spec, zeta, out)
    return out


def _check_leading(spec: GFSpec, zeta: RootOfUnity, lps: LogPowerSeries) -> None:
    a0 = lps.min_alpha()
    got = lps.coefficient(a0, max(k for a, k in lps.terms if a == a0))
    want = to_mp(spec.closed_forms[zeta]())
    tol = mpmath.power(10, -mpmath.mp.dps // 2)
    if abs(got - want) > tol * max(1, abs(want)):
        raise ValidationError(
            f"{spec.name} at {zeta}: leading coefficient {mpmath.nstr(got, 20)} "
            f"disagrees with closed form {mpmath.nstr(want, 20)}"
        )


# ---------------------------------------------------------------- assembly


def roots_up_to(max_order: int) -> list:
    """Roots of unity of order ``<= max_order`` sorted by ``(order, index)``."""
    return [
        RootOfUnity(q, j) for q in range(1, max_order + 1) for j in range(q) if math.gcd(j, q) == 1
    ]


def assemble(spec: GFSpec, max_order: int, u, roots: Iterable | None = None) -> AsymptoticExpansion:
    """Sum of the transferred radial expansions, keeping ``n^-beta`` with ``beta <= u``.

    ``roots`` overrides the default set (all roots of order ``<= max_order``).
    For real ``spec`` the expansion at a conjugate root is obtained by
    conjugating coefficients.
    """
    if max_order < 1:
        raise ValueError("max_order must be >= 1")
    u = Fraction(u)
    roots = list(roots) if roots is not None else roots_up_to(max_order)
    out = AsymptoticExpansion(error_order=u)
    done: dict = {}
    for zeta in roots:
        conj = zeta.conjugate()
        if spec.real and conj in done and conj != zeta:
            lps = LogPowerSeries(
                {k: mpmath.conj(c) for k, c in done[conj].terms.items()}, done[conj].order, zeta
            )
        else:
            lps = radial_expansion(spec, zeta, u)
        done[zeta] = lps
        for (alpha, k), c in lps.sorted_terms():
            if alpha.denominator == 1 and alpha >= 0 and k == 0:
                continue
            depth = math.floor(u - alpha - 1) + 1
            if depth < 1:
                continue
            mono = LogPowerMonomial(alpha, k, c, zeta)
            out = out + transfer_asymptotic(mono, depth, max_beta=u)
    out.error_order = u
    return out


@dataclass(frozen=True)
class ProfileRow:
    n: int
    exact: object
    approx: object
    scaled: object  # None when the scaling is undefined (log n = 0)


def _scale(n: int, rel, scaling: str):
    if scaling == "n3":
        return rel * mpf(n) ** 3
    if scaling == "n4log3":
        if n < 2:
            return None
        return rel * mpf(n) ** 4 / mpmath.log(n) ** 3
    if scaling == "none":
        return rel
    raise ValueError(f"unknown scaling {scaling!r}")


def error_profile(
    spec: GFSpec,
    e: AsymptoticExpansion,
    n_max: int,
    scaling: str = "n3",
    n_min: int = 1,
    exact: TruncatedSeries | None = None,
) -> list:
    """Rows ``(n, f_n, approx_n, scaled (f_n/approx_n - 1))`` for ``n_min <= n <= n_max``.

    ``scaling`` is ``"n3"`` (times ``n^3``), ``"n4log3"`` (times
    ``n^4 / log^3 n``) or ``"none"``.
    """
    series = exact if exact is not None else spec.exact_coefficients(n_max)
    rows = []
    for n in range(n_min, n_max + 1):
        fn = series[n]
        approx = evaluate_expansion(e, n)
        if isinstance(approx, mpc) and spec.real:
            approx = approx.real
        rel = to_mp(fn) / approx - 1
        rows.append(ProfileRow(n, fn, approx, _scale(n, rel, scaling)))
    return rows
