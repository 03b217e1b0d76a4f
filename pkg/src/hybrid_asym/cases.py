"""Registered generating functions, their constants and case-study reports.

Each named generating function comes with three things: a fast exact
enumerator (integer recurrences over scaled counts), a :class:`GFSpec` for
the hybrid pipeline, and constants computed by two independent routes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
import math

import gmpy2
from gmpy2 import mpz
import mpmath
from mpmath import mpf

from .logpower import AsymptoticExpansion
from .numerics import ONE, RootOfUnity, exp_neg_gamma_product, gamma, tangent_numbers, zeta
from .pipeline import (
    GFSpec,
    PolylogTerm,
    ProfileRow,
    ValidationError,
    assemble,
    error_profile,
    register_decomposition,
)
from .series import FactorGenerator, TruncatedSeries, one_plus_factors, series_log

__all__ = [
    "mobius",
    "divisors",
    "totient",
    "radical",
    "ggcd",
    "irreducible_count",
    "TwoRouteConstant",
    "CaseStudyReport",
    "distinct_cycle_counts",
    "root_permutation_counts",
    "same_cycle_type_counts",
    "ddf_counts",
    "plane_tree_counts",
    "forest_counts",
    "dissimilar_forest_counts",
    "q_alpha_coefficients",
    "distinct_cycles_spec",
    "square_permutations_spec",
    "mth_roots_spec",
    "same_cycle_type_spec",
    "ddf_spec",
    "q_alpha_spec",
    "sectioned_exp_factors",
    "constant",
    "CONSTANT_NAMES",
    "exp_neg_gamma",
    "e_G",
    "square_c2",
    "W_one",
    "W_minus_one",
    "K_forest",
    "forest_L",
    "kappa",
    "f_omega",
    "delta_q",
    "B_one",
    "Q_alpha_one",
    "sectioned_exp",
    "distinct_cycles",
    "square_permutations",
    "mth_root_permutations",
    "same_cycle_type",
    "distinct_degree_factorization",
    "dissimilar_forests",
    "q_alpha_products",
    "NamedGF",
    "named_gf",
    "case_report",
]

AGREEMENT_DIGITS = 10


# ---------------------------------------------------------------- arithmetic


def _factorize(n: int) -> dict:
    out: dict = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def mobius(n: int) -> int:
    f = _factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int) -> list:
    return [d for d in range(1, n + 1) if n % d == 0]


def totient(n: int) -> int:
    out = n
    for p in _factorize(n):
        out = out // p * (p - 1)
    return out


def radical(n: int) -> int:
    return math.prod(_factorize(n))


def ggcd(l: int, m: int) -> int:
    """``lim gcd(l^j, m)``: the part of ``m`` built from primes dividing ``l``."""
    out = 1
    for p, e in _factorize(m).items():
        if l % p == 0:
            out *= p**e
    return out


def _is_prime_power(q: int) -> bool:
    return q >= 2 and len(_factorize(q)) == 1


def irreducible_count(n: int, q: int) -> int:
    """Monic irreducible polynomials of degree ``n`` over a field with ``q`` elements."""
    s = sum(mobius(k) * q ** (n // k) for k in divisors(n))
    return s // n


# ---------------------------------------------------------------- constants


@dataclass(frozen=True)
class TwoRouteConstant:
    """A constant with two independent evaluations and their relative gap."""

    name: str
    value: object
    routes: dict
    delta: object

    def as_dict(self, digits: int = 30) -> dict:
        return {
            "name": self.name,
            "value": mpmath.nstr(self.value, digits),
            "routes": {k: mpmath.nstr(v, digits) for k, v in self.routes.items()},
            "delta": mpmath.nstr(self.delta, 5),
        }


def _two_routes(name: str, first: tuple, second: tuple, digits: int = AGREEMENT_DIGITS) -> TwoRouteConstant:
    (na, a), (nb, b) = first, second
    delta = abs(a - b) / max(abs(a), mpf(10) ** -mpmath.mp.dps)
    if delta > mpf(10) ** -digits:
        raise ValidationError(f"{name}: routes disagree ({mpmath.nstr(a, 20)} vs {mpmath.nstr(b, 20)})")
    return TwoRouteConstant(name, a, {na: a, nb: b}, delta)


def _log_sum(term) -> mpf:
    """``sum_{k>=1} term(k)`` for smooth algebraically decaying terms."""
    return mpmath.nsum(term, [1, mpmath.inf])


def exp_neg_gamma() -> TwoRouteConstant:
    return _two_routes(
        "exp_neg_gamma",
        ("direct", mpmath.exp(-mpmath.euler)),
        ("product", exp_neg_gamma_product()),
    )


def e_G() -> TwoRouteConstant:
    """``prod cosh(1/2k)``: zeta series versus the extrapolated product."""
    tau = tangent_numbers(80)
    eps = mpmath.power(10, -mpmath.mp.dps - 5)
    G = mpf(0)
    for m in range(1, 80):
        t = to_f(Fraction((-1) ** (m - 1), m * 2 ** (2 * m + 1)) * tau[m - 1]) * zeta(2 * m)
        G += t
        if abs(t) < eps:
            break
    prod = _log_sum(lambda k: mpmath.log(mpmath.cosh(1 / (2 * k))))
    return _two_routes("eG", ("zeta_series", mpmath.exp(G)), ("cosh_product", mpmath.exp(prod)))


def square_c2() -> TwoRouteConstant:
    tanh_sum = _log_sum(lambda k: 1 / (2 * k) - mpmath.tanh(1 / (2 * k)))
    # 1/2k - tanh(1/2k) = sum_{m>=2} (-1)^m tau_{m-1} (2k)^(1-2m)
    tau = tangent_numbers(80)
    eps = mpmath.power(10, -mpmath.mp.dps - 5)
    z = mpf(0)
    for m in range(2, 80):
        t = (-1) ** m * to_f(tau[m - 1]) * zeta(2 * m - 1) / mpf(2) ** (2 * m - 1)
        z += t
        if abs(t) < eps:
            break
    return _two_routes("c2", ("tanh_sum", tanh_sum), ("zeta_series", z))


def to_f(x: Fraction) -> mpf:
    return mpf(x.numerator) / x.denominator


@lru_cache(maxsize=None)
def bessel_log_coefficients(N: int) -> tuple:
    """``h_l = [z^l] log I(z)`` with ``I(z) = sum z^n / n!^2``, exactly."""
    I = TruncatedSeries([Fraction(1, math.factorial(n) ** 2) for n in range(N + 1)], N)
    return series_log(I).coeffs


def W_one() -> TwoRouteConstant:
    """``W(1) = prod I(1/k^2)``: extrapolated product versus zeta series."""
    prod = _log_sum(lambda k: mpmath.log(mpmath.besseli(0, 2 / k)))
    h = bessel_log_coefficients(160)
    eps = mpmath.power(10, -mpmath.mp.dps - 5)
    s = mpmath.log(mpmath.besseli(0, 2))
    for l in range(1, 160):
        t = to_f(h[l]) * (zeta(2 * l) - 1)
        s += t
        if abs(t) < eps and l > 8:
            break
    return _two_routes("W1", ("bessel_product", mpmath.exp(prod)), ("zeta_series", mpmath.exp(s)))


def W_minus_one() -> mpf:
    even = _log_sum(lambda k: mpmath.log(mpmath.besseli(0, 1 / k)))
    odd = _log_sum(lambda k: mpmath.log(mpmath.besselj(0, 2 / (2 * k - 1))))
    return mpmath.exp(even + odd)


def K_forest() -> TwoRouteConstant:
    """``F(1/4)`` for forests of plane trees, summed in two orders."""
    eps = mpmath.power(10, -mpmath.mp.dps - 5)
    a = mpf(0)
    k = 1
    while True:
        t = (1 - mpmath.sqrt(1 - mpf(4) ** (1 - k))) / (2 * k)
        a += t
        if abs(t) < eps:
            break
        k += 1
    # -sum_n T_n log(1 - 4^-n), with the sum of T_n 4^-n = T(1/4) = 1/2 split off
    b = mpf(1) / 2
    tn = mpf(1)
    n = 1
    while True:
        x = mpf(4) ** -n
        t = tn * (-mpmath.log1p(-x) - x)
        b += t
        if abs(t) < eps:
            break
        tn = tn * 2 * (2 * n - 1) / (n + 1)
        n += 1
    return _two_routes("K", ("tree_series", mpmath.exp(a)), ("forest_product", mpmath.exp(b)))


def _catalan_ratio_terms():
    """Yields ``t_n = T_n 4^-n`` for ``n = 1, 2, ...``."""
    t = mpf(1) / 4
    n = 1
    while True:
        yield t
        t = t * (2 * n - 1) / (2 * (n + 1))
        n += 1


def _lambda_quarter_direct(m: int, tol) -> mpf:
    # t_n < n^-1.5 / 7, so the tail beyond N is below 7^-m N^(1-1.5m) / (1.5m - 1)
    N = 1
    while mpf(7) ** -m * mpf(N) ** (1 - 1.5 * m) / (1.5 * m - 1) > tol:
        N *= 2
    s = mpf(0)
    for n, t in zip(range(N), _catalan_ratio_terms()):
        s += t**m
    return s


def forest_L() -> TwoRouteConstant:
    """``sum_{m>=2} (-1)^(m-1)/m Lambda_m(1/4)``; ``m`` stops once ``Lambda_m < 10^-(P/2)``."""
    tol = mpmath.power(10, -mpmath.mp.dps // 2)
    a = b = mpf(0)
    m = 2
    while True:
        la = mpmath.nsum(lambda n, m=m: (mpmath.binomial(2 * n - 2, n - 1) / n / mpf(4) ** n) ** m,
                         [1, mpmath.inf], method="levin")
        if m <= 4:
            lb = mpf(4) ** -m * mpmath.hyper([mpf(1) / 2] * m + [1], [2] * m, 1)
        else:
            lb = _lambda_quarter_direct(m, tol * mpf(10) ** -5)
        sign = 1 if m % 2 else -1
        a += sign * la / m
        b += sign * lb / m
        if la < tol:
            break
        m += 1
    return _two_routes("L", ("levin", a), ("hypergeometric", b))


def kappa() -> TwoRouteConstant:
    K = K_forest()
    L = forest_L()
    a = mpmath.exp(L.routes["levin"] + mpf(1) / 2) / K.routes["tree_series"]
    b = mpmath.exp(L.routes["hypergeometric"] + mpf(1) / 2) / K.routes["forest_product"]
    return _two_routes("kappa", ("levin", a), ("hypergeometric", b))


def f_omega():
    """``prod (1 + omega^k / k)`` at ``omega = e^(2 i pi / 3)`` by the Gamma product formula."""
    w = mpmath.expjpi(mpf(2) / 3)
    return 3 * gamma(mpf(2) / 3) / (gamma(mpf(1) / 3 + w / 3) * gamma(mpf(2) / 3 + w**2 / 3))


def _ddf_factor_logs(q: int, k: int, hat: bool):
    I = irreducible_count(k, q)
    x = mpf(q) ** -k
    head = mpmath.log1p(I / (mpf(q) ** k - 1)) if hat else mpmath.log1p(I * x)
    return head + I * mpmath.log1p(-x)


def delta_q(q: int, hat: bool = False) -> TwoRouteConstant:
    """``delta(q)`` (or ``delta_hat(q)``): raw product with exact tail versus the accelerated product.

    The raw route multiplies ``N = 10^4`` factors and adds the tail
    ``sum_{k>N} log(1+1/k) - 1/k`` through Hurwitz zeta values; its
    ``O(q^-N/2)`` neglect is far below working precision.
    """
    if not _is_prime_power(q):
        raise ValueError(f"q = {q} is not a prime power")
    eps = mpmath.power(10, -mpmath.mp.dps - 5)
    with mpmath.workdps(mpmath.mp.dps + 10):
        N = 10000
        raw = mpmath.fsum(_ddf_factor_logs(q, k, hat) for k in range(1, N + 1))
        j = 2
        while True:
            t = mpmath.zeta(j, N + 1) / j
            raw += t if j % 2 else -t
            if abs(t) < eps:
                break
            j += 1
        acc = -mpmath.euler
        k = 1
        while True:
            t = _ddf_factor_logs(q, k, hat) - mpmath.log1p(mpf(1) / k) + mpf(1) / k
            acc += t
            if abs(t) < eps and k > 10:
                break
            k += 1
        a, b = mpmath.exp(raw), mpmath.exp(acc)
    name = "delta_hat" if hat else "delta"
    return _two_routes(f"{name}({q})", ("raw", +a), ("accelerated", +b))


def sectioned_exp(d: int, x):
    """``exp_d(x) = sum_n x^(d n) / (d n)!`` by direct summation (``|x| <= 1``)."""
    eps = mpmath.power(10, -mpmath.mp.dps - 5)
    y = mpmath.mpmathify(x) ** d
    total = term = mpf(1)
    n = 0
    while abs(term) > eps:
        n += 1
        term = term * y / mpmath.rf(d * (n - 1) + 1, d)
        total += term
    return total


@lru_cache(maxsize=None)
def sectioned_exp_log(d: int, R: int) -> tuple:
    """``a_r = [y^r] log exp_d(x)`` with ``y = x^d``, for ``r <= R``."""
    s = TruncatedSeries([Fraction(1, math.factorial(d * r)) for r in range(R + 1)], R)
    return series_log(s).coeffs


def _root_classes(m: int) -> list:
    """``(g, d)`` for the squarefree ``g | rad(m)``, ``g > 1``, with ``d = ggcd(g, m)``."""
    R = radical(m)
    return [(g, ggcd(g, m)) for g in divisors(R) if g > 1]


def B_one(m: int) -> TwoRouteConstant:
    """``B_m(1) = prod_{gcd(l,m)>1} exp_{ggcd(l,m)}(1/l)``.

    Raw route: per residue class mod ``rad(m)``, extrapolated sums of
    ``log exp_d(1/l)``.  Series route: the exp-log rearrangement into zeta
    values ``sum a_{d,r} mu(e) (g e)^(-d r) zeta(d r)``.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    R = radical(m)

    def log_exp_d(d: int, x):
        return mpmath.log(sectioned_exp(d, x))

    raw = mpf(0)
    for c in range(1, R + 1):
        g = math.gcd(c, R)
        if g == 1:
            continue
        d = ggcd(g, m)
        raw += mpmath.nsum(lambda k, c=c, d=d: log_exp_d(d, 1 / (c + R * (k - 1))), [1, mpmath.inf])
    eps = mpmath.power(10, -mpmath.mp.dps - 5)
    series = mpf(0)
    for g, d in _root_classes(m):
        a = sectioned_exp_log(d, 120)
        for e in divisors(R // g):
            mu = mobius(e)
            if mu == 0:
                continue
            for r in range(1, 120):
                t = mu * to_f(a[r]) * mpf(g * e) ** (-d * r) * zeta(d * r)
                series += t
                if abs(t) < eps:
                    break
    return _two_routes(f"B{m}(1)", ("residue_classes", mpmath.exp(raw)), ("zeta_series", mpmath.exp(series)))


def Q_alpha_one(alpha: Fraction) -> TwoRouteConstant:
    """``prod (1 + n^alpha)`` for ``alpha < -1``: extrapolated product versus zeta series."""
    alpha = Fraction(alpha)
    if alpha >= -1:
        raise ValueError("Q_alpha(1) converges only for alpha < -1")
    a = mpmath.mpmathify(alpha.numerator) / alpha.denominator
    # Richardson extrapolation assumes integer-power tails; Euler-Maclaurin does not
    prod = mpmath.nsum(lambda n: mpmath.log1p(mpmath.power(n, a)), [1, mpmath.inf], method="e")
    eps = mpmath.power(10, -mpmath.mp.dps - 5)
    s = mpf(0)
    l = 1
    while True:
        t = (-1) ** (l - 1) * zeta(-a * l) / l if l == 1 else (-1) ** (l - 1) * (zeta(-a * l) - 1) / l
        s += t
        if abs(t) < eps and l > 2:
            break
        l += 1
    s += mpmath.log(2) - 1  # the subtracted first terms: sum_{l>=2} (-1)^(l-1)/l
    return _two_routes(f"Q{alpha}(1)", ("product", mpmath.exp(prod)), ("zeta_series", mpmath.exp(s)))


CONSTANT_NAMES = ("eG", "W1", "K", "exp_neg_gamma", "c2", "L", "kappa", "delta2", "delta_hat2")


def constant(name: str) -> TwoRouteConstant:
    """Look up a named constant; ``B<m>``, ``delta<q>``, ``delta_hat<q>`` are parametric."""
    simple = {
        "eG": e_G,
        "W1": W_one,
        "K": K_forest,
        "exp_neg_gamma": exp_neg_gamma,
        "c2": square_c2,
        "L": forest_L,
        "kappa": kappa,
    }
    if name in simple:
        return simple[name]()
    for prefix, fn in (("delta_hat", lambda v: delta_q(v, hat=True)), ("delta", delta_q), ("B", B_one)):
        if name.startswith(prefix) and name[len(prefix):].isdigit():
            return fn(int(name[len(prefix):]))
    raise KeyError(name)


# ---------------------------------------------------------------- exact enumeration


def _scaled_product(N: int, scale: int, terms) -> list:
    """``scale * [z^n] prod_k (1 + sum_j (num/den) z^j)`` for ``n <= N``, as integers.

    ``terms(k)`` lists ``(j, num, den)`` with ``j`` increasing.  ``scale``
    must make every partial product integral (``N!^p`` for the permutation
    families, ``1`` for integer factors), so each division is exact.
    """
    H = [mpz(0)] * (N + 1)
    H[0] = mpz(scale)
    for k in range(1, N + 1):
        ts = [(j, mpz(num), mpz(den)) for j, num, den in terms(k)]
        if not ts:
            continue
        for i in range(N, 0, -1):
            s = mpz(0)
            for j, num, den in ts:
                if j > i:
                    break
                s += gmpy2.divexact(H[i - j] * num, den) if den != 1 else H[i - j] * num
            H[i] += s
    return H


def _unscale(H: list, p: int) -> list:
    """``n!^p H_n / N!^p`` as Python ints."""
    N = len(H) - 1
    F = math.factorial(N) ** p
    return [int(h) * math.factorial(n) ** p // F for n, h in enumerate(H)]


def distinct_cycle_counts(N: int) -> list:
    """``n! f_n``: permutations of ``n`` with all cycle lengths distinct."""
    return _unscale(_scaled_product(N, math.factorial(N), lambda k: [(k, 1, k)]), 1)


def _sectioned_terms(k: int, d: int, N: int) -> list:
    # exp_d(z^k/k) = sum_r z^(k d r) / (k^(d r) (d r)!)
    return [(k * d * r, 1, k ** (d * r) * math.factorial(d * r)) for r in range(1, N // (k * d) + 1)]


def root_permutation_counts(m: int, N: int) -> list:
    """``n! Pi_{m,n}``: permutations of ``n`` admitting an ``m``-th root."""
    if m < 1:
        raise ValueError("m must be >= 1")
    H = _scaled_product(N, math.factorial(N), lambda k: _sectioned_terms(k, ggcd(k, m), N))
    return _unscale(H, 1)


def same_cycle_type_counts(N: int) -> list:
    """``n!^2 W_n``: sum of squared conjugacy class sizes of the symmetric group."""
    terms = lambda k: [(k * r, 1, k ** (2 * r) * math.factorial(r) ** 2) for r in range(1, N // k + 1)]
    return _unscale(_scaled_product(N, math.factorial(N) ** 2, terms), 2)


def ddf_counts(q: int, N: int, hat: bool = False) -> list:
    """``D_n`` (or ``D_hat_n``): monic polynomials over ``F_q`` whose distinct-degree factorization is complete."""
    if not _is_prime_power(q):
        raise ValueError(f"q = {q} is not a prime power")
    I = [0] + [irreducible_count(k, q) for k in range(1, N + 1)]
    if hat:
        # 1 + I z^k / (1 - z^k) = 1 + I (z^k + z^2k + ...)
        H = _scaled_product(N, 1, lambda k: [(k * r, I[k], 1) for r in range(1, N // k + 1)])
    else:
        H = _scaled_product(N, 1, lambda k: [(k, I[k], 1)])
    return [int(h) for h in H]


def plane_tree_counts(N: int) -> list:
    """``T_n``: plane trees with ``n`` nodes (shifted Catalan numbers), ``T_0 = 0``."""
    return [0] + [math.comb(2 * n - 2, n - 1) // n for n in range(1, N + 1)]


def forest_counts(N: int) -> list:
    """``F_n``: multisets of plane trees of total size ``n`` (Euler transform of ``T``)."""
    T = plane_tree_counts(N)
    c = [0] + [sum(d * T[d] for d in divisors(k)) for k in range(1, N + 1)]
    F = [1] + [0] * N
    for n in range(1, N + 1):
        F[n] = sum(c[k] * F[n - k] for k in range(1, n + 1)) // n
    return F


def dissimilar_forest_counts(N: int) -> list:
    """``E_n``: forests of plane trees with pairwise distinct sizes."""
    T = plane_tree_counts(N)
    return [int(h) for h in _scaled_product(N, 1, lambda k: [(k, T[k], 1)])]


def q_alpha_coefficients(alpha, N: int) -> list:
    """``[z^n] prod (1 + n^alpha z^n)``; exact for integer ``alpha``, else at working precision."""
    alpha = Fraction(alpha)
    if alpha.denominator == 1 and alpha <= 0:
        p = int(-alpha)
        F = math.factorial(N) ** p
        H = _scaled_product(N, F, lambda k: [(k, 1, k**p)])
        return [Fraction(int(h), F) for h in H]
    a = mpf(alpha.numerator) / alpha.denominator
    g = [mpf(1)] + [mpf(0)] * N
    for k in range(1, N + 1):
        w = mpmath.power(k, a)
        for i in range(N, k - 1, -1):
            g[i] += g[i - k] * w
    return g


# ---------------------------------------------------------------- exp-log specifications


def _alternating(l: int) -> Fraction:
    return Fraction((-1) ** (l - 1), l)


def _exp_minus(n: int) -> Fraction:
    return Fraction((-1) ** n, math.factorial(n))


def _egf_series(counts: list, power: int = 1) -> TruncatedSeries:
    return TruncatedSeries([Fraction(c, math.factorial(n) ** power) for n, c in enumerate(counts)])


def distinct_cycles_spec() -> GFSpec:
    """``prod (1 + z^k/k) = e^-z (1-z^2)(1-z)^-2 exp(sum_{l>=2} (-1)^(l-1)/l [Li_l(z^l) - z^l])``."""

    def terms(l):
        return [] if l < 2 else [PolylogTerm(_alternating(l), Fraction(l), l, subtract_first=True)]

    return GFSpec(
        name="distinct-cycles",
        prefactor={1: Fraction(-2), 2: Fraction(1)},
        entire=_exp_minus,
        terms=terms,
        factors=one_plus_factors("distinct-cycles", lambda k: Fraction(1, k)),
        coefficients=lambda N: _egf_series(distinct_cycle_counts(N)),
        closed_forms={
            ONE: lambda: mpmath.exp(-mpmath.euler),
            RootOfUnity(2, 1): lambda: mpf(1),
            RootOfUnity(3, 1): f_omega,
            RootOfUnity(3, 2): lambda: mpmath.conj(f_omega()),
        },
        global_order=Fraction(-1),
        smoothness=2,
    )


def sectioned_exp_factors(name: str, degree) -> FactorGenerator:
    """Factors ``exp_{degree(k)}(z^k / k)`` truncated at the requested order."""

    def rule(k: int, N: int) -> TruncatedSeries:
        c = [Fraction(0)] * (N + 1)
        c[0] = Fraction(1)
        for j, num, den in _sectioned_terms(k, degree(k), N):
            c[j] = Fraction(num, den)
        return TruncatedSeries(c, N)

    return FactorGenerator(name, rule)


def square_permutations_spec() -> GFSpec:
    """``sqrt((1+z)/(1-z)) exp(sum_m (-1)^(m-1) tau_{m-1} / (m 2^(2m+1)) Li_2m(z^4m))``."""
    tau = tangent_numbers(200)

    def terms(m):
        c = Fraction((-1) ** (m - 1), m * 2 ** (2 * m + 1)) * tau[m - 1]
        return [PolylogTerm(c, Fraction(2 * m), 4 * m)]

    def lead_one():
        return mpmath.sqrt(2) * e_G().value

    def lead_minus():
        return e_G().value / mpmath.sqrt(2)

    return GFSpec(
        name="square-perms",
        prefactor={1: Fraction(-1), 2: Fraction(1, 2)},
        terms=terms,
        factors=sectioned_exp_factors("square-perms", lambda k: ggcd(k, 2)),
        coefficients=lambda N: _egf_series(root_permutation_counts(2, N)),
        closed_forms={ONE: lead_one, RootOfUnity(2, 1): lead_minus},
        global_order=Fraction(-1, 2),
        smoothness=2,
    )


def mth_roots_spec(m: int) -> GFSpec:
    """``A_m(z) B_m(z)`` with ``A_m = prod_{k|m} (1-z^k)^(-mu(k)/k)`` and ``B_m`` as polylogs.

    Grouping ``l`` by ``g = gcd(l, rad m)`` turns ``log B_m`` into
    ``sum a_{d,r} mu(e) (g e)^(-d r) Li_{d r}(z^(g e d r))`` over
    ``g | rad m``, ``g > 1``, ``e | rad(m)/g``, ``d = ggcd(g, m)``.
    """
    if m < 2:
        raise ValueError("m must be >= 2")
    R = radical(m)
    classes = _root_classes(m)

    def terms(r):
        out = []
        for g, d in classes:
            a = sectioned_exp_log(d, max(r, 120))[r]
            if a == 0:
                continue
            for e in divisors(R // g):
                mu = mobius(e)
                if mu:
                    out.append(PolylogTerm(mu * a / Fraction(g * e) ** (d * r), Fraction(d * r), g * e * d * r))
        return out

    prefactor = {k: Fraction(-mobius(k), k) for k in divisors(m) if mobius(k)}
    def lead_one():
        scale = mpmath.fprod(mpmath.power(k, mpf(e.numerator) / e.denominator) for k, e in prefactor.items())
        return B_one(m).value * scale

    return GFSpec(
        name=f"mth-roots:{m}",
        prefactor=prefactor,
        terms=terms,
        factors=sectioned_exp_factors(f"mth-roots:{m}", lambda k: ggcd(k, m)),
        coefficients=lambda N: _egf_series(root_permutation_counts(m, N)),
        closed_forms={ONE: lead_one},
        global_order=-Fraction(totient(m), m),
        smoothness=2,
    )


def same_cycle_type_spec() -> GFSpec:
    """``I(z) exp(sum_l h_l [Li_2l(z^l) - z^l])`` with ``h_l = [z^l] log I``."""
    h = bessel_log_coefficients(400)

    def terms(l):
        if l >= len(h):
            raise ValidationError("same-cycle-type: more Bessel-log coefficients needed")
        return [PolylogTerm(h[l], Fraction(2 * l), l, subtract_first=True)]

    def factor(k: int, N: int) -> TruncatedSeries:
        c = [Fraction(0)] * (N + 1)
        r = 0
        while k * r <= N:
            c[k * r] = Fraction(1, k ** (2 * r) * math.factorial(r) ** 2)
            r += 1
        return TruncatedSeries(c, N)

    return GFSpec(
        name="same-cycle-type",
        entire=lambda n: Fraction(1, math.factorial(n) ** 2),
        terms=terms,
        factors=FactorGenerator("same-cycle-type", factor),
        coefficients=lambda N: _egf_series(same_cycle_type_counts(N), power=2),
        closed_forms={ONE: lambda: W_one().value, RootOfUnity(2, 1): W_minus_one},
        global_order=Fraction(0),
        smoothness=4,
    )


def ddf_spec(q: int) -> GFSpec:
    """``D(z/q)``: the distinct-cycles form plus an analytic correction in the exponent.

    ``log D(z/q) = sum_{n,m} (-1)^(m-1)/m (I_n q^-n z^n)^m``; replacing each
    ``I_n q^-n`` by ``1/n`` gives the distinct-cycles exponent, and the
    difference ``a_N = sum_{n m = N} (-1)^(m-1)/m [(I_n q^-n)^m - n^-m]``
    is ``O(q^-N/2)``, hence analytic beyond the unit circle.
    """
    if not _is_prime_power(q):
        raise ValueError(f"q = {q} is not a prime power")
    base = distinct_cycles_spec()

    @lru_cache(maxsize=None)
    def extra(N: int) -> Fraction:
        s = Fraction(0)
        for n in divisors(N):
            m = N // n
            x = Fraction(irreducible_count(n, q), q**n)
            s += _alternating(m) * (x**m - Fraction(1, n**m))
        return s

    def coefficients(N):
        D = ddf_counts(q, N)
        return TruncatedSeries([Fraction(D[n], q**n) for n in range(N + 1)])

    return GFSpec(
        name=f"ddf:{q}",
        prefactor=base.prefactor,
        entire=base.entire,
        terms=base.terms,
        analytic_extra=extra,
        factors=one_plus_factors(f"ddf:{q}", lambda k: Fraction(irreducible_count(k, q), q**k)),
        coefficients=coefficients,
        closed_forms={ONE: lambda: delta_q(q).value},
        global_order=Fraction(-1),
        smoothness=2,
    )


def q_alpha_spec(alpha) -> GFSpec:
    """``prod (1 + n^alpha z^n) = (1+z) e^-z exp(Li_-alpha(z) + sum_{l>=2} (-1)^(l-1)/l [Li_{-alpha l}(z^l) - z^l])``."""
    alpha = Fraction(alpha)
    if alpha > -1:
        raise ValueError("the hybrid method needs alpha <= -1")

    def terms(l):
        if l == 1:
            return [PolylogTerm(Fraction(1), -alpha, 1)]
        return [PolylogTerm(_alternating(l), -alpha * l, l, subtract_first=True)]

    if alpha == -1:
        lead = lambda: mpmath.exp(-mpmath.euler)
    else:
        lead = lambda: Q_alpha_one(alpha).value
    if alpha.denominator == 1:
        factors = one_plus_factors(f"q-alpha:{alpha}", lambda k: Fraction(1, k ** int(-alpha)))
    else:
        a = mpf(alpha.numerator) / alpha.denominator
        factors = one_plus_factors(f"q-alpha:{alpha}", lambda k: mpmath.power(k, a))
    return GFSpec(
        name=f"q-alpha:{alpha}",
        prefactor={1: Fraction(-1), 2: Fraction(1)},
        entire=_exp_minus,
        terms=terms,
        factors=factors,
        coefficients=lambda N: TruncatedSeries(q_alpha_coefficients(alpha, N)),
        closed_forms={ONE: lead},
        global_order=Fraction(-1) if alpha == -1 else Fraction(0),
        smoothness=2,
    )


register_decomposition("distinct-cycles", distinct_cycles_spec)
register_decomposition("square-perms", square_permutations_spec)
register_decomposition("same-cycle-type", same_cycle_type_spec)


# ---------------------------------------------------------------- reports


@dataclass
class CaseStudyReport:
    name: str
    prefix: list
    expansion: AsymptoticExpansion | None = None
    constants: dict = field(default_factory=dict)
    profile: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)

    def as_dict(self, digits: int = 30) -> dict:
        def num(x):
            if x is None:
                return None
            if isinstance(x, (int, Fraction)):
                return str(x)
            if isinstance(x, mpmath.mpc):
                return [mpmath.nstr(x.real, digits), mpmath.nstr(x.imag, digits)]
            return mpmath.nstr(x, digits)

        out = {
            "name": self.name,
            "prefix": [str(c) for c in self.prefix],
            "constants": {k: v.as_dict(digits) for k, v in self.constants.items()},
            "checks": {k: num(v) for k, v in self.checks.items()},
        }
        if self.expansion is not None:
            out["expansion"] = [
                {"root": str(z), "beta": str(b), "log_power": j, "amp": num(a)}
                for (z, b, j), a in self.expansion.sorted_terms()
            ]
        out["profile"] = [
            {"n": r.n, "exact": num(r.exact), "approx": num(r.approx), "scaled": num(r.scaled)}
            for r in self.profile
        ]
        return out


def distinct_cycles(n_max: int = 1000, depth: int = 3, max_order: int = 3) -> CaseStudyReport:
    """Exact prefix, expansion through ``n^-depth`` at roots of order ``<= max_order``, residual profile."""
    spec = distinct_cycles_spec()
    counts = distinct_cycle_counts(n_max)
    exact = _egf_series(counts)
    e1 = assemble(spec, 1, depth)
    e = assemble(spec, max_order, depth)
    rows1 = error_profile(spec, e1, n_max, "n3", exact=exact)
    rows = error_profile(spec, e, n_max, "n4log3", exact=exact, n_min=min(50, n_max))
    fw = f_omega()
    checks = {
        "max_abs_R_n": max(abs(r.scaled) for r in rows1),
        "d3": e.coefficient(RootOfUnity(2, 1), Fraction(3), 0),
        "e3": e.coefficient(RootOfUnity(3, 1), Fraction(3), 0),
        "three_f_omega": 3 * fw,
    }
    return CaseStudyReport(
        "distinct-cycles",
        counts[: min(n_max, 20) + 1],
        e,
        {"exp_neg_gamma": exp_neg_gamma()},
        rows,
        checks,
    )


def square_permutations(n_max: int = 1000, depth=Fraction(2), max_order: int = 4) -> CaseStudyReport:
    spec = square_permutations_spec()
    counts = root_permutation_counts(2, n_max)
    e = assemble(spec, max_order, depth)
    rows = error_profile(spec, e, n_max, "none", exact=_egf_series(counts))
    eG = e_G()
    c2 = square_c2()
    c3 = -12 + 16 * mpmath.log(2) + 4 * mpmath.euler + 2 * c2.value
    return CaseStudyReport(
        "square-perms",
        counts[: min(n_max, 20) + 1],
        e,
        {"eG": eG, "c2": c2},
        rows,
        {"c3": c3},
    )


def mth_root_permutations(m: int, n_max: int = 1000) -> CaseStudyReport:
    if m < 2:
        raise ValueError("m must be >= 2")
    counts = root_permutation_counts(m, n_max)
    B = B_one(m)
    phi = Fraction(totient(m), m)
    scale = mpmath.fprod(mpmath.power(k, -mpf(mobius(k)) / k) for k in divisors(m) if mobius(k))
    varpi = B.value * scale / gamma(mpf(phi.numerator) / phi.denominator)
    rows = []
    for n in range(1, n_max + 1):
        p = mpf(counts[n]) / mpmath.factorial(n)
        scaled = p * mpf(n) ** (1 - mpf(phi.numerator) / phi.denominator)
        rows.append(ProfileRow(n, p, varpi * mpf(n) ** (mpf(phi.numerator) / phi.denominator - 1), scaled / varpi - 1))
    return CaseStudyReport(
        f"mth-roots:{m}",
        counts[: min(n_max, 20) + 1],
        None,
        {f"B{m}(1)": B},
        rows,
        {"varpi": varpi},
    )


def same_cycle_type(n_max: int = 1000, depth: int = 2) -> CaseStudyReport:
    spec = same_cycle_type_spec()
    counts = same_cycle_type_counts(n_max)
    e = assemble(spec, 2, depth)
    W1 = W_one()
    rows = []
    for n in range(1, n_max + 1):
        w = mpf(counts[n]) / mpmath.factorial(n) ** 2
        rows.append(ProfileRow(n, w, W1.value / mpf(n) ** 2, w * mpf(n) ** 2 / W1.value - 1))
    return CaseStudyReport("same-cycle-type", counts[: min(n_max, 20) + 1], e, {"W1": W1}, rows)


def distinct_degree_factorization(q: int, n_max: int = 500, hat: bool = False) -> CaseStudyReport:
    if not _is_prime_power(q):
        raise ValueError(f"q = {q} is not a prime power")
    D = ddf_counts(q, n_max, hat=hat)
    d = delta_q(q, hat=hat)
    rows = []
    for n in range(1, n_max + 1):
        p = Fraction(D[n], q**n)
        rows.append(ProfileRow(n, p, d.value, n * (to_f(p) - d.value)))
    worst = max(abs(irreducible_count(n, q) - mpf(q) ** n / n) / mpf(q) ** (mpf(n) / 2) for n in range(1, min(n_max, 60) + 1))
    return CaseStudyReport(
        f"ddf-hat:{q}" if hat else f"ddf:{q}",
        D[: min(n_max, 20) + 1],
        None,
        {d.name: d},
        rows,
        {"max_gauss_remainder_ratio": worst},
    )


def dissimilar_forests(n_max: int = 1000) -> CaseStudyReport:
    F = forest_counts(n_max)
    E = dissimilar_forest_counts(n_max)
    K = K_forest()
    L = forest_L()
    k = kappa()
    rows = [ProfileRow(n, Fraction(E[n], F[n]), k.value, to_f(Fraction(E[n], F[n])) - k.value) for n in range(1, n_max + 1)]
    return CaseStudyReport(
        "forests",
        E[: min(n_max, 20) + 1],
        None,
        {"K": K, "L": L, "kappa": k},
        rows,
        {"F_prefix": " ".join(str(f) for f in F[: min(n_max, 20) + 1])},
    )


def q_alpha_products(alpha, n_max: int = 1000) -> CaseStudyReport:
    alpha = Fraction(alpha)
    coeffs = q_alpha_coefficients(alpha, n_max)
    a = mpf(alpha.numerator) / alpha.denominator
    consts = {}
    if alpha < -1:
        C = Q_alpha_one(alpha)
        consts[C.name] = C
        lead = C.value
    else:
        lead = mpmath.exp(-mpmath.euler)
    # alpha = -1 has a pole of order one at z = 1 and coefficients tending to e^-gamma
    a = a if alpha < -1 else mpf(0)
    rows = []
    for n in range(1, n_max + 1):
        c = coeffs[n]
        v = (mpf(c.numerator) / c.denominator) if isinstance(c, Fraction) else c
        rows.append(ProfileRow(n, c, lead * mpmath.power(n, a), v * mpmath.power(n, -a) / lead - 1))
    return CaseStudyReport(f"q-alpha:{alpha}", coeffs[: min(n_max, 20) + 1], None, consts, rows)


# ---------------------------------------------------------------- name registry


@dataclass(frozen=True)
class NamedGF:
    """A generating function addressable by name from the command line.

    ``counts(N)`` gives the integer sequence behind the coefficients
    (``n!`` or ``n!^2`` scaled for labelled families) when there is one.
    """

    name: str
    coefficients: object
    counts: object = None
    spec: object = None


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"bad number {text!r}") from None


def _parse_int(text: str, what: str) -> int:
    if not text.isdigit():
        raise ValueError(f"{what} must be a positive integer, got {text!r}")
    return int(text)


def named_gf(name: str) -> NamedGF:
    """Resolve ``distinct-cycles``, ``square-perms``, ``mth-roots:m``, ``same-cycle-type``,
    ``ddf:q``, ``ddf-hat:q``, ``forests:{T|F|E}`` or ``q-alpha:a``."""
    head, _, arg = name.partition(":")
    if head == "distinct-cycles" and not arg:
        return NamedGF(name, lambda N: _egf_series(distinct_cycle_counts(N)).coeffs,
                       distinct_cycle_counts, distinct_cycles_spec)
    if head == "square-perms" and not arg:
        return NamedGF(name, lambda N: _egf_series(root_permutation_counts(2, N)).coeffs,
                       lambda N: root_permutation_counts(2, N), square_permutations_spec)
    if head == "mth-roots" and arg:
        m = _parse_int(arg, "m")
        if m < 2:
            raise ValueError("m must be >= 2")
        return NamedGF(name, lambda N: _egf_series(root_permutation_counts(m, N)).coeffs,
                       lambda N: root_permutation_counts(m, N), lambda: mth_roots_spec(m))
    if head == "same-cycle-type" and not arg:
        return NamedGF(name, lambda N: _egf_series(same_cycle_type_counts(N), power=2).coeffs,
                       same_cycle_type_counts, same_cycle_type_spec)
    if head in ("ddf", "ddf-hat") and arg:
        q = _parse_int(arg, "q")
        if not _is_prime_power(q):
            raise ValueError(f"q = {q} is not a prime power")
        hat = head == "ddf-hat"
        counts = lambda N: ddf_counts(q, N, hat=hat)
        coeffs = lambda N: [Fraction(c, q**n) for n, c in enumerate(counts(N))]
        return NamedGF(name, coeffs, counts, None if hat else (lambda: ddf_spec(q)))
    if head == "forests" and arg in ("T", "F", "E"):
        counts = {"T": plane_tree_counts, "F": forest_counts, "E": dissimilar_forest_counts}[arg]
        return NamedGF(name, lambda N: [Fraction(c) for c in counts(N)], counts)
    if head == "q-alpha" and arg:
        alpha = _parse_fraction(arg)
        if alpha > -1:
            raise ValueError("q-alpha needs alpha <= -1")
        return NamedGF(f"q-alpha:{alpha}", lambda N: q_alpha_coefficients(alpha, N), None, lambda: q_alpha_spec(alpha))
    raise ValueError(f"unknown generating function {name!r}")


def case_report(name: str, n_max: int) -> CaseStudyReport:
    """The case-study report addressed by a generating-function name."""
    head, _, arg = name.partition(":")
    if head == "distinct-cycles" and not arg:
        return distinct_cycles(n_max)
    if head == "square-perms" and not arg:
        return square_permutations(n_max)
    if head == "mth-roots" and arg:
        return mth_root_permutations(_parse_int(arg, "m"), n_max)
    if head == "same-cycle-type" and not arg:
        return same_cycle_type(n_max)
    if head in ("ddf", "ddf-hat") and arg:
        return distinct_degree_factorization(_parse_int(arg, "q"), n_max, hat=head == "ddf-hat")
    if head == "forests":
        return dissimilar_forests(n_max)
    if head == "q-alpha" and arg:
        return q_alpha_products(_parse_fraction(arg), n_max)
    raise ValueError(f"unknown case study {name!r}")
