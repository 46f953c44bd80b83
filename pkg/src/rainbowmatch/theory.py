"""Closed forms and bounds for the probability that a perfect matching is rainbow.

Notation: ``k`` is the multiplicity ratio (``n / max multiplicity`` for a fixed
coloring, ``s / n`` for the random models) and ``mu`` the expected number of
same-color disjoint pairs hit by a uniform matching.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from math import comb, factorial

from .errors import DivisibilityViolation, OutOfRange
from .exact import count_derangements

# products switch to summed logs above this many factors
LOG_SPACE_ABOVE = 1000


def _check_k(k: float) -> float:
    k = float(k)
    if not k > 0 or math.isnan(k):
        raise OutOfRange(f"k must be positive, got {k!r}")
    return k


@dataclass(frozen=True)
class BoundReport:
    k: float
    mu: float
    lower_exp_c2: float
    upper_exp_c1_paper: float
    upper_exp_c1_conservative: float
    lower_bound: float
    upper_bound: float
    upper_bound_paper: float
    upper_bound_ndg: float
    ck: float | None
    epsilon_ndg: float
    in_hypothesis: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class LlllWitness:
    n: int
    k: float
    t: float
    p: float
    interval_low: float
    interval_high: float
    feasible: bool

    def to_dict(self) -> dict:
        return asdict(self)


def epsilon_ndg(k: float) -> float:
    """Near-positive dependency slack ``1 - exp(-(2/k + 32/k^2))``."""
    k = _check_k(k)
    return -math.expm1(-(2 / k + 32 / k**2))


def sandwich_bounds(k: float, mu: float) -> BoundReport:
    """Lower and upper exponential bounds on Pr(random matching is rainbow).

    The bounds are proven for ``k >= 12``; for smaller ``k`` the numbers are
    still filled in and ``in_hypothesis`` is False. ``upper_bound`` uses
    ``c1 = 1 - 2/k - 32/k^2``, the linearisation of ``1 - epsilon_ndg``;
    ``upper_bound_paper`` uses the tighter ``12/k^2`` constant and
    ``upper_bound_ndg`` skips the linearisation.
    """
    k = _check_k(k)
    mu = float(mu)
    if mu < 0 or math.isnan(mu):
        raise OutOfRange(f"mu must be non-negative, got {mu!r}")
    c2 = 1 + 16 / k
    c1_paper = 1 - 2 / k - 12 / k**2
    c1_cons = 1 - 2 / k - 32 / k**2
    eps = epsilon_ndg(k)
    return BoundReport(
        k=k,
        mu=mu,
        lower_exp_c2=c2,
        upper_exp_c1_paper=c1_paper,
        upper_exp_c1_conservative=c1_cons,
        lower_bound=math.exp(-c2 * mu),
        upper_bound=math.exp(-c1_cons * mu),
        upper_bound_paper=math.exp(-c1_paper * mu),
        upper_bound_ndg=math.exp(-(1 - eps) * mu),
        ck=c_of_k(k) if k >= 1 else None,
        epsilon_ndg=eps,
        in_hypothesis=k >= 12,
    )


def ndg_product_upper_bound(n: int, mono_pairs: int, k: float) -> float:
    """``prod (1 - (1 - eps) p)`` over all same-color disjoint pairs, ``p = 1/(n(n-1))``."""
    if n < 2:
        raise OutOfRange(f"n must be at least 2, got {n}")
    p = 1 / (n * (n - 1))
    return math.exp(mono_pairs * math.log1p(-(1 - epsilon_ndg(k)) * p))


def worst_case_mu(n: int, k: int) -> Fraction:
    """``mu`` when every color sits on exactly ``n/k`` disjoint edges."""
    if n < 2 or k < 1 or n % k:
        raise DivisibilityViolation(f"need n >= 2 and k | n, got n={n}, k={k}")
    return Fraction(k * n * comb(n // k, 2), n * (n - 1))


def llll_feasibility(n: int, k: float) -> LlllWitness:
    """Whether the local-lemma weight interval ``(p e^{(1+4t)t}, 1 - e^{-(1+4t)p})`` is non-empty."""
    if n < 2:
        raise OutOfRange(f"n must be at least 2, got {n}")
    k = _check_k(k)
    t = 4 / k
    p = 1 / (n * (n - 1))
    low = p * math.exp((1 + 4 * t) * t)
    high = -math.expm1(-(1 + 4 * t) * p)
    return LlllWitness(n=n, k=k, t=t, p=p, interval_low=low, interval_high=high, feasible=low < high)


def _product(factors) -> float:
    factors = list(factors)
    if len(factors) > LOG_SPACE_ABOVE:
        if any(f <= 0 for f in factors):
            return 0.0
        return math.exp(math.fsum(math.log(f) for f in factors))
    out = 1.0
    for f in factors:
        out *= f
    return out


def log_urm_closed_form(n: int, s: int) -> float:
    if n < 1 or s < 1:
        raise OutOfRange(f"need n, s >= 1, got n={n}, s={s}")
    if s < n:
        return -math.inf
    return math.fsum(math.log1p(-i / s) for i in range(1, n))


def urm_closed_form(n: int, s: int, exact: bool = False) -> float | Fraction:
    """Pr(fixed perfect matching is rainbow) when cells are colored i.i.d. uniformly: ``prod (1 - i/s)``."""
    if n < 1 or s < 1:
        raise OutOfRange(f"need n, s >= 1, got n={n}, s={s}")
    if exact:
        if s < n:
            return Fraction(0)
        return Fraction(factorial(s) // factorial(s - n), s**n)
    if s < n:
        return 0.0
    return _product(1 - i / s for i in range(n))


def rrm_closed_form(n: int, s: int, exact: bool = False) -> float | Fraction:
    """Pr(fixed perfect matching is rainbow) under equitable coloring: ``prod (1 - i(n^2-s)/(s(n^2-i)))``."""
    if n < 1 or s < 1:
        raise OutOfRange(f"need n, s >= 1, got n={n}, s={s}")
    N = n * n
    if N % s:
        raise DivisibilityViolation(f"s={s} does not divide n^2={N}")
    if exact:
        out = Fraction(1)
        for i in range(n):
            out *= 1 - Fraction(i * (N - s), s * (N - i))
        return out
    return _product(1 - i * (N - s) / (s * (N - i)) for i in range(n))


def _rate_gap(x: float) -> float:
    """``1 - log1p(x)/x``, series-evaluated for small ``x`` to avoid cancellation."""
    if x < 1e-3:
        # alternating series sum_{m>=1} (-1)^(m+1) x^m / (m+1)
        return math.fsum((-1) ** (m + 1) * x**m / (m + 1) for m in range(1, 9))
    return 1 - math.log1p(x) / x


def c_of_k(k: float) -> float:
    """Rate constant ``2k (1 - (k-1) log(k/(k-1)))``; equals 2 at ``k = 1`` and tends to 1."""
    k = float(k)
    if not k >= 1:
        raise OutOfRange(f"c(k) needs k >= 1, got {k!r}")
    if k == 1:
        return 2.0
    return 2 * k * _rate_gap(1 / (k - 1))


def model_mu(n: int, s: int) -> float:
    if n < 1 or s < 1:
        raise OutOfRange(f"need n, s >= 1, got n={n}, s={s}")
    return n * n / (2 * s)


def f_of_s(n: int, s: int, exact: bool = False) -> float | Fraction:
    """``sum_t (1/t!) / prod_{i<t} (1 - i/s)`` for ``t = 0..n``."""
    if n < 1:
        raise OutOfRange(f"n must be at least 1, got {n}")
    if s < n:
        raise OutOfRange(f"f(s) needs s >= n, got n={n}, s={s}")
    if exact:
        total, term = Fraction(0), Fraction(1)
        for t in range(n + 1):
            if t:
                term = term / t / (1 - Fraction(t - 1, s))
            total += term
        return total
    term = 1.0
    parts = []
    for t in range(n + 1):
        if t:
            term = term / t / (1 - (t - 1) / s)
        parts.append(term)
    return math.fsum(parts)


def urm_second_moment_ratio(n: int, s: int) -> Fraction:
    """Exact ``Var(X) / E(X)^2`` for the rainbow matching count ``X`` under the uniform model.

    Two matchings sharing ``t`` edges are both rainbow with probability
    ``P^2 / prod_{i<t}(1 - i/s)``; there are ``C(n,t) D_{n-t}`` such partners.
    """
    if s < n:
        raise OutOfRange(f"need s >= n, got n={n}, s={s}")
    total = Fraction(0)
    shared = Fraction(1)
    nf = factorial(n)
    for t in range(n + 1):
        if t:
            shared *= 1 - Fraction(t - 1, s)
        total += Fraction(comb(n, t) * count_derangements(n - t), nf) / shared
    return total - 1


def approx_second_moment_ratio(n: int, s: int) -> float:
    """The derangement-proportion approximation ``e^{-1} f(s) - 1``."""
    return math.exp(-1) * f_of_s(n, s) - 1


def chebyshev_failure_bound(var_over_mean_sq: float) -> float:
    """``Pr(X = 0) <= Var(X)/E(X)^2``, capped at 1."""
    x = float(var_over_mean_sq)
    if x < 0 or math.isnan(x):
        raise OutOfRange(f"variance ratio must be non-negative, got {var_over_mean_sq!r}")
    return min(1.0, x)
