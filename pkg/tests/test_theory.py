import math
from fractions import Fraction
from math import factorial

import numpy as np
import pytest

from oracles import all_colorings, all_equitable_colorings, naive_count
from rainbowmatch.coloring import mu as coloring_mu
from rainbowmatch.errors import DivisibilityViolation, OutOfRange
from rainbowmatch.generators import gen_adversarial_blocks, gen_urm
from rainbowmatch.rng import Seed
from rainbowmatch.theory import (
    c_of_k,
    chebyshev_failure_bound,
    epsilon_ndg,
    f_of_s,
    llll_feasibility,
    log_urm_closed_form,
    model_mu,
    ndg_product_upper_bound,
    approx_second_moment_ratio,
    rrm_closed_form,
    sandwich_bounds,
    urm_closed_form,
    urm_second_moment_ratio,
    worst_case_mu,
)


def _exhaustive_average(colorings, n):
    total, count = Fraction(0), 0
    for rows in colorings:
        total += Fraction(naive_count(rows), factorial(n))
        count += 1
    return total / count


# --- sandwich ------------------------------------------------------------------

def test_sandwich_k12_example():
    r = sandwich_bounds(12, 12 / 23)
    assert r.lower_bound == pytest.approx(math.exp(-(7 / 3) * 12 / 23), rel=1e-15)
    assert r.lower_bound == pytest.approx(0.2959, abs=2e-4)
    assert r.upper_bound_paper == pytest.approx(math.exp(-0.75 * 12 / 23), rel=1e-15)
    assert r.upper_bound_paper == pytest.approx(0.6764, abs=3e-4)
    assert r.upper_bound == pytest.approx(math.exp(-(1 - 2 / 12 - 32 / 144) * 12 / 23), rel=1e-15)
    assert r.in_hypothesis and r.lower_exp_c2 == pytest.approx(7 / 3)


def test_sandwich_mu_zero_and_large_k():
    r = sandwich_bounds(5, 0)
    assert r.lower_bound == r.upper_bound == r.upper_bound_paper == 1.0
    assert not r.in_hypothesis
    big = sandwich_bounds(1e6, 1)
    assert abs(big.lower_bound - math.exp(-1)) < 1e-4
    assert abs(big.upper_bound - math.exp(-1)) < 1e-4


def test_sandwich_errors():
    for k in (0, -1, float("nan")):
        with pytest.raises(OutOfRange):
            sandwich_bounds(k, 1)
    with pytest.raises(OutOfRange):
        sandwich_bounds(12, -0.1)


def test_sandwich_ordering_and_monotonicity():
    for k in np.geomspace(12, 1e5, 40):
        eps = epsilon_ndg(k)
        assert 0 < eps < 1
        prev = None
        for m in np.linspace(0, 50, 51):
            r = sandwich_bounds(k, m)
            assert 0 < r.upper_exp_c1_conservative < r.upper_exp_c1_paper < 1 < r.lower_exp_c2
            # linearising 1 - eps only loosens the bound
            assert r.lower_bound <= r.upper_bound_ndg <= r.upper_bound
            assert r.upper_bound_paper <= r.upper_bound
            if prev is not None:
                assert r.upper_bound <= prev
            prev = r.upper_bound


def test_ndg_product_upper_bound_dominates_exponential():
    n, k = 24, 12
    c = gen_adversarial_blocks(n, k, 1)
    pairs = int(coloring_mu(c) * n * (n - 1))
    prod = ndg_product_upper_bound(n, pairs, k)
    r = sandwich_bounds(k, float(worst_case_mu(n, k)))
    assert r.lower_bound < prod <= r.upper_bound_ndg * (1 + 1e-12)
    assert worst_case_mu(24, 12) == Fraction(12, 23) == coloring_mu(c)
    with pytest.raises(DivisibilityViolation):
        worst_case_mu(10, 3)


# --- local lemma ---------------------------------------------------------------

def test_llll_examples():
    w = llll_feasibility(12, 12)
    assert w.feasible and w.t == pytest.approx(1 / 3) and w.p == pytest.approx(1 / 132)
    assert w.interval_low < w.interval_high
    assert llll_feasibility(1000, 20).feasible
    with pytest.raises(OutOfRange):
        llll_feasibility(1, 12)


def test_llll_feasible_iff_interval_nonempty():
    for n in (12, 50, 400):
        for k in (0.5, 2, 6, 12, 40):
            w = llll_feasibility(n, k)
            assert w.feasible == (w.interval_low < w.interval_high)
    assert not llll_feasibility(12, 1).feasible


# --- closed forms --------------------------------------------------------------

def test_urm_closed_form_examples():
    assert urm_closed_form(3, 3, exact=True) == Fraction(2, 9)
    assert urm_closed_form(3, 3) == pytest.approx(2 / 9, rel=1e-15)
    assert urm_closed_form(2, 1) == 0 and urm_closed_form(2, 1, exact=True) == 0
    assert urm_closed_form(1, 17) == 1
    assert log_urm_closed_form(2, 1) == -math.inf
    for n in (5, 10, 30, 64):
        assert urm_closed_form(n, n, exact=True) == Fraction(factorial(n), n**n)


def test_urm_closed_form_log_space_no_underflow():
    v = log_urm_closed_form(2000, 2000)
    assert math.isfinite(v)
    assert v == pytest.approx(math.lgamma(2001) - 2000 * math.log(2000), rel=1e-10)
    assert urm_closed_form(5000, 10**8) > 0


@pytest.mark.parametrize("n, s", [(2, 2), (2, 3)])
def test_urm_closed_form_is_exhaustive_average(n, s):
    assert _exhaustive_average(all_colorings(n, s), n) == urm_closed_form(n, s, exact=True)


def test_rrm_closed_form_examples():
    assert rrm_closed_form(2, 4, exact=True) == 1
    assert rrm_closed_form(2, 2, exact=True) == Fraction(2, 3)
    assert rrm_closed_form(3, 3, exact=True) == Fraction(9, 28)
    with pytest.raises(DivisibilityViolation):
        rrm_closed_form(3, 2)


@pytest.mark.parametrize("n, s", [(2, 2), (2, 4), (3, 3)])
def test_rrm_closed_form_is_exhaustive_average(n, s):
    assert _exhaustive_average(all_equitable_colorings(n, s), n) == rrm_closed_form(n, s, exact=True)


def test_exact_and_float_paths_agree():
    for n in range(1, 40):
        for s in (n, 2 * n, 3 * n + 1, n * n):
            exact = urm_closed_form(n, s, exact=True)
            assert urm_closed_form(n, s) == pytest.approx(float(exact), rel=1e-12)
            assert f_of_s(n, s) == pytest.approx(float(f_of_s(n, s, exact=True)), rel=1e-12)
        for s in (1, n, n * n):
            assert rrm_closed_form(n, s) == pytest.approx(float(rrm_closed_form(n, s, exact=True)), rel=1e-12)


# --- rates ---------------------------------------------------------------------

def test_c_of_k_examples():
    assert c_of_k(1) == 2.0
    assert c_of_k(2) == pytest.approx(4 * (1 - math.log(2)), rel=1e-14)
    assert abs(c_of_k(1e6) - 1) < 1e-5
    with pytest.raises(OutOfRange):
        c_of_k(0.5)


def test_c_of_k_strictly_decreasing():
    ks = np.geomspace(1, 1e6, 400)
    vals = [c_of_k(k) for k in ks]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert c_of_k(1 + 1e-9) == pytest.approx(2, abs=1e-6)


@pytest.mark.parametrize("k", [1, 2, 4])
def test_exponential_rate(k):
    n = 2000
    assert abs(-log_urm_closed_form(n, k * n) / n - c_of_k(k) * model_mu(n, k * n) / n) <= 0.01


def test_model_mu_examples():
    assert model_mu(10, 10) == 5
    assert model_mu(24, 288) == 1


def test_model_mu_matches_sampled_mu():
    # E[mu] is n(n-1)/(2s) at finite n; model_mu is its leading term
    n, s = 8, 16
    base = Seed(2024)
    mean = sum(float(coloring_mu(gen_urm(n, s, base.child(i)))) for i in range(1000)) / 1000
    finite = n * (n - 1) / (2 * s)
    assert abs(mean - finite) <= 0.05 * finite
    assert model_mu(n, s) * (n - 1) / n == finite


# --- second moment -------------------------------------------------------------

def test_f_of_s_examples():
    assert abs(f_of_s(20, 10**9) - math.e) < 1e-6
    assert f_of_s(1, 1) == 2 and f_of_s(1, 99) == 2
    assert f_of_s(5, 5) > math.e
    assert f_of_s(5, 5, exact=True) == 1 + sum(
        Fraction(1, factorial(t)) / urm_closed_form(t, 5, exact=True) for t in range(1, 6))
    with pytest.raises(OutOfRange):
        f_of_s(5, 4)


def test_exact_second_moment_ratio_small_cases():
    # n=2, s=2: X counts the two matchings; brute force over the 16 colorings
    xs = [naive_count(rows) for rows in all_colorings(2, 2)]
    mean = Fraction(sum(xs), len(xs))
    var = Fraction(sum(x * x for x in xs), len(xs)) - mean**2
    assert urm_second_moment_ratio(2, 2) == var / mean**2
    xs = [naive_count(rows) for rows in all_colorings(2, 3)]
    mean = Fraction(sum(xs), len(xs))
    var = Fraction(sum(x * x for x in xs), len(xs)) - mean**2
    assert urm_second_moment_ratio(2, 3) == var / mean**2


def test_second_moment_ratio_decays_like_one_over_n():
    for n in (20, 40, 80):
        exact = float(urm_second_moment_ratio(n, n))
        assert 0 < exact < 1.0 / n
        assert approx_second_moment_ratio(n, n) == pytest.approx(exact, rel=0.05)


def test_chebyshev_failure_bound():
    assert chebyshev_failure_bound(0) == 0
    assert chebyshev_failure_bound(0.25) == 0.25
    assert chebyshev_failure_bound(7) == 1
    with pytest.raises(OutOfRange):
        chebyshev_failure_bound(-1e-9)
