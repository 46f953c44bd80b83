"""Acceptance criteria, one test each.

Every test prints a single ``PASS``/``FAIL`` line with the measured numbers,
then asserts. Runtime limits are part of each criterion.
"""
import json
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from oracles import all_equitable_colorings, naive_count, pair_scan
from rainbowmatch.cli import main as cli_main
from rainbowmatch.coloring import EdgeColoring, color_stats, is_rainbow, mono_pair_count, mu
from rainbowmatch.exact import (
    count_derangements,
    count_matchings_with_overlap,
    count_rainbow_matchings,
    exact_rainbow_probability,
    find_rainbow_matching,
    max_partial_rainbow,
)
from rainbowmatch.generators import gen_adversarial_blocks, gen_capped, gen_cyclic, gen_rrm, gen_urm
from rainbowmatch.montecarlo import (
    estimate_existence,
    estimate_rainbow_given_coloring,
    estimate_rainbow_given_model,
)
from rainbowmatch.rng import Seed
from rainbowmatch.theory import (
    c_of_k,
    f_of_s,
    llll_feasibility,
    log_urm_closed_form,
    model_mu,
    rrm_closed_form,
    sandwich_bounds,
    urm_closed_form,
)

SIGMAS = 4.0


@pytest.fixture
def report(capsys):
    def emit(number: int, ok: bool, label: str, detail: str = "") -> None:
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'}  criterion {number:>2}: {label:<44} {detail}")
    return emit


def _within(p_hat: float, target: float, trials: int) -> tuple[bool, float]:
    sd = math.sqrt(target * (1 - target) / trials)
    return abs(p_hat - target) <= SIGMAS * sd, sd


def _divisors(m: int) -> list[int]:
    return [d for d in range(1, m + 1) if m % d == 0]


def test_c01_oracle_equivalence(report):
    start = time.perf_counter()
    base = Seed(101)
    bad = []
    for i in range(500):
        seed = base.child(i)
        n = 1 + i % 6
        kind = i % 3
        if kind == 0:
            c = gen_urm(n, 1 + (i // 3) % (n * n), seed)
        elif kind == 1:
            divs = _divisors(n * n)
            c = gen_rrm(n, divs[(i // 3) % len(divs)], seed)
        else:
            divs = _divisors(n)
            c = gen_adversarial_blocks(n, divs[(i // 3) % len(divs)], seed)
        rows = c.rows()
        if count_rainbow_matchings(c).count != naive_count(rows) or mono_pair_count(c) != pair_scan(rows):
            bad.append(i)
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 30
    report(1, ok, "exact count and pair count vs brute force", f"500 colorings, mismatches={len(bad)}, {elapsed:.1f}s")
    assert not bad and elapsed < 30


def test_c02_even_cyclic_counterexample(report):
    start = time.perf_counter()
    counts = {m: count_rainbow_matchings(gen_cyclic(m)).count for m in (2, 4, 6, 8)}
    partial = {m: max_partial_rainbow(gen_cyclic(m)) for m in (4, 6, 8)}
    elapsed = time.perf_counter() - start
    ok = all(v == 0 for v in counts.values()) and all(partial[m] == m - 1 for m in partial) and elapsed < 10
    report(2, ok, "even cyclic: no transversal, partial m-1", f"counts={counts} partial={partial}, {elapsed:.2f}s")
    assert ok


def test_c03_odd_cyclic_has_transversal(report):
    start = time.perf_counter()
    found = {}
    for m in range(1, 16, 2):
        c = gen_cyclic(m)
        w = find_rainbow_matching(c)
        found[m] = w is not None and is_rainbow(c, w)
    elapsed = time.perf_counter() - start
    ok = all(found.values()) and elapsed < 10
    report(3, ok, "odd cyclic m<=15: verified transversal", f"all found={all(found.values())}, {elapsed:.2f}s")
    assert ok


def test_c04_bounded_multiplicity_existence(report):
    n, cap = 56, 5
    assert cap <= (n - 1) / (4 * math.e)
    start = time.perf_counter()
    base = Seed(404)
    colorings = [gen_capped(n, cap, base.child(i)) for i in range(100)]
    colorings += [gen_adversarial_blocks(n, 14, base.child(100 + i)) for i in range(50)]
    colorings += [gen_adversarial_blocks(n, 28, base.child(150 + i)) for i in range(50)]
    worst = max(color_stats(c).max_multiplicity for c in colorings)
    found = 0
    for c in colorings:
        w = find_rainbow_matching(c)
        found += w is not None and is_rainbow(c, w)
    elapsed = time.perf_counter() - start
    ok = worst <= cap and found == 200 and elapsed < 120
    report(4, ok, "n=56, multiplicity<=5: always rainbow", f"found {found}/200, max mult {worst}, {elapsed:.1f}s")
    assert ok


def test_c05_urm_closed_form(report):
    start = time.perf_counter()
    checks = []
    for n, s, trials, seed, target in (
        (10, 20, 200_000, Seed(501), urm_closed_form(10, 20)),
        (2, 2, 200_000, Seed(502), 0.5),
        (10, 10, 10_000_000, Seed(503), math.factorial(10) / 10**10),
    ):
        est = estimate_rainbow_given_model("urm", n, s, trials, seed)
        good, sd = _within(est.p_hat, target, trials)
        checks.append((n, s, est.p_hat, target, (est.p_hat - target) / sd, good))
    elapsed = time.perf_counter() - start
    assert checks[2][3] == pytest.approx(3.6288e-4, rel=1e-4)
    ok = all(c[-1] for c in checks) and elapsed < 180
    detail = "; ".join(f"({n},{s}) p={p:.6g} vs {t:.6g} z={z:+.2f}" for n, s, p, t, z, _ in checks)
    report(5, ok, "URM Monte Carlo vs product formula", f"{detail}; {elapsed:.1f}s")
    assert ok


def test_c06_rrm_closed_form(report):
    start = time.perf_counter()
    rel = {}
    for n, s in ((2, 2), (2, 4), (3, 3)):
        probs = [exact_rainbow_probability(EdgeColoring(n, s, rows)) for rows in all_equitable_colorings(n, s)]
        avg = sum(probs, Fraction(0)) / len(probs)
        closed = rrm_closed_form(n, s)
        rel[(n, s)] = abs(closed - float(avg)) / float(avg)
    est = estimate_rainbow_given_model("rrm", 6, 12, 100_000, Seed(601))
    target = rrm_closed_form(6, 12)
    good, sd = _within(est.p_hat, target, est.trials)
    elapsed = time.perf_counter() - start
    ok = all(v <= 1e-12 for v in rel.values()) and good and elapsed < 120
    report(6, ok, "RRM exhaustive average and Monte Carlo",
           f"max rel err {max(rel.values()):.1e}; (6,12) p={est.p_hat:.5f} vs {target:.5f} "
           f"z={(est.p_hat - target) / sd:+.2f}; {elapsed:.1f}s")
    assert ok


def test_c07_sandwich_on_blocks(report):
    start = time.perf_counter()
    rows = []
    for n in (24, 48):
        c = gen_adversarial_blocks(n, 12, Seed(700 + n))
        m = float(mu(c))
        b = sandwich_bounds(12, m)
        est = estimate_rainbow_given_coloring(c, 1_000_000, Seed(710 + n))
        slack = SIGMAS * est.std_err
        rows.append((n, m, b.lower_bound, est.p_hat, b.upper_bound,
                     b.lower_bound - slack <= est.p_hat <= b.upper_bound + slack))
    elapsed = time.perf_counter() - start
    assert rows[0][1] == pytest.approx(12 / 23)
    ok = all(r[-1] for r in rows) and elapsed < 120
    detail = "; ".join(f"n={n} mu={m:.4f}: {lo:.4f} <= {p:.4f} <= {hi:.4f}" for n, m, lo, p, hi, _ in rows)
    report(7, ok, "blocks k=12: lower <= p_hat <= upper (4 se)", f"{detail}; {elapsed:.1f}s")
    assert ok


def test_c08_random_latin_like_existence(report):
    start = time.perf_counter()
    rows = []
    for n in (30, 50, 100):
        est = estimate_existence("urm", n, n, 200, Seed(800 + n))
        p0 = 1 - 2 / n
        floor = p0 - SIGMAS * math.sqrt(p0 * (1 - p0) / 200)
        rows.append((n, est.p_hat, floor, est.p_hat >= floor))
    elapsed = time.perf_counter() - start
    ok = all(r[-1] for r in rows) and elapsed < 300
    detail = "; ".join(f"n={n} rate={p:.3f} floor={f:.3f}" for n, p, f, _ in rows)
    report(8, ok, "URM s=n: existence rate >= 1-2/n-4se", f"{detail}; {elapsed:.1f}s")
    assert ok


def test_c09_exponent_rate(report):
    start = time.perf_counter()
    n = 2000
    gaps = {k: abs(-log_urm_closed_form(n, k * n) / n - c_of_k(k) * model_mu(n, k * n) / n) for k in (1, 2, 4)}
    elapsed = time.perf_counter() - start
    ok = all(g <= 0.01 for g in gaps.values()) and elapsed < 1
    report(9, ok, "-ln P / n vs c(k) mu / n at n=2000", ", ".join(f"k={k}: {g:.2e}" for k, g in gaps.items()))
    assert ok


def test_c10_second_moment_counters(report):
    start = time.perf_counter()
    sums_ok = all(sum(count_matchings_with_overlap(n, t) for t in range(n + 1)) == math.factorial(n)
                  for n in range(13))
    d4 = count_derangements(4)
    f = f_of_s(20, 10**9)
    elapsed = time.perf_counter() - start
    ok = sums_ok and d4 == 9 and abs(f - math.e) <= 1e-6 and elapsed < 1
    report(10, ok, "overlap counts sum to n!, D_4, f(s)->e", f"sums={sums_ok} D_4={d4} |f-e|={abs(f - math.e):.1e}")
    assert ok


def test_c11_llll_grid(report):
    start = time.perf_counter()
    ns = np.unique(np.rint(np.geomspace(12, 2000, 50)).astype(int))
    failures, points = [], 0
    for n in ns:
        for k in np.geomspace(12, n, 50):
            points += 1
            if not llll_feasibility(int(n), float(k)).feasible:
                failures.append((int(n), float(k)))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 1
    report(11, ok, "local-lemma interval non-empty on grid", f"{points} points, failures={len(failures)}, {elapsed:.2f}s")
    assert ok


def test_c12_sweep_determinism(report, tmp_path, capsys):
    spec = {"model": "urm", "n": [6, 10], "s": [12, 20], "trials": 20_000, "seed": "1200:3"}
    path = tmp_path / "sweep.json"
    path.write_text(json.dumps(spec))
    blobs = {}
    for w in (1, 4):
        out = tmp_path / f"w{w}.csv"
        assert cli_main(["sweep", "--spec", str(path), "--workers", str(w), "--out", str(out)]) == 0
        blobs[w] = out.read_bytes()
    capsys.readouterr()
    ok = blobs[1] == blobs[4] and blobs[1].count(b"\n") == 5
    report(12, ok, "sweep CSV identical for workers 1 and 4", f"{len(blobs[1])} bytes")
    assert ok
