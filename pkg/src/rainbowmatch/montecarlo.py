"""Monte Carlo estimates of rainbow probabilities.

Trial ``t`` of an experiment seeded with ``seed`` draws everything from the key
``derive(seed.key, t)``. Workers take contiguous slices of the trial range and
hit counts are summed as integers, so the pooled estimate does not depend on
the worker count.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Callable

from . import _backend
from .coloring import EdgeColoring, PerfectMatching, is_rainbow
from .errors import BudgetExceeded, DivisibilityViolation, OutOfRange
from .exact import SearchBudget, search_rainbow_matching
from .generators import generate
from .rng import Seed, as_seed

Z95 = NormalDist().inv_cdf(0.975)
MODELS = {"urm": 0, "rrm": 1}


@dataclass(frozen=True)
class Estimate:
    p_hat: float
    trials: int
    hits: int
    std_err: float
    ci95_low: float
    ci95_high: float
    elapsed_ms: float = field(default=0.0, compare=False)

    @classmethod
    def from_counts(cls, hits: int, trials: int, elapsed_ms: float = 0.0) -> "Estimate":
        if trials < 1:
            raise OutOfRange(f"trials must be at least 1, got {trials}")
        p = hits / trials
        lo, hi = wilson_interval(hits, trials)
        return cls(p, trials, hits, math.sqrt(p * (1 - p) / trials), lo, hi, elapsed_ms)

    def within(self, target: float, sigmas: float = 4.0) -> bool:
        """``|p_hat - target|`` within ``sigmas`` binomial standard errors of ``target``."""
        sd = math.sqrt(target * (1 - target) / self.trials)
        return abs(self.p_hat - target) <= sigmas * sd

    def to_dict(self, **context) -> dict:
        out = dict(context)
        out.update(
            p_hat=self.p_hat,
            hits=self.hits,
            trials=self.trials,
            std_err=self.std_err,
            ci95=[self.ci95_low, self.ci95_high],
            elapsed_ms=round(self.elapsed_ms, 3),
        )
        return out


def wilson_interval(hits: int, trials: int, z: float = Z95) -> tuple[float, float]:
    p = hits / trials
    z2 = z * z
    denom = 1 + z2 / trials
    centre = (p + z2 / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z2 / (4 * trials * trials)) / denom
    lo = 0.0 if hits == 0 else max(0.0, min(p, centre - half))
    hi = 1.0 if hits == trials else min(1.0, max(p, centre + half))
    return lo, hi


def _slices(total: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, total))
    step, extra = divmod(total, workers)
    out, start = [], 0
    for w in range(workers):
        end = start + step + (w < extra)
        out.append((start, end))
        start = end
    return out


def _run_slice(backend: str, fn: str, args: tuple, t0: int, t1: int) -> int:
    return getattr(_backend.module(backend), fn)(*args, t0, t1)


def _pooled_hits(fn: str, args: tuple, trials: int, workers: int) -> int:
    backend = _backend.name()
    slices = _slices(trials, workers)
    if len(slices) == 1:
        return _run_slice(backend, fn, args, 0, trials)
    with ProcessPoolExecutor(max_workers=len(slices)) as pool:
        futures = [pool.submit(_run_slice, backend, fn, args, a, b) for a, b in slices]
        return sum(f.result() for f in futures)


def trial_matching(n: int, seed: Seed | int | str, t: int) -> PerfectMatching:
    """The matching drawn by trial ``t`` of a fixed-coloring experiment."""
    return PerfectMatching(tuple(_backend.kernels().permutation(as_seed(seed).trial_key(t), n).tolist()))


def sample_uniform_matching(n: int, seed: Seed | int | str = 0) -> PerfectMatching:
    """Uniform random perfect matching of K_{n,n} via Fisher-Yates."""
    if n < 1:
        raise OutOfRange(f"n must be at least 1, got {n}")
    return PerfectMatching(tuple(_backend.kernels().permutation(as_seed(seed).key, n).tolist()))


def estimate_rainbow_given_coloring(coloring: EdgeColoring, trials: int, seed: Seed | int | str = 0,
                                    workers: int = 1) -> Estimate:
    """Fraction of ``trials`` uniform matchings that are rainbow in ``coloring``."""
    if trials < 1:
        raise OutOfRange(f"trials must be at least 1, got {trials}")
    start = time.perf_counter()
    args = (coloring.flat(), coloring.n, coloring.s, as_seed(seed).key)
    hits = _pooled_hits("mc_fixed", args, trials, workers)
    return Estimate.from_counts(int(hits), trials, (time.perf_counter() - start) * 1e3)


def estimate_rainbow_given_model(model: str, n: int, s: int, trials: int, seed: Seed | int | str = 0,
                                 workers: int = 1) -> Estimate:
    """Each trial colors K_{n,n} afresh from ``model`` ("urm" or "rrm") and tests a fresh uniform matching."""
    if model not in MODELS:
        raise OutOfRange(f"model must be one of {sorted(MODELS)}, got {model!r}")
    if trials < 1:
        raise OutOfRange(f"trials must be at least 1, got {trials}")
    if n < 1 or s < 1:
        raise OutOfRange(f"need n, s >= 1, got n={n}, s={s}")
    if model == "rrm" and (n * n) % s:
        raise DivisibilityViolation(f"s={s} does not divide n^2={n * n}")
    start = time.perf_counter()
    args = (MODELS[model], n, s, as_seed(seed).key)
    hits = _pooled_hits("mc_model", args, trials, workers)
    return Estimate.from_counts(int(hits), trials, (time.perf_counter() - start) * 1e3)


ColoringSource = Callable[[Seed], EdgeColoring]


def _instance(model: "str | ColoringSource", n: int, s: int | None, params: dict, seed: Seed) -> EdgeColoring:
    if callable(model):
        return model(seed)
    return generate(model, n, s=s, seed=seed, **params)


def _existence_slice(backend: str, model, n: int, s: int | None, params: dict, seed: Seed,
                     budget: SearchBudget, i0: int, i1: int) -> int:
    _backend.use(backend)
    found = 0
    for i in range(i0, i1):
        child = seed.child(i)
        coloring = _instance(model, n, s, params, child)
        try:
            res = search_rainbow_matching(coloring, budget)
        except BudgetExceeded as exc:
            raise BudgetExceeded(exc.nodes_visited,
                                 f"budget of {budget.max_nodes} nodes exceeded on coloring {i} "
                                 f"(seed {child})") from None
        if res.found:
            if not is_rainbow(coloring, res.matching):  # pragma: no cover
                raise AssertionError(f"coloring {i}: witness is not rainbow")
            found += 1
    return found


def estimate_existence(model: "str | ColoringSource", n: int, s: int | None, colorings: int,
                       seed: Seed | int | str = 0, budget: SearchBudget | int | None = None,
                       workers: int = 1, **params) -> Estimate:
    """Fraction of sampled colorings that admit a rainbow perfect matching.

    ``model`` is a generator name (see :func:`generate`, extra parameters such
    as ``k`` or ``cap`` go in ``params``) or a callable mapping a per-instance
    seed to a coloring. Coloring ``i`` uses ``seed.child(i)``.
    """
    if colorings < 1:
        raise OutOfRange(f"colorings must be at least 1, got {colorings}")
    if budget is None:
        budget = SearchBudget()
    elif not isinstance(budget, SearchBudget):
        budget = SearchBudget(budget)
    seed = as_seed(seed)
    start = time.perf_counter()
    backend = _backend.name()
    slices = _slices(colorings, workers)
    if len(slices) == 1:
        found = _existence_slice(backend, model, n, s, params, seed, budget, 0, colorings)
    else:
        with ProcessPoolExecutor(max_workers=len(slices)) as pool:
            futures = [pool.submit(_existence_slice, backend, model, n, s, params, seed, budget, a, b)
                       for a, b in slices]
            found = sum(f.result() for f in futures)
    return Estimate.from_counts(found, colorings, (time.perf_counter() - start) * 1e3)
