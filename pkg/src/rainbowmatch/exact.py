"""Exact counting and search for rainbow perfect matchings.

All searches share one node budget model: a node is one cell placement. When
the budget runs out :class:`BudgetExceeded` is raised, so a ``None`` answer
from :func:`find_rainbow_matching` is always a proof that no rainbow perfect
matching exists.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from . import _backend
from .coloring import EdgeColoring, PerfectMatching, is_rainbow
from .errors import BudgetExceeded, OutOfRange


@dataclass(frozen=True)
class SearchBudget:
    """Node cap for one search; ``None`` means unlimited."""

    max_nodes: int | None = None

    def __post_init__(self):
        if self.max_nodes is not None and (not isinstance(self.max_nodes, int) or self.max_nodes < 1):
            raise OutOfRange(f"max_nodes must be a positive integer or None, got {self.max_nodes!r}")

    @property
    def raw(self) -> int:
        return -1 if self.max_nodes is None else self.max_nodes


UNLIMITED = SearchBudget()


@dataclass(frozen=True)
class CountResult:
    count: int
    nodes_visited: int


@dataclass(frozen=True)
class FindResult:
    matching: PerfectMatching | None
    nodes_visited: int

    @property
    def found(self) -> bool:
        return self.matching is not None


def _budget(budget: SearchBudget | int | None) -> SearchBudget:
    if budget is None:
        return UNLIMITED
    if isinstance(budget, SearchBudget):
        return budget
    return SearchBudget(budget)


def count_rainbow_matchings(coloring: EdgeColoring, budget: SearchBudget | int | None = None) -> CountResult:
    """Number of permutations ``sigma`` whose cells ``(i, sigma[i])`` carry distinct colors."""
    b = _budget(budget)
    count, nodes, _, exhausted = _backend.kernels().search(
        coloring.flat(), coloring.n, coloring.s, 0, b.raw)
    if exhausted:
        raise BudgetExceeded(nodes)
    return CountResult(int(count), int(nodes))


def exact_rainbow_probability(coloring: EdgeColoring, budget: SearchBudget | int | None = None) -> Fraction:
    """Probability that a uniform random perfect matching is rainbow."""
    return Fraction(count_rainbow_matchings(coloring, budget).count, factorial(coloring.n))


def search_rainbow_matching(coloring: EdgeColoring, budget: SearchBudget | int | None = None) -> FindResult:
    b = _budget(budget)
    _, nodes, witness, exhausted = _backend.kernels().search(
        coloring.flat(), coloring.n, coloring.s, 1, b.raw)
    if exhausted:
        raise BudgetExceeded(nodes)
    if witness is None:
        return FindResult(None, int(nodes))
    matching = PerfectMatching(tuple(int(j) for j in witness))
    if not is_rainbow(coloring, matching):  # pragma: no cover - kernel bug guard
        raise AssertionError(f"search returned a non-rainbow witness {matching.sigma}")
    return FindResult(matching, int(nodes))


def find_rainbow_matching(coloring: EdgeColoring, budget: SearchBudget | int | None = None) -> PerfectMatching | None:
    """A rainbow perfect matching, or ``None`` if there is provably none."""
    return search_rainbow_matching(coloring, budget).matching


def max_partial_rainbow_detailed(coloring: EdgeColoring, budget: SearchBudget | int | None = None) -> tuple[int, int]:
    """``(size, nodes)`` for the largest rainbow partial matching."""
    b = _budget(budget)
    first = search_rainbow_matching(coloring, b)
    if first.found:
        return coloring.n, first.nodes_visited
    rest = -1 if b.max_nodes is None else b.max_nodes - first.nodes_visited
    if rest == 0:
        raise BudgetExceeded(first.nodes_visited)
    size, nodes, exhausted = _backend.kernels().max_partial(coloring.flat(), coloring.n, coloring.s, rest)
    total = first.nodes_visited + int(nodes)
    if exhausted:
        raise BudgetExceeded(total)
    return int(size), total


def max_partial_rainbow(coloring: EdgeColoring, budget: SearchBudget | int | None = None) -> int:
    """Size of the largest partial matching whose edges all have distinct colors."""
    return max_partial_rainbow_detailed(coloring, budget)[0]


@lru_cache(maxsize=None)
def count_derangements(n: int) -> int:
    """Permutations of ``n`` points with no fixed point."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise OutOfRange(f"n must be a non-negative integer, got {n!r}")
    prev, cur = 1, 0  # D_0, D_1
    if n == 0:
        return prev
    for m in range(2, n + 1):
        prev, cur = cur, (m - 1) * (cur + prev)
    return cur


def count_matchings_with_overlap(n: int, t: int) -> int:
    """Perfect matchings sharing exactly ``t`` edges with a fixed perfect matching."""
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise OutOfRange(f"n must be a non-negative integer, got {n!r}")
    if isinstance(t, bool) or not isinstance(t, int) or not 0 <= t <= n:
        raise OutOfRange(f"t must lie in [0, {n}], got {t!r}")
    return comb(n, t) * count_derangements(n - t)
