"""Random and deterministic colorings of K_{n,n}."""
from __future__ import annotations

import numpy as np

from . import _backend
from .coloring import EdgeColoring
from .errors import DivisibilityViolation, OutOfRange
from .rng import Seed, as_seed


def _positive(name: str, value: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)) or value < 1:
        raise OutOfRange(f"{name} must be a positive integer, got {value!r}")
    return int(value)


def _grid(n: int, flat) -> np.ndarray:
    return np.asarray(flat, dtype=np.int64).reshape(n, n)


def gen_urm(n: int, s: int, seed: Seed | int | str = 0) -> EdgeColoring:
    """Uniform random model: every cell colored independently and uniformly from ``s`` colors."""
    n, s = _positive("n", n), _positive("s", s)
    key = as_seed(seed).key
    return EdgeColoring(n, s, _grid(n, _backend.kernels().urm_cells(key, n, s)))


def gen_rrm(n: int, s: int, seed: Seed | int | str = 0) -> EdgeColoring:
    """Regular random model: uniform over colorings with every class of size ``n**2 / s``.

    A uniform shuffle of the fixed color multiset hits every equitable
    coloring with the same probability.
    """
    n, s = _positive("n", n), _positive("s", s)
    if (n * n) % s:
        raise DivisibilityViolation(f"s={s} does not divide n^2={n * n}")
    key = as_seed(seed).key
    return EdgeColoring(n, s, _grid(n, _backend.kernels().rrm_cells(key, n, s)))


def gen_capped(n: int, cap: int, seed: Seed | int | str = 0) -> EdgeColoring:
    """Random coloring with every color used exactly ``cap`` times (the last color possibly fewer).

    This packs as many same-color pairs as a multiplicity cap allows, so it is
    the hardest random input for existence searches under that cap.
    """
    n, cap = _positive("n", n), _positive("cap", cap)
    s = -(-n * n // cap)
    key = as_seed(seed).key
    return EdgeColoring(n, s, _grid(n, _backend.kernels().capped_cells(key, n, cap)))


def gen_cyclic(n: int) -> EdgeColoring:
    """Addition table of Z_n: cell ``(i, j)`` gets ``(i + j) mod n``."""
    n = _positive("n", n)
    idx = np.arange(n, dtype=np.int64)
    return EdgeColoring(n, n, (idx[:, None] + idx[None, :]) % n)


def gen_all_distinct(n: int) -> EdgeColoring:
    n = _positive("n", n)
    return EdgeColoring(n, n * n, np.arange(n * n, dtype=np.int64).reshape(n, n))


def gen_adversarial_blocks(n: int, k: int, seed: Seed | int | str = 0) -> EdgeColoring:
    """``k*n`` colors, each on exactly ``n/k`` pairwise disjoint edges.

    Edges split into the ``n`` diagonals ``{(i, i + d mod n)}``; each diagonal is
    cut into ``k`` runs of ``n/k`` consecutive rows and every run gets its own
    color. Rows, columns and colors are then relabeled at random, which keeps
    the same-color pair count at ``k*n*C(n/k, 2)``.
    """
    n, k = _positive("n", n), _positive("k", k)
    if n % k:
        raise DivisibilityViolation(f"k={k} does not divide n={n}")
    run = n // k
    i = np.arange(n, dtype=np.int64)[:, None]
    j = np.arange(n, dtype=np.int64)[None, :]
    diag = (j - i) % n
    base = EdgeColoring(n, k * n, diag * k + i // run)
    rng = as_seed(seed).rng()
    row_perm, col_perm, color_perm = list(range(n)), list(range(n)), list(range(k * n))
    rng.shuffle(row_perm)
    rng.shuffle(col_perm)
    rng.shuffle(color_perm)
    return base.relabel(row_perm, col_perm, color_perm)


GENERATORS = ("urm", "rrm", "cyclic", "blocks", "distinct", "capped")


def generate(model: str, n: int, *, s: int | None = None, k: int | None = None,
             cap: int | None = None, seed: Seed | int | str = 0) -> EdgeColoring:
    """Dispatch by model name; missing parameters raise ``OutOfRange``."""
    def need(name, value):
        if value is None:
            raise OutOfRange(f"model {model!r} needs --{name}")
        return value

    if model == "urm":
        return gen_urm(n, need("s", s), seed)
    if model == "rrm":
        return gen_rrm(n, need("s", s), seed)
    if model == "cyclic":
        return gen_cyclic(n)
    if model == "blocks":
        return gen_adversarial_blocks(n, need("k", k), seed)
    if model == "distinct":
        return gen_all_distinct(n)
    if model == "capped":
        return gen_capped(n, need("cap", cap), seed)
    raise OutOfRange(f"unknown model {model!r}; expected one of {', '.join(GENERATORS)}")
