"""Pure-Python hot kernels.

Reference semantics for ``_kernels.pyx``: both modules must return identical
values (counts, node totals, witnesses, random draws) for identical inputs.
Colorings arrive as flat row-major integer sequences.
"""
from __future__ import annotations

import sys

import numpy as np

from .rng import Rng, derive

BACKEND = "python"

MODE_COUNT = 0
MODE_FIND = 1
MODEL_URM = 0
MODEL_RRM = 1


# --- random structures -------------------------------------------------------

def _urm_fill(rng: Rng, n: int, s: int) -> list[int]:
    return [rng.below(s) for _ in range(n * n)]


def _rrm_fill(rng: Rng, n: int, s: int) -> list[int]:
    m = n * n // s
    cells = [idx // m for idx in range(n * n)]
    rng.shuffle(cells)
    return cells


def _perm(rng: Rng, n: int) -> list[int]:
    p = list(range(n))
    rng.shuffle(p)
    return p


def urm_cells(key: int, n: int, s: int) -> np.ndarray:
    return np.asarray(_urm_fill(Rng(key), n, s), dtype=np.int64)


def rrm_cells(key: int, n: int, s: int) -> np.ndarray:
    return np.asarray(_rrm_fill(Rng(key), n, s), dtype=np.int64)


def capped_cells(key: int, n: int, cap: int) -> np.ndarray:
    """Shuffle of the multiset where colors ``0, 1, ...`` take ``cap`` cells each in turn."""
    cells = [idx // cap for idx in range(n * n)]
    Rng(key).shuffle(cells)
    return np.asarray(cells, dtype=np.int64)


def permutation(key: int, n: int) -> np.ndarray:
    return np.asarray(_perm(Rng(key), n), dtype=np.int64)


# --- Monte Carlo loops -----------------------------------------------------------

def _distinct_on(cells, n: int, sigma, stamp: list[int], tag: int) -> bool:
    for i in range(n):
        c = cells[i * n + sigma[i]]
        if stamp[c] == tag:
            return False
        stamp[c] = tag
    return True


def mc_fixed(flat, n: int, s: int, base_key: int, t0: int, t1: int) -> int:
    """Rainbow hits among uniform matchings of one coloring, trials ``[t0, t1)``."""
    cells = [int(x) for x in flat]
    stamp = [-1] * s
    hits = 0
    for t in range(t0, t1):
        sigma = _perm(Rng(derive(base_key, t)), n)
        if _distinct_on(cells, n, sigma, stamp, t):
            hits += 1
    return hits


def mc_model(model: int, n: int, s: int, base_key: int, t0: int, t1: int) -> int:
    """Rainbow hits where each trial draws a fresh coloring, then a fresh matching."""
    stamp = [-1] * s
    hits = 0
    for t in range(t0, t1):
        rng = Rng(derive(base_key, t))
        cells = _urm_fill(rng, n, s) if model == MODEL_URM else _rrm_fill(rng, n, s)
        sigma = _perm(rng, n)
        if _distinct_on(cells, n, sigma, stamp, t):
            hits += 1
    return hits


# --- exact search ----------------------------------------------------------------

class _Budget(Exception):
    pass


class _Search:
    """Rows, columns and colors as exact-cover constraints with live-cell counters.

    A cell is alive while its row, column and color are all unused. Counters
    track alive cells per row, column and color; ``live`` is the number of
    colors that still have an alive cell.
    """

    def __init__(self, flat, n: int, s: int, mode: int, max_nodes: int):
        self.n, self.s, self.mode, self.max_nodes = n, s, mode, max_nodes
        self.C = [int(x) for x in flat]
        by_color: list[list[int]] = [[] for _ in range(s)]
        for idx, c in enumerate(self.C):
            by_color[c].append(idx)
        self.by_color = by_color
        self.rowfree = [True] * n
        self.colfree = [True] * n
        self.colorfree = [True] * s
        self.rowcnt = [n] * n
        self.colcnt = [n] * n
        self.colorcnt = [len(b) for b in by_color]
        self.live = sum(1 for b in by_color if b)
        self.remaining = n
        self.nodes = 0
        self.count = 0
        self.sol = [-1] * n
        self.found = False

    def _touch(self, i: int, j: int, d: int) -> None:
        self.rowcnt[i] += d
        self.colcnt[j] += d
        c = self.C[i * self.n + j]
        if d < 0:
            self.colorcnt[c] -= 1
            if self.colorcnt[c] == 0:
                self.live -= 1
        else:
            if self.colorcnt[c] == 0:
                self.live += 1
            self.colorcnt[c] += 1

    def _sweep(self, i: int, j: int, c: int, d: int) -> None:
        n, C = self.n, self.C
        colfree, rowfree, colorfree = self.colfree, self.rowfree, self.colorfree
        base = i * n
        for j2 in range(n):
            if colfree[j2] and colorfree[C[base + j2]]:
                self._touch(i, j2, d)
        for i2 in range(n):
            if i2 != i and rowfree[i2] and colorfree[C[i2 * n + j]]:
                self._touch(i2, j, d)
        for idx in self.by_color[c]:
            i2, j2 = divmod(idx, n)
            if i2 != i and j2 != j and rowfree[i2] and colfree[j2]:
                self._touch(i2, j2, d)

    def place(self, i: int, j: int) -> None:
        if self.max_nodes >= 0 and self.nodes >= self.max_nodes:
            raise _Budget
        self.nodes += 1
        c = self.C[i * self.n + j]
        self._sweep(i, j, c, -1)
        self.rowfree[i] = self.colfree[j] = self.colorfree[c] = False
        self.remaining -= 1
        self.sol[i] = j

    def unplace(self, i: int, j: int) -> None:
        c = self.C[i * self.n + j]
        self.rowfree[i] = self.colfree[j] = self.colorfree[c] = True
        self.remaining += 1
        self.sol[i] = -1
        self._sweep(i, j, c, +1)

    def choose(self):
        """Most constrained open constraint as (kind, index, options); None = dead end.

        Kinds: 0 row, 1 column, 2 color. Colors compete only when every
        remaining live color must be used. Ties keep the earliest candidate.
        """
        if self.live < self.remaining:
            return None
        n = self.n
        best_kind, best_idx, best = -1, -1, n + 1
        for i in range(n):
            if self.rowfree[i]:
                cnt = self.rowcnt[i]
                if cnt < best:
                    if cnt == 0:
                        return None
                    best_kind, best_idx, best = 0, i, cnt
        for j in range(n):
            if self.colfree[j]:
                cnt = self.colcnt[j]
                if cnt < best:
                    if cnt == 0:
                        return None
                    best_kind, best_idx, best = 1, j, cnt
        if self.live == self.remaining and best > 1:
            for c in range(self.s):
                cnt = self.colorcnt[c]
                if cnt and cnt < best:
                    best_kind, best_idx, best = 2, c, cnt
        return best_kind, best_idx

    def options(self, kind: int, idx: int) -> list[tuple[int, int]]:
        n, C = self.n, self.C
        out = []
        if kind == 0:
            for j in range(n):
                if self.colfree[j] and self.colorfree[C[idx * n + j]]:
                    out.append((idx, j))
        elif kind == 1:
            for i in range(n):
                if self.rowfree[i] and self.colorfree[C[i * n + idx]]:
                    out.append((i, idx))
        else:
            for cell in self.by_color[idx]:
                i, j = divmod(cell, n)
                if self.rowfree[i] and self.colfree[j]:
                    out.append((i, j))
        return out

    def run(self) -> None:
        if self.remaining == 0:
            self.count += 1
            if self.mode == MODE_FIND:
                self.found = True
            return
        choice = self.choose()
        if choice is None:
            return
        for i, j in self.options(*choice):
            self.place(i, j)
            self.run()
            if self.found:
                return
            self.unplace(i, j)


def search(flat, n: int, s: int, mode: int, max_nodes: int = -1):
    """Exhaustive rainbow perfect matching search.

    Returns ``(count, nodes, witness, exhausted)``. In find mode ``count`` is 0
    or 1 and ``witness`` is the column list of the first solution found.
    ``exhausted`` is True when the node budget ran out; the other fields are
    then meaningless apart from ``nodes``.
    """
    st = _Search(flat, n, s, mode, max_nodes)
    limit = sys.getrecursionlimit()
    if limit < 4 * n + 100:
        sys.setrecursionlimit(4 * n + 100)
    try:
        st.run()
    except _Budget:
        return 0, st.nodes, None, True
    witness = list(st.sol) if st.found else None
    return st.count, st.nodes, witness, False


def max_partial(flat, n: int, s: int, max_nodes: int = -1):
    """Largest partial matching with distinct colors: ``(size, nodes, exhausted)``.

    Rows are visited in order; each row is matched to an open column with an
    unused color or left out. A branch dies once it cannot beat the incumbent.
    """
    C = [int(x) for x in flat]
    colfree = [True] * n
    colorfree = [True] * s
    best = 0
    nodes = 0

    def rec(idx: int, size: int) -> None:
        nonlocal best, nodes
        if size + (n - idx) <= best:
            return
        if max_nodes >= 0 and nodes >= max_nodes:
            raise _Budget
        nodes += 1
        if idx == n:
            best = size
            return
        base = idx * n
        for j in range(n):
            c = C[base + j]
            if colfree[j] and colorfree[c]:
                colfree[j] = colorfree[c] = False
                rec(idx + 1, size + 1)
                colfree[j] = colorfree[c] = True
                if best == n:
                    return
        rec(idx + 1, size)

    try:
        rec(0, 0)
    except _Budget:
        return 0, nodes, True
    return best, nodes, False
