"""Edge-colored complete bipartite graphs and their same-color pair statistics.

Rows index the first side ``a_0..a_{n-1}``, columns the second side
``b_0..b_{n-1}``; cell ``(i, j)`` holds the color of edge ``a_i b_j``.
"""
from __future__ import annotations

import numbers
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    ColorIdOutOfRange,
    ColoringParseError,
    DimensionMismatch,
    InvalidMatching,
    OutOfRange,
    SizeMismatch,
    UndefinedMu,
)


def _as_grid(n: int, s: int, cells) -> np.ndarray:
    if isinstance(cells, np.ndarray):
        if cells.ndim != 2 or cells.shape != (n, n):
            raise DimensionMismatch(f"expected a {n}x{n} grid, got shape {cells.shape}")
        if cells.dtype.kind not in "iu":
            raise DimensionMismatch(f"grid must hold integers, got dtype {cells.dtype}")
        return cells.astype(np.int64, copy=True)
    rows = list(cells)
    if len(rows) != n:
        raise DimensionMismatch(f"expected {n} rows, got {len(rows)}")
    grid = np.empty((n, n), dtype=np.int64)
    for i, row in enumerate(rows):
        row = list(row)
        if len(row) != n:
            raise DimensionMismatch(f"row {i} has {len(row)} entries, expected {n}")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, numbers.Integral):
                raise ColorIdOutOfRange(i, j, v, s)
            grid[i, j] = v if -(1 << 62) < v < (1 << 62) else -1
    return grid


@dataclass(frozen=True, eq=False)
class EdgeColoring:
    """An ``n x n`` grid of color ids drawn from a palette of size ``s``.

    Colors need not all be used. The grid is stored as a read-only int64 array.
    """

    n: int
    s: int
    cells: np.ndarray = field(repr=False)

    def __post_init__(self):
        if isinstance(self.n, bool) or not isinstance(self.n, numbers.Integral) or self.n < 1:
            raise DimensionMismatch(f"n must be a positive integer, got {self.n!r}")
        if isinstance(self.s, bool) or not isinstance(self.s, numbers.Integral) or self.s < 1:
            raise OutOfRange(f"s must be a positive integer, got {self.s!r}")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "s", int(self.s))
        grid = _as_grid(self.n, self.s, self.cells)
        grid.setflags(write=False)
        object.__setattr__(self, "cells", grid)
        validate(self)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], s: int | None = None) -> "EdgeColoring":
        """Build from nested rows; ``s`` defaults to ``max + 1``."""
        rows = [list(r) for r in rows]
        if s is None:
            s = max((max(r) for r in rows if r), default=0) + 1
        return cls(len(rows), s, rows)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        return int(self.cells[ij])

    def __eq__(self, other):
        if not isinstance(other, EdgeColoring):
            return NotImplemented
        return self.n == other.n and self.s == other.s and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.n, self.s, self.cells.tobytes()))

    def rows(self) -> list[list[int]]:
        return self.cells.tolist()

    def flat(self) -> np.ndarray:
        """Row-major contiguous view, the layout the search kernels expect."""
        return np.ascontiguousarray(self.cells).reshape(-1)

    def relabel(self, row_perm: Sequence[int], col_perm: Sequence[int], color_perm: Sequence[int]) -> "EdgeColoring":
        """Move cell ``(i, j)`` to ``(row_perm[i], col_perm[j])`` and rename color ``c`` to ``color_perm[c]``."""
        rp = np.asarray(row_perm, dtype=np.int64)
        cp = np.asarray(col_perm, dtype=np.int64)
        kp = np.asarray(color_perm, dtype=np.int64)
        out = np.empty_like(self.cells)
        out[np.ix_(rp, cp)] = kp[self.cells]
        return EdgeColoring(self.n, self.s, out)


@dataclass(frozen=True)
class PerfectMatching:
    """Row ``i`` is matched to column ``sigma[i]``."""

    sigma: tuple[int, ...]

    def __post_init__(self):
        sigma = tuple(int(x) for x in self.sigma)
        if sorted(sigma) != list(range(len(sigma))):
            raise InvalidMatching(f"{sigma} is not a permutation of 0..{len(sigma) - 1}")
        object.__setattr__(self, "sigma", sigma)

    @property
    def n(self) -> int:
        return len(self.sigma)

    def __iter__(self):
        return iter(self.sigma)

    def __len__(self):
        return len(self.sigma)


@dataclass(frozen=True)
class ColorStats:
    multiplicity: dict[int, int]
    row_counts: dict[tuple[int, int], int]
    col_counts: dict[tuple[int, int], int]
    max_multiplicity: int

    @property
    def colors_used(self) -> int:
        return len(self.multiplicity)


@dataclass(frozen=True)
class PairSummary:
    mono_pairs: int
    mu: Fraction
    effective_k: Fraction

    @property
    def mu_float(self) -> float:
        return float(self.mu)


def validate(coloring: EdgeColoring) -> None:
    """Raise unless the grid is ``n x n`` with every id in ``[0, s)``."""
    grid = coloring.cells
    n, s = coloring.n, coloring.s
    if grid.shape != (n, n):
        raise DimensionMismatch(f"expected a {n}x{n} grid, got shape {grid.shape}")
    bad = np.argwhere((grid < 0) | (grid >= s))
    if bad.size:
        i, j = (int(x) for x in bad[0])
        raise ColorIdOutOfRange(i, j, int(grid[i, j]), s)


def is_rainbow(coloring: EdgeColoring, matching: PerfectMatching | Sequence[int]) -> bool:
    sigma = matching.sigma if isinstance(matching, PerfectMatching) else tuple(matching)
    if len(sigma) != coloring.n:
        raise SizeMismatch(f"matching has size {len(sigma)}, coloring has n={coloring.n}")
    if not isinstance(matching, PerfectMatching):
        PerfectMatching(sigma)
    colors = coloring.cells[np.arange(coloring.n), np.asarray(sigma, dtype=np.int64)]
    return len(np.unique(colors)) == coloring.n


def color_stats(coloring: EdgeColoring) -> ColorStats:
    n = coloring.n
    grid = coloring.cells
    colors, counts = np.unique(grid, return_counts=True)
    rows = np.repeat(np.arange(n), n)
    cols = np.tile(np.arange(n), n)
    flat = grid.reshape(-1)

    def _pair_counts(index):
        keys, cnt = np.unique(np.stack([flat, index], axis=1), axis=0, return_counts=True)
        return {(int(c), int(i)): int(k) for (c, i), k in zip(keys, cnt)}

    return ColorStats(
        multiplicity={int(c): int(m) for c, m in zip(colors, counts)},
        row_counts=_pair_counts(rows),
        col_counts=_pair_counts(cols),
        max_multiplicity=int(counts.max()),
    )


def _sum_pairs(counts: Iterable[int]) -> int:
    return sum(m * (m - 1) // 2 for m in counts)


def mono_pair_count(coloring: EdgeColoring) -> int:
    """Number of unordered pairs of disjoint edges sharing a color.

    Same-color pairs minus those sharing a row or a column; two distinct edges
    cannot share both, so nothing is subtracted twice.
    """
    n = coloring.n
    flat = coloring.cells.reshape(-1)
    per_color = np.unique(flat, return_counts=True)[1]
    rows = np.repeat(np.arange(n, dtype=np.int64), n)
    cols = np.tile(np.arange(n, dtype=np.int64), n)
    # (color, row) and (color, col) keys packed into one integer each
    per_row = np.unique(flat * n + rows, return_counts=True)[1]
    per_col = np.unique(flat * n + cols, return_counts=True)[1]
    return _sum_pairs(per_color.tolist()) - _sum_pairs(per_row.tolist()) - _sum_pairs(per_col.tolist())


def mu(coloring: EdgeColoring) -> Fraction:
    """Expected number of same-color disjoint pairs inside a uniform random matching."""
    n = coloring.n
    if n < 2:
        raise UndefinedMu(f"mu needs n >= 2, got n={n}")
    return Fraction(mono_pair_count(coloring), n * (n - 1))


def pair_summary(coloring: EdgeColoring) -> PairSummary:
    n = coloring.n
    if n < 2:
        raise UndefinedMu(f"mu needs n >= 2, got n={n}")
    pairs = mono_pair_count(coloring)
    max_mult = int(np.unique(coloring.cells, return_counts=True)[1].max())
    return PairSummary(pairs, Fraction(pairs, n * (n - 1)), Fraction(n, max_mult))


# --- text format -----------------------------------------------------------

def format_coloring(coloring: EdgeColoring) -> str:
    lines = [f"{coloring.n} {coloring.s}"]
    lines.extend(" ".join(str(v) for v in row) for row in coloring.cells.tolist())
    return "\n".join(lines) + "\n"


def _tokens(line: str):
    """Yield (1-based column, token) for whitespace-separated tokens."""
    col = 0
    for tok in line.split(" "):
        if tok:
            yield col + 1, tok
        col += len(tok) + 1


def _parse_int(tok: str, line: int, column: int, what: str) -> int:
    if not tok.isdigit():
        raise ColoringParseError(f"{what} must be a non-negative integer, got {tok!r}", line, column)
    return int(tok)


def parse_coloring(text: str) -> EdgeColoring:
    """Parse the ``n s`` header plus ``n`` rows of ``n`` color ids.

    Tokens are separated by single or repeated spaces; tabs, blank lines and
    trailing garbage are rejected.
    """
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ColoringParseError("empty input", 1)
    for lineno, raw in enumerate(lines, start=1):
        if raw.endswith("\r"):
            raise ColoringParseError("carriage return not allowed", lineno, len(raw))
        if "\t" in raw:
            raise ColoringParseError("tab not allowed", lineno, raw.index("\t") + 1)
    header = list(_tokens(lines[0]))
    if len(header) != 2:
        raise ColoringParseError(f"header must be 'n s', got {len(header)} fields", 1)
    n = _parse_int(header[0][1], 1, header[0][0], "n")
    s = _parse_int(header[1][1], 1, header[1][0], "s")
    if n < 1:
        raise ColoringParseError("n must be at least 1", 1, header[0][0])
    if s < 1:
        raise ColoringParseError("s must be at least 1", 1, header[1][0])
    if len(lines) - 1 != n:
        raise ColoringParseError(f"expected {n} grid rows, found {len(lines) - 1}", min(len(lines), n + 2))
    grid = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        lineno = i + 2
        toks = list(_tokens(lines[i + 1]))
        if len(toks) != n:
            col = toks[n][0] if len(toks) > n else None
            raise ColoringParseError(f"expected {n} entries, found {len(toks)}", lineno, col)
        for j, (column, tok) in enumerate(toks):
            v = _parse_int(tok, lineno, column, "color id")
            if v >= s:
                raise ColoringParseError(f"color id {v} outside [0, {s})", lineno, column)
            grid[i, j] = v
    return EdgeColoring(n, s, grid)


def read_coloring(path) -> EdgeColoring:
    with open(path, encoding="ascii", newline="") as fh:
        return parse_coloring(fh.read())


def write_coloring(coloring: EdgeColoring, path) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        fh.write(format_coloring(coloring))
