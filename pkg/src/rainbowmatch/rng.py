"""Counter-based SplitMix64 streams keyed by ``(master, stream, index)``.

Output number ``i`` of a stream with key ``K`` is ``mix(K + (i + 1) * GAMMA)``,
so any draw can be recomputed from its key and position alone. The compiled
kernels reimplement exactly these functions; keep the two in lockstep.
"""
from __future__ import annotations

import re
import secrets
from dataclasses import dataclass

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def derive(key: int, index: int) -> int:
    """Child key number ``index`` of ``key``."""
    return mix64(key ^ mix64((index + 1) * GAMMA))


class Rng:
    """Sequential view of one keyed stream."""

    __slots__ = ("key", "state")

    def __init__(self, key: int):
        self.key = key & MASK64
        self.state = self.key

    def next64(self) -> int:
        self.state = (self.state + GAMMA) & MASK64
        return mix64(self.state)

    def below(self, bound: int) -> int:
        """Unbiased integer in ``[0, bound)`` by rejection of the short tail."""
        if bound <= 0:
            raise ValueError("bound must be positive")
        threshold = (1 << 64) % bound
        while True:
            r = self.next64()
            if r >= threshold:
                return r % bound

    def shuffle(self, items: list) -> None:
        """In-place Fisher-Yates, last position first."""
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


_SEED_RE = re.compile(r"^\s*(\d+)\s*(?::\s*(\d+)\s*)?$")


@dataclass(frozen=True)
class Seed:
    """A reproducible seed: ``master`` picks the experiment, ``stream`` the lane."""

    master: int
    stream: int = 0

    def __post_init__(self):
        for name in ("master", "stream"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or not 0 <= v <= MASK64:
                raise ValueError(f"seed {name} must be a 64-bit unsigned integer, got {v!r}")

    @property
    def key(self) -> int:
        return derive(mix64(self.master), self.stream)

    def rng(self) -> Rng:
        return Rng(self.key)

    def trial_key(self, index: int) -> int:
        return derive(self.key, index)

    def child(self, index: int) -> "Seed":
        """An independent seed for sub-experiment ``index`` (same stream)."""
        return Seed(derive(self.key, index), self.stream)

    @classmethod
    def parse(cls, text: str) -> "Seed":
        m = _SEED_RE.match(text)
        if not m:
            raise ValueError(f"seed must look like MASTER or MASTER:STREAM, got {text!r}")
        return cls(int(m.group(1)), int(m.group(2) or 0))

    @classmethod
    def from_entropy(cls) -> "Seed":
        return cls(secrets.randbits(64), 0)

    def __str__(self) -> str:
        return f"{self.master}:{self.stream}"


def as_seed(seed: "Seed | int | str | tuple[int, int]") -> Seed:
    if isinstance(seed, Seed):
        return seed
    if isinstance(seed, str):
        return Seed.parse(seed)
    if isinstance(seed, tuple):
        return Seed(*seed)
    return Seed(seed)
