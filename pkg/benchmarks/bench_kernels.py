"""Compiled vs pure-Python kernels on the hot paths.

    python3 benchmarks/bench_kernels.py [--repeat 3]

Both backends run the same inputs and must return identical results; the
table reports best-of-``repeat`` wall time and the speedup.
"""
import argparse
import time

from rainbowmatch import _backend
from rainbowmatch.generators import gen_adversarial_blocks, gen_cyclic, gen_urm
from rainbowmatch.rng import Seed

CASES = [
    ("mc_fixed  blocks n=24 k=12, 2e4 trials",
     lambda K, c=gen_adversarial_blocks(24, 12, 1): K.mc_fixed(c.flat(), 24, c.s, Seed(1).key, 0, 20_000)),
    ("mc_model  urm n=10 s=10, 2e4 trials",
     lambda K: K.mc_model(0, 10, 10, Seed(2).key, 0, 20_000)),
    ("mc_model  rrm n=6 s=12, 2e4 trials",
     lambda K: K.mc_model(1, 6, 12, Seed(3).key, 0, 20_000)),
    ("count     cyclic m=9",
     lambda K, c=gen_cyclic(9): K.search(c.flat(), 9, 9, 0, -1)[:2]),
    ("count     cyclic m=8 (none)",
     lambda K, c=gen_cyclic(8): K.search(c.flat(), 8, 8, 0, -1)[:2]),
    ("find      urm n=100 s=100",
     lambda K, c=gen_urm(100, 100, 4): K.search(c.flat(), 100, 100, 1, -1)[:2]),
    ("partial   cyclic m=8",
     lambda K, c=gen_cyclic(8): K.max_partial(c.flat(), 8, 8, -1)),
    ("urm_cells n=300 s=300",
     lambda K: int(K.urm_cells(Seed(5).key, 300, 300).sum())),
]


def best_of(fn, kernels, repeat):
    times, out = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn(kernels)
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if "compiled" not in _backend.available():
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    fast, slow = _backend.module("compiled"), _backend.module("python")
    print(f"{'case':<42} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for label, fn in CASES:
        tp, a = best_of(fn, slow, args.repeat)
        tc, b = best_of(fn, fast, args.repeat)
        if str(a) != str(b):
            raise SystemExit(f"{label}: backends disagree ({a} vs {b})")
        print(f"{label:<42} {tp:>10.4f} {tc:>11.5f} {tp / tc:>7.0f}x")


if __name__ == "__main__":
    main()
