"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat 3]
"""
import math
import random
import timeit

import click
import numpy as np

from symdyn._kernels import compiled
from symdyn._kernels import python as py

SQRT_TAB = [0] + [math.isqrt(k - 1) + 1 for k in range(1, 200)]

# golden mean DFA: state 1 means the last symbol was a 1
GOLDEN = np.array([[0, 1], [0, -1]], dtype=np.int32)


def _words(count, n, seed=0):
    rng = random.Random(seed)
    return [[int(rng.random() < 0.15) for _ in range(n)] for _ in range(count)]


def _plain(x):
    if isinstance(x, (list, tuple, np.ndarray)):
        return [_plain(y) for y in x]
    return x.item() if isinstance(x, np.generic) else x


def cases():
    words = _words(200, 60)
    words8 = [np.array(w, dtype=np.uint8) for w in words]
    return [
        ("bd_level_counts(sqrt, 22)", lambda k: k.bd_level_counts(SQRT_TAB, 22)),
        ("dfa_level_counts(golden, 24)", lambda k: k.dfa_level_counts(GOLDEN, 0, 24, (1,))),
        ("greedy_cover(10, 2, 1)", lambda k: k.greedy_cover(10, 2, 1)),
        ("bd_window_ok x200 (n=60)",
         lambda k: [k.bd_window_ok(w, SQRT_TAB) for w in (words8 if k is compiled else words)]),
    ]


@click.command()
@click.option("--repeat", default=3, show_default=True, help="Timing runs per case; the best is kept.")
def main(repeat):
    if compiled is None:
        raise click.ClickException("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    click.echo(f"{'kernel':32} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for name, fn in cases():
        assert _plain(fn(py)) == _plain(fn(compiled)), name
        tp = min(timeit.repeat(lambda: fn(py), number=1, repeat=repeat))
        tc = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=repeat))
        click.echo(f"{name:32} {tp:10.4f} {tc:11.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
