"""Compare the compiled and numpy kernel backends.

Usage: python3 benchmarks/bench_kernels.py [--seeds N]

Prints per-kernel micro-timings and median span-closure times over the default
bench grid for every available backend.
"""
import argparse
import timeit

import numpy as np

from lindecomp import bench, kernels
from lindecomp.linalg import IncrementalSpan

P = 1009


def micro(n: int, repeat: int = 200) -> dict[str, float]:
    rng = np.random.default_rng(0)
    a, f, b = (rng.integers(0, P, (n, n)) for _ in range(3))
    xs = rng.integers(0, P, (5, n, n))
    cands = rng.integers(0, P, (n * n, n * n))

    def absorb():
        span = IncrementalSpan(n * n, P, (n, n))
        span.absorb(cands.reshape(-1, n, n))

    cases = {
        "sandwich": lambda: kernels.sandwich(a, f, b, P),
        "sandwich_all": lambda: kernels.sandwich_all(xs, f, P),
        "absorb": absorb,
    }
    return {name: min(timeit.repeat(fn, number=repeat, repeat=3)) / repeat * 1e6 for name, fn in cases.items()}


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--seeds", type=int, default=3)
    args = parser.parse_args()
    names = kernels.available()
    print("kernel micro-timings (microseconds per call)")
    for n in (2, 4, 6):
        rows = {}
        for name in names:
            with kernels.backend(name):
                rows[name] = micro(n)
        for kernel in rows[names[0]]:
            cells = "  ".join(f"{name}={rows[name][kernel]:9.1f}" for name in names)
            print(f"  n={n} {kernel:<13} {cells}")
    print("\nspan closure, median microseconds per cell")
    timings = bench.compare_backends(bench.DEFAULT_GRID, args.seeds)
    for cell in timings[names[0]]:
        cells = "  ".join(f"{name}={timings[name][cell]:9.0f}" for name in names)
        ratio = ""
        if "compiled" in timings:
            ratio = f"  speedup {timings['numpy'][cell] / max(timings['compiled'][cell], 1):.1f}x"
        print(f"  (n,k,p)=({cell}) {cells}{ratio}")


if __name__ == "__main__":
    main()
