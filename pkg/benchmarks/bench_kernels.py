"""Time the numba loop kernels against the pure-numpy kernels.

Run with ``python benchmarks/bench_kernels.py [--repeat N]``. Each kernel is
called once before timing so JIT compilation is not counted, and the two
results are compared before any timing is reported.
"""

import argparse
import time

import numpy as np

from topex._kernels import HAVE_NUMBA, loops, vectorized


def _cases(rng):
    y = rng.standard_normal(200_001)
    h = 1e-5
    xq = rng.uniform(0.0, 2.0, 100_000)
    prefix = vectorized.simpson_prefix(y, h)
    starts = rng.integers(0, 1800, size=(64, 2))
    stops = starts + rng.integers(1, 300, size=(64, 2))
    mask = vectorized.fill_boxes(starts, stops, 2048, 2048)
    sizes = 2 ** np.arange(10, dtype=np.int64)
    # Power set of 10 points: closed, so the scan visits every pair.
    masks = np.arange(1 << 10, dtype=np.uint64)
    return {
        "stretch_offsets (n=18)": (lambda k: k.stretch_offsets(np.linspace(1.0, 0.1, 19), 18)),
        "simpson_prefix (2e5 samples)": (lambda k: k.simpson_prefix(y, h)),
        "prefix_integral (1e5 queries)": (lambda k: k.prefix_integral(prefix, y, 0.0, h, xq)),
        "weierstrass (1e5 points, 30 terms)": (lambda k: k.weierstrass(xq, 0.5, 13.0, 30)),
        "fill_boxes (64 boxes, 2048^2)": (lambda k: k.fill_boxes(starts, stops, 2048, 2048)),
        "box_counts (2048^2, 10 sizes)": (lambda k: k.box_counts(mask, sizes)),
        f"closure_violation ({len(masks)} opens)": (lambda k: k.closure_violation(masks)),
    }


def _same(a, b):
    if isinstance(a, tuple):
        return all(_same(x, y) for x, y in zip(a, b))
    return np.allclose(np.asarray(a, dtype=float), np.asarray(b, dtype=float), rtol=1e-12, atol=1e-12)


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy path is available")
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':38s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, call in _cases(rng).items():
        a, b = call(loops), call(vectorized)
        if not _same(a, b):
            print(f"{name:38s} MISMATCH between the two paths")
            return 1
        tn = _time(lambda: call(loops), args.repeat)
        tv = _time(lambda: call(vectorized), args.repeat)
        print(f"{name:38s} {tn * 1e3:10.3f} {tv * 1e3:10.3f} {tv / tn:8.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
