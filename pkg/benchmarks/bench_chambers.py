"""Time the chamber-scan kernel on each backend.

    python benchmarks/bench_chambers.py [-n 7] [-b 5] [--repeat 3]

The python backend runs the numba kernel source uncompiled and is only timed
on a slice of the candidates.
"""

import argparse
import time

import numpy as np

from polytc import _kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-n", type=int, default=7)
    ap.add_argument("-b", "--bound", type=int, default=5)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--python-rows", type=int, default=2000)
    args = ap.parse_args()

    cands = _kernels.candidates(args.n, args.bound, 0, args.bound**args.n)
    print(f"{len(cands)} candidates, n={args.n}, bound={args.bound}")
    ref = _kernels.scan(cands, "numpy")

    backends = ["numpy"]
    if _kernels.HAVE_NUMBA:
        _kernels.scan(cands[:10], "numba")  # compile outside the timing
        backends.insert(0, "numba")
    for b in backends:
        out = _kernels.scan(cands, b)
        assert all(np.array_equal(x, y) for x, y in zip(out, ref))
        t = best_of(lambda: _kernels.scan(cands, b), args.repeat)
        print(f"{b:>7}: {t * 1e3:9.1f} ms  ({len(cands) / t:,.0f} rows/s)")

    part = cands[: args.python_rows]
    t = best_of(lambda: _kernels.scan(part, "python"), 1)
    print(f" python: {t * 1e3:9.1f} ms for {len(part)} rows  ({len(part) / t:,.0f} rows/s)")


if __name__ == "__main__":
    main()
