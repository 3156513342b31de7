"""Compare the compiled and pure-numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import timeit

import numpy as np

from pointspec.kernels import get_backend


def cases(rng):
    centers = rng.normal(size=(14, 3))
    dist = get_backend("python").pair_distances(centers)
    alphas = rng.normal(size=14)
    zs = np.linspace(0.01, 10.0, 1000).astype(complex)
    lams = np.linspace(0.0, 20.0, 128)
    yt = rng.normal(size=64)
    v = rng.normal(size=64)
    v -= v.mean()
    d64 = get_backend("python").pair_distances(rng.normal(size=(64, 3)))
    return {
        "pair_distances(N=14)": ("pair_distances", (centers,)),
        "gamma_batch(N=14, M=1000)": ("gamma_batch", (dist, alphas, zs)),
        "gamma_imag(N=14, M=128)": ("gamma_imag", (dist, alphas, lams)),
        "distance_form(N=64)": ("distance_form", (d64, v)),
        "gap_form(N=64)": ("gap_form", (yt, v)),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    try:
        compiled = get_backend("compiled")
    except ImportError:
        compiled = None
        print("compiled backend not built; timing the python backend only")
    python = get_backend("python")
    print(f"{'kernel':28s} {'python [us]':>12s} {'compiled [us]':>14s} {'speedup':>8s}")
    for label, (fn, argv) in cases(rng).items():
        def best(mod):
            f = getattr(mod, fn)
            number = 20
            return min(timeit.repeat(lambda: f(*argv), number=number, repeat=args.repeat)) / number * 1e6

        tp = best(python)
        if compiled is None:
            print(f"{label:28s} {tp:12.1f} {'-':>14s} {'-':>8s}")
            continue
        np.testing.assert_allclose(getattr(compiled, fn)(*argv), getattr(python, fn)(*argv), rtol=1e-12, atol=1e-14)
        tc = best(compiled)
        print(f"{label:28s} {tp:12.1f} {tc:14.1f} {tp / tc:8.1f}x")


if __name__ == "__main__":
    main()
