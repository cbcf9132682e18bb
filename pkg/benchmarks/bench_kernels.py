"""Benchmark the compiled dispersion kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--size lego|small] [--repeats N]
"""

import argparse
import importlib
import time

import numpy as np

from cassikit import _kernels_py

SIZES = {
    "small": (64, 64, 8, 2),
    "lego": (256, 256, 24, 2),  # the paper-scale two-shot configuration
}


def load_backends():
    backends = [("python", _kernels_py)]
    try:
        compiled = importlib.import_module("cassikit._kernels")
        backends.append(("cython", compiled))
    except ImportError:
        print("compiled extension not available; benchmarking fallback only")
    return backends


def bench(fn, repeats, *args):
    fn(*args)  # warm up
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--size", choices=sorted(SIZES), default="lego")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    M, N, L, K = SIZES[args.size]
    rng = np.random.default_rng(0)
    masks = (rng.random((K, M, N)) < 0.5).astype(np.float64)
    cube = rng.standard_normal((M, N, L))
    w = np.array([0.25, 0.5, 0.25])
    g_std = np.empty((K, M, N + L - 1))
    g_hi = np.empty((K, M, N + L + 1))
    back = np.empty((M, N, L))

    cases = [
        ("forward standard", lambda k: k.forward_standard(masks, cube, g_std)),
        ("adjoint standard", lambda k: k.adjoint_standard(masks, g_std, back)),
        ("forward higher", lambda k: k.forward_higher(masks, cube, w, g_hi)),
        ("adjoint higher", lambda k: k.adjoint_higher(masks, g_hi, w, back)),
    ]

    backends = load_backends()
    print(f"size {M}x{N}x{L}, K={K}, best of {args.repeats}")
    print(f"{'kernel':<18}" + "".join(f"{name:>12}" for name, _ in backends))
    for label, call in cases:
        row = f"{label:<18}"
        for _, mod in backends:
            row += f"{bench(lambda: call(mod), args.repeats) * 1e3:>10.2f}ms"
        print(row)


if __name__ == "__main__":
    main()
