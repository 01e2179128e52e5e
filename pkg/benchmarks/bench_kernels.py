"""Time the numba and numpy backends of the sampling kernels.

    python benchmarks/bench_kernels.py [--repeat 5] [--n 200000]
"""

import argparse
import timeit

import numpy as np

from convexkernel import _kernels as K


def cases(n: int):
    rng = np.random.default_rng(0)
    tu = rng.uniform(0, 2 * np.pi, n)
    tv = tu + rng.uniform(-np.pi, np.pi, n)
    a = rng.uniform(-1, 1, (n, 3))
    b = rng.uniform(-1, 1, (n, 3))
    c, d = np.zeros(3), np.array([1.0, 0.0, 0.0])
    pts = rng.uniform(-1, 1, (min(n, 2000), 3))
    return {
        "max_midpoint_norm": (lambda f: f(tu, tv, 0.5)),
        "ball_pair_mask": (lambda f: f(a, b, 0.5, 2**-9)),
        "lens_mask": (lambda f: f(a, c, 0.6, d, 0.6, 1e-9)),
        "max_pairwise_distance": (lambda f: f(pts)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--n", type=int, default=200_000)
    args = ap.parse_args()
    if not K.HAS_NUMBA:
        print("numba not available (or CONVEXKERNEL_NUMBA=0); timing numpy only")
    print(f"{'kernel':<24}{'numpy ms':>12}{'numba ms':>12}{'speedup':>10}")
    for name, call in cases(args.n).items():
        np_fn = getattr(K, f"np_{name}")
        t_np = min(timeit.repeat(lambda: call(np_fn), number=1, repeat=args.repeat)) * 1e3
        if K.HAS_NUMBA:
            nb_fn = getattr(K, f"nb_{name}")
            call(nb_fn)  # compile outside the timed region
            t_nb = min(timeit.repeat(lambda: call(nb_fn), number=1, repeat=args.repeat)) * 1e3
            print(f"{name:<24}{t_np:>12.2f}{t_nb:>12.2f}{t_np / t_nb:>10.1f}x")
        else:
            print(f"{name:<24}{t_np:>12.2f}{'-':>12}{'-':>10}")


if __name__ == "__main__":
    main()
