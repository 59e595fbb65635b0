"""Time the numba and numpy flavours of each kernel on the same inputs.

    python3 benchmarks/bench_backends.py [--repeat 5]

Prints the best wall time of each flavour and the speed-up. The first
numba call compiles (or loads the on-disk cache) and is not timed.
"""

import argparse
import time

import numpy as np

from cavity_polymer import kernels
from cavity_polymer._backend import HAVE_NUMBA
from cavity_polymer.saturation import build_manifold


def best_time(fn, make_args, repeat):
    fn(*make_args())  # warm-up / JIT
    best = float("inf")
    for _ in range(repeat):
        args = make_args()
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def metropolis_case(chains=4, n=100, sweeps=200):
    rng = np.random.default_rng(0)
    theta0 = rng.uniform(0, 2 * np.pi, (chains, n))
    steps = rng.uniform(-1, 1, (chains, sweeps, n))
    uniforms = rng.random((chains, sweeps, n))

    def make():
        theta = theta0.copy()
        cos2 = np.cos(theta) ** 2
        return (theta, cos2, cos2.sum(axis=1), np.full(chains, 0.8), 4.0 * np.sqrt(n),
                steps, uniforms, np.empty((chains, sweeps)), np.empty((chains, sweeps)),
                np.zeros(chains, dtype=np.int64))
    return make


def cosine_case(points=400, nodes=20_000):
    rng = np.random.default_rng(1)
    x = np.ascontiguousarray(rng.uniform(0, 10, points))
    k = np.linspace(0, 300, nodes)
    f = rng.normal(size=nodes)
    return lambda: (x, k, f)


def eigen_case(n=1000, m=500):
    prob = build_manifold(n, m)
    diag = np.zeros(prob.dimension)
    off = np.asarray(prob.offdiag)
    return lambda: (diag, off, 0)


CASES = [
    ("metropolis_block (4 chains x 100 dipoles x 200 sweeps)", "metropolis_block",
     metropolis_case()),
    ("cosine_transform (400 x 20000)", "cosine_transform", cosine_case()),
    ("tridiagonal_eigenvalue (N=1000, M=500)", "tridiagonal_eigenvalue", eigen_case()),
]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy flavour can run")
    print(f"{'kernel':58s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speed-up':>9s}")
    for label, name, make in CASES:
        t_np = best_time(getattr(kernels, f"{name}_numpy"), make, args.repeat)
        if HAVE_NUMBA:
            t_nb = best_time(getattr(kernels, f"{name}_numba"), make, args.repeat)
            print(f"{label:58s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:8.1f}x")
        else:
            print(f"{label:58s} {t_np:10.4f} {'-':>10s} {'-':>9s}")


if __name__ == "__main__":
    main()
