"""Compare the compiled kernel extension against the pure-NumPy fallback.

Workloads mirror the hot paths: the basis matrix built by the wavelet
maps (2048 x 400 points at level 5), dense Laguerre evaluation, and the
weighted quadrature contraction used by the admissibility checks.

Run:  python3 benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import timeit

import numpy as np

from ctspec import _kernels_py

try:
    from ctspec import _kernels
except ImportError:
    _kernels = None


def workloads():
    rng = np.random.default_rng(0)
    xi = np.linspace(4e-3, 8.0, 2048)
    v = np.geomspace(1e-3, 50.0, 400)
    x2d = 2.0 * xi[:, None] * v[None, :]
    x1d = rng.uniform(0.0, 80.0, 100_000)
    w = rng.uniform(0.0, 1.0, x1d.size)
    return [
        ("ell_array k=5 on 2048x400", lambda impl: impl.ell_array(5, x2d)),
        ("laguerre_array n=20 on 1e5 pts", lambda impl: impl.laguerre_array(20, 0.0, x1d)),
        ("ell_sq_weighted_sum k=10 on 1e5 pts", lambda impl: impl.ell_sq_weighted_sum(10, x1d, w)),
    ]


def best_time(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5, help="timing repetitions, best-of is kept")
    args = ap.parse_args()

    if _kernels is None:
        print("compiled extension not available; timing the pure backend only")
    header = f"{'workload':38s} {'python':>10s} {'compiled':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for name, call in workloads():
        ref = call(_kernels_py)
        t_py = best_time(lambda: call(_kernels_py), args.repeat)
        if _kernels is None:
            print(f"{name:38s} {t_py * 1e3:8.2f}ms {'-':>10s} {'-':>8s}")
            continue
        got = call(_kernels)
        err = float(np.max(np.abs(np.asarray(got) - np.asarray(ref))))
        t_c = best_time(lambda: call(_kernels), args.repeat)
        print(f"{name:38s} {t_py * 1e3:8.2f}ms {t_c * 1e3:8.2f}ms {t_py / t_c:7.1f}x  (max dev {err:.1e})")


if __name__ == "__main__":
    main()
