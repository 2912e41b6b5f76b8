"""Compare the numba kernels with their numpy fallbacks.

    python3 benchmarks/bench_kernels.py [--repeat 5]

The numba timings exclude the first (compiling) call.
"""
import argparse
import time

import numpy as np

from cygrowth import _kernels
from cygrowth.search import _candidates, _perm_matrix, q_coefficients


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def workloads():
    cands = _candidates(3, 3, 3, [3])
    coeffs = np.stack([q_coefficients(M, _perm_matrix(mu), 3, 3) for M, mu, _ in cands])
    dets = _kernels.batch_det_poly_numpy(coeffs)
    rng = np.random.default_rng(0)
    mat = rng.integers(-50, 50, size=(300, 400))
    return [
        (f"batch_det_poly ({len(coeffs)} 3x3 q(t))", _kernels.batch_det_poly, (coeffs,)),
        (f"unit_circle_prefilter ({len(dets)} dets)", _kernels.unit_circle_prefilter, (dets,)),
        ("echelon_mod_p (300x400, p=10007)", lambda A, backend: _kernels.echelon_mod_p(A, 10007, backend), (mat,)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        print("numba unavailable (or CYGROWTH_DISABLE_NUMBA is set); timing numpy only")
    print(f"{'kernel':45s} {'numpy [s]':>10s} {'numba [s]':>10s} {'speedup':>8s}")
    for name, fn, fargs in workloads():
        t_np = best_of(lambda: fn(*fargs, backend="numpy"), args.repeat)
        if _kernels.HAVE_NUMBA:
            ref = fn(*fargs, backend="numpy")
            got = fn(*fargs, backend="numba")
            same = all(np.array_equal(a, b) for a, b in zip(ref, got)) if isinstance(ref, tuple) \
                else np.array_equal(ref, got)
            assert same, f"{name}: backends disagree"
            t_nb = best_of(lambda: fn(*fargs, backend="numba"), args.repeat)
            print(f"{name:45s} {t_np:10.4f} {t_nb:10.4f} {t_np / t_nb:7.1f}x")
        else:
            print(f"{name:45s} {t_np:10.4f} {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
