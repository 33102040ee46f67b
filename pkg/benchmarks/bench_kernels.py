"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--k-max 1000000] [--m-max 10000000] [--repeat 5]

The first numba call includes compilation and is reported separately.
Both backends must agree before any timing is printed.
"""

import argparse
import statistics
import time

import numpy as np

from widths_lab import kernels


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times), statistics.median(times)


def cases(k_max, m_max):
    ks = np.arange(1, k_max + 1, dtype=np.int64)
    star = kernels.FAMILY_CODES["sobolev-star"]
    gev = kernels.FAMILY_CODES["gevrey"]
    return [
        ("log_cumdim sphere d=5", 1e-8, lambda b: kernels.log_cumdim(True, 5, ks, backend=b)),
        ("scaled_endpoints star r=1 d=3", 1e-8,
         lambda b: kernels.scaled_endpoints(star, True, 3, 1.0, 0.0, ks, backend=b)),
        # exp(beta * scale * cum^(alpha/d)) is ~e^1000 before cancelling against lambda_k
        ("scaled_endpoints gevrey a=0.5 d=3", 1e-5,
         lambda b: kernels.scaled_endpoints(gev, True, 3, 0.5, 1.0, ks, mode=1, scale=1.2, backend=b)),
        ("qpol_scan a=1.5 b=0.01", 0.0, lambda b: kernels.qpol_scan(1.5, 0.01, m_max, backend=b)),
    ]


def _same(a, b, atol):
    # logs of size ~1 built from lgamma terms of size ~k log k; at k ~ 1e6 that leaves ~1e-9
    if isinstance(a, tuple) and isinstance(a[0], np.ndarray):
        return all(np.allclose(x, y, rtol=0, atol=atol) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.allclose(a, b, rtol=0, atol=atol)
    return a == b


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--k-max", type=int, default=10**6)
    ap.add_argument("--m-max", type=int, default=10**7)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if "numba" not in kernels.available_backends():
        print("numba is not importable; only the numpy backend can be timed")
    backends = kernels.available_backends()
    print(f"k_max={args.k_max}  m_max={args.m_max}  repeat={args.repeat}")
    print(f"{'kernel':36s} {'backend':7s} {'first':>9s} {'best':>9s} {'median':>9s}")
    for name, atol, fn in cases(args.k_max, args.m_max):
        results = {}
        for b in backends:
            t0 = time.perf_counter()
            results[b] = fn(b)
            first = time.perf_counter() - t0
            best, med = best_of(lambda: fn(b), args.repeat)
            print(f"{name:36s} {b:7s} {first:9.4f} {best:9.4f} {med:9.4f}")
        if len(results) == 2 and not _same(results["numpy"], results["numba"], atol):
            raise SystemExit(f"backends disagree on {name}")


if __name__ == "__main__":
    main()
