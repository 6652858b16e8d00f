"""Time the numba kernels against their pure-numpy twins.

Run: python benchmarks/bench_kernels.py [--repeat 5]

The package-level selection flag (POSTULATE_SIM_PURE_NUMPY) is irrelevant
here; both implementations are invoked directly.
"""
import argparse
import time

import numpy as np

from postulate_sim import kernels


def bench(label, fn, *args, repeat=5):
    fn(*args)  # warm-up (numba compilation)
    best = min(_timed(fn, args) for _ in range(repeat))
    print(f"  {label:<12} {best * 1e3:9.3f} ms")
    return best


def _timed(fn, args):
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = np.random.default_rng(0)

    cases = []
    dj_table = rng.integers(0, 2, size=2 ** 12).astype(np.int64)
    cases.append(("dj amplitudes (n=12)",
                  kernels.dj_argument_amplitudes_numpy,
                  kernels.dj_argument_amplitudes_njit, (dj_table,)))

    simon_table = rng.integers(0, 2 ** 10, size=2 ** 10).astype(np.int64)
    cases.append(("simon amplitudes (n=10)",
                  kernels.simon_state_amplitudes_numpy,
                  kernels.simon_state_amplitudes_njit, (simon_table,)))

    marked = np.array([5, 1234], dtype=np.int64)
    cases.append(("grover iterate (n=18, k=200)",
                  kernels.grover_amplitudes_numpy,
                  kernels.grover_amplitudes_njit, (18, marked, 200)))

    gf2 = rng.integers(0, 2, size=(512, 512)).astype(np.uint8)
    cases.append(("gf2 rref (512x512)",
                  lambda m: kernels.gf2_rref_numpy(m.copy()),
                  lambda m: kernels.gf2_rref_njit(m.copy()), (gf2,)))

    for name, f_np, f_nb, fargs in cases:
        print(name)
        t_np = bench("numpy", f_np, *fargs, repeat=args.repeat)
        t_nb = bench("numba", f_nb, *fargs, repeat=args.repeat)
        print(f"  {'speedup':<12} {t_np / t_nb:9.2f}x")


if __name__ == "__main__":
    main()
