"""Benchmark the compiled compute kernels against the pure-Python ones.

Times the two hot loops (dense matmul and the cyclic Jacobi eigenvalue
iteration) on every backend ``genspectra.kernels`` can load and prints a
table with per-call times and the speedup of each backend over the
pure-Python reference. Both backends run the same floating-point
operations in the same order, so the outputs are checked bit-for-bit
along the way.

Usage:
    python3 benchmarks/bench_kernels.py --sizes 16,32,64 --repeats 5
"""

import argparse
import time

import numpy as np

from genspectra.eigen import JACOBI_REL_TOL, MAX_SWEEPS
from genspectra.kernels import available_backends


def _random_sym(rng: np.random.RandomState, d: int) -> np.ndarray:
    g = rng.standard_normal((d, d))
    return (g + g.T) / 2.0


def _best_time(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--sizes",
        default="8,16,32,64",
        help="comma-separated matrix dimensions to benchmark",
    )
    parser.add_argument(
        "--repeats", type=int, default=5, help="timed runs per cell; the best is kept"
    )
    parser.add_argument("--seed", type=int, default=0, help="RNG seed for the inputs")
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    backends = available_backends()
    names = sorted(backends, key=lambda n: n != "python")  # python column first
    if "compiled" not in backends:
        print("note: compiled backend unavailable; timing pure Python only")

    rng = np.random.RandomState(args.seed)
    header = f"{'op':<8} {'d':>5}"
    for name in names:
        header += f" {name + ' (ms)':>16}"
    if len(names) > 1:
        header += f" {'speedup':>9}"
    print(header)
    print("-" * len(header))

    for d in sizes:
        a = _random_sym(rng, d)
        b = _random_sym(rng, d)
        rows = {"matmul": {}, "jacobi": {}}
        outputs = {"matmul": {}, "jacobi": {}}
        for name in names:
            mod = backends[name]
            rows["matmul"][name] = _best_time(lambda: mod.matmul(a, b), args.repeats)
            outputs["matmul"][name] = mod.matmul(a, b)
            rows["jacobi"][name] = _best_time(
                lambda: mod.jacobi_eigh(a, JACOBI_REL_TOL, MAX_SWEEPS), args.repeats
            )
            outputs["jacobi"][name] = mod.jacobi_eigh(a, JACOBI_REL_TOL, MAX_SWEEPS)

        if len(names) > 1:
            ref_mm = outputs["matmul"]["python"]
            ref_w, ref_v, _, _ = outputs["jacobi"]["python"]
            for name in names:
                if name == "python":
                    continue
                assert np.array_equal(outputs["matmul"][name], ref_mm), (
                    f"matmul backends disagree at d={d}"
                )
                w, v, _, _ = outputs["jacobi"][name]
                assert np.array_equal(w, ref_w) and np.array_equal(v, ref_v), (
                    f"jacobi backends disagree at d={d}"
                )

        for op in ("matmul", "jacobi"):
            line = f"{op:<8} {d:>5}"
            for name in names:
                line += f" {rows[op][name] * 1e3:>16.3f}"
            if len(names) > 1:
                fastest_other = min(t for n, t in rows[op].items() if n != "python")
                line += f" {rows[op]['python'] / fastest_other:>8.1f}x"
            print(line)

    return 0


if __name__ == "__main__":
    raise SystemExit(main())
