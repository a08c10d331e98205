#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Two views:
  1. per-kernel microbenchmarks on random states of increasing size
  2. the end-to-end 64-vector ideal coverage suite under each backend
     (run in subprocesses so PQHT_KERNELS takes effect at import)

Usage: python benchmarks/bench_kernels.py [--sizes 14,18,20] [--repeat 5]
"""

from __future__ import annotations

import argparse
import math
import subprocess
import sys
import time

import numpy as np

from pqht import _kernels_numba, _kernels_numpy

INV_SQRT2 = 1.0 / math.sqrt(2.0)

KERNEL_CALLS = {
    "apply_1q(h)": lambda mod, amps, n: mod.apply_1q(
        amps, n // 2, INV_SQRT2 + 0j, INV_SQRT2 + 0j, INV_SQRT2 + 0j, -INV_SQRT2 + 0j),
    "apply_diag(rz)": lambda mod, amps, n: mod.apply_diag(amps, n // 2, 1 + 0j, 1j),
    "apply_x": lambda mod, amps, n: mod.apply_x(amps, n // 2),
    "apply_cx": lambda mod, amps, n: mod.apply_cx(amps, 0, n - 1),
    "apply_ccx": lambda mod, amps, n: mod.apply_ccx(amps, 0, n // 2, n - 1),
    "apply_swap": lambda mod, amps, n: mod.apply_swap(amps, 0, n - 1),
}


def random_state(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    amps /= np.linalg.norm(amps)
    return amps.astype(np.complex128)


def bench_kernels(sizes: list[int], repeat: int) -> None:
    _kernels_numba.warmup()
    print(f"{'kernel':<16} {'n':>3} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}")
    for n in sizes:
        base = random_state(n, seed=1)
        for name, call in KERNEL_CALLS.items():
            timings = {}
            for label, mod in (("numpy", _kernels_numpy), ("numba", _kernels_numba)):
                amps = base.copy()
                call(mod, amps, n)  # one untimed call (paging, JIT)
                best = math.inf
                for _ in range(repeat):
                    amps = base.copy()
                    t0 = time.perf_counter()
                    call(mod, amps, n)
                    best = min(best, time.perf_counter() - t0)
                timings[label] = best * 1e3
            speedup = timings["numpy"] / timings["numba"] if timings["numba"] > 0 else float("inf")
            print(f"{name:<16} {n:>3} {timings['numpy']:>10.3f} {timings['numba']:>10.3f} {speedup:>7.1f}x")


_SUITE = """
import time
import pqht
from pqht import build_pqht, default_3x3_patterns, grid_from_input_bits, \
    measured_probabilities, used_pixels
from pqht.kernels import BACKEND

patterns = default_3x3_patterns()
order = used_pixels(patterns)
t0 = time.perf_counter()
for value in range(64):
    bits = "".join("1" if (value >> j) & 1 else "0" for j in range(6))
    grid = grid_from_input_bits(3, 3, order, bits)
    circuit, _ = build_pqht(grid, patterns)
    measured_probabilities(circuit)
print(f"backend={BACKEND} suite={time.perf_counter() - t0:.3f}s")
"""


def bench_suite() -> None:
    print("\n64-vector ideal coverage suite:")
    for backend in ("numpy", "numba"):
        result = subprocess.run(
            [sys.executable, "-c", _SUITE],
            capture_output=True, text=True,
            env={"PQHT_KERNELS": backend, "PATH": "/usr/bin:/bin:/usr/local/bin"},
        )
        line = result.stdout.strip() or result.stderr.strip()
        print(f"  {line}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="14,18,20",
                        help="comma-separated qubit counts for microbenchmarks")
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--skip-suite", action="store_true")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    bench_kernels(sizes, args.repeat)
    if not args.skip_suite:
        bench_suite()


if __name__ == "__main__":
    main()
