"""Compare the compiled kernels against the numpy/Python fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Also times one end-to-end simulation under each implementation (the
fallback is forced in a subprocess through BURSTSIM_PURE=1).
"""

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from burstsim import _pykernels as py

try:
    from burstsim import _ckernels as cy
except ImportError:
    sys.exit("compiled kernels are not built; run `pip install --no-build-isolation -e .` first")

PROFILE = (0.0, 2.7e8, 1.9e-3, 0.0)
R = 256 * 1024


def cases(rng):
    window = rng.integers(0, 1 << 20, 128).astype(np.int64) * R
    addrs = rng.integers(0, 1 << 20, 8192).astype(np.int64) * R
    sizes = np.full(8192, R, dtype=np.int64)
    flush_a = np.arange(4096, dtype=np.int64) * (1 << 20)
    flush_s = np.full(4096, 1 << 20, dtype=np.int64)
    return {
        "random_factor_sum (128)": lambda k: k.random_factor_sum(window, R),
        "cfq_schedule (8192, Q=128)": lambda k: k.cfq_schedule(addrs, sizes, 128),
        "service_sequence (8192)": lambda k: k.service_sequence(addrs, sizes, 0, *PROFILE),
        "advance (4096)": lambda k: k.advance(flush_a, flush_s, 0, 0, 1e9, *PROFILE),
        "interleave (8192 x 4096)": lambda k: k.interleave(addrs, sizes, 0, flush_a, flush_s, 0, 0, *PROFILE),
    }


END_TO_END = """
import time
from burstsim import kernels
from burstsim.config import Config
from burstsim.engine import simulate
from burstsim.trace import PatternSpec, generate, mix
R = 256 * 1024
a = generate(PatternSpec("segmented-contiguous", 16, 1 << 31, R, file=0))
b = generate(PatternSpec("segmented-random", 16, 1 << 31, R, seed=1, file=1))
t = mix([a, b], seed=1, burst=64)
t0 = time.perf_counter()
simulate(t, MODE, Config(region_bytes=1 << 30))
print(kernels.IMPLEMENTATION, time.perf_counter() - t0)
"""


def end_to_end(pure: bool, mode: str) -> tuple[str, float]:
    env = dict(os.environ, BURSTSIM_PURE="1" if pure else "0")
    code = END_TO_END.replace("MODE", repr(mode))
    out = subprocess.run([sys.executable, "-c", code], env=env, check=True,
                         capture_output=True, text=True).stdout.split()
    return out[0], float(out[1])


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'kernel':30s} {'python (ms)':>12s} {'cython (ms)':>12s} {'speedup':>8s}")
    for name, fn in cases(rng).items():
        assert repr(fn(py)) == repr(fn(cy)) or name.startswith("cfq")
        n = 20 if "128)" in name else 3
        tp = min(timeit.repeat(lambda: fn(py), number=n, repeat=args.repeat)) / n
        tc = min(timeit.repeat(lambda: fn(cy), number=n, repeat=args.repeat)) / n
        print(f"{name:30s} {tp * 1e3:12.3f} {tc * 1e3:12.3f} {tp / tc:7.1f}x")

    print()
    # buffered modes spend most of their time in the Python metadata tree,
    # so the kernels matter most when direct HDD service dominates
    for mode in ("hdd-only", "ssdup-adaptive"):
        impl, tc = min(end_to_end(False, mode) for _ in range(3))
        _, tp = min(end_to_end(True, mode) for _ in range(3))
        print(f"end-to-end simulate (4 GiB mixed, {mode}): python {tp:.2f}s, {impl} {tc:.2f}s, {tp / tc:.1f}x")


if __name__ == "__main__":
    main()
