#!/usr/bin/env python3
"""Benchmark the walk kernels: numba backend vs the pure-numpy fallback.

The two backends consume identical counter-based streams, so besides timing
this also cross-checks that their endpoints agree.  Run from the repo root:

    python benchmarks/bench_kernels.py --n-paths 200000 --n-steps 50
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rankp import _kernels

LAWS = [
    ("uniform_signed", _kernels.LAW_UNIFORM),
    ("rademacher", _kernels.LAW_RADEMACHER),
    ("adaptive_dependent", _kernels.LAW_ADAPTIVE),
]


def bench(backend: str, law: int, n_paths: int, n_steps: int, threads: int, repeat: int) -> tuple[float, np.ndarray]:
    d = np.ones(n_steps)
    xi0 = np.zeros(n_paths)
    out = _kernels.walk_endpoints(1234, d, law, xi0, threads=threads, backend=backend)  # warm-up / compile
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = _kernels.walk_endpoints(1234, d, law, xi0, threads=threads, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n-paths", type=int, default=200_000)
    parser.add_argument("--n-steps", type=int, default=50)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if not _kernels.NUMBA_ENABLED:
        print("numba backend unavailable (RANKP_NO_NUMBA set or numba missing); benchmarking numpy only")

    print(f"n_paths={args.n_paths} n_steps={args.n_steps} threads={args.threads} (best of {args.repeat})")
    header = f"{'law':<20} {'numpy':>10} {'numba':>10} {'speedup':>8}  agree"
    print(header)
    print("-" * len(header))
    for name, law in LAWS:
        t_np, out_np = bench("numpy", law, args.n_paths, args.n_steps, args.threads, args.repeat)
        if _kernels.NUMBA_ENABLED:
            t_nb, out_nb = bench("numba", law, args.n_paths, args.n_steps, args.threads, args.repeat)
            agree = np.allclose(out_np, out_nb, rtol=0.0, atol=1e-9)
            print(f"{name:<20} {t_np*1e3:>8.1f}ms {t_nb*1e3:>8.1f}ms {t_np/t_nb:>7.2f}x  {agree}")
        else:
            print(f"{name:<20} {t_np*1e3:>8.1f}ms {'-':>10} {'-':>8}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
