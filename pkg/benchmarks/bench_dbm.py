"""Timing comparison of the two interacting-particle backends (compiled
Cython core vs the pure-numpy fallback) on identical inputs.

Run:  python3 benchmarks/bench_dbm.py [--n 256] [--steps 200] [--repeat 5]

Both backends advance the same Euler-Maruyama path from the same state with
the same increments, so the check also asserts numerical agreement.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from specrad import _dbm_np
from specrad.seeding import rng_from

try:
    from specrad import _dbm_cy
except ImportError:
    _dbm_cy = None


def bench(backend, lam, dt, incr, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        work = lam.copy()
        t0 = time.perf_counter()
        out = backend.em_path(work, dt, incr)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=256)
    ap.add_argument("--steps", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = rng_from(args.seed)
    lam = np.sort(rng.uniform(0.05, 2.0, size=args.n))
    dt = 1e-5
    incr = np.sqrt(dt) * rng.standard_normal((args.steps, args.n))

    t_np, out_np = bench(_dbm_np, lam, dt, incr, args.repeat)
    if out_np[1] != args.steps:
        raise SystemExit(f"path bailed at step {out_np[1]} (collision); "
                         "lower --steps or dt")
    print(f"numpy backend : {t_np * 1e3:9.2f} ms  "
          f"({args.steps} steps, n={args.n})")
    if _dbm_cy is None:
        print("cython backend: not built (pip install -e . to compile)")
        return
    t_cy, out_cy = bench(_dbm_cy, lam, dt, incr, args.repeat)
    diff = float(np.abs(out_np[0] - out_cy[0]).max())
    print(f"cython backend: {t_cy * 1e3:9.2f} ms   speedup x{t_np / t_cy:.2f}")
    print(f"max |difference| between backends: {diff:.3e}")
    if diff > 1e-12:
        raise SystemExit("backends disagree beyond 1e-12")


if __name__ == "__main__":
    main()
