"""Compiled vs pure-Python kernel timings.

    python benchmarks/bench_kernels.py [--quick]

Each row times one kernel entry point on identical inputs and checks that
both kernels return the same answer before reporting.
"""

from __future__ import annotations

import argparse
import sys
import time

import numpy as np

from latticeknots import _backend
from latticeknots._schedule import build_schedule
from latticeknots.bracket import _edge_ports
from latticeknots.lattice import build_diagram


def _time(fn, repeat: int) -> tuple[float, object]:
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def _cases(quick: bool):
    rng = np.random.default_rng(7)
    for n, batch in ((1, 512), (2, 256), (3, 64 if quick else 256), (4, 16 if quick else 64)):
        sched = build_schedule(n)
        bits = rng.integers(0, 2, size=(batch, sched.crossing_count), dtype=np.uint8)
        yield (f"jones_keys n={n} x{batch}", batch,
               lambda k, s=sched, b=bits: k.jones_keys(s, b))
    s1 = build_schedule(1)
    yield "census n=1 (512)", 512, lambda k: k.census(s1, 0, 0)
    s2 = build_schedule(2)
    free = 12 if quick else 14
    yield (f"census n=2 chunk (2^{free})", 1 << free,
           lambda k: k.census(s2, 25 - free, 12345 & ((1 << (25 - free)) - 1)))
    d = build_diagram(1)
    pe, ep = _edge_ports(d)
    yield "smoothing_cube n=1 (512)", 512, lambda k: k.smoothing_cube(pe, ep, 9)
    cube = np.asarray(_backend.python_kernel.smoothing_cube(pe, ep, 9))
    yield "statesum_hist n=1", 512, lambda k: k.statesum_hist(cube, 0b101010101, 9)


def _same(a, b) -> bool:
    if isinstance(a, np.ndarray) or isinstance(b, np.ndarray):
        return np.array_equal(np.asarray(a), np.asarray(b))
    return a == b


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true", help="smaller inputs")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    fast, slow = _backend.compiled_kernel, _backend.python_kernel
    if fast is None:
        print("compiled kernel not available; build the extension first", file=sys.stderr)
        return 1
    print(f"{'case':34} {'compiled':>12} {'python':>12} {'speedup':>9}  per item (compiled)")
    for name, items, fn in _cases(args.quick):
        tc, rc = _time(lambda: fn(fast), args.repeat)
        tp, rp = _time(lambda: fn(slow), 1)
        if not _same(rc, rp):
            print(f"{name}: kernels disagree", file=sys.stderr)
            return 1
        print(f"{name:34} {tc * 1e3:10.2f}ms {tp * 1e3:10.2f}ms {tp / tc:8.1f}x  "
              f"{tc / items * 1e6:8.2f}us")
    return 0


if __name__ == "__main__":
    sys.exit(main())
