"""Compare the numba and numpy forms of the hot kernels.

    python3 benchmarks/bench_kernels.py [--repeat N]

The numba forms are compiled once before timing.  Both forms are checked to
agree on every input before any number is printed.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from brnr import _kernels
from brnr.extalg import wedge_with_basis
from brnr.groupspec import builtin, extraspecial
from brnr.obstr import report


def _best(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _sweep_input(sub, n, d, p):
    return np.ascontiguousarray(np.transpose(wedge_with_basis(sub.basis, n, d, p), (0, 2, 1)))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if not _kernels.USE_NUMBA:
        print("numba is disabled; the loop forms below run as plain Python")

    rng = np.random.default_rng(0)
    rref_cases = [(f"rref {m}x{m} p={p}", rng.integers(0, p, size=(m, m)), p) for m, p in ((40, 7), (120, 7), (120, 2**31 - 1))]

    sweep_cases = []
    for label, spec, d in (
        ("sweep S2 thm3.4 p=7", builtin("thm3.4", 7), 2),
        ("sweep S3 thm2.4 p=7", builtin("thm2.4", 7), 3),
        ("sweep S3 thm2.6(t=3) p=7", builtin("thm2.6", 7, t=3), 3),
        ("sweep S3 extraspecial(4) p=5", extraspecial(5, 4), 3),
    ):
        r = report(spec)
        sub = r.s2 if d == 2 else r.s3
        sweep_cases.append((label, _sweep_input(sub, spec.dim_u, d, spec.p), spec.p))

    # warm up and cross-check
    for _, m, p in rref_cases:
        a, b = m.copy(), m.copy()
        assert _kernels.rref_inplace_loop(a, p)[0] == _kernels.rref_inplace_numpy(b, p)[0]
        assert np.array_equal(a, b)
    for _, P, p in sweep_cases:
        assert np.array_equal(_kernels.sweep_loop(P, p), _kernels.sweep_numpy(P, p))

    print(f"{'case':34s} {'numba (s)':>10s} {'numpy (s)':>10s} {'ratio':>7s}")
    for label, m, p in rref_cases:
        tl = _best(lambda: _kernels.rref_inplace_loop(m.copy(), p), args.repeat)
        tn = _best(lambda: _kernels.rref_inplace_numpy(m.copy(), p), args.repeat)
        print(f"{label:34s} {tl:10.4f} {tn:10.4f} {tn / tl:7.1f}")
    for label, P, p in sweep_cases:
        tl = _best(lambda: _kernels.sweep_loop(P, p), args.repeat)
        tn = _best(lambda: _kernels.sweep_numpy(P, p), args.repeat)
        print(f"{label:34s} {tl:10.4f} {tn:10.4f} {tn / tl:7.1f}")


if __name__ == "__main__":
    main()
