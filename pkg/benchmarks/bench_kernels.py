"""Time the numba kernels against their numpy fallbacks.

Both versions are called directly, so one process measures both.  The numba
timings exclude compilation (one warm-up call per kernel).  Results must agree
exactly; a mismatch aborts the run.

    python3 benchmarks/bench_kernels.py [--n 4 5] [--repeat 3]
"""

import argparse
import time

import numpy as np

from stablevote import kernels
from stablevote._accel import numba_enabled
from stablevote.enumeration import monotone_tables
from stablevote.profiles import PreferenceProfile


def best_of(fn, repeat):
    best, out = float("inf"), None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def dominator_queries(n):
    p = PreferenceProfile("banzhaf", n)
    ranks = np.ascontiguousarray(p.ranks, dtype=np.int64)
    m, width = ranks.shape[0], 1 << n
    inc = np.repeat(np.arange(m, dtype=np.int64), width - 1)
    masks = np.tile(np.arange(1, width, dtype=np.int64), m)
    return ranks, inc, masks


def monotone_input(n):
    # tables on n - 1 players, the input of the last merge step
    return np.ascontiguousarray(monotone_tables(n - 1), dtype=np.uint64), 1 << (n - 1)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[4, 5])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)
    if not numba_enabled():
        raise SystemExit("numba is unavailable or disabled; nothing to compare")

    print(f"{'kernel':<22}{'n':>3}{'size':>12}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for n in args.n:
        ranks, inc, masks = dominator_queries(n)
        prev, width = monotone_input(n)
        cases = [
            ("first_dominators", inc.size,
             lambda: kernels.first_dominators_jit(ranks, inc, masks, False),
             lambda: kernels.first_dominators_numpy(ranks, inc, masks, False)),
            ("first_dominators/wms", inc.size,
             lambda: kernels.first_dominators_jit(ranks, inc, masks, True),
             lambda: kernels.first_dominators_numpy(ranks, inc, masks, True)),
            ("first_pareto_pair", ranks.shape[0],
             lambda: kernels.first_pareto_pair_jit(ranks),
             lambda: kernels.first_pareto_pair_numpy(ranks)),
            ("monotone_merge", prev.size,
             lambda: kernels.monotone_merge_jit(prev, width),
             lambda: kernels.monotone_merge_numpy(prev, width)),
        ]
        for name, size, jit_fn, np_fn in cases:
            jit_fn()
            t_jit, r_jit = best_of(jit_fn, args.repeat)
            t_np, r_np = best_of(np_fn, args.repeat)
            if isinstance(r_jit, tuple):
                same = tuple(map(int, r_jit)) == tuple(map(int, r_np))
            else:
                same = np.array_equal(np.sort(r_jit), np.sort(r_np)) if name == "monotone_merge" \
                    else np.array_equal(r_jit, r_np)
            if not same:
                raise SystemExit(f"{name} n={n}: backends disagree")
            print(f"{name:<22}{n:>3}{size:>12}{t_jit:>12.4f}{t_np:>12.4f}{t_np / t_jit:>10.1f}")


if __name__ == "__main__":
    main()
