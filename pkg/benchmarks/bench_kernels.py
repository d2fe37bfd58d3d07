"""Time the compiled kernels against their pure-Python twins.

    python3 benchmarks/bench_kernels.py [--n 20000 100000] [--c 2 5] [--repeat 3]

Both backends get the same inputs; outputs are compared before timings are
reported, so a mismatch aborts the run.
"""
import argparse
import time

import numpy as np

from gnpsquare import _backend
from gnpsquare.graph import GnpParams, sample_gnp, square


def best_of(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def kernel_calls(k, g1, g2):
    n = g1.n
    order = np.arange(n, dtype=np.int64)[::-1].copy()
    empty = np.zeros(1, dtype=np.int64)

    def color():
        colors = np.full(n, -1, dtype=np.int64)
        counts = np.zeros(n, dtype=np.int64)
        k.greedy_color(g2.indptr, g2.indices, order, empty, empty, False, colors, counts)
        return colors

    def balls():
        scratch = np.full(n, -1, dtype=np.int64)
        return [k.bfs_ball(g1.indptr, g1.indices, r, 4, scratch)[0].size for r in range(0, n, max(1, n // 200))]

    edges = g2.edge_array()
    sub_n = min(n, 3000)
    keep = edges[(edges[:, 1] < sub_n)]

    def flow():
        s, t = sub_n, sub_n + 1
        verts = np.arange(sub_n, dtype=np.int64)
        deg = np.bincount(keep.ravel(), minlength=sub_n)
        tails = np.concatenate([np.full(sub_n, s), verts, keep[:, 0], keep[:, 1]]).astype(np.int64)
        heads = np.concatenate([verts, np.full(sub_n, t), keep[:, 1], keep[:, 0]]).astype(np.int64)
        caps = np.concatenate([deg, np.full(sub_n, 4), np.ones(2 * len(keep), dtype=np.int64)]).astype(np.int64)
        return k.max_flow(sub_n + 2, tails, heads, caps, s, t)[0]

    return {
        "square": lambda: k.square_csr(n, g1.indptr, g1.indices),
        "degeneracy": lambda: k.degeneracy(n, g2.indptr, g2.indices),
        "greedy_color": color,
        "bfs_ball x200": balls,
        "max_flow (3k nodes)": flow,
    }


def same(a, b):
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, nargs="+", default=[20000, 100000])
    ap.add_argument("--c", type=float, nargs="+", default=[2.0, 5.0])
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    backends = _backend.available()
    if "cython" not in backends:
        print("compiled extension not built; only the pure-Python backend is available")
    mods = {name: _backend.load(name) for name in backends}
    print(f"{'n':>7} {'c':>4} {'kernel':<20}" + "".join(f"{b:>12}" for b in backends) + "   speedup")
    for n in args.n:
        for c in args.c:
            g1 = sample_gnp(GnpParams(n, c, 1))
            g2 = square(g1)
            calls = {b: kernel_calls(m, g1, g2) for b, m in mods.items()}
            for name in calls[backends[0]]:
                times, outs = {}, {}
                for b in backends:
                    times[b], outs[b] = best_of(calls[b][name], args.repeat if b == "cython" else 1)
                ref = outs[backends[0]]
                if not all(same(ref, outs[b]) for b in backends):
                    raise SystemExit(f"backends disagree on {name} at n={n}, c={c}")
                row = f"{n:>7} {c:>4g} {name:<20}" + "".join(f"{times[b]:>11.4f}s" for b in backends)
                if len(backends) == 2:
                    row += f"   {times['python'] / max(times['cython'], 1e-9):8.1f}x"
                print(row)


if __name__ == "__main__":
    main()
