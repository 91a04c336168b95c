#!/usr/bin/env python3
"""Time the compiled kernels against the pure-Python fallback.

Both backends run on the same planted-partition graphs and their outputs
are checked for equality before timings are reported.

    python3 benchmarks/bench_kernels.py --blocks 2,4,8 --repeat 3
"""

import argparse
import time

import numpy as np

from cdeval import _pykernels
from cdeval.synth import PlantedConfig, planted_partition

try:
    from cdeval import _kernels
except ImportError:
    _kernels = None


def _betweenness(mod, g):
    indptr, indices, _ = g.csr()
    alive = np.ones(g.edge_count, dtype=np.uint8)
    return mod.edge_betweenness(indptr, indices, g.csr_edge_ids(), alive, np.arange(g.n, dtype=np.int64), g.edge_count)


def _louvain(mod, g):
    indptr, indices, weights = g.csr()
    comm = np.arange(g.n, dtype=np.int64)
    order = np.random.default_rng(0).permutation(g.n).astype(np.int64)
    mod.louvain_local_move(indptr, indices, weights, g.strength(), order, comm, 2.0 * g.total_weight)
    return comm


def _refine(mod, g):
    indptr, indices, weights = g.csr()
    comm = (np.arange(g.n) % 3).astype(np.int64)
    mod.louvain_refine(indptr, indices, weights, g.strength(), comm, 2.0 * g.total_weight)
    return comm


def _labelprop(mod, g):
    indptr, indices, weights = g.csr()
    rng = np.random.default_rng(0)
    labels = np.arange(g.n, dtype=np.int64)
    for _ in range(5):
        mod.label_propagation_sweep(indptr, indices, weights, rng.permutation(g.n).astype(np.int64), rng.random(g.n), labels)
    return labels


KERNELS = {"edge_betweenness": _betweenness, "louvain_local_move": _louvain, "louvain_refine": _refine,
           "label_propagation x5": _labelprop}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--blocks", default="2,4,8", help="number of 32-node communities per graph")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _kernels is None:
        parser.error("compiled extension not built; run `pip install -e . --no-build-isolation` first")

    print(f"{'kernel':<22} {'n':>5} {'|E|':>6} {'python s':>10} {'cython s':>10} {'speedup':>8}")
    for blocks in (int(b) for b in args.blocks.split(",")):
        g, _ = planted_partition(PlantedConfig(sizes=(32,) * blocks, p_in=0.3, p_out=0.01, seed=1))
        for name, kernel in KERNELS.items():
            t_py, out_py = best_of(lambda: kernel(_pykernels, g), args.repeat)
            t_cy, out_cy = best_of(lambda: kernel(_kernels, g), args.repeat)
            if not np.array_equal(out_py, out_cy):
                raise SystemExit(f"{name}: backends disagree on n={g.n}")
            print(f"{name:<22} {g.n:>5} {g.edge_count:>6} {t_py:>10.4f} {t_cy:>10.5f} {t_py / t_cy:>7.0f}x")


if __name__ == "__main__":
    main()
