"""Time the compiled and numpy kernels on the same inputs.

    python3 bench/benchmark.py [--repeat 5] [--n 7]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from treebound import _backend
from treebound.graph import num_edges
from treebound.scheme import EdgeOrder


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return min(times)


def cases(n, rng):
    m = num_edges(n)
    u = rng.uniform(-2, 3, m) + 1j * rng.uniform(-1, 1, m)
    rank = EdgeOrder.random(n, rng).as_array()
    tw, bw = np.expm1(-u), np.exp(-u)
    total = n ** (n - 2)
    small = min(n, 6)
    u18 = rng.uniform(-1, 1, num_edges(18))
    masks = None

    def boundary(k):
        nonlocal masks
        if masks is None:
            masks = k.tree_masks(small, 0, small ** (small - 2))
        return k.boundary_batch(small, EdgeOrder.random(small, np.random.default_rng(0)).as_array(), masks)

    return {
        f"tree_product_sum n={n}": lambda k: k.tree_product_sum(n, tw, bw, rank, 0, total),
        f"key_gaps n={n}": lambda k: k.key_gaps(n, rank, np.ascontiguousarray(u.real), 0, total),
        f"connected masks n={min(n, 7)}": lambda k: sum(len(c) for c in k.iter_connected_masks(min(n, 7))),
        f"boundary_batch n={small}": boundary,
        "subset_pair_sums n=18": lambda k: k.subset_pair_sums(18, u18),
    }


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--n", type=int, default=7)
    args = parser.parse_args(argv)

    names = _backend.available()
    kernels = {name: _backend.load(name) for name in names}
    if "cython" not in kernels:
        print("compiled backend not built; only the numpy fallback is timed")
    print(f"{'kernel':28s}" + "".join(f"{name:>12s}" for name in names) + ("     speedup" if len(names) > 1 else ""))
    for label, fn in cases(args.n, np.random.default_rng(1)).items():
        times = {name: best_of(lambda k=k: fn(k), args.repeat) for name, k in kernels.items()}
        row = f"{label:28s}" + "".join(f"{times[name]:11.4f}s" for name in names)
        if len(names) > 1:
            row += f"{times['python'] / times['cython']:11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
