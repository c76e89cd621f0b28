"""Pure-Python/numpy implementation of the hot kernels.

Same signatures as the compiled ``_ckernels`` module. Tree scans are
vectorised over chunks of trees using a path-incidence table: for tree ``t``
and pair ``p = ij``, ``paths[t, p, e]`` is true iff edge ``e`` lies on the
``i``-``j`` path in ``t``.
"""

from __future__ import annotations

import heapq
import itertools
import math
from functools import lru_cache

import numpy as np

NAME = "python"

CONNECTED_CHUNK = 1 << 16
_TABLE_BUDGET = 1 << 22


@lru_cache(maxsize=None)
def _pairs(n):
    pairs = np.array(list(itertools.combinations(range(n), 2)), dtype=np.intp).reshape(-1, 2)
    index = np.full((n, n), -1, dtype=np.intp)
    for e, (i, j) in enumerate(pairs):
        index[i, j] = index[j, i] = e
    return pairs, index


def _fsum_complex(values):
    values = np.asarray(values)
    if np.iscomplexobj(values):
        return complex(math.fsum(values.real), math.fsum(values.imag))
    return complex(math.fsum(values), 0.0)


def _prufer_edges(seq, n, index):
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for x in seq:
        leaf = heapq.heappop(leaves)
        edges.append(index[leaf, x])
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    edges.append(index[leaves[0], leaves[1]])
    return edges


def _root_paths(n, edges, pairs):
    """Boolean (n, m) matrix: row v marks the edges on the path from v to vertex 0."""
    m = len(pairs)
    adj = [[] for _ in range(n)]
    for e in edges:
        i, j = pairs[e]
        adj[i].append((j, e))
        adj[j].append((i, e))
    rows = np.zeros((n, m), dtype=bool)
    seen = [False] * n
    seen[0] = True
    stack = [0]
    while stack:
        v = stack.pop()
        for w, e in adj[v]:
            if not seen[w]:
                seen[w] = True
                rows[w] = rows[v]
                rows[w, e] = True
                stack.append(w)
    return rows


def _chunk_size(n):
    m = n * (n - 1) // 2
    return max(1, _TABLE_BUDGET // max(1, m * m))


@lru_cache(maxsize=64)
def _tree_table(n, start, stop):
    """(edges, paths) for the trees with Prüfer indices in [start, stop)."""
    pairs, index = _pairs(n)
    seqs = itertools.islice(itertools.product(range(n), repeat=n - 2), start, stop)
    edge_rows = []
    root_rows = []
    for seq in seqs:
        edges = _prufer_edges(seq, n, index)
        edge_rows.append(edges)
        root_rows.append(_root_paths(n, edges, pairs))
    edges = np.array(edge_rows, dtype=np.intp).reshape(-1, n - 1)
    roots = np.array(root_rows, dtype=bool).reshape(len(edge_rows), n, -1)
    paths = roots[:, pairs[:, 0], :] ^ roots[:, pairs[:, 1], :]
    return edges, paths


def _iter_tree_tables(n, start, stop):
    step = _chunk_size(n)
    for lo in range(start, stop, step):
        yield _tree_table(n, lo, min(stop, lo + step))


def _in_tree(edges, m):
    flags = np.zeros((edges.shape[0], m), dtype=bool)
    np.put_along_axis(flags, edges, True, axis=1)
    return flags


def _path_max_rank(paths, rank):
    return np.where(paths, rank[None, None, :], -1).max(axis=2)


def tree_masks(n, start, stop):
    out = []
    for edges, _ in _iter_tree_tables(n, start, stop):
        out.append(np.bitwise_or.reduce(np.left_shift(np.uint64(1), edges.astype(np.uint64)), axis=1))
    if not out:
        return np.zeros(0, dtype=np.uint64)
    return np.concatenate(out).astype(np.uint64)


def tree_product_sum(n, tree_w, bnd_w, rank, start, stop):
    """Sum over trees of prod_{e in t} tree_w[e] * prod_{e in E(t)} bnd_w[e].

    With ``rank`` None the boundary factor is omitted.
    """
    m = n * (n - 1) // 2
    tree_w = np.asarray(tree_w, dtype=np.complex128)
    partials = []
    for edges, paths in _iter_tree_tables(n, start, stop):
        terms = np.prod(tree_w[edges], axis=1)
        if rank is not None:
            rank_arr = np.asarray(rank, dtype=np.int64)
            boundary = ~_in_tree(edges, m) & (rank_arr[None, :] > _path_max_rank(paths, rank_arr))
            bnd = np.asarray(bnd_w, dtype=np.complex128)
            terms = terms * np.prod(np.where(boundary, bnd[None, :], 1.0), axis=1)
        partials.append(terms)
    if not partials:
        return 0j
    return _fsum_complex(np.concatenate(partials))


def key_gaps(n, rank, re_u, start, stop):
    """Per-tree gap of the key inequality under the given edge ranks."""
    m = n * (n - 1) // 2
    rank = np.asarray(rank, dtype=np.int64)
    re_u = np.asarray(re_u, dtype=np.float64)
    negative = re_u < 0
    out = []
    for edges, paths in _iter_tree_tables(n, start, stop):
        in_tree = _in_tree(edges, m)
        boundary = ~in_tree & (rank[None, :] > _path_max_rank(paths, rank))
        # i, j share a component of t_- iff their whole tree path is negative
        same_component = ~(paths & ~negative[None, None, :]).any(axis=2)
        lhs = np.where(in_tree & negative[None, :], re_u, 0.0).sum(axis=1)
        lhs += np.where(boundary, re_u, 0.0).sum(axis=1)
        rhs = np.where(same_component, re_u, 0.0).sum(axis=1)
        out.append(lhs - rhs)
    if not out:
        return np.zeros(0)
    return np.concatenate(out)


def _mask_bits(masks, m):
    return ((masks[:, None] >> np.arange(m, dtype=np.uint64)[None, :]) & np.uint64(1)).astype(bool)


def mask_product_sum(masks, w):
    """Sum over bitmasks of the product of w over the set bits."""
    w = np.asarray(w, dtype=np.complex128)
    masks = np.asarray(masks, dtype=np.uint64)
    partials = []
    for lo in range(0, len(masks), CONNECTED_CHUNK):
        bits = _mask_bits(masks[lo : lo + CONNECTED_CHUNK], len(w))
        partials.append(np.prod(np.where(bits, w[None, :], 1.0), axis=1))
    if not partials:
        return 0j
    return _fsum_complex(np.concatenate(partials))


def connected_masks(n, lo, hi):
    """Connected edge subsets of K_n among the integers [lo, hi)."""
    pairs, _ = _pairs(n)
    masks = np.arange(lo, hi, dtype=np.uint64)
    one = np.uint64(1)
    adj = [np.zeros_like(masks) for _ in range(n)]
    for e, (i, j) in enumerate(pairs):
        bit = (masks >> np.uint64(e)) & one
        adj[i] |= bit << np.uint64(j)
        adj[j] |= bit << np.uint64(i)
    reach = np.ones_like(masks)
    for _ in range(n - 1):
        grown = reach.copy()
        for v in range(n):
            grown |= np.where((reach >> np.uint64(v)) & one, adj[v], np.uint64(0))
        reach = grown
    return masks[reach == np.uint64((1 << n) - 1)]


def iter_connected_masks(n, chunk=CONNECTED_CHUNK):
    total = 1 << (n * (n - 1) // 2)
    for lo in range(0, total, chunk):
        yield connected_masks(n, lo, min(total, lo + chunk))


def kruskal_batch(n, rank, masks):
    """Kruskal spanning tree (as edge mask) of every mask, scanning edges by rank."""
    pairs, _ = _pairs(n)
    order = [int(e) for e in np.argsort(np.asarray(rank), kind="stable")]
    ends = [(int(pairs[e, 0]), int(pairs[e, 1])) for e in order]
    out = np.zeros(len(masks), dtype=np.uint64)
    for k, mask in enumerate(np.asarray(masks, dtype=np.uint64).tolist()):
        parent = list(range(n))
        size = [1] * n
        tree = 0
        for e, (i, j) in zip(order, ends):
            if not mask >> e & 1:
                continue
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            while parent[j] != j:
                parent[j] = parent[parent[j]]
                j = parent[j]
            if i == j:
                continue
            if size[i] < size[j]:
                i, j = j, i
            parent[j] = i
            size[i] += size[j]
            tree |= 1 << e
        out[k] = tree
    return out


def boundary_batch(n, rank, masks):
    """E(t) as an edge mask for every tree mask."""
    pairs, _ = _pairs(n)
    rank = np.asarray(rank, dtype=np.int64)
    m = len(pairs)
    out = np.zeros(len(masks), dtype=np.uint64)
    for k, mask in enumerate(np.asarray(masks, dtype=np.uint64).tolist()):
        edges = [e for e in range(m) if mask >> e & 1]
        roots = _root_paths(n, edges, pairs)
        paths = roots[pairs[:, 0]] ^ roots[pairs[:, 1]]
        path_max = np.where(paths, rank[None, :], -1).max(axis=1)
        boundary = 0
        for e in range(m):
            if not mask >> e & 1 and rank[e] > path_max[e]:
                boundary |= 1 << e
        out[k] = boundary
    return out


def subset_linear_sums(n, values):
    """sums[I] = sum of values[i] for i in I, added in increasing i."""
    values = np.asarray(values, dtype=np.float64)
    sums = np.zeros(1)
    for k in range(n):
        sums = np.concatenate([sums, sums + values[k]])
    return sums


def subset_pair_sums(n, u):
    """sums[I] = sum of u over the pairs inside I (I as a vertex bitmask)."""
    u = np.asarray(u, dtype=np.float64)
    _, index = _pairs(n)
    sums = np.zeros(1)
    for k in range(n):
        row = np.array([u[index[j, k]] for j in range(k)])
        sums = np.concatenate([sums, sums + subset_linear_sums(k, row)])
    return sums
