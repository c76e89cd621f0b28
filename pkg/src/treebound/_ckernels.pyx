# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels. Mirrors ``_pykernels`` function for function.

Tree scans stream Prüfer sequences (lexicographic order) and never build a
table, so they work for any n up to 16.
"""

import numpy as np

from libc.math cimport fabs

NAME = "cython"

ctypedef unsigned long long u64

cdef enum:
    MAXN = 16
    MAXM = 120

CONNECTED_CHUNK = 1 << 16


cdef inline int _edge_id(int i, int j, int n) noexcept nogil:
    cdef int t
    if i > j:
        t = i
        i = j
        j = t
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


cdef inline void _neumaier(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


cdef void _prufer_edges(int n, int* seq, int* edges) noexcept nogil:
    # smallest-leaf decode; O(n^2) is fine for n <= 16
    cdef int degree[MAXN]
    cdef int k, v, leaf, a
    for v in range(n):
        degree[v] = 1
    for k in range(n - 2):
        degree[seq[k]] += 1
    for k in range(n - 2):
        leaf = 0
        while degree[leaf] != 1:
            leaf += 1
        edges[k] = _edge_id(leaf, seq[k], n)
        degree[leaf] = 0
        degree[seq[k]] -= 1
    a = -1
    for v in range(n):
        if degree[v] == 1:
            if a < 0:
                a = v
            else:
                edges[n - 2] = _edge_id(a, v, n)
                break


cdef void _index_to_seq(int n, long long index, int* seq) noexcept nogil:
    cdef int k
    for k in range(n - 3, -1, -1):
        seq[k] = <int>(index % n)
        index //= n


cdef inline void _next_seq(int n, int* seq) noexcept nogil:
    cdef int k = n - 3
    while k >= 0:
        seq[k] += 1
        if seq[k] < n:
            return
        seq[k] = 0
        k -= 1


cdef void _pair_tables(int n, int* edges, const int* pi, const int* pj, const long long* rank,
                       const double* re_u, long long* path_max, char* all_neg) noexcept nogil:
    # path_max[m] = largest rank on the tree path of pair m;
    # all_neg[m] = 1 iff every edge on that path has re_u < 0 (re_u may be NULL)
    cdef int nbr[MAXN][MAXN]
    cdef int nbr_edge[MAXN][MAXN]
    cdef int deg[MAXN]
    cdef long long pm[MAXN]
    cdef char an[MAXN]
    cdef int stack[MAXN]
    cdef char seen[MAXN]
    cdef int k, a, b, e, r, v, w, top, q
    for v in range(n):
        deg[v] = 0
    for k in range(n - 1):
        e = edges[k]
        a = pi[e]
        b = pj[e]
        nbr[a][deg[a]] = b
        nbr_edge[a][deg[a]] = e
        deg[a] += 1
        nbr[b][deg[b]] = a
        nbr_edge[b][deg[b]] = e
        deg[b] += 1
    for r in range(n - 1):
        for v in range(n):
            seen[v] = 0
        pm[r] = -1
        an[r] = 1
        seen[r] = 1
        stack[0] = r
        top = 1
        while top > 0:
            top -= 1
            v = stack[top]
            for q in range(deg[v]):
                w = nbr[v][q]
                if seen[w]:
                    continue
                seen[w] = 1
                e = nbr_edge[v][q]
                pm[w] = pm[v] if pm[v] > rank[e] else rank[e]
                if re_u != NULL:
                    an[w] = an[v] and re_u[e] < 0
                stack[top] = w
                top += 1
        for w in range(r + 1, n):
            e = _edge_id(r, w, n)
            path_max[e] = pm[w]
            if re_u != NULL:
                all_neg[e] = an[w]


def _pair_arrays(int n):
    m = n * (n - 1) // 2
    pi = np.empty(m, dtype=np.intc)
    pj = np.empty(m, dtype=np.intc)
    e = 0
    for i in range(n):
        for j in range(i + 1, n):
            pi[e] = i
            pj[e] = j
            e += 1
    return pi, pj


def tree_masks(int n, long long start, long long stop):
    cdef int seq[MAXN]
    cdef int edges[MAXN]
    cdef long long idx
    cdef int k
    cdef u64 mask
    out = np.zeros(max(0, stop - start), dtype=np.uint64)
    cdef u64[:] o = out
    if stop <= start:
        return out
    _index_to_seq(n, start, seq)
    with nogil:
        for idx in range(stop - start):
            _prufer_edges(n, seq, edges)
            mask = 0
            for k in range(n - 1):
                mask |= (<u64>1) << edges[k]
            o[idx] = mask
            _next_seq(n, seq)
    return out


def tree_product_sum(int n, const double complex[:] tree_w, const double complex[:] bnd_w,
                     const long long[:] rank, long long start, long long stop):
    """Sum over trees of prod_{t} tree_w * prod_{E(t)} bnd_w; boundary omitted if rank is None."""
    cdef int m = n * (n - 1) // 2
    cdef int seq[MAXN]
    cdef int edges[MAXN]
    cdef long long path_max[MAXM]
    cdef char in_tree[MAXM]
    cdef long long idx
    cdef int k, e
    cdef double pr, pim, wr, wi, tmp
    cdef double sr = 0, cr = 0, si = 0, ci = 0
    cdef bint use_bnd = rank is not None
    pi_arr, pj_arr = _pair_arrays(n)
    cdef int[:] pi = pi_arr
    cdef int[:] pj = pj_arr
    if stop <= start:
        return 0j
    _index_to_seq(n, start, seq)
    with nogil:
        for idx in range(stop - start):
            _prufer_edges(n, seq, edges)
            pr = 1.0
            pim = 0.0
            for k in range(n - 1):
                e = edges[k]
                wr = tree_w[e].real
                wi = tree_w[e].imag
                tmp = pr * wr - pim * wi
                pim = pr * wi + pim * wr
                pr = tmp
            if use_bnd:
                _pair_tables(n, edges, &pi[0], &pj[0], &rank[0], NULL, path_max, NULL)
                for e in range(m):
                    in_tree[e] = 0
                for k in range(n - 1):
                    in_tree[edges[k]] = 1
                for e in range(m):
                    if not in_tree[e] and rank[e] > path_max[e]:
                        wr = bnd_w[e].real
                        wi = bnd_w[e].imag
                        tmp = pr * wr - pim * wi
                        pim = pr * wi + pim * wr
                        pr = tmp
            _neumaier(&sr, &cr, pr)
            _neumaier(&si, &ci, pim)
            _next_seq(n, seq)
    return complex(sr + cr, si + ci)


def key_gaps(int n, const long long[:] rank, const double[:] re_u, long long start, long long stop):
    """Per-tree gap of the key inequality under the given edge ranks."""
    cdef int m = n * (n - 1) // 2
    cdef int seq[MAXN]
    cdef int edges[MAXN]
    cdef long long path_max[MAXM]
    cdef char all_neg[MAXM]
    cdef char in_tree[MAXM]
    cdef long long idx
    cdef int k, e
    cdef double lhs, rhs
    pi_arr, pj_arr = _pair_arrays(n)
    cdef int[:] pi = pi_arr
    cdef int[:] pj = pj_arr
    out = np.zeros(max(0, stop - start))
    cdef double[:] o = out
    if stop <= start:
        return out
    _index_to_seq(n, start, seq)
    with nogil:
        for idx in range(stop - start):
            _prufer_edges(n, seq, edges)
            _pair_tables(n, edges, &pi[0], &pj[0], &rank[0], &re_u[0], path_max, all_neg)
            for e in range(m):
                in_tree[e] = 0
            for k in range(n - 1):
                in_tree[edges[k]] = 1
            lhs = 0.0
            rhs = 0.0
            for e in range(m):
                if in_tree[e]:
                    if re_u[e] < 0:
                        lhs += re_u[e]
                elif rank[e] > path_max[e]:
                    lhs += re_u[e]
                if all_neg[e]:
                    rhs += re_u[e]
            o[idx] = lhs - rhs
            _next_seq(n, seq)
    return out


def mask_product_sum(const u64[:] masks, const double complex[:] w):
    """Sum over bitmasks of the product of w over the set bits."""
    cdef Py_ssize_t k
    cdef u64 mask, low
    cdef int e
    cdef double pr, pim, wr, wi, tmp
    cdef double sr = 0, cr = 0, si = 0, ci = 0
    with nogil:
        for k in range(masks.shape[0]):
            mask = masks[k]
            pr = 1.0
            pim = 0.0
            e = 0
            while mask:
                if mask & 1:
                    wr = w[e].real
                    wi = w[e].imag
                    tmp = pr * wr - pim * wi
                    pim = pr * wi + pim * wr
                    pr = tmp
                mask >>= 1
                e += 1
            _neumaier(&sr, &cr, pr)
            _neumaier(&si, &ci, pim)
    return complex(sr + cr, si + ci)


def connected_masks(int n, u64 lo, u64 hi):
    """Connected edge subsets of K_n among the integers [lo, hi)."""
    cdef u64 adj[MAXN]
    cdef u64 mask, reach, frontier, low, full = ((<u64>1) << n) - 1
    cdef int e, v, i, j
    cdef Py_ssize_t count = 0
    pi_arr, pj_arr = _pair_arrays(n)
    cdef int[:] pi = pi_arr
    cdef int[:] pj = pj_arr
    cdef int m = n * (n - 1) // 2
    out = np.empty(hi - lo if hi > lo else 0, dtype=np.uint64)
    cdef u64[:] o = out
    with nogil:
        mask = lo
        while mask < hi:
            for v in range(n):
                adj[v] = 0
            for e in range(m):
                if (mask >> e) & 1:
                    i = pi[e]
                    j = pj[e]
                    adj[i] |= (<u64>1) << j
                    adj[j] |= (<u64>1) << i
            reach = 1
            frontier = 1
            while frontier:
                low = frontier & (~frontier + 1)
                frontier ^= low
                v = 0
                while (low >> v) != 1:
                    v += 1
                frontier |= adj[v] & ~reach
                reach |= adj[v]
            if reach == full:
                o[count] = mask
                count += 1
            mask += 1
    return out[:count].copy()


def iter_connected_masks(int n, chunk=CONNECTED_CHUNK):
    total = 1 << (n * (n - 1) // 2)
    for lo in range(0, total, chunk):
        yield connected_masks(n, lo, min(total, lo + chunk))


cdef inline int _find(int* parent, int x) noexcept nogil:
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def kruskal_batch(int n, rank, const u64[:] masks):
    """Kruskal spanning tree (as edge mask) of every mask, scanning edges by rank."""
    order_arr = np.argsort(np.asarray(rank), kind="stable").astype(np.intc)
    pi_arr, pj_arr = _pair_arrays(n)
    cdef int[:] order = order_arr
    cdef int[:] pi = pi_arr
    cdef int[:] pj = pj_arr
    cdef int m = n * (n - 1) // 2
    cdef int parent[MAXN]
    cdef int size[MAXN]
    cdef Py_ssize_t k
    cdef int q, e, a, b, v
    cdef u64 mask, tree
    out = np.zeros(masks.shape[0], dtype=np.uint64)
    cdef u64[:] o = out
    with nogil:
        for k in range(masks.shape[0]):
            mask = masks[k]
            for v in range(n):
                parent[v] = v
                size[v] = 1
            tree = 0
            for q in range(m):
                e = order[q]
                if not (mask >> e) & 1:
                    continue
                a = _find(parent, pi[e])
                b = _find(parent, pj[e])
                if a == b:
                    continue
                if size[a] < size[b]:
                    a, b = b, a
                parent[b] = a
                size[a] += size[b]
                tree |= (<u64>1) << e
            o[k] = tree
    return out


def boundary_batch(int n, const long long[:] rank, const u64[:] masks):
    """E(t) as an edge mask for every tree mask."""
    pi_arr, pj_arr = _pair_arrays(n)
    cdef int[:] pi = pi_arr
    cdef int[:] pj = pj_arr
    cdef int m = n * (n - 1) // 2
    cdef int edges[MAXN]
    cdef long long path_max[MAXM]
    cdef Py_ssize_t k
    cdef int e, c
    cdef u64 mask, bnd
    out = np.zeros(masks.shape[0], dtype=np.uint64)
    cdef u64[:] o = out
    with nogil:
        for k in range(masks.shape[0]):
            mask = masks[k]
            c = 0
            for e in range(m):
                if (mask >> e) & 1:
                    edges[c] = e
                    c += 1
            _pair_tables(n, edges, &pi[0], &pj[0], &rank[0], NULL, path_max, NULL)
            bnd = 0
            for e in range(m):
                if not (mask >> e) & 1 and rank[e] > path_max[e]:
                    bnd |= (<u64>1) << e
            o[k] = bnd
    return out


def subset_linear_sums(int n, const double[:] values):
    """sums[I] = sum of values[i] for i in I, added in increasing i."""
    out = np.zeros(1 << n)
    cdef double[:] s = out
    cdef long long r, size
    cdef int k
    with nogil:
        for k in range(n):
            size = 1LL << k
            for r in range(size):
                s[size + r] = s[r] + values[k]
    return out


def subset_pair_sums(int n, const double[:] u):
    """sums[I] = sum of u over the pairs inside I (I as a vertex bitmask)."""
    out = np.zeros(1 << n)
    lin_buf = np.zeros(1 << max(n - 1, 0))
    cdef double[:] s = out
    cdef double[:] lin = lin_buf
    cdef long long r, size
    cdef int k, j
    cdef double w
    with nogil:
        for k in range(n):
            # lin[R] = sum of u(j, k) over j in R, R a subset of {0..k-1}
            for j in range(k):
                w = u[_edge_id(j, k, n)]
                size = 1LL << j
                for r in range(size):
                    lin[size + r] = lin[r] + w
            size = 1LL << k
            for r in range(size):
                s[size + r] = s[r] + lin[r]
    return out
