"""Independent reference computations used by the tests.

None of these touch the package's enumeration or kernel code.
"""

from __future__ import annotations

import itertools
from math import comb

import mpmath
import networkx as nx


def connected_graph_counts(n_max):
    """Connected labeled graphs on n vertices via the rooted inclusion-exclusion recurrence."""
    counts = {1: 1}
    for n in range(2, n_max + 1):
        total = 2 ** comb(n, 2)
        for k in range(1, n):
            total -= comb(n - 1, k - 1) * counts[k] * 2 ** comb(n - k, 2)
        counts[n] = total
    return counts


def lex_pairs(n):
    return [(i, j) for i in range(n) for j in range(n) if i < j]


def connected_sum_mp(n, u, dps=40):
    """sum over connected graphs of prod (e^{-u} - 1), from the subset recursion.

    The sum over all graphs on S is prod_{ij in S} e^{-u_ij}; peeling off the
    component of the smallest vertex gives
    C(S) = Z(S) - sum_{min S in T, T != S} C(T) Z(S \\ T).
    ``u`` maps (i, j), i < j, to a real or complex number.
    """
    with mpmath.workdps(dps):
        def z(vs):
            return mpmath.exp(-mpmath.fsum(mpmath.mpmathify(u[p]) for p in itertools.combinations(vs, 2)))

        cache = {}

        def c(vs):
            if len(vs) == 1:
                return mpmath.mpf(1)
            if vs in cache:
                return cache[vs]
            first, rest = vs[0], vs[1:]
            total = z(vs)
            for r in range(len(rest)):
                for extra in itertools.combinations(rest, r):
                    part = (first,) + extra
                    other = tuple(v for v in vs if v not in part)
                    total -= c(part) * z(other)
            cache[vs] = total
            return total

        value = c(tuple(range(n)))
        return complex(value)


def connected_graphs_nx(n):
    """All connected edge subsets of K_n (as frozensets of pairs), via networkx."""
    pairs = lex_pairs(n)
    out = []
    for r in range(n - 1, len(pairs) + 1):
        for edges in itertools.combinations(pairs, r):
            g = nx.Graph()
            g.add_nodes_from(range(n))
            g.add_edges_from(edges)
            if nx.is_connected(g):
                out.append(frozenset(edges))
    return out


def kruskal_nx(n, edges, rank):
    """Minimum spanning tree with distinct weights = ranks (unique, equals Kruskal's)."""
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for i, j in edges:
        g.add_edge(i, j, weight=rank[(i, j)])
    return frozenset(tuple(sorted(e)) for e in nx.minimum_spanning_edges(g, algorithm="kruskal", data=False))


def labeled_trees_nx(n):
    """All labeled trees on n vertices by filtering (n-1)-edge subsets."""
    out = []
    for edges in itertools.combinations(lex_pairs(n), n - 1):
        g = nx.Graph()
        g.add_nodes_from(range(n))
        g.add_edges_from(edges)
        if nx.is_tree(g):
            out.append(frozenset(edges))
    return out
