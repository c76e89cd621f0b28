"""Labeled graphs on the complete graph K_n, stored as edge bitmasks.

Vertices are 0-indexed. Edge ``ij`` (``i < j``) gets the lexicographic index
of the pair, so bit ``edge_index(i, j, n)`` of ``Graph.mask`` says whether the
edge is present.
"""

from __future__ import annotations

import heapq
import itertools
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .errors import CapacityError, DomainError

MAX_VERTICES = 16
MAX_GRAPH_ENUMERATION = 7


def num_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(i: int, j: int, n: int) -> int:
    """Lexicographic index of the unordered pair {i, j} among the edges of K_n."""
    if not (0 <= i < n and 0 <= j < n):
        raise DomainError(f"vertex out of range for n={n}: ({i}, {j})")
    if i == j:
        raise DomainError(f"self-pair ({i}, {j}) is not an edge")
    if i > j:
        i, j = j, i
    return i * (2 * n - i - 1) // 2 + (j - i - 1)


@lru_cache(maxsize=None)
def edge_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """All pairs (i, j), i < j, in edge-index order."""
    return tuple(itertools.combinations(range(n), 2))


def edge_endpoints(e: int, n: int) -> tuple[int, int]:
    pairs = edge_pairs(n)
    if not 0 <= e < len(pairs):
        raise DomainError(f"edge index {e} out of range for n={n}")
    return pairs[e]


def _check_n(n: int, lo: int = 2, hi: int = MAX_VERTICES) -> None:
    if not isinstance(n, int) or not lo <= n <= hi:
        raise DomainError(f"vertex count must be in [{lo}, {hi}], got {n!r}")


def mask_edges(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def complete_mask(vertices: Iterable[int], n: int) -> int:
    """Edge bitmask of the complete graph on the given vertex set."""
    vs = sorted(vertices)
    mask = 0
    for a, b in itertools.combinations(vs, 2):
        mask |= 1 << edge_index(a, b, n)
    return mask


@dataclass(frozen=True)
class Graph:
    n: int
    mask: int

    def __post_init__(self):
        _check_n(self.n)
        if self.mask < 0 or self.mask >> num_edges(self.n):
            raise DomainError(f"edge mask {self.mask:#x} has bits beyond K_{self.n}")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int]]):
        mask = 0
        for i, j in pairs:
            mask |= 1 << edge_index(i, j, n)
        return cls(n, mask)

    def edges(self) -> list[int]:
        return mask_edges(self.mask)

    def pairs(self) -> list[tuple[int, int]]:
        table = edge_pairs(self.n)
        return [table[e] for e in self.edges()]

    def __contains__(self, e: int) -> bool:
        return bool(self.mask >> e & 1)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def adjacency(self) -> list[int]:
        """Per-vertex neighbour bitmasks."""
        adj = [0] * self.n
        for i, j in self.pairs():
            adj[i] |= 1 << j
            adj[j] |= 1 << i
        return adj


class Tree(Graph):
    """A spanning tree of K_n: n-1 edges, connected and acyclic."""

    def __post_init__(self):
        super().__post_init__()
        if len(self) != self.n - 1:
            raise DomainError(f"a tree on {self.n} vertices needs {self.n - 1} edges, got {len(self)}")
        if not is_connected(self):
            raise DomainError("edge set is not connected, hence not a tree")


def components(g: Graph) -> list[int]:
    """Vertex bitmasks of the connected components, ordered by smallest vertex."""
    adj = g.adjacency()
    seen = 0
    comps = []
    for v in range(g.n):
        if seen >> v & 1:
            continue
        comp = frontier = 1 << v
        while frontier:
            low = frontier & -frontier
            frontier ^= low
            new = adj[low.bit_length() - 1] & ~comp
            comp |= new
            frontier |= new
        seen |= comp
        comps.append(comp)
    return comps


def is_connected(g: Graph) -> bool:
    return len(components(g)) == 1


def is_acyclic(g: Graph) -> bool:
    # a forest has exactly n - (#components) edges
    return len(g) == g.n - len(components(g))


def prufer_decode(seq: Sequence[int], n: int | None = None) -> Tree:
    """Decode a Prüfer sequence of length n-2 into its labeled tree."""
    seq = list(seq)
    if n is None:
        n = len(seq) + 2
    elif len(seq) != n - 2:
        raise DomainError(f"Prüfer sequence for n={n} must have length {n - 2}, got {len(seq)}")
    _check_n(n)
    for x in seq:
        if not 0 <= x < n:
            raise DomainError(f"Prüfer entry {x} out of range [0, {n})")
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    leaves = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(leaves)
    mask = 0
    for x in seq:
        leaf = heapq.heappop(leaves)
        mask |= 1 << edge_index(leaf, x, n)
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(leaves, x)
    a, b = leaves
    mask |= 1 << edge_index(a, b, n)
    return Tree(n, mask)


def prufer_tree(n: int, index: int) -> Tree:
    """The tree at position ``index`` of the lexicographic Prüfer enumeration."""
    _check_n(n)
    if not 0 <= index < n ** (n - 2):
        raise DomainError(f"Prüfer index {index} out of range for n={n}")
    seq = []
    for _ in range(n - 2):
        index, digit = divmod(index, n)
        seq.append(digit)
    return prufer_decode(seq[::-1], n)


def enumerate_trees(n: int) -> Iterator[Tree]:
    """Every labeled spanning tree of K_n, in lexicographic Prüfer order."""
    _check_n(n)
    for seq in itertools.product(range(n), repeat=n - 2):
        yield prufer_decode(seq, n)


def enumerate_connected_graphs(n: int) -> Iterator[Graph]:
    """Every connected labeled graph on n vertices, by increasing bitmask."""
    _check_n(n)
    if n > MAX_GRAPH_ENUMERATION:
        raise CapacityError(
            f"connected-graph enumeration is limited to n <= {MAX_GRAPH_ENUMERATION}, got {n}"
        )
    from ._backend import kernels

    for chunk in kernels.iter_connected_masks(n):
        for mask in chunk.tolist():
            yield Graph(n, mask)


def tree_path(t: Tree, i: int, j: int) -> list[int]:
    """Edges of the unique i-j path in t, listed from i towards j."""
    if i == j:
        raise DomainError(f"tree_path needs distinct endpoints, got ({i}, {i})")
    if not (0 <= i < t.n and 0 <= j < t.n):
        raise DomainError(f"vertex out of range for n={t.n}: ({i}, {j})")
    adj: list[list[int]] = [[] for _ in range(t.n)]
    for a, b in t.pairs():
        adj[a].append(b)
        adj[b].append(a)
    parent = [-1] * t.n
    parent[i] = i
    queue = deque([i])
    while queue:
        v = queue.popleft()
        if v == j:
            break
        for w in adj[v]:
            if parent[w] < 0:
                parent[w] = v
                queue.append(w)
    path = []
    v = j
    while v != i:
        path.append(edge_index(v, parent[v], t.n))
        v = parent[v]
    path.reverse()
    return path
