"""Kruskal's partition scheme T: C_n -> T_n and its boundary sets E(t)."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from .errors import CapacityError, DomainError
from .graph import Graph, Tree, _check_n, edge_pairs, is_connected, num_edges, tree_path

MAX_PARTITION_CHECK = 6


@dataclass(frozen=True)
class EdgeOrder:
    """A total order on the edges of K_n; ``rank[e]`` is the position of edge e."""

    n: int
    rank: tuple[int, ...]

    def __post_init__(self):
        _check_n(self.n)
        m = num_edges(self.n)
        if sorted(self.rank) != list(range(m)):
            raise DomainError(f"edge ranks must be a permutation of 0..{m - 1}")

    @classmethod
    def lexicographic(cls, n: int) -> EdgeOrder:
        return cls(n, tuple(range(num_edges(n))))

    @classmethod
    def from_sequence(cls, n: int, edges) -> EdgeOrder:
        """Order in which ``edges`` (EdgeIds, smallest first) are listed."""
        rank = [0] * num_edges(n)
        for r, e in enumerate(edges):
            rank[e] = r
        return cls(n, tuple(rank))

    @classmethod
    def random(cls, n: int, rng: np.random.Generator) -> EdgeOrder:
        return cls.from_sequence(n, [int(e) for e in rng.permutation(num_edges(n))])

    def sorted_edges(self) -> list[int]:
        return sorted(range(len(self.rank)), key=self.rank.__getitem__)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.rank, dtype=np.int64)


def _check_order(n: int, order: EdgeOrder) -> None:
    if order.n != n:
        raise DomainError(f"edge order is for n={order.n}, graph has n={n}")


def kruskal_map(g: Graph, order: EdgeOrder) -> Tree:
    """Spanning tree of g built by adding edges in increasing rank, skipping loops."""
    _check_order(g.n, order)
    if not is_connected(g):
        raise DomainError("kruskal_map needs a connected graph")
    parent = list(range(g.n))
    size = [1] * g.n

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    pairs = edge_pairs(g.n)
    mask = 0
    for e in sorted(g.edges(), key=order.rank.__getitem__):
        a, b = find(pairs[e][0]), find(pairs[e][1])
        if a == b:
            continue
        if size[a] < size[b]:
            a, b = b, a
        parent[b] = a
        size[a] += size[b]
        mask |= 1 << e
    return Tree(g.n, mask)


def boundary_edges(t: Tree, order: EdgeOrder) -> int:
    """E(t): non-tree edges ranked above every edge on their tree path."""
    _check_order(t.n, order)
    rank = order.rank
    mask = 0
    for e, (i, j) in enumerate(edge_pairs(t.n)):
        if e in t:
            continue
        if all(rank[e] > rank[f] for f in tree_path(t, i, j)):
            mask |= 1 << e
    return mask


@dataclass
class PartitionReport:
    n: int
    passed: bool
    connected_count: int
    tree_count: int
    interval_sizes: tuple[int, ...]  # 2^|E(t)| per tree, Prüfer order
    counterexample: dict | None = None
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def interval_total(self) -> int:
        return sum(self.interval_sizes)

    def size_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.interval_sizes).items()))


def _popcount(x: int) -> int:
    return bin(x).count("1")


def verify_partition(n: int, order: EdgeOrder) -> PartitionReport:
    """Exhaustively check that the Kruskal fibres are the intervals [t, t + E(t)].

    Stops at the first failing fact and records it as the counterexample.
    """
    _check_n(n)
    if n > MAX_PARTITION_CHECK:
        raise CapacityError(f"exhaustive partition check is limited to n <= {MAX_PARTITION_CHECK}, got {n}")
    _check_order(n, order)
    rank = order.as_array()
    trees = kernels.tree_masks(n, 0, n ** (n - 2))
    bounds = kernels.boundary_batch(n, rank, trees)
    tree_list = trees.tolist()
    bound_list = bounds.tolist()
    graphs = np.concatenate(list(kernels.iter_connected_masks(n)))
    sizes = tuple(1 << _popcount(b) for b in bound_list)
    report = PartitionReport(n, True, len(graphs), len(tree_list), sizes)

    def fail(check, **info):
        report.passed = False
        report.checks[check] = False
        for key in ("graph", "tree", "boundary", "image"):
            if key in info:
                info[key] = Graph(n, info[key]).pairs()
        report.counterexample = {"check": check, **info}
        return report

    for t, b in zip(tree_list, bound_list):
        if t & b:
            return fail("boundary_disjoint", tree=t, boundary=b)
    report.checks["boundary_disjoint"] = True

    boundary_of = dict(zip(tree_list, bound_list))
    images = kernels.kruskal_batch(n, rank, graphs).tolist()
    for g, t in zip(graphs.tolist(), images):
        b = boundary_of.get(t)
        if b is None or t & ~g or g & ~(t | b):
            return fail("image_in_interval", graph=g, tree=t)
    report.checks["image_in_interval"] = True

    members, owners = [], []
    for t, b in zip(tree_list, bound_list):
        bits = [1 << e for e in range(num_edges(n)) if b >> e & 1]
        for k in range(1 << len(bits)):
            extra = 0
            for q, bit in enumerate(bits):
                if k >> q & 1:
                    extra |= bit
            members.append(t | extra)
            owners.append(t)
    mapped = kernels.kruskal_batch(n, rank, np.array(members, dtype=np.uint64)).tolist()
    for g, t, image in zip(members, owners, mapped):
        if image != t:
            return fail("interval_in_fibre", graph=g, tree=t, image=image)
    report.checks["interval_in_fibre"] = True

    if report.interval_total != len(graphs):
        return fail("counting_identity", interval_total=report.interval_total, connected_count=len(graphs))
    report.checks["counting_identity"] = True
    return report
