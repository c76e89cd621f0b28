"""Pair potentials u_ij, stability certificates and the negative-edge forest."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from ._backend import kernels
from .errors import CapacityError, DomainError
from .graph import Graph, Tree, _check_n, complete_mask, components, edge_index, edge_pairs, num_edges
from .scheme import EdgeOrder

MAX_SUBSET_SCAN = 20
MAX_POTENTIAL = 64


@dataclass(frozen=True, eq=False)
class Potential:
    """Edge values u_ij on K_n, one per EdgeId, stored as complex128.

    ``is_complex`` is False for real potentials (all imaginary parts zero).
    """

    n: int
    values: np.ndarray
    is_complex: bool = False

    def __post_init__(self):
        _check_n(self.n, hi=MAX_POTENTIAL)
        values = np.array(self.values, dtype=np.complex128).reshape(-1)
        if values.shape[0] != num_edges(self.n):
            raise DomainError(f"expected {num_edges(self.n)} edge values for n={self.n}, got {values.shape[0]}")
        if not np.all(np.isfinite(values)):
            bad = int(np.flatnonzero(~np.isfinite(values))[0])
            i, j = edge_pairs(self.n)[bad]
            raise DomainError(f"non-finite value for pair ({i + 1},{j + 1})")
        if not self.is_complex and np.any(values.imag != 0):
            raise DomainError("real potential with nonzero imaginary part; pass is_complex=True")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_real(cls, n: int, values: Sequence[float]) -> Potential:
        return cls(n, np.asarray(values, dtype=np.float64), False)

    @classmethod
    def from_complex(cls, n: int, values: Sequence[complex]) -> Potential:
        return cls(n, values, True)

    @classmethod
    def constant(cls, n: int, value: complex) -> Potential:
        is_complex = isinstance(value, complex) and value.imag != 0
        return cls(n, np.full(num_edges(n), value, dtype=np.complex128), is_complex)

    @classmethod
    def from_pairs(cls, n: int, entries: Mapping[tuple[int, int], complex], is_complex: bool = False) -> Potential:
        values = np.zeros(num_edges(n), dtype=np.complex128)
        for (i, j), v in entries.items():
            values[edge_index(i, j, n)] = v
        return cls(n, values, is_complex)

    @property
    def re(self) -> np.ndarray:
        return self.values.real.copy()

    @property
    def im(self) -> np.ndarray:
        return self.values.imag.copy()

    def __getitem__(self, pair: tuple[int, int]) -> complex:
        v = self.values[edge_index(pair[0], pair[1], self.n)]
        return complex(v) if self.is_complex else float(v.real)

    def __eq__(self, other):
        if not isinstance(other, Potential):
            return NotImplemented
        return (self.n, self.is_complex) == (other.n, other.is_complex) and np.array_equal(self.values, other.values)

    def __repr__(self):
        shown = self.values if self.is_complex else self.values.real
        return f"Potential(n={self.n}, is_complex={self.is_complex}, values={shown.tolist()})"


@dataclass(frozen=True)
class StabilityCertificate:
    """Per-vertex constants b_i >= 0 for the stability condition."""

    b: tuple[float, ...]

    def __post_init__(self):
        b = tuple(float(x) for x in self.b)
        for i, x in enumerate(b):
            if not math.isfinite(x):
                raise DomainError(f"b_{i + 1} is not finite")
            if x < 0:
                raise DomainError(f"b_{i + 1} = {x} is negative")
        object.__setattr__(self, "b", b)

    @classmethod
    def uniform(cls, n: int, value: float) -> StabilityCertificate:
        return cls((value,) * n)

    @property
    def n(self) -> int:
        return len(self.b)

    @property
    def total(self) -> float:
        return math.fsum(self.b)

    @property
    def prefactor(self) -> float:
        return math.exp(self.total)


def edge_order_from_potential(u: Potential) -> EdgeOrder:
    """Order edges by nondecreasing Re u, ties by ascending EdgeId."""
    return EdgeOrder.from_sequence(u.n, [int(e) for e in np.argsort(u.values.real, kind="stable")])


def negative_part(x: float) -> float:
    return -float(x) if x < 0 else 0.0


def trick_factorization(x: float) -> tuple[float, float]:
    """Split |e^{-x} - 1| as e^{(x)_-} * (1 - e^{-|x|})."""
    return math.exp(negative_part(x)), -math.expm1(-abs(x))


@dataclass(frozen=True)
class StabilityResult:
    passed: bool
    violating_subset: tuple[int, ...] | None = None

    def __bool__(self):
        return self.passed


def _subset_scan_guard(n: int) -> None:
    if n > MAX_SUBSET_SCAN:
        raise CapacityError(f"subset scans are limited to n <= {MAX_SUBSET_SCAN}, got {n}")


def _as_b(b, n: int) -> StabilityCertificate:
    if not isinstance(b, StabilityCertificate):
        b = StabilityCertificate(tuple(b))
    if b.n != n:
        raise DomainError(f"certificate has {b.n} entries, potential has n={n}")
    return b


def _bits(mask: int) -> tuple[int, ...]:
    return tuple(v for v in range(mask.bit_length()) if mask >> v & 1)


def check_stability(u: Potential, b) -> StabilityResult:
    """Test sum_{i<j in I} Re u_ij >= -sum_{i in I} b_i over every vertex subset I.

    On failure the first violating subset (in subset-integer order) is returned.
    """
    _subset_scan_guard(u.n)
    b = _as_b(b, u.n)
    pair_sums = kernels.subset_pair_sums(u.n, u.re)
    b_sums = kernels.subset_linear_sums(u.n, np.asarray(b.b, dtype=np.float64))
    bad = np.flatnonzero(pair_sums < -b_sums)
    if len(bad):
        return StabilityResult(False, _bits(int(bad[0])))
    return StabilityResult(True)


def minimal_uniform_stability(u: Potential) -> float:
    """Smallest B >= 0 such that b_i = B for all i certifies stability."""
    _subset_scan_guard(u.n)
    n = u.n
    pair_sums = kernels.subset_pair_sums(n, u.re)
    sizes = kernels.subset_linear_sums(n, np.ones(n))
    big = sizes >= 2
    best = float(np.max(-pair_sums[big] / sizes[big])) if big.any() else 0.0
    if not best > 0:
        best = 0.0
    # sum of |I| copies of B may round below |I| * B; step up until the scan agrees
    for _ in range(64):
        b_sums = kernels.subset_linear_sums(n, np.full(n, best))
        if not np.any(pair_sums < -b_sums):
            return best
        best = math.nextafter(best, math.inf)
    raise AssertionError("minimal uniform stability constant did not settle")


@dataclass(frozen=True)
class ForestDecomposition:
    t_minus: int
    subtrees: tuple[tuple[int, ...], ...]
    complete_edge_sets: tuple[int, ...]


def forest_decomposition(t: Tree, u: Potential) -> ForestDecomposition:
    """Split t into its negative edges (Re u < 0) and their vertex components."""
    if t.n != u.n:
        raise DomainError(f"tree has n={t.n}, potential has n={u.n}")
    re = u.values.real
    t_minus = 0
    for e in t.edges():
        if re[e] < 0:
            t_minus |= 1 << e
    subtrees = tuple(_bits(c) for c in components(Graph(t.n, t_minus)))
    return ForestDecomposition(t_minus, subtrees, tuple(complete_mask(vs, t.n) for vs in subtrees))
