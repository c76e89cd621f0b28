"""Connected-graph sums, their tree resummation, and the improved tree-graph bound.

Tree sums run over all n^(n-2) labeled trees in Prüfer order and are
compensated; graph sums run over connected edge subsets in bitmask order.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from ._backend import kernels
from .errors import CapacityError, DomainError, StabilityError
from .graph import MAX_GRAPH_ENUMERATION, Tree, prufer_tree
from .potentials import (
    Potential,
    StabilityCertificate,
    check_stability,
    edge_order_from_potential,
    forest_decomposition,
    minimal_uniform_stability,
)
from .scheme import EdgeOrder, boundary_edges

DEFAULT_TREE_LIMIT = 9
MAX_TREE_LIMIT = 12
DEFAULT_TOL = 1e-9
ABS_FLOOR = 1e-12


def _tree_gate(n: int, allow_large: bool) -> None:
    limit = MAX_TREE_LIMIT if allow_large else DEFAULT_TREE_LIMIT
    if n > limit:
        hint = "" if allow_large or n > MAX_TREE_LIMIT else " (pass allow_large=True to go up to 12)"
        raise CapacityError(f"tree sums are limited to n <= {limit}, got {n}{hint}")


def _fsum_complex(values) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


def _chunk_sum(args):
    n, tree_w, bnd_w, rank, start, stop = args
    return kernels.tree_product_sum(n, tree_w, bnd_w, rank, start, stop)


def tree_sum(n: int, tree_w, bnd_w=None, order: EdgeOrder | None = None, workers: int = 1) -> complex:
    """sum_t prod_{e in t} tree_w[e] * prod_{e in E(t)} bnd_w[e].

    Without ``order`` the boundary factor is dropped. ``workers > 1`` splits the
    Prüfer index range over processes.
    """
    total = n ** (n - 2)
    tree_w = np.ascontiguousarray(tree_w, dtype=np.complex128)
    rank = None
    if order is not None:
        rank = order.as_array()
        bnd_w = np.ascontiguousarray(bnd_w, dtype=np.complex128)
    if workers <= 1 or total < 4 * workers:
        return complex(kernels.tree_product_sum(n, tree_w, bnd_w, rank, 0, total))
    cuts = np.linspace(0, total, workers + 1).astype(np.int64).tolist()
    jobs = [(n, tree_w, bnd_w, rank, lo, hi) for lo, hi in zip(cuts, cuts[1:])]
    with ProcessPoolExecutor(workers) as pool:
        return _fsum_complex(list(pool.map(_chunk_sum, jobs)))


def connected_sum_direct(u: Potential) -> complex:
    """sum over connected g of prod_{ij in g} (e^{-u_ij} - 1), by enumeration."""
    if u.n > MAX_GRAPH_ENUMERATION:
        raise CapacityError(f"direct connected-graph sum is limited to n <= {MAX_GRAPH_ENUMERATION}, got {u.n}")
    w = np.expm1(-u.values)
    return _fsum_complex([kernels.mask_product_sum(chunk, w) for chunk in kernels.iter_connected_masks(u.n)])


def connected_sum_resummed(
    u: Potential, order: EdgeOrder | None = None, allow_large: bool = False, workers: int = 1
) -> complex:
    """Tree form of the connected sum: sum_t prod_t (e^{-u} - 1) prod_{E(t)} e^{-u}."""
    _tree_gate(u.n, allow_large)
    if order is None:
        order = edge_order_from_potential(u)
    return tree_sum(u.n, np.expm1(-u.values), np.exp(-u.values), order, workers)


def tree_majorant(
    u: Potential, order: EdgeOrder | None = None, allow_large: bool = False, workers: int = 1
) -> float:
    """sum_t prod_t |e^{-u} - 1| prod_{E(t)} |e^{-u}|, an upper bound on |connected sum|."""
    _tree_gate(u.n, allow_large)
    if order is None:
        order = edge_order_from_potential(u)
    return tree_sum(u.n, np.abs(np.expm1(-u.values)), np.exp(-u.values.real), order, workers).real


def improved_edge_factor(u) -> np.ndarray:
    """|1 - exp(-|Re u| + i Im u)| per edge (equals 1 - e^{-|u|} for real u)."""
    u = np.asarray(u, dtype=np.complex128)
    return np.abs(np.expm1(-np.abs(u.real) + 1j * u.imag))


def naive_edge_factor(u) -> np.ndarray:
    return np.abs(np.expm1(-np.asarray(u, dtype=np.complex128)))


def _certificate(u: Potential, b) -> StabilityCertificate:
    if isinstance(b, str):
        if b != "auto":
            raise DomainError(f"unknown certificate keyword {b!r}")
        return StabilityCertificate.uniform(u.n, minimal_uniform_stability(u))
    if not isinstance(b, StabilityCertificate):
        b = StabilityCertificate(tuple(b))
    result = check_stability(u, b)
    if not result:
        raise StabilityError(result.violating_subset)
    return b


def tree_bound_real(u: Potential, b, allow_large: bool = False, workers: int = 1) -> float:
    """e^{sum b} sum_t prod_{ij in t} (1 - e^{-|u_ij|}) for a real, stable potential."""
    if u.is_complex:
        raise DomainError("tree_bound_real needs a real potential; use tree_bound_complex")
    return tree_bound_complex(u, b, allow_large, workers)


def tree_bound_complex(u: Potential, b, allow_large: bool = False, workers: int = 1) -> float:
    """e^{sum b} sum_t prod_{ij in t} |1 - e^{-|Re u_ij| + i Im u_ij}|, with Re-stability."""
    _tree_gate(u.n, allow_large)
    cert = _certificate(u, b)
    return cert.prefactor * tree_sum(u.n, improved_edge_factor(u.values), workers=workers).real


def naive_tree_bound(u: Potential, b, allow_large: bool = False, workers: int = 1) -> float:
    """e^{sum b} sum_t prod_{ij in t} |1 - e^{-u_ij}|, the comparator with unreduced factors."""
    _tree_gate(u.n, allow_large)
    if isinstance(b, str):
        cert = _certificate(u, b)
    else:
        cert = b if isinstance(b, StabilityCertificate) else StabilityCertificate(tuple(b))
    return cert.prefactor * tree_sum(u.n, naive_edge_factor(u.values), workers=workers).real


def key_inequality_gap(t: Tree, u: Potential, order: EdgeOrder | None = None) -> float:
    """sum_{t_-} Re u + sum_{E(t)} Re u - sum_m sum_{K(t_m)} Re u for one tree."""
    if order is None:
        order = edge_order_from_potential(u)
    re = u.values.real
    forest = forest_decomposition(t, u)
    boundary = boundary_edges(t, order)
    lhs = [re[e] for e in range(len(re)) if forest.t_minus >> e & 1 or boundary >> e & 1]
    rhs = [re[e] for k in forest.complete_edge_sets for e in range(len(re)) if k >> e & 1]
    return math.fsum(lhs) - math.fsum(rhs)


@dataclass(frozen=True)
class KeyGapScan:
    min_gap: float
    argmin: Tree
    tree_count: int


def key_gap_scan(u: Potential, order: EdgeOrder | None = None, allow_large: bool = False) -> KeyGapScan:
    """Smallest key-inequality gap over every tree (all trees scanned in the kernel)."""
    _tree_gate(u.n, allow_large)
    if order is None:
        order = edge_order_from_potential(u)
    total = u.n ** (u.n - 2)
    gaps = kernels.key_gaps(u.n, order.as_array(), np.ascontiguousarray(u.values.real), 0, total)
    k = int(np.argmin(gaps))
    return KeyGapScan(float(gaps[k]), prufer_tree(u.n, k), total)


def tree_term_majorant(t: Tree, u: Potential, order: EdgeOrder) -> float:
    """prod_{t} |e^{-u} - 1| prod_{E(t)} e^{-u}: one tree's term in the majorant."""
    w = u.values
    boundary = boundary_edges(t, order)
    value = 1.0
    for e in t.edges():
        value *= abs(np.expm1(-w[e]))
    for e in range(len(w)):
        if boundary >> e & 1:
            value *= math.exp(-w[e].real)
    return value


def tree_term_rewritten(t: Tree, u: Potential, order: EdgeOrder) -> float:
    """Same term as ``tree_term_majorant`` written as prod(1 - e^{-|u|}) exp(-sum_{t_-} u - sum_{E(t)} u)."""
    w = u.values
    boundary = boundary_edges(t, order)
    forest = forest_decomposition(t, u)
    factor = 1.0
    for e in t.edges():
        factor *= abs(np.expm1(-abs(w[e].real) + 1j * w[e].imag))
    exponent = [w[e].real for e in range(len(w)) if forest.t_minus >> e & 1 or boundary >> e & 1]
    return factor * math.exp(-math.fsum(exponent))


@dataclass
class BoundReport:
    n: int
    kind: str
    lhs_magnitude: float | None
    rhs_improved: float
    rhs_naive: float
    stability_prefactor: float
    b: tuple[float, ...]
    b_source: str
    tree_count: int
    tolerance: float
    satisfied: bool | None
    mode: str

    def to_dict(self) -> dict:
        return asdict(self)


def evaluate_bound(
    u: Potential,
    b="auto",
    complex_form: bool | None = None,
    tol: float = DEFAULT_TOL,
    allow_large: bool = False,
    workers: int = 1,
) -> BoundReport:
    """Both sides of the tree-graph bound for one instance.

    The left side is only computed for n <= 7; otherwise ``satisfied`` is None.
    """
    _tree_gate(u.n, allow_large)
    if complex_form is None:
        complex_form = u.is_complex
    if u.is_complex and not complex_form:
        raise DomainError("complex potential needs the complex form of the bound")
    b_source = "auto" if isinstance(b, str) else "given"
    cert = _certificate(u, b)
    if complex_form:
        rhs = tree_bound_complex(u, cert, allow_large, workers)
    else:
        rhs = tree_bound_real(u, cert, allow_large, workers)
    naive = naive_tree_bound(u, cert, allow_large, workers)
    lhs = abs(connected_sum_direct(u)) if u.n <= MAX_GRAPH_ENUMERATION else None
    satisfied = None if lhs is None else bool(lhs <= rhs * (1 + tol) + ABS_FLOOR)
    return BoundReport(
        n=u.n,
        kind="complex" if complex_form else "real",
        lhs_magnitude=lhs,
        rhs_improved=rhs,
        rhs_naive=naive,
        stability_prefactor=cert.prefactor,
        b=cert.b,
        b_source=b_source,
        tree_count=u.n ** (u.n - 2),
        tolerance=tol,
        satisfied=satisfied,
        mode="parallel" if workers > 1 else "sequential",
    )

