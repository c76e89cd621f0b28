"""Kruskal partition scheme, tree resummation and the improved tree-graph bound."""

__version__ = "0.1.0"

from ._backend import kernels
from .bounds import (
    BoundReport,
    connected_sum_direct,
    connected_sum_resummed,
    evaluate_bound,
    tree_majorant,
    key_gap_scan,
    key_inequality_gap,
    naive_tree_bound,
    tree_bound_complex,
    tree_bound_real,
)
from .errors import CapacityError, DomainError, InstanceError, StabilityError, TreeBoundError
from .graph import (
    Graph,
    Tree,
    edge_index,
    enumerate_connected_graphs,
    enumerate_trees,
    is_connected,
    prufer_decode,
    tree_path,
)
from .instances import Distribution, generate_instance, parse_instance
from .potentials import (
    ForestDecomposition,
    Potential,
    StabilityCertificate,
    check_stability,
    edge_order_from_potential,
    forest_decomposition,
    minimal_uniform_stability,
    negative_part,
    trick_factorization,
)
from .scheme import EdgeOrder, boundary_edges, kruskal_map, verify_partition

BACKEND = kernels.NAME
