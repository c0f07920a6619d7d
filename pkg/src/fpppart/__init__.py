"""Vertex-cut graph partitioning on finite projective planes.

Partitions edges so that each vertex is confined to one line of PG(2, q),
capping its replication at q + 1, with EdgePartition2D and Torus grid
partitioners as baselines and exact metric and bound checkers.
"""
from .errors import ConfigError, DataError, DomainError, FppError
from .finite_field import FieldElement, FieldSpec, ff_add, ff_inv, ff_mul, find_irreducible
from .graph_io import gen_complete, gen_preferential, gen_random, read_edge_list, write_edge_list
from .matching import LinePointMatching, perfect_matching
from .metrics import (
    MetricsAccumulator,
    MetricsReport,
    check_constrained_bound,
    complete_graph_lower_bound,
    compute_metrics,
    family_multiplicity_check,
)
from .partitioners import (
    EdgeAssignment,
    Method,
    Partitioner,
    PartitionerConfig,
    SurplusPolicy,
    edge2d_assign,
    fpp_assign,
    partition_stream,
    plane_size_for,
    psi,
    torus_assign,
)
from .projective_plane import ProjPlane, ProjPoint, build_plane, line_intersection, normalize

__all__ = [
    "ConfigError", "DataError", "DomainError", "FppError",
    "FieldElement", "FieldSpec", "ff_add", "ff_inv", "ff_mul", "find_irreducible",
    "gen_complete", "gen_preferential", "gen_random", "read_edge_list", "write_edge_list",
    "LinePointMatching", "perfect_matching",
    "MetricsAccumulator", "MetricsReport", "check_constrained_bound", "complete_graph_lower_bound",
    "compute_metrics", "family_multiplicity_check",
    "EdgeAssignment", "Method", "Partitioner", "PartitionerConfig", "SurplusPolicy", "edge2d_assign",
    "fpp_assign", "partition_stream", "plane_size_for", "psi", "torus_assign",
    "ProjPlane", "ProjPoint", "build_plane", "line_intersection", "normalize",
]
