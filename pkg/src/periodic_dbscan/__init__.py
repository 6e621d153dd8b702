"""DBSCAN for point clouds in boxes with open and/or periodic boundaries."""

from ._backend import available as available_backends
from .datagen import PRESETS, BlobSpec, generate_blobs, generate_uniform, get_preset
from .dbscan import NOISE, DbscanParams, dbscan
from .exceptions import InputError, InputShapeError, ParameterError, PeriodicDBSCANError
from .geometry import BoundarySpec, DomainSpec, min_image_distance, wrap_points
from .index import NeighborIndex, build_index, query_radius
from .oracle import ClusterComparison, compare_clusterings, dbscan_bruteforce
from .pbc import (
    LinkTable,
    PaddedSet,
    PeriodicClustering,
    cluster_periodic,
    dbscan_periodic,
    extend_periodic,
    link_labels,
    resolve_labels,
)

__version__ = "0.1.0"

__all__ = [
    "NOISE",
    "PRESETS",
    "BlobSpec",
    "BoundarySpec",
    "ClusterComparison",
    "DbscanParams",
    "DomainSpec",
    "InputError",
    "InputShapeError",
    "LinkTable",
    "NeighborIndex",
    "PaddedSet",
    "ParameterError",
    "PeriodicClustering",
    "PeriodicDBSCANError",
    "available_backends",
    "build_index",
    "cluster_periodic",
    "compare_clusterings",
    "dbscan",
    "dbscan_bruteforce",
    "dbscan_periodic",
    "extend_periodic",
    "generate_blobs",
    "generate_uniform",
    "get_preset",
    "link_labels",
    "min_image_distance",
    "query_radius",
    "resolve_labels",
    "wrap_points",
]
