"""Open-boundary DBSCAN on top of the grid index.

``min_points`` counts the point itself, as scikit-learn does. Labels are
deterministic: clusters are numbered 0, 1, ... in the order of their
lowest-index core point, and a border point reachable from several clusters
joins the lowest-numbered one. Noise is ``-1``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ParameterError
from .geometry import as_points
from .index import NeighborIndex, check_epsilon

NOISE = -1


@dataclass(frozen=True)
class DbscanParams:
    epsilon: float
    min_points: int = 5

    def __post_init__(self):
        object.__setattr__(self, "epsilon", check_epsilon(self.epsilon))
        mp = self.min_points
        if isinstance(mp, bool) or int(mp) != mp or mp < 1:
            raise ParameterError(f"min_points must be an integer >= 1, got {mp!r}")
        object.__setattr__(self, "min_points", int(mp))


def core_mask(index: NeighborIndex, min_points: int, n_query=None) -> np.ndarray:
    return index.neighbor_counts(n_query) >= min_points


def dbscan(points, params: DbscanParams, backend=None) -> np.ndarray:
    """Cluster ``points`` (shape ``(N, D)``) with open boundaries.

    Returns an int64 label array of length N.
    """
    X = as_points(points)
    if len(X) == 0:
        return np.zeros(0, dtype=np.int64)
    index = NeighborIndex(X, params.epsilon, backend=backend)
    return index.expand_clusters(core_mask(index, params.min_points))
