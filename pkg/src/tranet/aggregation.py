"""Recursive neighborhood aggregation.

Each round appends, for every column of the previous round, the mean of
that column over a node's neighbors. Nodes without neighbors get 0.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, SchemaMismatchError
from .features import BASE_KINDS, FeatureMatrix
from .graph import DIRECTIONS, neighbor_matrix


@dataclass(frozen=True)
class AggregationConfig:
    r_max: int = 5
    direction: str = "all"

    def __post_init__(self):
        if self.r_max < 0:
            raise ConfigError("r_max must be >= 0")
        if self.direction not in DIRECTIONS:
            raise ConfigError(f"direction must be one of {DIRECTIONS}")


class MeanOperator:
    """Neighbor mean as a 0/1 neighbor matrix followed by division by degree.

    Summing first and dividing once keeps, e.g., the mean of 1, 2, 3 exactly 2.
    """

    def __init__(self, g, direction="all"):
        self.nb = sp.csr_matrix(neighbor_matrix(g, direction))
        self.k = np.asarray(self.nb.sum(axis=1)).ravel()

    def __matmul__(self, cols):
        cols = np.asarray(cols, dtype=np.float64)
        sums = self.nb @ cols
        k = self.k if cols.ndim == 1 else self.k[:, None]
        return np.divide(sums, k, out=np.zeros_like(sums), where=k > 0)


def mean_operator(g, direction="all"):
    """Operator averaging over neighbors (0 for isolated nodes); apply with ``@``."""
    return MeanOperator(g, direction)


def aggregate_once(g, cols, direction="all"):
    """Neighbor mean of each column of ``cols`` (an ``n`` or ``n x c`` array)."""
    cols = np.asarray(cols, dtype=np.float64)
    if cols.shape[0] != g.n:
        raise ValueError(f"columns have {cols.shape[0]} rows, graph has {g.n} nodes")
    return mean_operator(g, direction) @ cols


def recursive_aggregate(g, f, cfg=None):
    """Append ``cfg.r_max`` rounds of neighbor means to the base columns of ``f``."""
    cfg = cfg or AggregationConfig()
    if [c.kind for c in f.columns] != list(BASE_KINDS) or any(c.round for c in f.columns):
        raise SchemaMismatchError("recursive_aggregate expects the 5 base columns at round 0")
    op = mean_operator(g, cfg.direction)
    blocks = [f.values]
    columns = list(f.columns)
    for r in range(1, cfg.r_max + 1):
        blocks.append(op @ blocks[-1])
        columns.extend(replace(c, round=r) for c in f.columns)
    return FeatureMatrix(np.hstack(blocks), columns, f.node_ids)
