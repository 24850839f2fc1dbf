"""Base structural node features and the feature-matrix container."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, ConvergenceError, ParseError, SchemaMismatchError
from .graph import neighbor_matrix

BASE_KINDS = ("degree", "indegree", "outdegree", "clustering", "pagerank")

# transform name -> tag used in column names
TRANSFORM_TAGS = {
    "raw": "raw",
    "power_law": "pl",
    "normalized_pagerank": "npr",
    "identity": "id",
    "svd": "svd",
}
_TAG_TRANSFORMS = {v: k for k, v in TRANSFORM_TAGS.items()}


@dataclass(frozen=True)
class Column:
    kind: str
    transform: str = "raw"
    round: int = 0

    @property
    def name(self):
        return f"{self.kind}.{TRANSFORM_TAGS[self.transform]}.r{self.round}"

    @classmethod
    def parse(cls, name):
        try:
            kind, tag, r = name.split(".")
            if not r.startswith("r"):
                raise ValueError
            return cls(kind, _TAG_TRANSFORMS[tag], int(r[1:]))
        except (ValueError, KeyError):
            raise ParseError(f"bad feature column name {name!r}") from None


@dataclass(frozen=True)
class FeatureMatrix:
    """``n x m`` table of per-node features with a named column schema.

    Rows follow the internal node indices of the graph the features came
    from; ``node_ids`` keeps the external identifiers.
    """

    values: np.ndarray
    columns: tuple
    node_ids: tuple

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim != 2:
            raise ValueError("feature values must be a 2-D array")
        if values.shape[1] != len(self.columns):
            raise SchemaMismatchError(
                f"{values.shape[1]} value columns but {len(self.columns)} schema entries")
        if values.shape[0] != len(self.node_ids):
            raise ValueError("row count does not match node_ids")
        if not np.all(np.isfinite(values)):
            raise ValueError("feature matrix contains NaN or infinite entries")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "node_ids", tuple(self.node_ids))

    @property
    def names(self):
        return [c.name for c in self.columns]

    @property
    def shape(self):
        return self.values.shape

    def column(self, name):
        return self.values[:, self.names.index(name)]

    def round_block(self, r):
        """Sub-matrix holding the columns of aggregation round ``r``."""
        idx = [i for i, c in enumerate(self.columns) if c.round == r]
        return FeatureMatrix(self.values[:, idx], [self.columns[i] for i in idx], self.node_ids)

    def rows(self, idx):
        idx = np.asarray(idx)
        return FeatureMatrix(self.values[idx], self.columns,
                             [self.node_ids[i] for i in idx.tolist()])


def check_schema(expected, got):
    """Raise :class:`SchemaMismatchError` naming the first differing column."""
    expected, got = list(expected), list(got)
    for i, (a, b) in enumerate(zip(expected, got)):
        if a != b:
            raise SchemaMismatchError(f"column {i}: expected {a!r}, got {b!r}")
    if len(expected) != len(got):
        i = min(len(expected), len(got))
        missing = expected[i] if len(expected) > i else got[i]
        raise SchemaMismatchError(
            f"column {i}: {missing!r} present on one side only "
            f"({len(expected)} expected vs {len(got)} columns)")


# ----------------------------------------------------------------------
# feature computation

@dataclass(frozen=True)
class PageRankConfig:
    damping: float = 0.85
    tolerance: float = 1e-10
    max_iterations: int = 200

    def __post_init__(self):
        if not 0 < self.damping < 1:
            raise ConfigError("damping must lie in (0, 1)")
        if self.tolerance <= 0:
            raise ConfigError("tolerance must be positive")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be >= 1")


def degree_features(g):
    """Return ``(degree, indegree, outdegree)`` as float arrays.

    Distinct neighbors are counted, so a self-loop adds one to each of
    in- and out-degree.
    """
    indeg = g.in_degree().astype(np.float64)
    outdeg = g.out_degree().astype(np.float64)
    return indeg + outdeg, indeg, outdeg


def local_clustering(g):
    """Local clustering coefficient on the undirected projection of ``g``."""
    u = neighbor_matrix(g, "all")
    k = np.asarray(u.sum(axis=1)).ravel()
    # number of triangles through v = (U^2 .* U) row sum / 2
    tri = np.asarray((u @ u).multiply(u).sum(axis=1)).ravel() / 2.0
    c = np.zeros(g.n)
    ok = k >= 2
    c[ok] = 2.0 * tri[ok] / (k[ok] * (k[ok] - 1.0))
    return c


def pagerank(g, cfg=None):
    """PageRank by power iteration.

    Teleportation is uniform and the mass of dangling nodes is spread
    uniformly over all nodes. Stops once the L1 change between iterations
    drops below ``cfg.tolerance``.
    """
    cfg = cfg or PageRankConfig()
    n = g.n
    if n < 1:
        raise ConfigError("pagerank needs at least one node")
    d = cfg.damping
    a = g.adjacency()
    outdeg = np.asarray(a.sum(axis=1)).ravel()
    dangling = outdeg == 0
    inv = np.zeros(n)
    inv[~dangling] = 1.0 / outdeg[~dangling]
    pt = sp.csr_matrix((sp.diags(inv) @ a).T)

    x = np.full(n, 1.0 / n)
    residual = np.inf
    for _ in range(cfg.max_iterations):
        new = d * (pt @ x + x[dangling].sum() / n) + (1.0 - d) / n
        residual = np.abs(new - x).sum()
        x = new
        if residual < cfg.tolerance:
            return x
    raise ConvergenceError(f"pagerank did not converge in {cfg.max_iterations} iterations",
                           residual)


def extract_base_features(g, cfg=None):
    """The five raw base features of every node, in canonical column order."""
    degree, indeg, outdeg = degree_features(g)
    values = np.column_stack([degree, indeg, outdeg, local_clustering(g), pagerank(g, cfg)])
    return FeatureMatrix(values, [Column(k) for k in BASE_KINDS], g.node_ids)


# ----------------------------------------------------------------------
# CSV

def write_feature_csv(f, dest):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["node_id"] + f.names)
    for node, row in zip(f.node_ids, f.values):
        w.writerow([node] + [format(x, ".17g") for x in row])
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="") as fh:
            fh.write(buf.getvalue())
    else:
        dest.write(buf.getvalue())


def read_feature_csv(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, encoding="utf-8", newline="") as fh:
            rows = list(csv.reader(fh))
    else:
        rows = list(csv.reader(io.StringIO(source.read())))
    if not rows or rows[0][:1] != ["node_id"]:
        raise ParseError("feature CSV must start with a 'node_id' header")
    columns = [Column.parse(name) for name in rows[0][1:]]
    try:
        values = np.array([[float(x) for x in r[1:]] for r in rows[1:]], dtype=np.float64)
    except ValueError as exc:
        raise ParseError(f"bad number in feature CSV: {exc}") from None
    values = values.reshape(len(rows) - 1, len(columns))
    return FeatureMatrix(values, columns, [r[0] for r in rows[1:]])

