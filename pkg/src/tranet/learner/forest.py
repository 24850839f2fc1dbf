"""Random forest of Gini CART trees with JSON persistence.

Trees split on ``x <= threshold`` where thresholds are midpoints between
consecutive distinct values. Among equally good splits the lowest column
index, then the lowest threshold, wins. Tree ``i`` draws its randomness from
``SeedSequence(seed, spawn_key=(i,))`` so trees are independent of training
order.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field

import numpy as np
from numba import njit

from ..errors import ConfigError, ModelFormatError, SchemaMismatchError, TrainingError
from ..features import check_schema

FORMAT_VERSION = 1


@dataclass(frozen=True)
class ForestConfig:
    n_trees: int = 100
    max_depth: int = 25
    min_samples_leaf: int = 1
    max_features: int | None = None  # None: floor(sqrt(m))
    bootstrap: bool = True
    seed: int = 0

    def __post_init__(self):
        if self.n_trees < 1 or self.max_depth < 1 or self.min_samples_leaf < 1:
            raise ConfigError("n_trees, max_depth and min_samples_leaf must be >= 1")
        if self.max_features is not None and self.max_features < 1:
            raise ConfigError("max_features must be >= 1")

    def features_per_split(self, m):
        if self.max_features is None:
            return max(1, math.isqrt(m))
        return min(self.max_features, m)


@dataclass
class Tree:
    """Flat binary tree; ``feature[i] == -1`` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray  # (n_nodes, k) class counts, zero rows on internal nodes

    @property
    def n_nodes(self):
        return len(self.feature)

    def apply(self, X):
        """Leaf index reached by every row of ``X``."""
        X = np.ascontiguousarray(X, dtype=np.float64)
        return _apply(X, self.feature, self.threshold, self.left, self.right)

    def predict_proba(self, X):
        c = self.counts[self.apply(X)].astype(np.float64)
        return c / c.sum(axis=1, keepdims=True)


@dataclass
class TrainedModel:
    trees: list
    schema: tuple
    k: int
    config: ForestConfig
    metadata: dict = field(default_factory=dict)


_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)


@njit(cache=True)
def _splitmix(state):
    # state is a 1-element uint64 array, advanced in place
    state[0] += _GOLDEN
    z = state[0]
    z = (z ^ (z >> np.uint64(30))) * _MIX1
    z = (z ^ (z >> np.uint64(27))) * _MIX2
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _sample_features(m, mtry, state, out):
    # partial Fisher-Yates, then sorted so ties resolve by column index
    perm = np.arange(m)
    for i in range(mtry):
        r = _splitmix(state) >> np.uint64(11)
        j = i + int(r * (1.0 / 9007199254740992.0) * (m - i))
        tmp = perm[i]
        perm[i] = perm[j]
        perm[j] = tmp
    out[:mtry] = np.sort(perm[:mtry])


@njit(cache=True)
def _best_split(X, y, order, lo, hi, features, k, min_leaf, total, left):
    # order[f, lo:hi] lists the node's rows sorted by column f
    n = hi - lo
    eps = 1e-12 * n
    best_score = -1.0
    best_feature = -1
    best_threshold = 0.0
    for f in features:
        left[:] = 0.0
        for pos in range(n - 1):
            row = order[f, lo + pos]
            left[y[row]] += 1.0
            v = X[row, f]
            vn = X[order[f, lo + pos + 1], f]
            if vn <= v:
                continue
            nl = pos + 1
            nr = n - nl
            if nl < min_leaf or nr < min_leaf:
                continue
            sl = 0.0
            sr = 0.0
            for c in range(k):
                sl += left[c] * left[c]
                r = total[c] - left[c]
                sr += r * r
            # n * weighted child Gini = n - score, so maximize score
            score = sl / nl + sr / nr
            if score > best_score + eps:
                best_score = score
                best_feature = f
                thr = 0.5 * (v + vn)
                if thr >= vn:
                    thr = v
                best_threshold = thr
    return best_feature, best_threshold


@njit(cache=True)
def _grow(X, y, multiplicity, presorted, k, max_depth, min_leaf, mtry, seed):
    N, m = X.shape
    n = 0
    for r in range(N):
        n += multiplicity[r]
    # per-feature sorted sample lists; bootstrap duplicates appear repeatedly
    order = np.empty((m, n), dtype=np.int64)
    for f in range(m):
        j = 0
        for r in presorted[f]:
            for _ in range(multiplicity[r]):
                order[f, j] = r
                j += 1

    cap = 2 * n + 1
    feature = np.full(cap, -1, dtype=np.int64)
    threshold = np.zeros(cap)
    left = np.full(cap, -1, dtype=np.int64)
    right = np.full(cap, -1, dtype=np.int64)
    counts = np.zeros((cap, k), dtype=np.int64)
    state = np.array([seed], dtype=np.uint64)
    feats = np.arange(m)
    sampled = np.empty(mtry, dtype=np.int64)
    total = np.zeros(k)
    lcount = np.zeros(k)
    goes_left = np.zeros(N, dtype=np.bool_)
    buf = np.empty(n, dtype=np.int64)

    # stack of (lo, hi, depth, node); left child is processed first
    stack = np.empty((cap, 4), dtype=np.int64)
    stack[0, 0] = 0
    stack[0, 1] = n
    stack[0, 2] = 0
    stack[0, 3] = 0
    top = 1
    n_nodes = 1
    while top > 0:
        top -= 1
        lo = stack[top, 0]
        hi = stack[top, 1]
        depth = stack[top, 2]
        node = stack[top, 3]
        total[:] = 0.0
        for i in range(lo, hi):
            total[y[order[0, i]]] += 1.0
        distinct = 0
        for c in range(k):
            if total[c] > 0:
                distinct += 1
        if depth >= max_depth or distinct <= 1 or hi - lo < 2 * min_leaf:
            for c in range(k):
                counts[node, c] = int(total[c])
            continue
        if mtry < m:
            _sample_features(m, mtry, state, sampled)
            use = sampled
        else:
            use = feats
        f, thr = _best_split(X, y, order, lo, hi, use, k, min_leaf, total, lcount)
        if f < 0:
            for c in range(k):
                counts[node, c] = int(total[c])
            continue
        for i in range(lo, hi):
            r = order[0, i]
            goes_left[r] = X[r, f] <= thr
        mid = lo
        for g in range(m):
            a = lo
            b = 0
            for i in range(lo, hi):
                r = order[g, i]
                if goes_left[r]:
                    order[g, a] = r
                    a += 1
                else:
                    buf[b] = r
                    b += 1
            order[g, a:hi] = buf[:b]
            mid = a
        feature[node] = f
        threshold[node] = thr
        left[node] = n_nodes
        right[node] = n_nodes + 1
        n_nodes += 2
        stack[top, 0] = mid
        stack[top, 1] = hi
        stack[top, 2] = depth + 1
        stack[top, 3] = right[node]
        top += 1
        stack[top, 0] = lo
        stack[top, 1] = mid
        stack[top, 2] = depth + 1
        stack[top, 3] = left[node]
        top += 1
    return (feature[:n_nodes].copy(), threshold[:n_nodes].copy(), left[:n_nodes].copy(),
            right[:n_nodes].copy(), counts[:n_nodes].copy())


@njit(cache=True)
def _apply(X, feature, threshold, left, right):
    out = np.empty(X.shape[0], dtype=np.int64)
    for i in range(X.shape[0]):
        node = 0
        while feature[node] >= 0:
            if X[i, feature[node]] <= threshold[node]:
                node = left[node]
            else:
                node = right[node]
        out[i] = node
    return out


def grow_tree(X, y, k, cfg, seed, sample=None, presorted=None):
    """Grow one CART tree (class indices ``y`` in 0..k-1).

    ``sample`` lists the training rows, with repeats for bootstrap draws;
    ``seed`` is the 64-bit state of the per-tree feature-sampling stream.
    ``presorted`` (the stable column-wise argsort of ``X``, transposed) can be
    shared between trees of one forest.
    """
    n, m = X.shape
    if sample is None:
        multiplicity = np.ones(n, dtype=np.int64)
    else:
        multiplicity = np.bincount(np.asarray(sample, dtype=np.int64), minlength=n)
    if presorted is None:
        presorted = presort(X)
    parts = _grow(X, np.asarray(y, dtype=np.int64), multiplicity, presorted, k,
                  cfg.max_depth, cfg.min_samples_leaf, cfg.features_per_split(m), np.uint64(seed))
    return Tree(*parts)


def presort(X):
    return np.ascontiguousarray(np.argsort(X, axis=0, kind="stable").T)


def tree_rng(seed, index):
    """Independent generator for tree ``index`` of a forest seeded with ``seed``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(index,)))


def _as_arrays(f):
    X = f.values if hasattr(f, "values") else np.asarray(f, dtype=np.float64)
    names = tuple(f.names) if hasattr(f, "names") else tuple(f"x{j}" for j in range(X.shape[1]))
    return np.ascontiguousarray(X, dtype=np.float64), names


def train_forest(f, y, cfg=None, metadata=None):
    """Train a forest on feature matrix ``f`` and labels ``y`` (ints in 1..k).

    ``f`` may be a :class:`~tranet.features.FeatureMatrix` or a plain 2-D array
    (columns are then named ``x0, x1, ...``).
    """
    cfg = cfg or ForestConfig()
    X, names = _as_arrays(f)
    y = np.asarray(y, dtype=np.int64).ravel()
    if len(y) != X.shape[0]:
        raise TrainingError(f"{X.shape[0]} feature rows but {len(y)} labels")
    if np.any(y < 1):
        raise TrainingError("labels must be integers >= 1")
    if len(np.unique(y)) < 2:
        raise TrainingError("training needs at least two distinct classes")
    k = int(y.max())
    yi = y - 1
    n = len(y)
    presorted = presort(X)
    trees = []
    for i in range(cfg.n_trees):
        rng = tree_rng(cfg.seed, i)
        sample = rng.integers(0, n, n) if cfg.bootstrap else None
        seed = int(rng.integers(0, 2**63))
        trees.append(grow_tree(X, yi, k, cfg, seed, sample, presorted))
    return TrainedModel(trees, names, k, cfg, dict(metadata or {}))


def predict_proba(model, f):
    """``n x k`` class probabilities: leaf class frequencies averaged over trees."""
    X, names = _as_arrays(f)
    if hasattr(f, "names"):
        check_schema(model.schema, names)
    elif X.shape[1] != len(model.schema):
        raise SchemaMismatchError(
            f"model expects {len(model.schema)} columns, got {X.shape[1]}")
    out = np.zeros((X.shape[0], model.k))
    for t in model.trees:
        out += t.predict_proba(X)
    return out / len(model.trees)


def predict_labels(proba):
    """Arg-max class (1-based); ties go to the smaller class."""
    return np.argmax(proba, axis=1) + 1


# ----------------------------------------------------------------------
# persistence

def _tree_to_json(t):
    nodes = []
    for i in range(t.n_nodes):
        if t.feature[i] < 0:
            nodes.append({"leaf_counts": t.counts[i].tolist()})
        else:
            nodes.append({"col": int(t.feature[i]), "thr": repr(float(t.threshold[i])),
                          "left": int(t.left[i]), "right": int(t.right[i])})
    return {"nodes": nodes}


def save_model(model):
    payload = {
        "format_version": FORMAT_VERSION,
        "k": model.k,
        "schema": list(model.schema),
        "config": asdict(model.config),
        "metadata": model.metadata,
        "trees": [_tree_to_json(t) for t in model.trees],
    }
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def _tree_from_json(obj, k, m):
    nodes = obj["nodes"]
    n = len(nodes)
    if n == 0:
        raise ModelFormatError("tree without nodes")
    feature = np.full(n, -1, dtype=np.int64)
    threshold = np.zeros(n)
    left = np.full(n, -1, dtype=np.int64)
    right = np.full(n, -1, dtype=np.int64)
    counts = np.zeros((n, k), dtype=np.int64)
    for i, nd in enumerate(nodes):
        if "leaf_counts" in nd:
            c = [int(x) for x in nd["leaf_counts"]]
            if len(c) != k or min(c) < 0 or sum(c) == 0:
                raise ModelFormatError(f"bad leaf counts at node {i}")
            counts[i] = c
        else:
            feature[i], threshold[i] = int(nd["col"]), float(nd["thr"])
            left[i], right[i] = int(nd["left"]), int(nd["right"])
            if not 0 <= feature[i] < m:
                raise ModelFormatError(f"column index {feature[i]} out of range at node {i}")
            if not (i < left[i] < n and i < right[i] < n):
                raise ModelFormatError(f"bad child index at node {i}")
    return Tree(feature, threshold, left, right, counts)


def load_model(data):
    """Inverse of :func:`save_model`; raises :class:`ModelFormatError` on bad input."""
    try:
        if isinstance(data, (bytes, bytearray)):
            data = data.decode("utf-8")
        obj = json.loads(data)
        if obj.get("format_version") != FORMAT_VERSION:
            raise ModelFormatError(
                f"unsupported model format version {obj.get('format_version')!r}")
        k = int(obj["k"])
        schema = tuple(obj["schema"])
        cfg = ForestConfig(**obj["config"])
        trees = [_tree_from_json(t, k, len(schema)) for t in obj["trees"]]
        if not trees:
            raise ModelFormatError("model has no trees")
        return TrainedModel(trees, schema, k, cfg, dict(obj.get("metadata", {})))
    except ModelFormatError:
        raise
    except (ValueError, KeyError, TypeError, AttributeError, ConfigError) as exc:
        raise ModelFormatError(f"malformed model payload: {exc}") from None
