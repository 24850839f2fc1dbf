"""Comparison methods: joint SVD projection and within-network splits.

The "none" baseline has no code of its own; it is the regular pipeline
with the transformation step switched off (see :mod:`tranet.pipeline`).

Unlike the main pipeline, :func:`svd_transform` is transductive: it needs
the target network's features while fitting the projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, SchemaMismatchError, SplitError
from .features import Column, FeatureMatrix, check_schema


@dataclass(frozen=True)
class SvdConfig:
    rank: int = 10
    standardize: bool = True

    def __post_init__(self):
        if self.rank < 1:
            raise ConfigError("SVD rank must be >= 1")


def truncated_svd(M, k):
    """Rank-``k`` thin SVD ``(U_k, s_k, Vt_k)`` with non-increasing singular values."""
    M = np.asarray(M, dtype=np.float64)
    if not 1 <= k <= min(M.shape):
        raise ConfigError(f"rank {k} outside [1, {min(M.shape)}] for a {M.shape} matrix")
    u, s, vt = np.linalg.svd(M, full_matrices=False)
    return u[:, :k], s[:k], vt[:k]


def standardize_columns(M):
    """Z-score each column; zero-variance columns are only centered."""
    mu = M.mean(axis=0)
    sd = M.std(axis=0)
    sd[sd == 0] = 1.0
    return (M - mu) / sd


def svd_transform(f_source, f_target, cfg=None):
    """Project source and target rows onto a shared rank-k latent space.

    Source rows are stacked above target rows, optionally standardized, and
    replaced by the rows of ``U_k * s_k``.
    """
    cfg = cfg or SvdConfig()
    try:
        check_schema(f_source.names, f_target.names)
    except SchemaMismatchError as exc:
        raise SchemaMismatchError(f"source and target schemas differ: {exc}") from None
    M = np.vstack([f_source.values, f_target.values])
    if cfg.rank > min(M.shape):
        raise ConfigError(f"rank {cfg.rank} exceeds min(rows, columns) = {min(M.shape)}")
    if cfg.standardize:
        M = standardize_columns(M)
    u, s, _ = truncated_svd(M, cfg.rank)
    z = u * s
    cols = [Column(f"latent{j}", "svd") for j in range(cfg.rank)]
    ns = f_source.shape[0]
    return (FeatureMatrix(z[:ns], cols, f_source.node_ids),
            FeatureMatrix(z[ns:], cols, f_target.node_ids))


def within_network_split(y, train_fraction=0.8, repeats=10, seed=0):
    """Stratified random train/test splits of the rows labelled in ``y``.

    Each class contributes ``round(train_fraction * n_c)`` rows to training
    (the minority class rounds up), clipped so that every class keeps at least
    one row on each side. Returns a list of ``(train_idx, test_idx)``.
    """
    y = np.asarray(y).ravel()
    if not 0 < train_fraction < 1:
        raise ConfigError("train_fraction must lie in (0, 1)")
    if repeats < 1:
        raise ConfigError("repeats must be >= 1")
    classes, sizes = np.unique(y, return_counts=True)
    if len(classes) < 2:
        raise SplitError("splitting needs at least two classes")
    if sizes.min() < 2:
        raise SplitError(f"class {classes[sizes.argmin()]} has fewer than 2 instances")
    minority = classes[np.argmin(sizes)]
    members = {c: np.flatnonzero(y == c) for c in classes}
    n_train = {}
    for c, nc in zip(classes, sizes):
        want = math.ceil(train_fraction * nc) if c == minority else math.floor(train_fraction * nc + 0.5)
        n_train[c] = min(max(want, 1), nc - 1)

    splits = []
    for r in range(repeats):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(r,)))
        train = []
        for c in classes:
            train.append(rng.permutation(members[c])[:n_train[c]])
        train = np.sort(np.concatenate(train))
        test = np.setdiff1d(np.arange(len(y)), train)
        splits.append((train, test))
    return splits
