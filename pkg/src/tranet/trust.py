"""EigenTrust scores on signed networks, thresholded into trust labels."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, ConvergenceError


@dataclass(frozen=True)
class TrustConfig:
    pre_trust_weight: float = 0.15
    tolerance: float = 1e-10
    max_iterations: int = 1000
    trusted_fraction: float = 0.2

    def __post_init__(self):
        if not 0 <= self.pre_trust_weight < 1:
            raise ConfigError("pre_trust_weight must lie in [0, 1)")
        if not 0 < self.trusted_fraction < 1:
            raise ConfigError("trusted_fraction must lie in (0, 1)")
        if self.tolerance <= 0 or self.max_iterations < 1:
            raise ConfigError("tolerance and max_iterations must be positive")


def normalized_trust(g):
    """Row-normalized positive local trust and the mask of rows without any.

    Local trust is the edge sign; negative trust and self-loops are dropped
    before normalizing. Rows flagged in the mask behave like the pre-trust
    vector.
    """
    keep = (g.sign > 0) & (g.src != g.dst)
    c = sp.csr_matrix((np.ones(int(keep.sum())), (g.src[keep], g.dst[keep])), shape=(g.n, g.n))
    rowsum = np.asarray(c.sum(axis=1)).ravel()
    empty = rowsum == 0
    inv = np.divide(1.0, rowsum, out=np.zeros_like(rowsum), where=~empty)
    return sp.csr_matrix(sp.diags(inv) @ c), empty


def eigentrust(g, cfg=None):
    """Global trust vector, the fixed point of ``t = (1 - a) C^T t + a p``.

    ``p`` is uniform. Iterates from ``t = p`` until the L1 change is below
    ``cfg.tolerance``.
    """
    cfg = cfg or TrustConfig()
    n = g.n
    if n < 1:
        raise ConfigError("eigentrust needs at least one node")
    a = cfg.pre_trust_weight
    c, empty = normalized_trust(g)
    ct = sp.csr_matrix(c.T)
    p = np.full(n, 1.0 / n)
    t = p.copy()
    residual = np.inf
    for _ in range(cfg.max_iterations):
        new = (1.0 - a) * (ct @ t + t[empty].sum() * p) + a * p
        residual = np.abs(new - t).sum()
        t = new
        if residual < cfg.tolerance:
            return t
    raise ConvergenceError(f"eigentrust did not converge in {cfg.max_iterations} iterations",
                           residual)


def threshold_labels(scores, q):
    """Label the ``ceil(q * n)`` best-scored nodes 2 (trusted), the rest 1.

    Ties go to the smaller index.
    """
    scores = np.asarray(scores, dtype=np.float64)
    if not 0 < q < 1:
        raise ConfigError("trusted fraction must lie in (0, 1)")
    if not np.all(np.isfinite(scores)):
        raise ValueError("scores must be finite")
    n = len(scores)
    labels = np.ones(n, dtype=np.int64)
    labels[np.argsort(-scores, kind="stable")[:math.ceil(q * n)]] = 2
    return labels
