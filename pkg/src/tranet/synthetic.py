"""Planted-role preferential-attachment networks.

Small stand-ins for role data such as admins among normal users: the
highest-degree nodes carry label 2, everybody else label 1, and a fraction
of labels is flipped uniformly at random.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .graph import Graph


@dataclass(frozen=True)
class SyntheticConfig:
    n_nodes: int
    attachment_edges_per_node: int = 2
    hub_fraction: float = 0.1
    noise_rate: float = 0.0
    seed: int = 0

    def validate(self):
        if self.n_nodes < 1 or self.attachment_edges_per_node < 1:
            raise ConfigError("n_nodes and attachment_edges_per_node must be positive")
        if self.attachment_edges_per_node >= self.n_nodes:
            raise ConfigError("attachment_edges_per_node must be smaller than n_nodes")
        if not 0 < self.hub_fraction < 1:
            raise ConfigError("hub_fraction must lie in (0, 1)")
        if not 0 <= self.noise_rate < 1:
            raise ConfigError("noise_rate must lie in [0, 1)")
        return self


def _attach(n, m, rng):
    # Each node sits in the pool once, plus once per in-edge received, so a
    # uniform draw from the pool is proportional to in-degree + 1.
    pool = np.empty(n + n * m, dtype=np.int64)
    pool[0] = 0
    size = 1
    src, dst = [], []
    for i in range(1, n):
        k = min(m, i)
        chosen = []
        while len(chosen) < k:
            t = int(pool[int(rng.random() * size)])
            if t not in chosen:
                chosen.append(t)
        for t in chosen:
            src.append(i)
            dst.append(t)
            pool[size] = t
            size += 1
        pool[size] = i
        size += 1
    return src, dst


def hub_count(n, fraction):
    """Number of planted hubs: ``fraction * n`` rounded half up, at least one."""
    return max(1, math.floor(fraction * n + 0.5))


def generate_planted_network(cfg):
    """Generate ``(graph, labels)`` for a :class:`SyntheticConfig`.

    Node ``i`` of the generator has internal index ``i``; labels are an int
    array aligned to those indices. Fully determined by ``cfg.seed``.
    """
    cfg.validate()
    n, m = cfg.n_nodes, cfg.attachment_edges_per_node
    rng = np.random.default_rng(cfg.seed)
    src, dst = _attach(n, m, rng)
    g = Graph(range(n), src, dst)

    degree = g.in_degree() + g.out_degree()
    order = np.argsort(-degree, kind="stable")
    labels = np.ones(n, dtype=np.int64)
    labels[order[:hub_count(n, cfg.hub_fraction)]] = 2

    n_flip = int(round(cfg.noise_rate * n))
    if n_flip:
        flip = rng.choice(n, size=n_flip, replace=False)
        labels[flip] = 3 - labels[flip]
    return g, labels
