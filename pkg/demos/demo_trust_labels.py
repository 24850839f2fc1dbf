"""
Trusted users from a signed network
===================================

Positive edges are endorsements, negative ones are distrust. EigenTrust
spreads the positive trust around; the top fraction becomes the label
"trusted" (2) and everyone else gets 1.
"""

import numpy as np

from tranet.graph import Graph
from tranet.trust import TrustConfig, eigentrust, threshold_labels

edges = [
    ("ann", "bob", 1), ("bob", "ann", 1), ("cat", "ann", 1), ("cat", "bob", 1),
    ("dan", "ann", 1), ("eve", "bob", 1), ("eve", "cat", 1),
    ("ann", "mal", -1), ("bob", "mal", -1), ("cat", "mal", -1),
    ("mal", "mal", 1),  # a self-endorsement carries no weight
]
g = Graph.from_edges(edges, signed=True)
cfg = TrustConfig(trusted_fraction=0.3)
t = eigentrust(g, cfg)
labels = threshold_labels(t, cfg.trusted_fraction)

for i in np.argsort(-t, kind="stable"):
    print(f"{g.node_ids[i]:4s} {t[i]:.4f}  label {labels[i]}")
print("sum of scores:", round(t.sum(), 12))
