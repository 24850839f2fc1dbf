"""
PageRank that does not shrink with the network
==============================================

Raw PageRank sums to one, so values get smaller as networks grow. Dividing
by the lower bound ``(1 - d) / n`` removes the size effect.
"""

from tranet.features import pagerank
from tranet.graph import Graph
from tranet.synthetic import SyntheticConfig, generate_planted_network
from tranet.transform import normalized_pagerank


def complete(n):
    return Graph.from_edges([(u, v) for u in range(n) for v in range(n) if u != v])


for n in (5, 50, 200):
    pr = pagerank(complete(n))
    print(f"K_{n:<4d} pagerank {pr[0]:.5f}   normalized {normalized_pagerank(pr, n, 0.85)[0]:.5f}")

# the normalized value never drops below 1; mass spread by dangling nodes lifts the floor
for n in (1000, 10000):
    g, _ = generate_planted_network(SyntheticConfig(n, 3, seed=n))
    npr = normalized_pagerank(pagerank(g), n, 0.85)
    print(f"planted n={n:<6d} min {npr.min():.4f}  median {sorted(npr)[n // 2]:.3f}  max {npr.max():.1f}")
