import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import dense_eigentrust
from tranet.errors import ConfigError, ConvergenceError
from tranet.graph import Graph
from tranet.trust import TrustConfig, eigentrust, threshold_labels


def signed_graph(n, edges):
    return Graph.from_edges(edges, node_ids=range(n), signed=True)


def random_signed(n, p, rng):
    return [(u, v, int(rng.choice([-1, 1], p=[0.3, 0.7])))
            for u in range(n) for v in range(n) if rng.random() < p]


def test_complete_positive_is_uniform():
    n = 6
    g = signed_graph(n, [(u, v, 1) for u in range(n) for v in range(n) if u != v])
    assert np.allclose(eigentrust(g), 1 / n, rtol=0, atol=1e-12)


def test_three_users_match_dense():
    edges = [(0, 1, 1), (0, 2, 1), (1, 2, 1), (2, 1, 1)]
    t = eigentrust(signed_graph(3, edges))
    assert np.max(np.abs(t - dense_eigentrust(3, edges))) <= 1e-8


def test_negative_only_user_is_minimum():
    # user 3 is distrusted by everyone, all others receive positive trust
    edges = [(0, 1, 1), (1, 2, 1), (2, 0, 1), (0, 3, -1), (1, 3, -1), (2, 3, -1)]
    t = eigentrust(signed_graph(4, edges))
    assert np.argmin(t) == 3 and np.sum(t == t.min()) == 1
    assert np.max(np.abs(t - dense_eigentrust(4, edges))) <= 1e-8


def test_self_loops_ignored():
    edges = [(0, 1, 1), (1, 0, 1), (2, 0, 1)]
    a = eigentrust(signed_graph(3, edges))
    b = eigentrust(signed_graph(3, edges + [(2, 2, 1), (1, 1, 1)]))
    assert np.allclose(a, b, rtol=0, atol=1e-15)


def test_config_and_convergence_errors():
    with pytest.raises(ConfigError):
        TrustConfig(pre_trust_weight=1.0)
    with pytest.raises(ConfigError):
        TrustConfig(trusted_fraction=0)
    g = signed_graph(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1), (0, 2, 1)])
    with pytest.raises(ConvergenceError) as err:
        eigentrust(g, TrustConfig(max_iterations=2))
    assert err.value.residual > 0


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 30), st.floats(0.02, 0.5), st.integers(0, 2**32 - 1))
def test_probability_vector_and_oracle(n, p, seed):
    rng = np.random.default_rng(seed)
    edges = random_signed(n, p, rng)
    t = eigentrust(signed_graph(n, edges))
    assert abs(t.sum() - 1) <= 1e-9
    assert t.min() >= 0.15 / n - 1e-12
    assert np.max(np.abs(t - dense_eigentrust(n, edges))) <= 1e-8


def test_adding_trust_does_not_lower_target_rank():
    # endorsing a user who nobody trusted lifts them off the minimum
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(4, 20))
        edges = [(u, v, 1) for u in range(n) for v in range(n) if u != v and rng.random() < 0.3
                 and v != 0]
        before = eigentrust(signed_graph(n, edges))
        after = eigentrust(signed_graph(n, edges + [(1, 0, 1)]))
        assert after[0] > before[0]


def test_threshold_examples():
    assert threshold_labels([0.5, 0.3, 0.2], 1 / 3).tolist() == [2, 1, 1]
    assert threshold_labels([0.25] * 4, 0.5).tolist() == [2, 2, 1, 1]
    assert threshold_labels([0.7], 0.01).tolist() == [2]
    with pytest.raises(ConfigError):
        threshold_labels([1.0, 2.0], 1.0)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=40), st.floats(0.01, 0.99),
       st.floats(1e-3, 1e3))
def test_threshold_scale_invariance(scores, q, c):
    a = threshold_labels(scores, q)
    assert np.array_equal(a, threshold_labels(np.array(scores) * c, q))
    assert np.sum(a == 2) == int(np.ceil(q * len(scores)))
