import numpy as np
import pytest
from scipy.spatial.distance import pdist

from oracles import jacobi_singular_values
from tranet.baselines import SvdConfig, svd_transform, truncated_svd, within_network_split
from tranet.errors import ConfigError, SchemaMismatchError, SplitError
from tranet.features import Column, FeatureMatrix


def fm(X, kinds=("degree", "indegree", "outdegree", "clustering", "pagerank")):
    X = np.asarray(X, dtype=np.float64)
    cols = [Column(kinds[j % 5], "raw", j // 5) for j in range(X.shape[1])]
    return FeatureMatrix(X, cols, [str(i) for i in range(X.shape[0])])


def test_identity_preserves_distances():
    m = 5
    I = np.eye(m)
    u, s, vt = truncated_svd(I, m)
    assert np.allclose(s, 1, rtol=0, atol=1e-12)
    ps, pt = svd_transform(fm(I[:3]), fm(I[3:]), SvdConfig(rank=m, standardize=False))
    z = np.vstack([ps.values, pt.values])
    assert np.allclose(pdist(z), pdist(I), rtol=0, atol=1e-9)
    assert ps.names == [f"latent{j}.svd.r0" for j in range(m)]


def test_reconstruction_against_jacobi():
    rng = np.random.default_rng(6)
    M = rng.normal(size=(6, 4))
    u, s, vt = truncated_svd(M, 4)
    assert np.linalg.norm(u * s @ vt - M) <= 1e-8
    assert np.allclose(s, jacobi_singular_values(M), rtol=0, atol=1e-10)
    assert np.all(np.diff(s) <= 0)


def test_rank_one():
    M = np.outer([1.0, 2, 3, 4], [0.5, -1, 2])
    u, s, vt = truncated_svd(M, 1)
    assert np.linalg.norm(u * s @ vt - M) <= 1e-12


def test_inner_products_match_rank_k_reconstruction():
    rng = np.random.default_rng(8)
    A, B = rng.random((30, 10)), rng.random((20, 10))
    ps, pt = svd_transform(fm(A), fm(B), SvdConfig(rank=4, standardize=False))
    z = np.vstack([ps.values, pt.values])
    u, s, vt = truncated_svd(np.vstack([A, B]), 4)
    R = u * s @ vt
    assert np.allclose(z @ z.T, R @ R.T, rtol=0, atol=1e-8)


def test_zero_variance_column_centered_only():
    A = np.column_stack([np.arange(4.0), np.full(4, 3.0)])
    ps, pt = svd_transform(fm(A[:2]), fm(A[2:]), SvdConfig(rank=2))
    assert np.all(np.isfinite(ps.values)) and np.all(np.isfinite(pt.values))


def test_svd_errors():
    with pytest.raises(ConfigError):
        SvdConfig(rank=0)
    with pytest.raises(ConfigError):
        svd_transform(fm(np.eye(3)), fm(np.eye(3)), SvdConfig(rank=4))
    other = FeatureMatrix(np.eye(3), [Column("pagerank")] * 3, ["a", "b", "c"])
    with pytest.raises(SchemaMismatchError):
        svd_transform(fm(np.eye(3)), other)


def test_split_stratification_example():
    y = np.array([1, 2] * 5)
    for train, test in within_network_split(y, 0.8, repeats=3, seed=1):
        assert np.sum(y[train] == 1) == 4 and np.sum(y[train] == 2) == 4
        assert len(test) == 2


def test_split_contract_random():
    rng = np.random.default_rng(12)
    for _ in range(30):
        n = int(rng.integers(20, 200))
        y = np.where(rng.random(n) < rng.uniform(0.05, 0.5), 2, 1)
        y[:2], y[2:4] = 1, 2
        frac = float(rng.uniform(0.3, 0.9))
        splits = within_network_split(y, frac, repeats=10, seed=int(rng.integers(1000)))
        assert len({tuple(tr) for tr, _ in splits}) == 10
        for train, test in splits:
            assert len(np.intersect1d(train, test)) == 0
            assert np.array_equal(np.union1d(train, test), np.arange(n))
            for c in (1, 2):
                assert 1 <= np.sum(y[train] == c) <= np.sum(y == c) - 1


def test_split_minority_rounds_up_and_determinism():
    y = np.array([1] * 17 + [2] * 3)
    (train, _), = within_network_split(y, 0.5, repeats=1, seed=0)
    assert np.sum(y[train] == 2) == 2
    a = within_network_split(y, 0.7, 4, seed=9)
    b = within_network_split(y, 0.7, 4, seed=9)
    assert all(np.array_equal(x[0], z[0]) for x, z in zip(a, b))


def test_split_errors():
    with pytest.raises(SplitError):
        within_network_split([1, 1, 1, 2])
    with pytest.raises(SplitError):
        within_network_split([1, 1, 1])
    with pytest.raises(ConfigError):
        within_network_split([1, 1, 2, 2], train_fraction=1.0)
