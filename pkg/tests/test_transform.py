import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.stats import ks_2samp

from oracles import power_law_samples
from tranet.errors import ConfigError, DegenerateFitError, DomainError, FitError
from tranet.features import extract_base_features
from tranet.graph import Graph
from tranet.synthetic import SyntheticConfig, generate_planted_network
from tranet.transform import (
    PowerLawFit,
    TransformPolicy,
    fit_power_law,
    normalized_pagerank,
    power_law_transform,
    transform_features,
)


def complete(n):
    return Graph.from_edges([(u, v) for u in range(n) for v in range(n) if u != v])


def test_mle_small_sample():
    # 1 + 4 / (ln 2 + ln 4), evaluated independently
    fit = fit_power_law([1, 1, 2, 4])
    assert fit.alpha == pytest.approx(2.9235933878519513, abs=1e-12)
    assert (fit.x_min, fit.n_tail, fit.method) == (1.0, 4, "fixed_xmin_mle")


def test_mle_degenerate_and_short():
    with pytest.raises(DegenerateFitError):
        fit_power_law([1, 1, 1])
    with pytest.raises(FitError):
        fit_power_law([5.0])
    with pytest.raises(FitError):
        fit_power_law([1.0, np.inf])


def test_mle_recovers_exponent():
    x = power_law_samples(100_000, 2.5, seed=12345)
    assert 2.45 <= fit_power_law(x).alpha <= 2.55


def test_ks_scan_finds_cutoff():
    # uniform noise below 5, power law above it
    rng = np.random.default_rng(3)
    body = rng.uniform(1, 5, 3000)
    tail = power_law_samples(6000, 2.5, x_min=5.0, seed=4)
    fit = fit_power_law(np.concatenate([body, tail]), method="ks_scan_mle")
    assert fit.method == "ks_scan_mle"
    assert 4.0 <= fit.x_min <= 7.0
    assert 2.3 <= fit.alpha <= 2.7


def test_ks_scan_ties_prefer_smallest_cutoff():
    # exact power-law quantiles: every cutoff fits, the first is kept when distances tie
    fit = fit_power_law([1, 2, 4, 8], method="ks_scan_mle")
    assert fit.x_min in (1.0, 2.0, 4.0)
    with pytest.raises(DegenerateFitError):
        fit_power_law([3, 3, 3], method="ks_scan_mle")


def test_unknown_method():
    with pytest.raises(ConfigError):
        fit_power_law([1, 2, 3], method="magic")


@pytest.mark.parametrize("x,alpha,expected", [(1, 3.7, 1), (7, 2.0, 7), (4, 3.0, 16), (0, 2.5, 0)])
def test_transform_points(x, alpha, expected):
    fit = PowerLawFit(alpha, 1.0, 10)
    assert power_law_transform([x], fit)[0] == expected


def test_transform_clamps_below_xmin():
    fit = PowerLawFit(2.5, 3.0, 10)
    assert power_law_transform([0, 0.5, 2.9, 3, 6], fit).tolist() == [0, 1, 1, 1, 2 ** 1.5]
    with pytest.raises(DomainError):
        power_law_transform([-1], fit)


@given(st.lists(st.floats(0, 1e6), min_size=2, max_size=50), st.floats(1.01, 4),
       st.floats(1, 10))
def test_transform_monotone(values, alpha, x_min):
    fit = PowerLawFit(alpha, x_min, 2)
    x = np.sort(np.array(values))
    out = power_law_transform(x, fit)
    assert np.all(np.diff(out) >= 0)
    assert np.all(out[x >= x_min] >= 1)


@given(st.floats(1, 1e4), st.floats(1.01, 4))
def test_quantile_identity(x, alpha):
    fit = PowerLawFit(alpha, 1.0, 2)
    xp = power_law_transform([x], fit)[0]
    assert abs((1 - x ** -(alpha - 1)) - (1 - 1 / xp)) <= 1e-12


def test_alpha_two_is_identity_within_noise():
    x = power_law_samples(50_000, 2.0, seed=8)
    out = power_law_transform(x, fit_power_law(x))
    assert np.median(np.abs(np.log(out) - np.log(x))) < 0.05


def test_normalized_pagerank():
    assert np.allclose(normalized_pagerank([0.5, 0.5], 2, 0.85), 0.5 * 2 / 0.15)
    for n in (5, 50):
        assert np.allclose(normalized_pagerank(np.full(n, 1 / n), n, 0.85), 1 / 0.15)
    with pytest.raises(ConfigError):
        normalized_pagerank([1.0], 1, 1.0)
    with pytest.raises(DomainError):
        normalized_pagerank([0.3, 0.3], 2, 0.85)


def test_npr_of_sources_close_to_one():
    # nodes without in-edges in a sparse random graph sit near the lower bound
    rng = np.random.default_rng(21)
    n = 300
    edges = [(u, v) for u in range(n) for v in rng.choice(n, 2, replace=False) if u != v]
    g = Graph.from_edges(edges, node_ids=range(n))
    f, _ = transform_features(extract_base_features(g))
    npr = f.column("pagerank.npr.r0")
    sources = g.in_degree() == 0
    assert sources.any()
    assert np.all(np.abs(npr[sources] - 1) <= 0.1)
    assert npr.min() >= 1 - 1e-9


def test_transform_features_schema_and_report():
    f, report = transform_features(extract_base_features(Graph.from_edges([(0, 1), (1, 0)])))
    assert f.names == ["degree.pl.r0", "indegree.pl.r0", "outdegree.pl.r0",
                       "clustering.id.r0", "pagerank.npr.r0"]
    assert f.column("clustering.id.r0").tolist() == [0, 0]
    assert np.allclose(f.column("pagerank.npr.r0"), 0.5 * 2 / 0.15)
    # every degree equal -> degenerate fits, columns pass through
    assert all(e["fallback"] for e in report.values())
    assert f.column("degree.pl.r0").tolist() == [2, 2]


def test_transform_features_fit_report():
    g, _ = generate_planted_network(SyntheticConfig(2000, 2, seed=1))
    raw = extract_base_features(g)
    f, report = transform_features(raw)
    assert set(report) == {"degree.pl.r0", "indegree.pl.r0", "outdegree.pl.r0"}
    e = report["indegree.pl.r0"]
    assert not e["fallback"] and e["alpha"] > 1 and e["x_min"] == 1.0
    assert e["n_tail"] == int(np.sum(raw.column("indegree.raw.r0") >= 1))
    # isolated-in nodes keep 0, everything else >= 1
    indeg = f.column("indegree.pl.r0")
    assert np.all((indeg == 0) == (raw.column("indegree.raw.r0") == 0))


def test_transform_features_uses_own_network_only():
    g, _ = generate_planted_network(SyntheticConfig(800, 2, seed=2))
    raw = extract_base_features(g)
    a, _ = transform_features(raw)
    b, _ = transform_features(raw)
    assert a.values.tobytes() == b.values.tobytes()


def test_policy_validation():
    with pytest.raises(ConfigError):
        TransformPolicy(rules={"degree": "power_law"})
    with pytest.raises(ConfigError):
        TransformPolicy(fit_method="nope")


def test_transform_overlaps_degree_distributions():
    ga, _ = generate_planted_network(SyntheticConfig(6000, 2, seed=10))
    gb, _ = generate_planted_network(SyntheticConfig(2000, 4, seed=11))
    fa, fb = extract_base_features(ga), extract_base_features(gb)
    ta, tb = transform_features(fa)[0], transform_features(fb)[0]
    raw_ks = ks_2samp(fa.column("degree.raw.r0"), fb.column("degree.raw.r0")).statistic
    new_ks = ks_2samp(ta.column("degree.pl.r0"), tb.column("degree.pl.r0")).statistic
    assert new_ks < raw_ks
