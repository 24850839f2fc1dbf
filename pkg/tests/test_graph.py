import io

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tranet.errors import ConfigError, GraphError, ParseError
from tranet.graph import (
    EdgeListOptions,
    Graph,
    align_labels,
    load_edge_list,
    load_labels,
    neighbors,
    undirected_view,
    write_edge_list,
)
from tranet.synthetic import SyntheticConfig, generate_planted_network
from tranet.transform import fit_power_law


def load(text, **kw):
    return load_edge_list(io.BytesIO(text.encode()), EdgeListOptions(**kw))


def test_load_basic():
    g = load("1\t2\n2\t3\n")
    assert g.n == 3 and g.edge_count == 2
    assert g.node_ids == ("1", "2", "3")
    assert set(g.sign.tolist()) == {1}


def test_load_signed_negative():
    g = load("1\t2\t-1\n", signed=True)
    assert g.edge_count == 1
    assert g.out_adjacency(0) == [(1, -1, 1)]


def test_parallel_edges_collapse():
    g = load("1\t2\n1\t2\n")
    assert g.edge_count == 1
    assert g.out_adjacency(0) == [(1, 1, 2)]
    assert g.in_adjacency(1) == [(0, 1, 2)]


def test_conflicting_sign_last_wins():
    g = load("a\tb\t1\na\tb\t-1\n", signed=True)
    assert g.out_adjacency(0) == [(1, -1, 2)]
    assert g.sign_conflicts == 1


def test_comments_header_and_whitespace():
    g = load("% konect header\n# other\nskip me\n1 2 1 123\n", delimiter=None,
             header_lines_to_skip=3)
    assert g.node_ids == ("1", "2")


@pytest.mark.parametrize("text,kw,line", [
    ("1\t2\n3\n", {}, 2),
    ("1\t2\tx\n", {"signed": True}, 1),
    ("1\t2\n1\t3\t0\n", {"signed": True}, 1),
])
def test_parse_errors_carry_line(text, kw, line):
    with pytest.raises(ParseError) as err:
        load(text, **kw)
    assert err.value.line == line


def test_empty_graph():
    with pytest.raises(GraphError, match="empty graph"):
        load("% only a comment\n\n")


def test_bad_delimiter():
    with pytest.raises(ConfigError):
        EdgeListOptions(delimiter="::")


def test_neighbors():
    star = Graph.from_edges([(0, 1), (0, 2), (0, 3)])
    assert neighbors(star, 0, "out") == [1, 2, 3]
    assert neighbors(star, 1, "in") == [0]
    cyc = Graph.from_edges([(0, 1), (1, 0)])
    assert neighbors(cyc, 0, "all") == [1]
    loop = Graph.from_edges([(0, 0)])
    assert neighbors(loop, 0, "all") == []
    with pytest.raises(IndexError):
        neighbors(loop, 1)


def test_undirected_view():
    g = undirected_view(Graph.from_edges([(0, 1)]))
    assert neighbors(g, 0, "out") == [1] and neighbors(g, 1, "out") == [0]
    assert undirected_view(Graph.from_edges([(0, 0)])).edge_count == 0
    both = undirected_view(Graph.from_edges([(0, 1), (1, 0)]))
    assert both.edge_count == 2  # one undirected edge, stored in both directions
    assert set(both.sign.tolist()) == {1} and set(both.mult.tolist()) == {1}


edge_lists = st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9), st.sampled_from([-1, 1])),
                      min_size=1, max_size=40)


@given(edge_lists)
def test_round_trip(edges):
    text = "".join(f"{u}\t{v}\t{s}\n" for u, v, s in edges)
    g = load(text, signed=True)
    buf = io.StringIO()
    write_edge_list(g, buf)
    assert load(buf.getvalue(), signed=True) == g


@given(edge_lists)
def test_adjacency_invariants(edges):
    g = Graph.from_edges(edges)
    outs = sum(len(g.out_adjacency(v)) for v in range(g.n))
    ins = sum(len(g.in_adjacency(v)) for v in range(g.n))
    assert outs == ins == g.edge_count
    for v in range(g.n):
        for u, s, m in g.out_adjacency(v):
            assert (v, s, m) in g.in_adjacency(u)
    u_g = undirected_view(g)
    for v in range(g.n):
        for u in neighbors(g, v, "all"):
            assert v in neighbors(g, u, "all")
            assert u in neighbors(u_g, v, "all")


def test_labels_alignment():
    g = load("a\tb\nb\tc\n")
    labels = load_labels(io.StringIO("a 2\nc 1\nzz 1\n"))
    y, missing, unknown = align_labels(g, labels)
    assert y.tolist() == [2, 0, 1]
    assert (missing, unknown) == (1, 1)
    with pytest.raises(ParseError):
        load_labels(io.StringIO("a 0\n"))


# ----------------------------------------------------------------------
# planted generator

def test_planted_tiny():
    g, y = generate_planted_network(SyntheticConfig(3, 1, 0.34, 0.0, 7))
    assert g.n == 3 and np.sum(y == 2) == 1
    deg = g.in_degree() + g.out_degree()
    assert deg[y == 2][0] == deg.max()


def test_planted_deterministic():
    cfg = SyntheticConfig(500, 3, 0.1, 0.05, 11)
    g1, y1 = generate_planted_network(cfg)
    g2, y2 = generate_planted_network(cfg)
    assert g1 == g2 and np.array_equal(y1, y2)
    g3, _ = generate_planted_network(SyntheticConfig(500, 3, 0.1, 0.05, 12))
    assert g1 != g3


def test_planted_noise_flips_exact_count():
    clean = generate_planted_network(SyntheticConfig(1000, 2, 0.2, 0.0, 5))[1]
    noisy = generate_planted_network(SyntheticConfig(1000, 2, 0.2, 0.1, 5))[1]
    assert np.sum(clean != noisy) == 100


def test_planted_config_errors():
    with pytest.raises(ConfigError):
        generate_planted_network(SyntheticConfig(3, 3, 0.1))
    with pytest.raises(ConfigError):
        generate_planted_network(SyntheticConfig(10, 2, 1.0))


def test_planted_heavy_tail():
    g, _ = generate_planted_network(SyntheticConfig(10_000, 3, 0.1, 0.0, 3))
    indeg = g.in_degree()
    fit = fit_power_law(indeg[indeg >= 1])
    assert 1.5 <= fit.alpha <= 3.5
    assert indeg.max() > 20 * indeg.mean()
