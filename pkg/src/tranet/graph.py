"""Directed, optionally signed graphs and KONECT-style edge-list I/O.

Node identifiers are opaque. Internally nodes are indexed ``0..n-1`` in
order of first appearance, which makes every loader deterministic.
Parallel edges collapse to a single entry carrying a multiplicity count;
a repeated pair with a different sign keeps the sign of the last line.
"""

from __future__ import annotations

import io
import logging
import os
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, GraphError, ParseError

log = logging.getLogger(__name__)

DIRECTIONS = ("out", "in", "all")


@dataclass(frozen=True)
class EdgeListOptions:
    delimiter: str | None = "\t"
    comment_prefix: tuple[str, ...] = ("%", "#")
    signed: bool = False
    header_lines_to_skip: int = 0

    def __post_init__(self):
        if self.delimiter is not None and len(self.delimiter) != 1:
            raise ConfigError("delimiter must be a single character")
        if self.header_lines_to_skip < 0:
            raise ConfigError("header_lines_to_skip must be >= 0")
        if isinstance(self.comment_prefix, str):
            object.__setattr__(self, "comment_prefix", (self.comment_prefix,))


def _csr(n, rows, cols, *payload):
    # rows sorted, then cols within a row
    order = np.lexsort((cols, rows))
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(indptr, rows + 1, 1)
    np.cumsum(indptr, out=indptr)
    return (indptr, cols[order]) + tuple(p[order] for p in payload)


class Graph:
    """Immutable directed simple graph with sign and multiplicity per edge.

    Parameters
    ----------
    node_ids : sequence
        External identifiers; position is the internal index.
    src, dst : array of int
        Distinct directed pairs, in first-appearance order.
    sign : array of {-1, +1}, optional
    mult : array of int >= 1, optional
    signed : bool
        Whether the edge signs came from data (affects serialization only).
    """

    def __init__(self, node_ids, src, dst, sign=None, mult=None, signed=False,
                 sign_conflicts=0):
        self.node_ids = tuple(node_ids)
        n = len(self.node_ids)
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        if src.shape != dst.shape:
            raise GraphError("src and dst must have the same length")
        m = len(src)
        sign = np.ones(m, dtype=np.int8) if sign is None else np.asarray(sign, dtype=np.int8)
        mult = np.ones(m, dtype=np.int64) if mult is None else np.asarray(mult, dtype=np.int64)
        if m and (src.min() < 0 or dst.min() < 0 or src.max() >= n or dst.max() >= n):
            raise GraphError("edge endpoint out of range")
        if m and (len(np.unique(src * n + dst)) != m):
            raise GraphError("duplicate (source, target) pair")
        if np.any((sign != 1) & (sign != -1)):
            raise GraphError("signs must be +1 or -1")
        if np.any(mult < 1):
            raise GraphError("multiplicities must be >= 1")
        self.src, self.dst, self.sign, self.mult = src, dst, sign, mult
        self.signed = bool(signed)
        self.sign_conflicts = int(sign_conflicts)
        for arr in (src, dst, sign, mult):
            arr.setflags(write=False)

        self._out = _csr(n, src, dst, sign, mult)
        self._in = _csr(n, dst, src, sign, mult)
        self._index = None

    # ------------------------------------------------------------------
    @classmethod
    def from_edges(cls, edges, node_ids=(), signed=False):
        """Build a graph from ``(u, v)`` or ``(u, v, sign)`` tuples.

        ``node_ids`` pre-registers identifiers (useful for isolated nodes);
        all other nodes are indexed by first appearance in ``edges``.
        """
        index = {}
        for u in node_ids:
            index.setdefault(u, len(index))
        pairs = {}
        conflicts = 0
        for e in edges:
            u, v = e[0], e[1]
            s = int(e[2]) if len(e) > 2 else 1
            i = index.setdefault(u, len(index))
            j = index.setdefault(v, len(index))
            entry = pairs.get((i, j))
            if entry is None:
                pairs[(i, j)] = [s, 1]
            else:
                if entry[0] != s:
                    conflicts += 1
                entry[0] = s
                entry[1] += 1
        if conflicts:
            log.warning("%d repeated edges had a conflicting sign; last one kept", conflicts)
        if pairs:
            ij = np.array(list(pairs.keys()), dtype=np.int64)
            sm = np.array(list(pairs.values()), dtype=np.int64)
        else:
            ij = np.zeros((0, 2), dtype=np.int64)
            sm = np.zeros((0, 2), dtype=np.int64)
        return cls(list(index), ij[:, 0], ij[:, 1], sm[:, 0], sm[:, 1],
                   signed=signed, sign_conflicts=conflicts)

    # ------------------------------------------------------------------
    @property
    def n(self):
        return len(self.node_ids)

    @property
    def edge_count(self):
        return len(self.src)

    def __repr__(self):
        return f"Graph(n={self.n}, edge_count={self.edge_count}, signed={self.signed})"

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            [str(x) for x in self.node_ids] == [str(x) for x in other.node_ids]
            and np.array_equal(self.src, other.src)
            and np.array_equal(self.dst, other.dst)
            and np.array_equal(self.sign, other.sign)
            and np.array_equal(self.mult, other.mult)
        )

    __hash__ = None

    def index_of(self, node_id):
        if self._index is None:
            self._index = {str(u): i for i, u in enumerate(self.node_ids)}
        return self._index[str(node_id)]

    def _check(self, v):
        if not 0 <= v < self.n:
            raise IndexError(f"node index {v} out of range for n={self.n}")

    def out_adjacency(self, v):
        """Sorted ``(neighbor, sign, multiplicity)`` triples for edges leaving ``v``."""
        self._check(v)
        indptr, nbr, sign, mult = self._out
        lo, hi = indptr[v], indptr[v + 1]
        return list(zip(nbr[lo:hi].tolist(), sign[lo:hi].tolist(), mult[lo:hi].tolist()))

    def in_adjacency(self, v):
        self._check(v)
        indptr, nbr, sign, mult = self._in
        lo, hi = indptr[v], indptr[v + 1]
        return list(zip(nbr[lo:hi].tolist(), sign[lo:hi].tolist(), mult[lo:hi].tolist()))

    def out_degree(self):
        """Number of distinct out-neighbors per node (a self-loop counts once)."""
        return np.diff(self._out[0])

    def in_degree(self):
        return np.diff(self._in[0])

    def adjacency(self, signed=False):
        """Sparse ``n x n`` CSR matrix; entry (u, v) is 1 (or the sign) per distinct edge."""
        data = self.sign.astype(np.float64) if signed else np.ones(self.edge_count)
        return sp.csr_matrix((data, (self.src, self.dst)), shape=(self.n, self.n))


def neighbors(g, v, direction="all"):
    """Sorted neighbor indices of ``v``; ``v`` itself is never included."""
    if direction not in DIRECTIONS:
        raise ConfigError(f"direction must be one of {DIRECTIONS}")
    if direction == "out":
        nb = [u for u, _, _ in g.out_adjacency(v)]
    elif direction == "in":
        nb = [u for u, _, _ in g.in_adjacency(v)]
    else:
        nb = sorted({u for u, _, _ in g.out_adjacency(v)} | {u for u, _, _ in g.in_adjacency(v)})
    return [u for u in nb if u != v]


def neighbor_matrix(g, direction="all"):
    """Boolean CSR matrix N with N[v, u] = 1 iff u is a neighbor of v (no self-loops)."""
    if direction not in DIRECTIONS:
        raise ConfigError(f"direction must be one of {DIRECTIONS}")
    a = g.adjacency()
    if direction == "in":
        a = a.T
    elif direction == "all":
        a = a + a.T
    a = sp.csr_matrix(a)
    a.setdiag(0)
    a.eliminate_zeros()
    a.data[:] = 1.0
    return a


def undirected_view(g):
    """Symmetric unsigned simple graph on the same nodes, self-loops dropped."""
    a = sp.triu(neighbor_matrix(g, "all"), k=1).tocoo()
    order = np.lexsort((a.col, a.row))
    u, v = a.row[order].astype(np.int64), a.col[order].astype(np.int64)
    return Graph(g.node_ids, np.concatenate([u, v]), np.concatenate([v, u]))


# ----------------------------------------------------------------------
# edge-list I/O

def _text_lines(source):
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    elif isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    else:
        data = source.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from None
    return io.StringIO(data)


def _fields(line, delimiter):
    if delimiter is None:
        return line.split()
    return [f.strip() for f in line.split(delimiter) if f.strip() != ""]


def _parse_sign(token, lineno):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"non-numeric sign {token!r}", lineno) from None
    if value == 0 or value != value:
        raise ParseError(f"sign must be non-zero, got {token!r}", lineno)
    return 1 if value > 0 else -1


def load_edge_list(source, opts=None):
    """Read ``source target [sign]`` lines into a :class:`Graph`.

    ``source`` may be a path, a bytes object or a binary/text stream.
    Extra columns beyond the ones used (KONECT weights, timestamps) are ignored.
    """
    opts = opts or EdgeListOptions()
    edges = []
    for lineno, raw in enumerate(_text_lines(source), start=1):
        if lineno <= opts.header_lines_to_skip:
            continue
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith(opts.comment_prefix):
            continue
        parts = _fields(line, opts.delimiter)
        if len(parts) < 2:
            raise ParseError(f"expected at least 2 fields, got {len(parts)}", lineno)
        if opts.signed:
            if len(parts) < 3:
                raise ParseError("signed edge list needs a third (sign) column", lineno)
            edges.append((parts[0], parts[1], _parse_sign(parts[2], lineno)))
        else:
            edges.append((parts[0], parts[1]))
    if not edges:
        raise GraphError("empty graph")
    return Graph.from_edges(edges, signed=opts.signed)


def write_edge_list(g, dest, delimiter="\t"):
    """Write ``g`` in the format :func:`load_edge_list` reads.

    Edges are written in first-appearance order and repeated ``multiplicity``
    times, so graphs produced by the loader survive a round trip unchanged.
    Isolated nodes cannot be represented and are dropped.
    """
    out = []
    ids = [str(x) for x in g.node_ids]
    for u, v, s, m in zip(g.src.tolist(), g.dst.tolist(), g.sign.tolist(), g.mult.tolist()):
        row = f"{ids[u]}{delimiter}{ids[v]}"
        if g.signed:
            row += f"{delimiter}{s}"
        out.extend([row] * m)
    text = "\n".join(out) + ("\n" if out else "")
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        dest.write(text.encode("utf-8") if isinstance(dest, (io.RawIOBase, io.BufferedIOBase)) else text)


# ----------------------------------------------------------------------
# labels

def load_labels(source, delimiter=None):
    """Read ``node_id label`` lines into ``{node_id: label}`` (labels are ints >= 1)."""
    labels = {}
    for lineno, raw in enumerate(_text_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith(("%", "#")):
            continue
        parts = _fields(line, delimiter)
        if len(parts) < 2:
            raise ParseError("expected 'node_id label'", lineno)
        try:
            label = int(parts[1])
        except ValueError:
            raise ParseError(f"label {parts[1]!r} is not an integer", lineno) from None
        if label < 1:
            raise ParseError(f"labels must be positive integers, got {label}", lineno)
        labels[parts[0]] = label
    return labels


def align_labels(g, labels):
    """Label array aligned to ``g``'s node indices; 0 marks an unlabeled node.

    Returns ``(y, n_missing, n_unknown)`` where ``n_missing`` counts graph nodes
    without a label and ``n_unknown`` counts labels for nodes absent from ``g``.
    """
    y = np.zeros(g.n, dtype=np.int64)
    known = 0
    for node, label in labels.items():
        try:
            y[g.index_of(node)] = label
            known += 1
        except KeyError:
            pass
    return y, int(np.sum(y == 0)), len(labels) - known


def write_labels(g, y, dest):
    lines = [f"{u}\t{int(l)}" for u, l in zip(g.node_ids, y) if l > 0]
    text = "\n".join(lines) + ("\n" if lines else "")
    if isinstance(dest, (str, os.PathLike)):
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        dest.write(text)
