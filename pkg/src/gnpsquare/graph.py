"""Immutable CSR graphs, G(n, c/n) sampling, squaring, traversal and edge-list I/O."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from ._backend import kernels

GENERATOR_NAME = "numpy.random.Philox"


class GraphFormatError(ValueError):
    """Raised for an invalid edge-list file; ``line`` is 1-based (0 if unknown)."""

    def __init__(self, message, line=0):
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


class Graph:
    """Simple undirected graph on vertices ``0..n-1`` in CSR form.

    ``indices[indptr[v]:indptr[v+1]]`` is the strictly increasing neighbor
    list of ``v``. Both arrays are read-only, so instances can be shared.
    """

    __slots__ = ("n", "indptr", "indices")

    def __init__(self, n, indptr, indices, *, validate=True):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        if validate:
            _check_csr(int(n), indptr, indices)
        indptr.setflags(write=False)
        indices.setflags(write=False)
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices

    @classmethod
    def from_edges(cls, n, edges):
        """Build from an iterable of vertex pairs; rejects loops and duplicates."""
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        arr = arr.reshape(-1, 2)
        if arr.size and (arr.min() < 0 or arr.max() >= n):
            raise ValueError(f"vertex id out of range [0, {n})")
        if np.any(arr[:, 0] == arr[:, 1]):
            raise ValueError("self-loop")
        lo = np.minimum(arr[:, 0], arr[:, 1])
        hi = np.maximum(arr[:, 0], arr[:, 1])
        keys = lo * max(n, 1) + hi
        if np.unique(keys).size != keys.size:
            raise ValueError("duplicate edge")
        return cls._from_pairs(n, lo, hi)

    @classmethod
    def _from_pairs(cls, n, lo, hi):
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        order = np.lexsort((cols, rows))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(n, indptr, cols[order], validate=False)

    @classmethod
    def from_adjacency(cls, adjacency):
        n = len(adjacency)
        indptr = np.zeros(n + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(a) for a in adjacency])
        indices = np.fromiter((u for a in adjacency for u in a), dtype=np.int64, count=int(indptr[-1]))
        return cls(n, indptr, indices)

    @property
    def m(self):
        return int(self.indptr[-1]) // 2

    def degrees(self):
        return np.diff(self.indptr)

    @property
    def max_degree(self):
        return int(self.degrees().max()) if self.n else 0

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def degree(self, v):
        return int(self.indptr[v + 1] - self.indptr[v])

    def has_edge(self, u, v):
        nb = self.neighbors(u)
        i = np.searchsorted(nb, v)
        return bool(i < nb.size and nb[i] == v)

    def adjacency(self):
        return [self.neighbors(v).tolist() for v in range(self.n)]

    def incidences(self, vertices):
        """For each listed vertex's adjacency entries: ``(owner, neighbor)``,
        where ``owner`` indexes into ``vertices``."""
        vs = np.asarray(vertices, dtype=np.int64)
        lens = self.indptr[vs + 1] - self.indptr[vs]
        owner = np.repeat(np.arange(vs.size, dtype=np.int64), lens)
        offsets = np.cumsum(lens) - lens
        pos = np.arange(owner.size, dtype=np.int64) - offsets[owner] + self.indptr[vs][owner]
        return owner, self.indices[pos]

    def edge_array(self):
        """(m, 2) array of edges ``u < v`` in lexicographic order."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees())
        keep = rows < self.indices
        return np.column_stack([rows[keep], self.indices[keep]])

    def induced(self, vertices):
        """Subgraph induced on ``vertices``, relabelled by their sorted order.

        Returns ``(subgraph, labels)`` where ``labels[i]`` is the original id
        of new vertex ``i``.
        """
        labels = np.unique(np.asarray(vertices, dtype=np.int64))
        new_id = np.full(self.n, -1, dtype=np.int64)
        new_id[labels] = np.arange(labels.size)
        e = self.edge_array()
        a, b = new_id[e[:, 0]], new_id[e[:, 1]]
        keep = (a >= 0) & (b >= 0)
        return Graph._from_pairs(labels.size, a[keep], b[keep]), labels

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def _check_csr(n, indptr, indices):
    if n < 0 or indptr.shape != (n + 1,) or indptr[0] != 0 or np.any(np.diff(indptr) < 0):
        raise ValueError("malformed indptr")
    if indptr[-1] != indices.size:
        raise ValueError("indptr does not match indices")
    if indices.size == 0:
        return
    if indices.min() < 0 or indices.max() >= n:
        raise ValueError("neighbor id out of range")
    rows = np.repeat(np.arange(n, dtype=np.int64), np.diff(indptr))
    if np.any(rows == indices):
        raise ValueError("self-loop")
    key = rows * n + indices
    if np.any(np.diff(key) <= 0):
        raise ValueError("neighbor lists must be strictly increasing")
    if not np.array_equal(np.sort(indices * n + rows), key):
        raise ValueError("adjacency is not symmetric")


@dataclass(frozen=True)
class GnpParams:
    n: int
    c: float
    seed: int = 0

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.c < 0:
            raise ValueError("c must be non-negative")
        if self.c > self.n:
            raise ValueError(f"c={self.c} exceeds n={self.n}, so p=c/n > 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def p(self):
        return self.c / self.n if self.n else 0.0


def make_rng(seed, stream=None):
    """Philox generator keyed by ``seed`` (and an optional stream tag)."""
    key = seed if stream is None else [seed, stream]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def _unrank_pairs(k):
    """Map ranks in colex order (k = v(v-1)/2 + u, u < v) to pairs."""
    v = np.floor((1.0 + np.sqrt(1.0 + 8.0 * k.astype(np.float64))) / 2.0).astype(np.int64)
    v -= v * (v - 1) // 2 > k
    v += (v + 1) * v // 2 <= k
    return k - v * (v - 1) // 2, v


def sample_gnp(params):
    """Sample G(n, c/n) by geometric skipping over the C(n,2) pair sequence."""
    n, p = params.n, params.p
    total = n * (n - 1) // 2
    if p <= 0.0 or total == 0:
        return Graph(n, np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64), validate=False)
    rng = make_rng(params.seed)
    chunks = []
    last = -1
    while True:
        expect = (total - 1 - last) * p
        size = int(expect + 6.0 * math.sqrt(expect) + 16)
        ranks = last + np.cumsum(rng.geometric(p, size), dtype=np.int64)
        keep = ranks[ranks < total]
        chunks.append(keep)
        if keep.size < size:
            break
        last = int(ranks[-1])
    u, v = _unrank_pairs(np.concatenate(chunks))
    return Graph._from_pairs(n, u, v)


def square(g):
    """Graph on the same vertices joining every pair at distance 1 or 2."""
    indptr, indices = kernels.square_csr(g.n, g.indptr, g.indices)
    return Graph(g.n, indptr, indices, validate=False)


def bfs_ball(g, root, max_depth, scratch=None):
    """Vertices within ``max_depth`` of ``root`` in BFS order, with their distances."""
    if not 0 <= root < g.n:
        raise IndexError(f"root {root} out of range [0, {g.n})")
    if scratch is None:
        scratch = np.full(g.n, -1, dtype=np.int64)
    return kernels.bfs_ball(g.indptr, g.indices, int(root), int(max_depth), scratch)


def bfs_layers(g, root, max_depth):
    """Layer t holds the sorted vertices at distance exactly t from ``root``."""
    verts, dists = bfs_ball(g, root, max_depth)
    bounds = np.searchsorted(dists, np.arange(int(dists[-1]) + 2))
    return [np.sort(verts[bounds[t]:bounds[t + 1]]) for t in range(int(dists[-1]) + 1)]


def degeneracy_order(g):
    """Min-degree removal order and the degeneracy.

    Greedy coloring in reverse removal order sees at most ``degeneracy``
    previously colored neighbors at every vertex.
    """
    order, d = kernels.degeneracy(g.n, g.indptr, g.indices)
    return order, int(d)


def dumps_edge_list(g):
    e = g.edge_array()
    body = "".join(f"{u} {v}\n" for u, v in e.tolist())
    return f"{g.n} {g.m}\n{body}"


def loads_edge_list(text):
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise GraphFormatError("empty input", 1)
    try:
        n, m = (int(x) for x in lines[0].split())
    except ValueError:
        raise GraphFormatError("header must be 'n m'", 1) from None
    if n < 0 or m < 0:
        raise GraphFormatError("negative header value", 1)
    if len(lines) - 1 != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(lines) - 1}", min(len(lines), m + 1) + 1)
    pairs = np.empty((m, 2), dtype=np.int64)
    seen = set()
    for i, line in enumerate(lines[1:]):
        lineno = i + 2
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise GraphFormatError(f"malformed edge {line!r}", lineno)
        u, v = int(parts[0]), int(parts[1])
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if u >= n or v >= n:
            raise GraphFormatError(f"vertex id {max(u, v)} >= n={n}", lineno)
        key = (min(u, v), max(u, v))
        if key in seen:
            raise GraphFormatError(f"duplicate edge {key[0]} {key[1]}", lineno)
        seen.add(key)
        pairs[i] = key
    return Graph._from_pairs(n, pairs[:, 0], pairs[:, 1])


def store_edge_list(g, path):
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="ascii", newline="\n") as fh:
        fh.write(dumps_edge_list(g))
    os.replace(tmp, path)


def load_edge_list(path):
    with open(path, encoding="ascii") as fh:
        return loads_edge_list(fh.read())
