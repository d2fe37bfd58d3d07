"""Independent brute-force oracles shared by the tests.

Nothing here calls into the package's kernels: graphs are handled as plain
Python adjacency sets so a bug in the CSR code cannot hide in both sides.
"""
import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gnpsquare.graph import GnpParams, Graph, sample_gnp

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def adj_sets(g):
    return [set(g.neighbors(v).tolist()) for v in range(g.n)]


def bfs_dist(adj, root):
    dist = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for v in frontier:
            for u in adj[v]:
                if u not in dist:
                    dist[u] = dist[v] + 1
                    nxt.append(u)
        frontier = nxt
    return dist


def square_oracle(g):
    """Edge set of the distance-<=2 closure, by BFS from every vertex."""
    adj = adj_sets(g)
    edges = set()
    for v in range(g.n):
        for u, d in bfs_dist(adj, v).items():
            if 1 <= d <= 2 and v < u:
                edges.add((v, u))
    return edges


def floyd_warshall(g):
    inf = float("inf")
    d = [[0 if i == j else inf for j in range(g.n)] for i in range(g.n)]
    for u, v in g.edge_array().tolist():
        d[u][v] = d[v][u] = 1
    for k in range(g.n):
        dk = d[k]
        for i in range(g.n):
            dik = d[i][k]
            if dik == inf:
                continue
            row = d[i]
            for j in range(g.n):
                if dik + dk[j] < row[j]:
                    row[j] = dik + dk[j]
    return d


def densest_oracle(g):
    """max over non-empty S of e(S)/|S| by enumerating all 2^n - 1 subsets."""
    masks = np.arange(1, 1 << g.n, dtype=np.int64)
    inside = np.zeros(masks.size, dtype=np.int64)
    for u, v in g.edge_array().tolist():
        inside += (masks >> u) & (masks >> v) & 1
    sizes = np.zeros(masks.size, dtype=np.int64)
    for v in range(g.n):
        sizes += (masks >> v) & 1
    return max((Fraction(int(e), int(s)) for e, s in set(zip(inside.tolist(), sizes.tolist()))),
               default=Fraction(0))


def degeneracy_oracle(g):
    """Degeneracy as the max over subgraphs of the min degree (subset enumeration)."""
    adj = adj_sets(g)
    best = 0
    for mask in range(1, 1 << g.n):
        verts = [v for v in range(g.n) if mask >> v & 1]
        best = max(best, min(sum(1 for u in adj[v] if mask >> u & 1) for v in verts))
    return best


def colorable_from(adj, lists):
    n = len(adj)
    colors = [None] * n

    def go(v):
        if v == n:
            return True
        for c in lists[v]:
            if all(colors[u] != c for u in adj[v] if u < v):
                colors[v] = c
                if go(v + 1):
                    return True
        colors[v] = None
        return False

    return go(0)


def choosable_oracle(g, k):
    """k-choosability by trying every assignment of k-subsets of a palette of
    size k*n (enough for any pattern of shared colors), with the first list
    fixed to {0..k-1} and later lists only introducing colors in order."""
    adj = adj_sets(g)
    n = g.n
    palette = k * n
    lists = []

    def go(v, used):
        if v == n:
            return colorable_from(adj, lists)
        # a canonical list uses colors < used plus fresh ones used, used+1, ...
        for fresh in range(0, k + 1):
            for old in itertools.combinations(range(used), k - fresh):
                lst = old + tuple(range(used, used + fresh))
                if used + fresh > palette:
                    continue
                lists.append(lst)
                ok = go(v + 1, used + fresh)
                lists.pop()
                if not ok:
                    return False
        return True

    return go(0, 0)


def chromatic_oracle(g):
    adj = adj_sets(g)
    for k in range(0, g.n + 1):
        if colorable_from(adj, [range(k)] * g.n):
            return k
    return g.n


def random_graph(rng, n_max, c_choices=(1.0, 2.0, 4.0), n_min=1):
    n = int(rng.integers(n_min, n_max + 1))
    c = float(min(rng.choice(c_choices), n))
    return sample_gnp(GnpParams(n, c, int(rng.integers(2**63))))


@st.composite
def graphs(draw, max_n=12, min_n=0):
    n = draw(st.integers(min_n, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    return Graph.from_edges(n, chosen)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n):
    return Graph.from_edges(n, list(itertools.combinations(range(n), 2)))


def complete_bipartite(a, b):
    return Graph.from_edges(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
