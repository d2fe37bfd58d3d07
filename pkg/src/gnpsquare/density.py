"""Exact maximum subgraph density max_S e(S)/|S| via parametric min cuts."""
from fractions import Fraction

import numpy as np

from ._backend import kernels
from .graph import degeneracy_order


def edges_within(g, vertices):
    """Number of edges of ``g`` with both endpoints in ``vertices``."""
    vs = np.unique(np.asarray(vertices, dtype=np.int64))
    mask = np.zeros(g.n, dtype=bool)
    mask[vs] = True
    _, nbr = g.incidences(vs)
    return int(np.count_nonzero(mask[nbr])) // 2


def _core(g, k):
    """Vertices of the k-core of ``g``, sorted."""
    alive = np.ones(g.n, dtype=bool)
    deg = g.degrees().copy()
    while True:
        drop = np.flatnonzero(alive & (deg < k))
        if drop.size == 0:
            return np.flatnonzero(alive)
        alive[drop] = False
        _, nbr = g.incidences(drop)
        np.subtract.at(deg, nbr, 1)


def _peel(g, edges):
    # best suffix of the min-degree removal order: a 2-approximation to start from
    order, _ = degeneracy_order(g)
    pos = np.empty(g.n, dtype=np.int64)
    pos[order] = np.arange(g.n)
    first = np.minimum(pos[edges[:, 0]], pos[edges[:, 1]])
    suffix_edges = np.cumsum(np.bincount(first, minlength=g.n)[::-1])[::-1]
    sizes = g.n - np.arange(g.n)
    best = max(range(g.n), key=lambda i: (Fraction(int(suffix_edges[i]), int(sizes[i])), sizes[i]))
    return np.sort(order[best:])


def _denser_subset(g, edges, a, b):
    """A vertex set maximizing b*e(S) - a*|S|, or None when that maximum is <= 0.

    Network: s->v with capacity b*deg(v), v->t with 2a, and b on both arcs of
    every edge. A cut with source side S costs 2bm - 2(b e(S) - a|S|).
    """
    n = g.n
    s, t = n, n + 1
    verts = np.arange(n, dtype=np.int64)
    tails = np.concatenate([np.full(n, s), verts, edges[:, 0], edges[:, 1]])
    heads = np.concatenate([verts, np.full(n, t), edges[:, 1], edges[:, 0]])
    caps = np.concatenate([
        b * g.degrees(),
        np.full(n, 2 * a),
        np.full(2 * len(edges), b),
    ]).astype(np.int64)
    value, side = kernels.max_flow(n + 2, tails.astype(np.int64), heads.astype(np.int64), caps, s, t)
    if value >= 2 * b * len(edges):
        return None
    return np.flatnonzero(side[:n])


def max_subgraph_density(g):
    """Return ``(density, witness)``: the exact max of e(S)/|S| as a Fraction
    and a sorted vertex array attaining it.

    Starts from the best peeling suffix and repeatedly replaces the current
    ratio a/b by the density of a set beating it, found by one min cut. Each
    ratio has denominator <= n, so capacities stay small integers and the
    iteration ends on the exact optimum.
    """
    if g.n == 0:
        raise ValueError("max_subgraph_density of an empty graph is undefined")
    edges = g.edge_array()
    if len(edges) == 0:
        return Fraction(0), np.arange(g.n, dtype=np.int64)
    witness = _peel(g, edges)
    a, b = edges_within(g, witness), witness.size
    # a densest set has inner min degree >= its density >= a/b, so it lies in that core
    sub, labels = g.induced(_core(g, -(-a // b)))
    sub_edges = sub.edge_array()
    while True:
        better = _denser_subset(sub, sub_edges, a, b)
        if better is None:
            break
        witness = labels[better]
        a, b = edges_within(g, witness), witness.size
    return Fraction(a, b), witness
