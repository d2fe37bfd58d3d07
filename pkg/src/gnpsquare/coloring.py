"""List assignments, greedy list coloring and the three-stage pipeline."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field

import numpy as np

from ._backend import kernels
from .asymptotics import partition
from .graph import Graph, degeneracy_order, make_rng

POLICY_MODES = ("adaptive", "formula-q", "explicit-k")
LIST_SOURCES = ("shared-palette", "random-lists")


class ListAssignment:
    """Per-vertex color lists stored CSR-style; each list sorted and distinct."""

    def __init__(self, indptr, colors, declared_size):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        colors = np.ascontiguousarray(colors, dtype=np.int64)
        sizes = np.diff(indptr)
        if sizes.size and sizes.min() < declared_size:
            raise ValueError(f"a list has fewer than {declared_size} colors")
        if colors.size and colors.min() < 0:
            raise ValueError("colors must be non-negative")
        rows = np.repeat(np.arange(sizes.size), sizes)
        order = np.lexsort((colors, rows))
        colors = colors[order]
        same_row = rows[1:] == rows[:-1]
        if np.any(same_row & (colors[1:] == colors[:-1])):
            raise ValueError("repeated color within a list")
        self.indptr = indptr
        self.colors = colors
        self.declared_size = int(declared_size)

    @classmethod
    def from_lists(cls, lists, declared_size=None):
        sizes = [len(x) for x in lists]
        indptr = np.zeros(len(lists) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum(sizes)
        colors = np.fromiter((c for x in lists for c in x), dtype=np.int64, count=int(indptr[-1]))
        return cls(indptr, colors, min(sizes, default=0) if declared_size is None else declared_size)

    @classmethod
    def shared(cls, n, k):
        """Every vertex gets the palette {0, ..., k-1}."""
        return cls(np.arange(n + 1, dtype=np.int64) * k, np.tile(np.arange(k, dtype=np.int64), n), k)

    @classmethod
    def random(cls, n, k, palette_size, seed):
        """k distinct colors per vertex, uniform from {0, ..., palette_size-1}."""
        if palette_size < k:
            raise ValueError("palette smaller than list size")
        rng = make_rng(seed)
        picks = np.argsort(rng.random((n, palette_size)), axis=1)[:, :k]
        return cls(np.arange(n + 1, dtype=np.int64) * k, np.sort(picks, axis=1).ravel(), k)

    @property
    def n(self):
        return self.indptr.size - 1

    @property
    def min_size(self):
        return int(np.diff(self.indptr).min()) if self.n else 0

    def list_of(self, v):
        return self.colors[self.indptr[v]:self.indptr[v + 1]]

    def contains(self, vertices, colors):
        """Vectorized membership test of colors[i] in list(vertices[i])."""
        vertices = np.asarray(vertices, dtype=np.int64)
        colors = np.asarray(colors, dtype=np.int64)
        width = int(max(self.colors.max(initial=0), colors.max(initial=0))) + 1
        rows = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        keys = rows * width + self.colors
        query = vertices * width + colors
        if keys.size == 0:
            return np.zeros(len(vertices), dtype=bool)
        j = np.minimum(np.searchsorted(keys, query), keys.size - 1)
        return keys[j] == query


@dataclass(frozen=True)
class ListPolicy:
    mode: str = "adaptive"
    k: int | None = None
    source: str = "shared-palette"
    list_seed: int = 0
    palette_size: int | None = None

    def __post_init__(self):
        if self.mode not in POLICY_MODES:
            raise ValueError(f"policy mode must be one of {POLICY_MODES}")
        if self.source not in LIST_SOURCES:
            raise ValueError(f"list source must be one of {LIST_SOURCES}")
        if self.mode == "explicit-k" and (self.k is None or self.k < 1):
            raise ValueError("explicit-k policy needs k >= 1")
        if self.mode == "adaptive" and self.source != "shared-palette":
            raise ValueError("adaptive mode uses an unbounded shared palette")

    def list_size(self, params):
        return {"adaptive": None, "formula-q": params.q, "explicit-k": self.k}[self.mode]

    def make_lists(self, n, params):
        """The ListAssignment this policy prescribes, or None for an unbounded palette."""
        k = self.list_size(params)
        if k is None:
            return None
        if self.source == "shared-palette":
            return ListAssignment.shared(n, k)
        return ListAssignment.random(n, k, self.palette_size or 2 * k, self.list_seed)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class StuckVertex:
    """Where greedy coloring got stuck: every list color is taken by a neighbor."""

    vertex: int
    position: int
    list: tuple
    neighbor_colors: tuple
    stage: str | None = None

    def to_dict(self):
        return asdict(self)


@dataclass
class Coloring:
    """Colors per vertex of ``graph``; -1 marks an uncolored vertex."""

    graph: Graph
    colors: np.ndarray
    failure: StuckVertex | None = None

    @property
    def complete(self):
        return self.failure is None and bool(np.all(self.colors >= 0))

    @property
    def num_colors(self):
        return int(np.unique(self.colors[self.colors >= 0]).size)

    def to_text(self):
        return "".join(f"{v} {c}\n" for v, c in enumerate(self.colors.tolist()))

    @classmethod
    def from_text(cls, graph, text):
        colors = np.full(graph.n, -1, dtype=np.int64)
        for lineno, line in enumerate(text.splitlines(), 1):
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"line {lineno}: expected 'v color'")
            colors[int(parts[0])] = int(parts[1])
        return cls(graph, colors)


def _greedy(g, order, lists):
    colors = np.full(g.n, -1, dtype=np.int64)
    counts = np.zeros(g.n, dtype=np.int64)
    if lists is None:
        lp = lc = np.zeros(1, dtype=np.int64)
    else:
        if lists.n != g.n:
            raise ValueError("list assignment size does not match graph")
        lp, lc = lists.indptr, lists.colors
    order = np.ascontiguousarray(order, dtype=np.int64)
    stuck = kernels.greedy_color(g.indptr, g.indices, order, lp, lc, lists is not None, colors, counts)
    failure = None
    if stuck >= 0:
        v = int(order[stuck])
        lst = lists.list_of(v)
        nbr = colors[g.neighbors(v)]
        failure = StuckVertex(
            vertex=v, position=int(stuck), list=tuple(lst.tolist()),
            neighbor_colors=tuple(np.intersect1d(nbr[nbr >= 0], lst).tolist()),
        )
    return colors, counts, failure


def greedy_list_color(g2, order, lists=None):
    """Color ``g2`` in ``order``, each vertex taking the least list color not
    already used by a colored neighbor. ``lists=None`` means an unbounded
    shared palette {0, 1, 2, ...}.

    A stuck vertex is not an exception: the partial coloring is returned with
    ``failure`` describing the vertex, its list and the blocking colors.
    """
    order = np.asarray(order, dtype=np.int64)
    if order.size != g2.n or not np.array_equal(np.sort(order), np.arange(g2.n)):
        raise ValueError("order must be a permutation of the vertices")
    colors, _, failure = _greedy(g2, order, lists)
    return Coloring(g2, colors, failure)


@dataclass
class StageMetrics:
    """Per-stage demand of the three-stage coloring.

    ``max_colored_neighbors[i]`` is the largest number of already colored
    G2-neighbors a stage-i vertex saw at its turn, split further into those
    colored in earlier stages and in the same stage. ``q_min`` is one more
    than the overall maximum: the smallest list size for which this order
    cannot get stuck, whatever the lists.
    """

    stage_sizes: list
    max_colored_neighbors: list
    max_prior_stage_neighbors: list
    max_same_stage_neighbors: list
    colors_used_per_stage: list
    colors_used: int
    q_min: int
    list_size: int | None
    rest_degeneracy: int
    stages_completed: int = 3
    failed_stage: str | None = None

    def to_dict(self):
        return asdict(self)


STAGE_NAMES = ("V_eps", "W_eps-V_eps", "rest")


def stage_orders(g1, g2, epsilon):
    """Coloring order of each stage: V_eps and W_eps minus V_eps ascending,
    the rest in reverse min-degree removal order of g2 induced on it.

    Returns ``(orders, partition, rest_degeneracy)``.
    """
    part = partition(g1, epsilon)
    s1, s2, rest = part.stage_sets
    sub, labels = g2.induced(rest)
    removal, degen = degeneracy_order(sub)
    return [s1, s2, labels[removal[::-1]]], part, degen


def three_stage_color(g1, g2, params, policy):
    """Color V_eps, then W_eps minus V_eps, then the rest, greedily from lists.

    Returns ``(coloring, metrics, partition)``.
    """
    orders, part, degen = stage_orders(g1, g2, params.epsilon)
    order = np.concatenate(orders).astype(np.int64)
    lists = policy.make_lists(g2.n, params)
    colors, counts, failure = _greedy(g2, order, lists)

    stage_of = np.empty(g2.n, dtype=np.int64)
    pos = np.empty(g2.n, dtype=np.int64)
    pos[order] = np.arange(order.size)
    bounds = np.cumsum([0] + [len(o) for o in orders])
    for i, o in enumerate(orders):
        stage_of[o] = i
    done = order.size if failure is None else failure.position
    if failure is not None:
        failure = StuckVertex(**{**failure.to_dict(), "stage": STAGE_NAMES[int(stage_of[failure.vertex])]})

    # split each vertex's colored-neighbor count by the neighbor's stage
    e = g2.edge_array()
    u, w = e[:, 0], e[:, 1]
    later = np.where(pos[u] > pos[w], u, w)
    earlier = np.where(pos[u] > pos[w], w, u)
    seen = pos[later] < done
    same = stage_of[later] == stage_of[earlier]
    same_cnt = np.bincount(later[seen & same], minlength=g2.n)
    prior_cnt = np.bincount(later[seen & ~same], minlength=g2.n)

    max_all, max_prior, max_same, used = [], [], [], []
    for i in range(3):
        verts = order[bounds[i]:min(bounds[i + 1], done)]
        max_all.append(int(counts[verts].max()) if verts.size else 0)
        max_prior.append(int(prior_cnt[verts].max()) if verts.size else 0)
        max_same.append(int(same_cnt[verts].max()) if verts.size else 0)
        used.append(int(np.unique(colors[verts]).size))
    processed = order[:done]
    metrics = StageMetrics(
        stage_sizes=[len(o) for o in orders],
        max_colored_neighbors=max_all,
        max_prior_stage_neighbors=max_prior,
        max_same_stage_neighbors=max_same,
        colors_used_per_stage=used,
        colors_used=int(np.unique(colors[colors >= 0]).size),
        q_min=1 + (int(counts[processed].max()) if processed.size else 0),
        list_size=None if lists is None else lists.declared_size,
        rest_degeneracy=degen,
        stages_completed=3 if failure is None else int(stage_of[failure.vertex]),
        failed_stage=None if failure is None else failure.stage,
    )
    return Coloring(g2, colors, failure), metrics, part


def degeneracy_color(g, lists):
    """List-color ``g`` in reverse min-degree removal order.

    Needs every list to have at least degeneracy + 1 colors; then each vertex
    has at most degeneracy colored neighbors at its turn and never gets stuck.
    """
    removal, degen = degeneracy_order(g)
    if lists.n != g.n:
        raise ValueError("list assignment size does not match graph")
    if lists.min_size < degen + 1:
        raise ValueError(f"lists need at least {degen + 1} colors (degeneracy {degen}), smallest has {lists.min_size}")
    colors, _, failure = _greedy(g, removal[::-1], lists)
    if failure is not None:  # unreachable when the precondition holds
        raise RuntimeError(f"degeneracy coloring stuck at {failure}")
    return Coloring(g, colors)


@dataclass
class ValidationReport:
    monochromatic_edges: list = field(default_factory=list)
    out_of_list: list = field(default_factory=list)
    uncolored: int = 0

    @property
    def proper(self):
        return not self.monochromatic_edges and not self.out_of_list

    def to_dict(self):
        return {**asdict(self), "proper": self.proper}


def validate(coloring, g2, lists=None):
    """Report every monochromatic edge and every color outside its vertex's list."""
    if coloring.colors.shape != (g2.n,):
        raise ValueError("coloring does not match the graph")
    col = coloring.colors
    e = g2.edge_array()
    a, b = col[e[:, 0]], col[e[:, 1]]
    bad = (a >= 0) & (a == b)
    report = ValidationReport(
        monochromatic_edges=e[bad].tolist(),
        uncolored=int(np.count_nonzero(col < 0)),
    )
    if lists is not None:
        colored = np.flatnonzero(col >= 0)
        ok = lists.contains(colored, col[colored])
        report.out_of_list = colored[~ok].tolist()
    return report
