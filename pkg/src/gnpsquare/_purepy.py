"""Pure-Python twins of the compiled kernels in ``_core.pyx``.

Same names, same signatures, same outputs (tie-breaks included), so either
backend can be swapped in at import time.
"""
from collections import deque

import numpy as np


def square_csr(n, indptr, indices):
    ptr = indptr.tolist()
    idx = indices.tolist()
    rows = []
    for v in range(n):
        seen = set()
        for u in idx[ptr[v]:ptr[v + 1]]:
            seen.add(u)
            seen.update(idx[ptr[u]:ptr[u + 1]])
        seen.discard(v)
        rows.append(sorted(seen))
    out_ptr = np.zeros(n + 1, dtype=np.int64)
    out_ptr[1:] = np.cumsum([len(r) for r in rows], dtype=np.int64)
    out_idx = np.fromiter((w for r in rows for w in r), dtype=np.int64, count=int(out_ptr[-1]))
    return out_ptr, out_idx


def degeneracy(n, indptr, indices):
    ptr = indptr.tolist()
    idx = indices.tolist()
    deg = [ptr[v + 1] - ptr[v] for v in range(n)]
    md = max(deg, default=0)
    bin_start = [0] * (md + 2)
    for d in deg:
        bin_start[d + 1] += 1
    for d in range(1, md + 2):
        bin_start[d] += bin_start[d - 1]
    fill = bin_start[:]
    vert = [0] * n
    pos = [0] * n
    for v in range(n):
        pos[v] = fill[deg[v]]
        vert[pos[v]] = v
        fill[deg[v]] += 1
    best = 0
    for i in range(n):
        v = vert[i]
        dv = deg[v]
        if dv > best:
            best = dv
        bin_start[dv] = i + 1
        for u in idx[ptr[v]:ptr[v + 1]]:
            pu = pos[u]
            if pu > i:
                du = deg[u]
                pw = bin_start[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bin_start[du] += 1
                deg[u] = du - 1
    return np.asarray(vert, dtype=np.int64), best


def greedy_color(indptr, indices, order, list_ptr, list_colors, use_lists, colors, counts):
    ptr = indptr.tolist()
    idx = indices.tolist()
    lptr = list_ptr.tolist() if use_lists else None
    lcol = list_colors.tolist() if use_lists else None
    col = colors.tolist()
    for i, v in enumerate(order.tolist()):
        used = {col[u] for u in idx[ptr[v]:ptr[v + 1]] if col[u] >= 0}
        counts[v] = sum(1 for u in idx[ptr[v]:ptr[v + 1]] if col[u] >= 0)
        if use_lists:
            c = next((x for x in lcol[lptr[v]:lptr[v + 1]] if x not in used), -1)
            if c < 0:
                colors[:] = col
                return i
        else:
            c = 0
            while c in used:
                c += 1
        col[v] = c
    colors[:] = col
    return -1


def bfs_ball(indptr, indices, root, max_depth, scratch):
    ptr = indptr
    queue = deque([root])
    dist = {root: 0}
    out = [root]
    while queue:
        v = queue.popleft()
        d = dist[v]
        if d == max_depth:
            continue
        for u in indices[ptr[v]:ptr[v + 1]].tolist():
            if u not in dist:
                dist[u] = d + 1
                queue.append(u)
                out.append(u)
    verts = np.asarray(out, dtype=np.int64)
    return verts, np.asarray([dist[v] for v in out], dtype=np.int64)


def max_flow(n_nodes, tails, heads, caps, source, sink):
    """Dinic's algorithm; arcs 2e / 2e+1 are the forward/reverse pair of edge e."""
    m = len(tails)
    first = [-1] * n_nodes
    nxt = [0] * (2 * m)
    to = [0] * (2 * m)
    res = [0] * (2 * m)
    for e, (t, h, c) in enumerate(zip(tails.tolist(), heads.tolist(), caps.tolist())):
        a = 2 * e
        to[a], res[a], nxt[a] = h, c, first[t]
        first[t] = a
        to[a + 1], res[a + 1], nxt[a + 1] = t, 0, first[h]
        first[h] = a + 1
    total = 0
    while True:
        level = [-1] * n_nodes
        level[source] = 0
        queue = deque([source])
        while queue:
            v = queue.popleft()
            a = first[v]
            while a >= 0:
                if res[a] > 0 and level[to[a]] < 0:
                    level[to[a]] = level[v] + 1
                    queue.append(to[a])
                a = nxt[a]
        if level[sink] < 0:
            break
        it = first[:]
        path = []
        v = source
        while True:
            if v == sink:
                push = min(res[a] for a in path)
                for a in path:
                    res[a] -= push
                    res[a ^ 1] += push
                total += push
                path = []
                v = source
                continue
            a = it[v]
            while a >= 0 and not (res[a] > 0 and level[to[a]] == level[v] + 1):
                a = nxt[a]
            it[v] = a
            if a >= 0:
                path.append(a)
                v = to[a]
            else:
                if v == source:
                    break
                level[v] = -1
                a = path.pop()
                v = to[a ^ 1]
                it[v] = nxt[it[v]]
    side = np.zeros(n_nodes, dtype=bool)
    side[source] = True
    queue = deque([source])
    while queue:
        v = queue.popleft()
        a = first[v]
        while a >= 0:
            if res[a] > 0 and not side[to[a]]:
                side[to[a]] = True
                queue.append(to[a])
            a = nxt[a]
    return total, side
