# cython: language_level=3
"""Compiled kernels over CSR adjacency arrays.

Every function here has a twin of the same name and signature in
``_purepy``; the two must produce identical outputs, including tie-breaks.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t
from libcpp.algorithm cimport sort
from libcpp.vector cimport vector

cnp.import_array()


def square_csr(int64_t n, const int64_t[::1] indptr, const int64_t[::1] indices):
    """Return CSR arrays of the distance-<=2 closure, rows sorted."""
    cdef int64_t[::1] stamp = np.full(n, -1, dtype=np.int64)
    cdef int64_t[::1] out_ptr = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t v, u, w, i, j, cnt
    # pass 1: row sizes
    for v in range(n):
        stamp[v] = v
        cnt = 0
        for i in range(indptr[v], indptr[v + 1]):
            u = indices[i]
            if stamp[u] != v:
                stamp[u] = v
                cnt += 1
            for j in range(indptr[u], indptr[u + 1]):
                w = indices[j]
                if stamp[w] != v:
                    stamp[w] = v
                    cnt += 1
        out_ptr[v + 1] = out_ptr[v] + cnt
    cdef int64_t[::1] out_idx = np.empty(out_ptr[n], dtype=np.int64)
    stamp[:] = -1
    cdef int64_t pos
    for v in range(n):
        stamp[v] = v
        pos = out_ptr[v]
        for i in range(indptr[v], indptr[v + 1]):
            u = indices[i]
            if stamp[u] != v:
                stamp[u] = v
                out_idx[pos] = u
                pos += 1
            for j in range(indptr[u], indptr[u + 1]):
                w = indices[j]
                if stamp[w] != v:
                    stamp[w] = v
                    out_idx[pos] = w
                    pos += 1
        sort(&out_idx[out_ptr[v]], &out_idx[0] + pos)
    return np.asarray(out_ptr), np.asarray(out_idx)


def degeneracy(int64_t n, const int64_t[::1] indptr, const int64_t[::1] indices):
    """Bucket-queue minimum-degree elimination (after Batagelj-Zaversnik).

    Returns (removal order, degeneracy).
    """
    cdef int64_t[::1] deg = np.empty(n, dtype=np.int64)
    cdef int64_t v, u, i, d, md = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        if deg[v] > md:
            md = deg[v]
    cdef int64_t[::1] bin_start = np.zeros(md + 2, dtype=np.int64)
    for v in range(n):
        bin_start[deg[v] + 1] += 1
    for d in range(1, md + 2):
        bin_start[d] += bin_start[d - 1]
    cdef int64_t[::1] fill = np.array(bin_start, dtype=np.int64)
    cdef int64_t[::1] vert = np.empty(n, dtype=np.int64)
    cdef int64_t[::1] pos = np.empty(n, dtype=np.int64)
    for v in range(n):
        pos[v] = fill[deg[v]]
        vert[pos[v]] = v
        fill[deg[v]] += 1
    cdef int64_t k, du, pu, pw, w, best = 0
    for i in range(n):
        v = vert[i]
        if deg[v] > best:
            best = deg[v]
        # the unprocessed suffix stays sorted by residual degree; a neighbor
        # falling below the current level lands at the front of it
        bin_start[deg[v]] = i + 1
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
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
                deg[u] -= 1
    return np.asarray(vert), int(best)


def greedy_color(
    const int64_t[::1] indptr,
    const int64_t[::1] indices,
    const int64_t[::1] order,
    const int64_t[::1] list_ptr,
    const int64_t[::1] list_colors,
    bint use_lists,
    int64_t[::1] colors,
    int64_t[::1] counts,
):
    """Color vertices in ``order`` with the least available color.

    ``colors`` must be pre-filled with -1 and is written in place; ``counts``
    receives each vertex's number of already-colored neighbors at its turn.
    Returns the position in ``order`` of the first stuck vertex, or -1.
    """
    cdef int64_t n = colors.shape[0]
    cdef int64_t maxdeg = 0, maxcol = 0, v, i, k, u, c, cnt
    for v in range(n):
        if indptr[v + 1] - indptr[v] > maxdeg:
            maxdeg = indptr[v + 1] - indptr[v]
    if use_lists:
        for i in range(list_colors.shape[0]):
            if list_colors[i] > maxcol:
                maxcol = list_colors[i]
    cdef int64_t size = (maxcol if maxcol > maxdeg else maxdeg) + 2
    cdef int64_t[::1] mark = np.full(size, -1, dtype=np.int64)
    for i in range(order.shape[0]):
        v = order[i]
        cnt = 0
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if colors[u] >= 0:
                mark[colors[u]] = i
                cnt += 1
        counts[v] = cnt
        if use_lists:
            c = -1
            for k in range(list_ptr[v], list_ptr[v + 1]):
                if mark[list_colors[k]] != i:
                    c = list_colors[k]
                    break
            if c < 0:
                return i
        else:
            c = 0
            while mark[c] == i:
                c += 1
        colors[v] = c
    return -1


def bfs_ball(
    const int64_t[::1] indptr,
    const int64_t[::1] indices,
    int64_t root,
    int64_t max_depth,
    int64_t[::1] scratch,
):
    """Vertices within ``max_depth`` of ``root`` in BFS order, with distances.

    ``scratch`` is a length-n array of -1 that is restored before returning.
    """
    cdef vector[int64_t] queue
    cdef int64_t head = 0, v, u, k, d
    queue.push_back(root)
    scratch[root] = 0
    while head < <int64_t>queue.size():
        v = queue[head]
        head += 1
        d = scratch[v]
        if d == max_depth:
            continue
        for k in range(indptr[v], indptr[v + 1]):
            u = indices[k]
            if scratch[u] < 0:
                scratch[u] = d + 1
                queue.push_back(u)
    cdef int64_t sz = queue.size()
    verts = np.empty(sz, dtype=np.int64)
    dists = np.empty(sz, dtype=np.int64)
    cdef int64_t[::1] vv = verts
    cdef int64_t[::1] dd = dists
    for k in range(sz):
        vv[k] = queue[k]
        dd[k] = scratch[queue[k]]
        scratch[queue[k]] = -1
    return verts, dists


def max_flow(
    int64_t n_nodes,
    const int64_t[::1] tails,
    const int64_t[::1] heads,
    const int64_t[::1] caps,
    int64_t source,
    int64_t sink,
):
    """Dinic's algorithm on a directed network.

    Returns (flow value, boolean mask of the source side of a minimum cut,
    i.e. the nodes reachable from ``source`` in the final residual graph).
    """
    cdef int64_t m = tails.shape[0]
    cdef int64_t[::1] first = np.full(n_nodes, -1, dtype=np.int64)
    cdef int64_t[::1] nxt = np.empty(2 * m, dtype=np.int64)
    cdef int64_t[::1] to = np.empty(2 * m, dtype=np.int64)
    cdef int64_t[::1] res = np.empty(2 * m, dtype=np.int64)
    cdef int64_t e, a
    # arcs are added in input order; arc 2e is forward, 2e+1 its reverse
    for e in range(m):
        a = 2 * e
        to[a] = heads[e]
        res[a] = caps[e]
        nxt[a] = first[tails[e]]
        first[tails[e]] = a
        to[a + 1] = tails[e]
        res[a + 1] = 0
        nxt[a + 1] = first[heads[e]]
        first[heads[e]] = a + 1
    cdef int64_t[::1] level = np.empty(n_nodes, dtype=np.int64)
    cdef int64_t[::1] it = np.empty(n_nodes, dtype=np.int64)
    cdef int64_t[::1] queue = np.empty(n_nodes, dtype=np.int64)
    cdef int64_t[::1] path = np.empty(n_nodes + 1, dtype=np.int64)
    cdef int64_t head, tail, v, u, total = 0, depth, push, j
    while True:
        level[:] = -1
        level[source] = 0
        queue[0] = source
        head = 0
        tail = 1
        while head < tail:
            v = queue[head]
            head += 1
            a = first[v]
            while a >= 0:
                if res[a] > 0 and level[to[a]] < 0:
                    level[to[a]] = level[v] + 1
                    queue[tail] = to[a]
                    tail += 1
                a = nxt[a]
        if level[sink] < 0:
            break
        for v in range(n_nodes):
            it[v] = first[v]
        # iterative DFS for blocking flow; path holds arc ids
        depth = 0
        v = source
        while True:
            if v == sink:
                push = res[path[0]]
                for j in range(1, depth):
                    if res[path[j]] < push:
                        push = res[path[j]]
                for j in range(depth):
                    res[path[j]] -= push
                    res[path[j] ^ 1] += push
                total += push
                depth = 0
                v = source
                continue
            a = it[v]
            while a >= 0:
                u = to[a]
                if res[a] > 0 and level[u] == level[v] + 1:
                    break
                a = nxt[a]
            it[v] = a
            if a >= 0:
                path[depth] = a
                depth += 1
                v = u
            else:
                if v == source:
                    break
                level[v] = -1
                depth -= 1
                v = to[path[depth] ^ 1]
                it[v] = nxt[it[v]]
    side = np.zeros(n_nodes, dtype=bool)
    cdef cnp.npy_bool[::1] sv = side
    sv[source] = 1
    queue[0] = source
    head = 0
    tail = 1
    while head < tail:
        v = queue[head]
        head += 1
        a = first[v]
        while a >= 0:
            if res[a] > 0 and not sv[to[a]]:
                sv[to[a]] = 1
                queue[tail] = to[a]
                tail += 1
            a = nxt[a]
    return int(total), side
