"""Exact desk-scale oracles: chromatic number and k-choosability.

Both work on bitmask adjacency and refuse inputs above their caps.
"""
from __future__ import annotations

from dataclasses import dataclass
from .graph import degeneracy_order

CHI_CAP = 16
CHOOSE_CAP = 8
CHOOSE_MAX_K = 4


class OracleCapError(ValueError):
    """The input is larger than the oracle is allowed to handle."""


def _masks(g):
    return [sum(1 << u for u in g.neighbors(v).tolist()) for v in range(g.n)]


def _bits(mask):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def clique_number(g):
    adj = _masks(g)
    best = 0

    def expand(size, cand):
        nonlocal best
        if not cand:
            best = max(best, size)
            return
        if size + bin(cand).count("1") <= best:
            return
        for v in list(_bits(cand)):
            if size + bin(cand).count("1") <= best:
                return
            expand(size + 1, cand & adj[v])
            cand &= ~(1 << v)

    expand(0, (1 << g.n) - 1)
    return best


def _dsatur(adj, n, limit, lower):
    """DSATUR branch and bound: the least color count below ``limit``, else
    ``limit``. Stops as soon as ``lower`` colors are reached."""
    colors = [-1] * n
    best = limit

    def pick():
        v_best, key_best = -1, None
        for v in range(n):
            if colors[v] < 0:
                sat = len({colors[u] for u in _bits(adj[v]) if colors[u] >= 0})
                key = (sat, bin(adj[v]).count("1"))
                if key_best is None or key > key_best:
                    v_best, key_best = v, key
        return v_best

    def search(done, used):
        nonlocal best
        if used >= best:
            return
        if done == n:
            best = used
            return
        v = pick()
        taken = {colors[u] for u in _bits(adj[v]) if colors[u] >= 0}
        for c in range(used + 1):
            if c in taken:
                continue
            colors[v] = c
            search(done + 1, max(used, c + 1))
            colors[v] = -1
            if best <= lower:
                return

    search(0, 0)
    return best


def exact_chromatic_number(g, cap=CHI_CAP):
    """chi(g) by DSATUR branch and bound between the clique number and a greedy count."""
    if g.n > cap:
        raise OracleCapError(f"exact chromatic number is capped at n <= {cap} (got {g.n})")
    if g.n == 0:
        return 0
    adj = _masks(g)
    lb = clique_number(g)
    ub = min(degeneracy_order(g)[1] + 1, g.n)
    if lb == ub:
        return lb
    return _dsatur(adj, g.n, limit=ub, lower=lb)


@dataclass(frozen=True)
class ChoosabilityResult:
    choosable: bool
    witness: list | None = None  # an uncolorable list assignment when not choosable
    certificate: str = ""

    def __bool__(self):
        return self.choosable


def list_colorable(g, lists):
    """Backtracking search for a proper coloring from ``lists``; returns it or None."""
    adj = _masks(g)
    order = sorted(range(g.n), key=lambda v: len(lists[v]))
    colors = [-1] * g.n

    def go(i):
        if i == g.n:
            return True
        v = order[i]
        taken = {colors[u] for u in _bits(adj[v])}
        for c in lists[v]:
            if c not in taken:
                colors[v] = c
                if go(i + 1):
                    return True
        colors[v] = -1
        return False

    return list(colors) if go(0) else None


def _core(adj, n, k):
    # drop vertices of degree < k until none remain; they can always be colored last
    alive = (1 << n) - 1
    changed = True
    while changed:
        changed = False
        for v in _bits(alive):
            if bin(adj[v] & alive).count("1") < k:
                alive &= ~(1 << v)
                changed = True
    return alive


def _components(adj, alive):
    comps = []
    left = alive
    while left:
        seed = left & -left
        comp = frontier = seed
        while frontier:
            nxt = 0
            for v in _bits(frontier):
                nxt |= adj[v]
            frontier = nxt & alive & ~comp
            comp |= frontier
        comps.append(comp)
        left &= ~comp
    return comps


def _search_bad_assignment(adj, verts, k):
    """Exhaustive search for k-lists on ``verts`` admitting no proper coloring.

    Vertices receive lists in a fixed order while the set of proper colorings
    of the prefix is carried along, projected onto the "active" prefix
    vertices (those with a neighbor still to come). Whether some completion
    is bad depends only on that projected set up to renaming colors, so:

    * colors absent from every projected coloring behave like never-used
      colors, and colors lying in exactly the same prefix lists are
      interchangeable; a new list only picks how many of the lowest colors
      of each such class to take;
    * projected sets already explored without success are memoized;
    * a prefix is abandoned when some projected coloring leaves every later
      vertex more list colors than later neighbors after peeling, since then
      any lists can be completed.

    Returns a dict vertex -> list for a bad assignment, or None.
    """
    # max-cardinality order keeps prefixes connected so colorings die early
    order = []
    rem = set(verts)
    while rem:
        v = max(rem, key=lambda x: (sum(1 for u in order if adj[x] >> u & 1), bin(adj[x]).count("1"), -x))
        order.append(v)
        rem.discard(v)
    h = len(order)
    pos = {v: i for i, v in enumerate(order)}
    near = [{pos[u] for u in _bits(adj[v]) if u in pos} for v in order]
    back = [sorted(u for u in near[i] if u < i) for i in range(h)]
    active = [[u for u in range(i) if max(near[u], default=-1) >= i] for i in range(h + 1)]
    slot = [{u: j for j, u in enumerate(act)} for act in active]
    # where each slot of active[i+1] comes from in active[i]; -1 marks vertex i itself
    carry = [[slot[i].get(u, -1) for u in active[i + 1]] for i in range(h)]
    back_slots = [[slot[i][u] for u in back[i]] for i in range(h)]
    future_back = [{j: [slot[i][u] for u in back[j] if u < i] for j in range(i, h)} for i in range(h + 1)]

    def completable(i, blocked):
        future = set(range(i, h))
        changed = True
        while changed:
            changed = False
            for j in list(future):
                if len(near[j] & future) < k - blocked(j):
                    future.discard(j)
                    changed = True
        return not future

    static_safe = [completable(i, lambda j, i=i: len(future_back[i][j])) for i in range(h + 1)]

    def canon(i, states):
        # relabel colors by an occurrence profile, then freeze; equal keys imply
        # equal sets up to renaming (the converse need not hold)
        width = len(active[i])
        prof = {}
        for phi in states:
            for j, c in enumerate(phi):
                prof.setdefault(c, [0] * width)[j] += 1
        rank = {c: r for r, c in enumerate(sorted(prof, key=lambda c: (prof[c], c)))}
        return i, frozenset(tuple(rank[c] for c in phi) for phi in states)

    lists = []
    explored = set()

    def finish():
        out = {order[i]: lst for i, lst in enumerate(lists)}
        fresh = 1 + max((c for lst in lists for c in lst), default=-1)
        for v in order[len(lists):]:
            out[v] = tuple(range(fresh, fresh + k))
            fresh += k
        return out

    def go(i, states, ncol):
        if not states:
            return finish()
        if static_safe[i]:
            return None
        fb = future_back[i]
        for phi in states:
            if completable(i, lambda j: len({phi[u] for u in fb[j]})):
                return None
        key = canon(i, states)
        if key in explored:
            return None
        nb = back_slots[i]
        if i == h - 1:
            common = None
            for phi in states:
                got = {phi[j] for j in nb}
                common = got if common is None else common & got
                if len(common) < k:
                    explored.add(key)
                    return None
            lists.append(tuple(sorted(common)[:k]))
            out = finish()
            lists.pop()
            return out
        live = {c for phi in states for c in phi}
        sig = {}
        for j, lst in enumerate(lists):
            for c in lst:
                if c in live:
                    sig.setdefault(c, set()).add(j)
        classes = {}
        for c in sorted(live):
            classes.setdefault(frozenset(sig[c]), []).append(c)
        groups = sorted(classes.values())
        caps = [min(len(grp), k) for grp in groups]
        src = carry[i]
        for counts in _compositions(k, caps):
            lst = []
            for grp, t in zip(groups, counts):
                lst.extend(grp[:t])
            fresh_n = k - len(lst)
            lst.extend(range(ncol, ncol + fresh_n))
            lst = tuple(sorted(lst))
            nxt = set()
            for phi in states:
                taken = {phi[j] for j in nb}
                for c in lst:
                    if c not in taken:
                        nxt.add(tuple(c if j < 0 else phi[j] for j in src))
            lists.append(lst)
            found = go(i + 1, nxt, ncol + fresh_n)
            lists.pop()
            if found is not None:
                return found
        explored.add(key)
        return None

    return go(0, {()}, 0)


def _nullstellensatz_certifies(adj, verts, k):
    """True if the graph polynomial prod_{uv, u<v} (x_u - x_v) has a nonzero
    monomial with every exponent below k, which implies k-choosability by the
    Combinatorial Nullstellensatz. False means inconclusive."""
    idx = {v: i for i, v in enumerate(verts)}
    edges = [(idx[v], idx[u]) for v in verts for u in _bits(adj[v]) if u in idx and u > v]
    if len(edges) > len(verts) * (k - 1):
        return False
    poly = {(0,) * len(verts): 1}
    for a, b in edges:
        nxt = {}
        for mono, coef in poly.items():
            if mono[a] < k - 1:
                m = mono[:a] + (mono[a] + 1,) + mono[a + 1:]
                nxt[m] = nxt.get(m, 0) + coef
            if mono[b] < k - 1:
                m = mono[:b] + (mono[b] + 1,) + mono[b + 1:]
                nxt[m] = nxt.get(m, 0) - coef
        poly = {m: c for m, c in nxt.items() if c}
        if not poly:
            return False
    return True


def _compositions(total, caps):
    """Count vectors with counts[j] <= caps[j] and sum <= total (rest is fresh)."""
    def rec(j, left):
        if j == len(caps):
            yield ()
            return
        for t in range(min(caps[j], left) + 1):
            for tail in rec(j + 1, left - t):
                yield (t,) + tail
    yield from rec(0, total)


def is_k_choosable(g, k, cap=CHOOSE_CAP, max_k=CHOOSE_MAX_K, shortcuts=True):
    """Decide whether every assignment of k-color lists admits a proper coloring.

    Before the exhaustive search: vertices of degree < k are peeled off;
    k > degeneracy means choosable; k < chi means the constant lists
    {0..k-1} are a witness. With ``shortcuts`` two theorems settle a core
    component C with chi(C) <= k as choosable: |C| <= 2 chi(C) + 1 (Ohba's
    conjecture, proved by Noel, Reed and Wu), or a monomial of the graph
    polynomial with all exponents below k (Combinatorial Nullstellensatz).
    The exhaustive search itself is refused above ``cap`` vertices or
    ``max_k`` colors.
    """
    if k < 1:
        raise ValueError("k must be positive")
    if g.n > cap:
        raise OracleCapError(f"choosability oracle is capped at n <= {cap} (got {g.n})")
    if g.n == 0:
        return ChoosabilityResult(True, certificate="empty")
    adj = _masks(g)
    alive = _core(adj, g.n, k)
    if not alive:
        return ChoosabilityResult(True, certificate="degenerate")

    def witness(bad):
        fresh = 1 + max((c for lst in bad.values() for c in lst), default=-1)
        out = []
        for v in range(g.n):
            if v in bad:
                out.append(list(bad[v]))
            else:
                out.append(list(range(fresh, fresh + k)))
                fresh += k
        return out

    comps = [list(_bits(comp)) for comp in _components(adj, alive)]
    chis = []
    for verts in comps:
        chis.append(exact_chromatic_number(g.induced(verts)[0]))
        if chis[-1] > k:
            return ChoosabilityResult(False, witness({v: tuple(range(k)) for v in verts}), "chromatic")
    certs = set()
    for verts, chi in zip(comps, chis):
        if shortcuts and len(verts) <= 2 * chi + 1:
            certs.add("ohba")
            continue
        if shortcuts and _nullstellensatz_certifies(adj, verts, k):
            certs.add("nullstellensatz")
            continue
        if k > max_k:
            raise OracleCapError(f"exhaustive choosability search is capped at k <= {max_k} (got {k})")
        certs.add("exhaustive")
        bad = _search_bad_assignment(adj, verts, k)
        if bad is not None:
            return ChoosabilityResult(False, witness(bad), "exhaustive")
    return ChoosabilityResult(True, certificate="+".join(sorted(certs)))


def list_chromatic_number(g, cap=CHOOSE_CAP, max_k=CHOOSE_MAX_K, shortcuts=True):
    """Smallest k for which ``g`` is k-choosable."""
    if g.n > cap:
        raise OracleCapError(f"choosability oracle is capped at n <= {cap} (got {g.n})")
    if g.n == 0:
        return 0
    k = max(1, exact_chromatic_number(g))
    while not is_k_choosable(g, k, cap=cap, max_k=max_k, shortcuts=shortcuts):
        k += 1
    return k

