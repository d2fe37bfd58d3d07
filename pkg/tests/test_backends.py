"""The compiled kernels and their pure-Python twins must agree exactly."""
import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_graph
from gnpsquare import _backend
from gnpsquare.coloring import ListAssignment
from gnpsquare.graph import square

pytestmark = pytest.mark.skipif("cython" not in _backend.available(), reason="extension not built")


@pytest.fixture(scope="module")
def both():
    return _backend.load("cython"), _backend.load("python")


def graphs_for(rng, count=60, n_max=300):
    for _ in range(count):
        yield random_graph(rng, n_max, c_choices=(0.5, 1.0, 3.0, 8.0))


def test_square_and_degeneracy_agree(both, rng):
    cy, py = both
    for g in graphs_for(rng):
        a, b = cy.square_csr(g.n, g.indptr, g.indices), py.square_csr(g.n, g.indptr, g.indices)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
        oa, da = cy.degeneracy(g.n, g.indptr, g.indices)
        ob, db = py.degeneracy(g.n, g.indptr, g.indices)
        assert da == db and np.array_equal(oa, ob)


def test_greedy_color_agrees_with_and_without_lists(both, rng):
    cy, py = both
    for g in graphs_for(rng, 40):
        g2 = square(g)
        order = rng.permutation(g.n).astype(np.int64)
        k = max(1, g2.max_degree // 2)
        lists = ListAssignment.random(g.n, k, 2 * k, int(rng.integers(1 << 30)))
        for use in (False, True):
            out = []
            for mod in (cy, py):
                colors = np.full(g.n, -1, dtype=np.int64)
                counts = np.zeros(g.n, dtype=np.int64)
                stuck = mod.greedy_color(g2.indptr, g2.indices, order, lists.indptr, lists.colors, use,
                                         colors, counts)
                out.append((stuck, colors, counts))
            assert out[0][0] == out[1][0]
            assert np.array_equal(out[0][1], out[1][1]) and np.array_equal(out[0][2], out[1][2])


def test_bfs_ball_agrees(both, rng):
    cy, py = both
    for g in graphs_for(rng, 20):
        scratch = np.full(g.n, -1, dtype=np.int64)
        for root in rng.choice(g.n, size=min(5, g.n), replace=False).tolist():
            for depth in (0, 1, 3, 9):
                a = cy.bfs_ball(g.indptr, g.indices, root, depth, scratch)
                b = py.bfs_ball(g.indptr, g.indices, root, depth, scratch)
                assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])


def test_max_flow_agrees_on_value(both, rng):
    cy, py = both
    for _ in range(40):
        n = int(rng.integers(2, 30))
        m = int(rng.integers(0, 4 * n))
        tails = rng.integers(0, n, m).astype(np.int64)
        heads = rng.integers(0, n, m).astype(np.int64)
        keep = tails != heads
        tails, heads = tails[keep], heads[keep]
        caps = rng.integers(0, 10**12, tails.size).astype(np.int64)
        va, sa = cy.max_flow(n, tails, heads, caps, 0, n - 1)
        vb, sb = py.max_flow(n, tails, heads, caps, 0, n - 1)
        assert va == vb
        # each side mask is a minimum cut: its capacity equals the flow value
        for side in (sa, sb):
            assert side[0] and not side[n - 1]
            assert int(caps[side[tails] & ~side[heads]].sum()) == va


def test_max_flow_large_capacities_do_not_overflow(both):
    big = 2**61
    tails = np.array([0, 1, 0], dtype=np.int64)
    heads = np.array([1, 2, 2], dtype=np.int64)
    caps = np.array([big, big, big], dtype=np.int64)
    for mod in both:
        assert mod.max_flow(3, tails, heads, caps, 0, 2)[0] == 2 * big


def test_env_var_forces_pure_python():
    code = "import gnpsquare; print(gnpsquare.BACKEND)"
    env = {**os.environ, "GNPSQUARE_PURE": "1"}
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    env["GNPSQUARE_PURE"] = "0"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "cython"


def test_load_rejects_unknown_backend():
    with pytest.raises(ValueError):
        _backend.load("fortran")
