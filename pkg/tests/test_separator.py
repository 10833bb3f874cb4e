import math
import random

import numpy as np
import pytest
from scipy.spatial import Delaunay

from dircops.graph import Digraph, GraphError, RotationSystem
from dircops.separator import separate, separate_components


def und(n, edges, order):
    arcs = [(a, b) for a, b in edges] + [(b, a) for a, b in edges]
    return Digraph.from_arcs(n, arcs), RotationSystem(order)


def grid(w, h):
    def vid(x, y):
        return y * w + x

    edges = []
    for y in range(h):
        for x in range(w):
            if x + 1 < w:
                edges.append((vid(x, y), vid(x + 1, y)))
            if y + 1 < h:
                edges.append((vid(x, y), vid(x, y + 1)))
    order = []
    for y in range(h):
        for x in range(w):
            nb = []
            for dx, dy in ((1, 0), (0, 1), (-1, 0), (0, -1)):
                if 0 <= x + dx < w and 0 <= y + dy < h:
                    nb.append(vid(x + dx, y + dy))
            order.append(nb)
    return und(w * h, edges, order)


def delaunay_graph(m, seed):
    rng = random.Random(seed)
    pts = np.array([[rng.random(), rng.random()] for _ in range(m)])
    tri = Delaunay(pts)
    eset = set()
    for simp in tri.simplices:
        for i in range(3):
            a, b = int(simp[i]), int(simp[(i + 1) % 3])
            eset.add((min(a, b), max(a, b)))
    adj = [[] for _ in range(m)]
    for a, b in eset:
        adj[a].append(b)
        adj[b].append(a)
    order = [
        sorted(adj[v], key=lambda u: math.atan2(pts[u][1] - pts[v][1], pts[u][0] - pts[v][0]))
        for v in range(m)
    ]
    return und(m, sorted(eset), order)


def assert_bounds(res, g, region=None, weights=None):
    res.check(g, region)
    n = len(region) if region is not None else g.n
    if weights is None:
        total, wa, wb = n, len(res.A), len(res.B)
    else:
        verts = region if region is not None else range(g.n)
        total = sum(weights[v] for v in verts)
        wa = sum(weights[v] for v in res.A)
        wb = sum(weights[v] for v in res.B)
    assert wa <= 2 * total / 3, (wa, total)
    assert wb <= 2 * total / 3, (wb, total)
    assert len(res.C) <= 4 * math.sqrt(n), (len(res.C), n)


def test_path():
    n = 300
    edges = [(i, i + 1) for i in range(n - 1)]
    order = [[] for _ in range(n)]
    for a, b in edges:
        order[a].append(b)
        order[b].append(a)
    g, rot = und(n, edges, order)
    assert_bounds(separate(g, rot), g)


def test_cycle():
    n = 300
    edges = [(i, (i + 1) % n) for i in range(n)]
    order = [[] for _ in range(n)]
    for a, b in edges:
        order[a].append(b)
        order[b].append(a)
    g, rot = und(n, edges, order)
    assert_bounds(separate(g, rot), g)


def test_grid():
    g, rot = grid(25, 25)
    assert_bounds(separate(g, rot), g)


def test_grid_subregion():
    g, rot = grid(25, 25)
    region = [v for v in range(g.n) if (v % 25) < 17]
    assert_bounds(separate(g, rot, region), g, region)


def test_binary_tree():
    depth = 8
    n = 2 ** (depth + 1) - 1
    edges = [(i, (i - 1) // 2) for i in range(1, n)]
    order = [[] for _ in range(n)]
    for i in range(1, n):
        order[i].append((i - 1) // 2)
    for i in range(n):
        for ch in (2 * i + 1, 2 * i + 2):
            if ch < n:
                order[i].append(ch)
    g, rot = und(n, edges, order)
    assert_bounds(separate(g, rot), g)


def test_tiny_regions():
    g, rot = grid(4, 1)
    # one- and two-vertex regions go wholesale into C
    res = separate(g, rot, [2])
    assert list(res.C) == [2] and not res.A and not res.B
    res = separate(g, rot, [1, 2])
    assert sorted(res.C) == [1, 2]


def test_delaunay_sample():
    rng = random.Random(7)
    for trial in range(15):
        m = rng.randrange(40, 1200)
        g, rot = delaunay_graph(m, trial)
        assert_bounds(separate(g, rot), g)


def test_weighted_split():
    g, rot = grid(20, 20)
    rng = random.Random(3)
    weights = [rng.randrange(1, 10) for _ in range(g.n)]
    res = separate(g, rot, weights=weights)
    assert_bounds(res, g, weights=weights)


def test_zero_weight_corner():
    # all mass on one side: that side must still be split below 2/3
    g, rot = grid(16, 16)
    weights = [1 if (v % 16) < 8 else 0 for v in range(g.n)]
    res = separate(g, rot, weights=weights)
    assert_bounds(res, g, weights=weights)


def test_disconnected_region_rejected():
    g, rot = grid(9, 9)
    region = [v for v in range(g.n) if (v % 9) != 4]
    with pytest.raises(GraphError):
        separate(g, rot, region)


def test_separate_components_handles_disconnection():
    g, rot = grid(20, 20)
    region = [v for v in range(g.n) if (v % 20) != 13]
    res = separate_components(g, rot, region)
    assert_bounds(res, g, region)


def test_arena_graph(small):
    res = separate(small.graph, small.rotation)
    assert_bounds(res, small.graph)
