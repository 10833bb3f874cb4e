import random

from dircops.graph import bfs_distances
from dircops.oracle import ConstructionOracle, _chain_local


def test_oracle_matches_bfs_exhaustive(tiny, tiny_oracle):
    """Every (source, target) pair on the tiny arena, against directed BFS."""
    g = tiny.graph
    for x in range(g.n):
        d = bfs_distances(g, x)
        for y in range(g.n):
            assert tiny_oracle.dist(x, y) == d[y], (x, y)


def test_oracle_sampled_on_bigger_arena(small, small_oracle):
    g = small.graph
    rng = random.Random(11)
    sources = rng.sample(range(g.n), 40)
    for x in sources:
        d = bfs_distances(g, x)
        for y in rng.sample(range(g.n), 200):
            assert small_oracle.dist(x, y) == d[y], (x, y)


def test_chain_local_closed_forms():
    # forward lane is one-way toward b, backward lane toward a; a rung costs 1
    assert _chain_local("f", 1, "f", 3) == 2  # downstream
    assert _chain_local("f", 3, "f", 1) == 4  # upstream: cross, ride back, cross
    assert _chain_local("f", 2, "b", 2) == 1  # straight across the rung
    assert _chain_local("b", 3, "b", 1) == 2
    assert _chain_local("b", 1, "b", 3) == 4
    assert _chain_local("b", 2, "f", 3) == 2


def test_to_center_and_corner_tables(tiny, tiny_oracle):
    g = tiny.graph
    for u in (0, 7):
        ref = bfs_distances(g, u, "backward")
        for x in range(0, g.n, 17):
            assert tiny_oracle.to_center(x, u) == ref[x]
    corner = tiny.units[2].corners[4]
    ref = bfs_distances(g, corner, "backward")
    for x in range(0, g.n, 13):
        assert tiny_oracle.to_corner(x, corner) == ref[x]
