import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dircops.graph import (
    UNREACHABLE,
    Digraph,
    GraphError,
    RotationSystem,
    bfs_distances,
    euler_check,
    graph_from_dict,
    graph_to_dict,
    strongly_connected,
    trace_faces,
)


def cycle(n):
    return Digraph.from_arcs(n, [(i, (i + 1) % n) for i in range(n)])


def test_from_arcs_adjacency():
    g = Digraph.from_arcs(3, [(0, 1), (1, 2), (0, 2)])
    assert g.out_adj[0] == (1, 2)
    assert g.in_adj[2] == (1, 0)  # input order
    assert g.has_arc(0, 1) and not g.has_arc(1, 0)
    assert g.undirected_edges() == {(0, 1), (1, 2), (0, 2)}


def test_self_loops_rejected():
    with pytest.raises(GraphError):
        Digraph.from_arcs(2, [(0, 0)])


def test_bad_vertex_rejected():
    with pytest.raises(GraphError):
        Digraph.from_arcs(2, [(0, 5)])
    g = cycle(3)
    with pytest.raises(GraphError):
        g.check_vertex(3)


def test_bfs_directed_cycle():
    g = cycle(5)
    d = bfs_distances(g, 0)
    assert list(d) == [0, 1, 2, 3, 4]
    b = bfs_distances(g, 0, "backward")
    assert list(b) == [0, 4, 3, 2, 1]


def test_bfs_unreachable():
    g = Digraph.from_arcs(3, [(0, 1)])
    d = bfs_distances(g, 0)
    assert d[2] == UNREACHABLE


def test_strongly_connected():
    assert strongly_connected(cycle(4))
    assert not strongly_connected(Digraph.from_arcs(3, [(0, 1), (1, 2)]))


def _floyd(n, arcs):
    INF = 10**9
    d = [[0 if i == j else INF for j in range(n)] for i in range(n)]
    for t, h in arcs:
        d[t][h] = 1
    for m in range(n):
        for i in range(n):
            for j in range(n):
                if d[i][m] + d[m][j] < d[i][j]:
                    d[i][j] = d[i][m] + d[m][j]
    return d


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_bfs_matches_floyd_warshall(data):
    n = data.draw(st.integers(2, 8))
    arcs = data.draw(
        st.lists(
            st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(
                lambda a: a[0] != a[1]
            ),
            max_size=20,
        )
    )
    g = Digraph.from_arcs(n, arcs)
    ref = _floyd(n, g.arcs)
    src = data.draw(st.integers(0, n - 1))
    d = bfs_distances(g, src)
    for v in range(n):
        expect = ref[src][v] if ref[src][v] < 10**9 else UNREACHABLE
        assert d[v] == expect


def und(n, edges):
    arcs = [(a, b) for a, b in edges] + [(b, a) for a, b in edges]
    return Digraph.from_arcs(n, arcs)


def test_rotation_next_after():
    rot = RotationSystem([[1, 2, 3], [0], [0], [0]])
    assert rot.next_after(0, 1) == 2
    assert rot.next_after(0, 3) == 1


def test_rotation_check_against_mismatch():
    g = und(3, [(0, 1), (1, 2)])
    with pytest.raises(GraphError):
        RotationSystem([[1, 2], [0, 2], [0, 1]]).check_against(g)
    with pytest.raises(GraphError):
        RotationSystem([[1], [0], []]).check_against(g)  # misses edge 1-2


def test_faces_of_triangle():
    g = und(3, [(0, 1), (1, 2), (0, 2)])
    rot = RotationSystem([[1, 2], [2, 0], [0, 1]])
    faces = trace_faces(g, rot)
    assert len(faces) == 2
    assert euler_check(g, rot)  # 3 - 3 + 2 == 2


def test_euler_tetrahedron():
    edges = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    g = und(4, edges)
    # rotation of a drawn tetrahedron: vertex 3 in the middle
    rot = RotationSystem([[1, 3, 2], [2, 3, 0], [0, 3, 1], [0, 1, 2]])
    assert euler_check(g, rot)
    assert len(trace_faces(g, rot)) == 4


def test_euler_fails_on_bad_embedding():
    edges = [(i, j) for i in range(5) for j in range(i + 1, 5)]
    g = und(5, edges)  # K5 is not planar: no rotation passes
    rot = RotationSystem([sorted(set(range(5)) - {v}) for v in range(5)])
    assert not euler_check(g, rot)


def test_serialization_roundtrip(tmp_path):
    g = cycle(6)
    rot = RotationSystem([[(v + 1) % 6, (v - 1) % 6] for v in range(6)])
    coords = [(float(v), 0.0, 1.0) for v in range(6)]
    doc = json.loads(json.dumps(graph_to_dict(g, rot, coords)))
    g2, rot2, coords2 = graph_from_dict(doc)
    assert g2.arcs == g.arcs and g2.n == g.n
    assert rot2.order == rot.order
    assert coords2 == coords
