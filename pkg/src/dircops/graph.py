"""Dense-index directed graphs with optional combinatorial embeddings.

Vertices are integers 0..n-1.  Arcs are ordered (tail, head) pairs.  A
rotation system assigns each vertex a cyclic order of its undirected
neighbors; faces are recovered by dart tracing, and Euler's formula
certifies sphere-embeddability.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

UNREACHABLE = -1


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Digraph:
    """Immutable directed graph. No self-loops; antiparallel pairs allowed."""

    n: int
    arcs: tuple
    out_adj: tuple = field(repr=False, default=None)
    in_adj: tuple = field(repr=False, default=None)

    @staticmethod
    def from_arcs(n, arcs):
        arcs = tuple((int(t), int(h)) for t, h in arcs)
        out_nbrs = [[] for _ in range(n)]
        in_nbrs = [[] for _ in range(n)]
        for t, h in arcs:
            if t == h:
                raise GraphError(f"self-loop at vertex {t}")
            if not (0 <= t < n and 0 <= h < n):
                raise GraphError(f"arc ({t},{h}) out of range for n={n}")
            out_nbrs[t].append(h)
            in_nbrs[h].append(t)
        return Digraph(
            n=n,
            arcs=arcs,
            out_adj=tuple(tuple(a) for a in out_nbrs),
            in_adj=tuple(tuple(a) for a in in_nbrs),
        )

    def check_vertex(self, v):
        if not (0 <= v < self.n):
            raise GraphError(f"invalid vertex id {v} (n={self.n})")

    def has_arc(self, t, h):
        return h in self.out_adj[t]

    def undirected_edges(self):
        """Underlying undirected edge set; an antiparallel pair is one edge."""
        return {(min(t, h), max(t, h)) for t, h in self.arcs}

    def undirected_adj(self):
        adj = [set() for _ in range(self.n)]
        for t, h in self.arcs:
            adj[t].add(h)
            adj[h].add(t)
        return [sorted(a) for a in adj]


def bfs_distances(g: Digraph, source: int, direction: str = "forward"):
    """Exact directed hop distances from (or to) ``source``.

    Returns a list indexed by vertex; unreachable vertices hold UNREACHABLE.
    ``direction="backward"`` gives distances *to* the source.
    """
    g.check_vertex(source)
    if direction == "forward":
        adj = g.out_adj
    elif direction == "backward":
        adj = g.in_adj
    else:
        raise GraphError(f"bad direction {direction!r}")
    dist = [UNREACHABLE] * g.n
    dist[source] = 0
    q = deque([source])
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for v in adj[u]:
            if dist[v] == UNREACHABLE:
                dist[v] = du
                q.append(v)
    return dist


def strongly_connected(g: Digraph) -> bool:
    """True iff every ordered vertex pair is joined by a directed path."""
    if g.n == 0:
        raise GraphError("empty graph")
    fwd = bfs_distances(g, 0, "forward")
    bwd = bfs_distances(g, 0, "backward")
    return UNREACHABLE not in fwd and UNREACHABLE not in bwd


class RotationSystem:
    """Per-vertex cyclic order of undirected neighbors."""

    def __init__(self, order):
        self.order = [list(nbrs) for nbrs in order]
        # position of each neighbor in each vertex's cycle, for O(1) tracing
        self._pos = [{u: i for i, u in enumerate(nbrs)} for nbrs in self.order]

    def __len__(self):
        return len(self.order)

    def degree(self, v):
        return len(self.order[v])

    def next_after(self, v, u):
        """Neighbor following u in the cyclic order at v."""
        nbrs = self.order[v]
        i = self._pos[v].get(u)
        if i is None:
            raise GraphError(f"{u} is not a rotation neighbor of {v}")
        return nbrs[(i + 1) % len(nbrs)]

    def check_against(self, g: Digraph):
        edges = g.undirected_edges()
        seen = set()
        for v, nbrs in enumerate(self.order):
            if len(nbrs) != len(set(nbrs)):
                raise GraphError(f"repeated neighbor in rotation at {v}")
            for u in nbrs:
                key = (min(u, v), max(u, v))
                if key not in edges:
                    raise GraphError(f"rotation edge {v}-{u} not in graph")
                seen.add(key)
        if seen != edges:
            missing = edges - seen
            raise GraphError(f"rotation misses edges, e.g. {next(iter(missing))}")


def trace_faces(g: Digraph, rot: RotationSystem):
    """Partition all darts into faces of the embedding given by ``rot``.

    Each face is a list of darts (u, v).  Every dart of the underlying
    undirected graph appears in exactly one face.
    """
    rot.check_against(g)
    darts = set()
    for v, nbrs in enumerate(rot.order):
        for u in nbrs:
            darts.add((v, u))
    faces = []
    remaining = set(darts)
    while remaining:
        start = next(iter(remaining))
        face = []
        d = start
        while True:
            face.append(d)
            remaining.discard(d)
            u, v = d
            d = (v, rot.next_after(v, u))
            if d == start:
                break
            if d not in darts:
                raise GraphError(f"face tracing left dart set at {d}")
        faces.append(face)
    return faces


def euler_check(g: Digraph, rot: RotationSystem) -> bool:
    """V - E + F == 2 for the embedding (sphere certification)."""
    v = g.n
    e = len(g.undirected_edges())
    f = len(trace_faces(g, rot))
    return v - e + f == 2


# ---------------------------------------------------------------------------
# interchange format


def graph_to_dict(g: Digraph, rotation=None, coords=None):
    doc = {"n": g.n, "arcs": [[t, h] for t, h in g.arcs]}
    if rotation is not None:
        doc["rotation"] = [list(nbrs) for nbrs in rotation.order]
    if coords is not None:
        doc["coords"] = [list(c) for c in coords]
    return doc


def graph_from_dict(doc):
    g = Digraph.from_arcs(doc["n"], doc["arcs"])
    rotation = RotationSystem(doc["rotation"]) if "rotation" in doc else None
    coords = [tuple(c) for c in doc["coords"]] if "coords" in doc else None
    return g, rotation, coords


def save_graph(path, g, rotation=None, coords=None):
    with open(path, "w") as fh:
        json.dump(graph_to_dict(g, rotation, coords), fh)


def load_graph(path):
    with open(path) as fh:
        return graph_from_dict(json.load(fh))
