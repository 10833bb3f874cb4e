"""Exact directed distances on a Construction in O(1) per query.

Every vertex of the arena sits on a gadget (spoke, chain, green path) whose
only gateways are centers and corners.  Precomputing backward BFS tables
from the 12 centers and 120 corners therefore yields all distances by role
arithmetic, plus closed-form local cases inside a shared gadget.
"""

from __future__ import annotations

from array import array
from collections import deque

from .construction import (
    Construction,
    RoleChain,
    RoleCorner,
    RoleGreen,
    RoleSpoke,
)
from .graph import UNREACHABLE


def _backward_bfs(graph, target):
    dist = [-1] * graph.n
    dist[target] = 0
    q = deque([target])
    in_adj = graph.in_adj
    while q:
        u = q.popleft()
        du = dist[u] + 1
        for v in in_adj[u]:
            if dist[v] < 0:
                dist[v] = du
                q.append(v)
    return array("i", dist)


class ConstructionOracle:
    def __init__(self, c: Construction):
        self.c = c
        self.S = c.params.spoke_len
        self.C = c.params.chain_len
        self.d_center = [_backward_bfs(c.graph, u) for u in range(12)]
        # corner vertex ids are 12..131
        self.d_corner = [_backward_bfs(c.graph, 12 + i) for i in range(120)]

    def to_center(self, x, unit):
        return self.d_center[unit][x]

    def to_corner(self, x, corner_vertex):
        return self.d_corner[corner_vertex - 12][x]

    def dist(self, x, y):
        """Directed hop distance x -> y; UNREACHABLE if none (never on a
        strongly connected arena)."""
        if x == y:
            return 0
        c, roles = self.c, self.c.roles
        ry = roles[y]
        if y < 12:  # center
            return self.d_center[y][x]
        if isinstance(ry, RoleCorner):
            return self.d_corner[y - 12][x]
        rx = roles[x]
        if isinstance(ry, RoleSpoke):
            u, j, p = ry.unit, ry.spoke, ry.pos
            if (
                isinstance(rx, RoleSpoke)
                and rx.unit == u
                and rx.spoke == j
                and rx.inbound == ry.inbound
            ):
                q = rx.pos
                if (not ry.inbound and q <= p) or (ry.inbound and q >= p):
                    return abs(p - q)
            if ry.inbound:
                corner = c.units[u].corners[j]
                base = self.d_corner[corner - 12][x]
                return base if base < 0 else base + (self.S - p)
            base = self.d_center[u][x]
            return base if base < 0 else base + p
        if isinstance(ry, RoleGreen):
            if isinstance(rx, RoleGreen) and rx.path == ry.path and rx.pos <= ry.pos:
                return ry.pos - rx.pos
            exitc = c.green_paths[ry.path].exit_corner
            base = self.d_corner[exitc - 12][x]
            return base if base < 0 else base + ry.pos
        # chain interior
        u, ci, lane, i = ry.unit, ry.chain, ry.lane, ry.pos
        unit = c.units[u]
        a = unit.corners[ci]
        b = unit.corners[(ci + 1) % 10]
        da = self.d_corner[a - 12][x]
        db = self.d_corner[b - 12][x]
        best = None
        if da >= 0:
            best = da + (i if lane == "f" else i + 1)
        if db >= 0:
            alt = db + ((self.C - i) + 1 if lane == "f" else (self.C - i))
            best = alt if best is None else min(best, alt)
        if isinstance(rx, RoleChain) and rx.unit == u and rx.chain == ci:
            local = _chain_local(rx.lane, rx.pos, lane, i)
            best = local if best is None else min(best, local)
        return UNREACHABLE if best is None else best


def _chain_local(lane_q, q, lane_i, i):
    """Distance between interior chain vertices without leaving the gadget."""
    if lane_q == "f":
        if lane_i == "f":
            return i - q if i >= q else (q - i) + 2
        return (i - q) + 1 if i >= q else (q - i) + 1
    if lane_i == "b":
        return q - i if q >= i else (i - q) + 2
    return (i - q) + 1 if i >= q else (q - i) + 1
