"""Arena generator: icosahedron -> flag solid -> oriented, subdivided game graph.

The arena is built in stages:

1. an icosahedron with golden-ratio coordinates and a geometric rotation
   system;
2. its flag solid (one vertex per incident vertex/edge/face triple), whose
   faces split into 12 decagons, 30 squares and 20 hexagons;
3. hexagon-driven orientation of the decagon-to-decagon ("green") edges;
4. assembly: green edges become one-way paths of length G, each decagon
   gains a center joined by length-S spokes (outbound at exits, inbound at
   entries), and each decagon edge becomes a two-lane chain gadget with
   end-to-end cost C and a 1-step lane change.

All vertices carry 3D coordinates on the unit sphere; the rotation system
is derived from them and certified with Euler's formula.
"""

from __future__ import annotations

import math
from collections import namedtuple
from dataclasses import dataclass

from .graph import (
    Digraph,
    GraphError,
    RotationSystem,
    bfs_distances,
    euler_check,
    strongly_connected,
    trace_faces,
)

# --------------------------------------------------------------------------
# small vector helpers (3-tuples; no numpy needed at this scale)


def _norm(p):
    return math.sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2])


def _unit(p):
    n = _norm(p)
    return (p[0] / n, p[1] / n, p[2] / n)


def _add(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def _sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _scale(a, s):
    return (a[0] * s, a[1] * s, a[2] * s)


def _dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _cross(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _slerp(a, b, t):
    """Interpolate along the great-circle arc from a to b (unit vectors)."""
    cosw = max(-1.0, min(1.0, _dot(a, b)))
    w = math.acos(cosw)
    if w < 1e-12:
        return a
    sa = math.sin((1.0 - t) * w) / math.sin(w)
    sb = math.sin(t * w) / math.sin(w)
    return _unit(_add(_scale(a, sa), _scale(b, sb)))


def rotation_from_coords(adj, coords):
    """Cyclic neighbor order at each vertex: sort by angle in the tangent
    plane of the outward normal (counter-clockwise seen from outside)."""
    order = []
    for v, nbrs in enumerate(adj):
        p = coords[v]
        n = _unit(p)
        ref = (1.0, 0.0, 0.0)
        if abs(_dot(ref, n)) > 0.9:
            ref = (0.0, 1.0, 0.0)
        e1 = _unit(_sub(ref, _scale(n, _dot(ref, n))))
        e2 = _cross(n, e1)
        ang = []
        for u in nbrs:
            d = _sub(coords[u], p)
            ang.append((math.atan2(_dot(d, e2), _dot(d, e1)), u))
        ang.sort()
        order.append([u for _, u in ang])
    return RotationSystem(order)


# --------------------------------------------------------------------------
# icosahedron


@dataclass
class Icosahedron:
    coords: list  # 12 unit vectors
    edges: list  # 30 sorted pairs
    faces: list  # 20 sorted triples
    adj: list  # undirected adjacency (sorted)
    rotation: RotationSystem

    def edge_index(self, a, b):
        return self._edge_idx[(min(a, b), max(a, b))]

    def faces_of_edge(self, a, b):
        return self._edge_faces[(min(a, b), max(a, b))]


def build_icosahedron() -> Icosahedron:
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    raw = []
    for a, b in [(1.0, phi), (-1.0, phi), (1.0, -phi), (-1.0, -phi)]:
        raw.append((0.0, a, b))
        raw.append((a, b, 0.0))
        raw.append((b, 0.0, a))
    coords = [_unit(p) for p in raw]
    # edges join vertices at the minimal pairwise distance (chord length 2/phi..)
    min_d = min(
        _norm(_sub(coords[i], coords[j])) for i in range(12) for j in range(i + 1, 12)
    )
    edges = [
        (i, j)
        for i in range(12)
        for j in range(i + 1, 12)
        if _norm(_sub(coords[i], coords[j])) < min_d * 1.2
    ]
    adj = [[] for _ in range(12)]
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    adj = [sorted(x) for x in adj]
    rot = rotation_from_coords(adj, coords)
    # recover triangular faces by dart tracing
    und = Digraph.from_arcs(12, [(a, b) for a, b in edges] + [(b, a) for a, b in edges])
    face_cycles = trace_faces(und, rot)
    faces = sorted({tuple(sorted(u for u, _ in cyc)) for cyc in face_cycles})
    ico = Icosahedron(coords=coords, edges=edges, faces=faces, adj=adj, rotation=rot)
    ico._edge_idx = {e: i for i, e in enumerate(edges)}
    ico._edge_faces = {}
    for fi, f in enumerate(faces):
        for a, b in ((f[0], f[1]), (f[0], f[2]), (f[1], f[2])):
            ico._edge_faces.setdefault((a, b), []).append(fi)
    return ico


# --------------------------------------------------------------------------
# flag solid

Flag = namedtuple("Flag", "v e f")  # ico vertex, ico edge index, ico face index


@dataclass
class FlagSolid:
    ico: Icosahedron
    flags: list  # 120 Flag triples
    index: dict  # Flag -> flag id
    coords: list  # unit-sphere coordinates per flag
    partner_v: list  # flag id differing in the vertex coordinate (green)
    partner_e: list  # flag id differing in the edge coordinate
    partner_f: list  # flag id differing in the face coordinate
    decagons: list  # per ico vertex: flag cycle of length 10
    squares: list  # per ico edge: flag cycle of length 4
    hexagons: list  # per ico face: flag cycle of length 6
    green_darts: list  # oriented green edges as (tail flag, head flag)

    @property
    def green_edges(self):
        return [(min(a, b), max(a, b)) for a, b in self.green_darts]


def _face_cycle(start, step_a, step_b):
    """Orbit of alternating partner maps, starting with step_a."""
    cyc = [start]
    x = step_a[start]
    use_b = True
    while x != start:
        cyc.append(x)
        x = step_b[x] if use_b else step_a[x]
        use_b = not use_b
    return cyc


def build_flag_solid(ico: Icosahedron) -> FlagSolid:
    flags = []
    for fi, face in enumerate(ico.faces):
        for v in face:
            others = [u for u in face if u != v]
            for u in others:
                flags.append(Flag(v, ico.edge_index(v, u), fi))
    flags = sorted(set(flags))
    if len(flags) != 120:
        raise GraphError(f"flag count {len(flags)} != 120")
    index = {fl: i for i, fl in enumerate(flags)}

    partner_v = [None] * 120
    partner_e = [None] * 120
    partner_f = [None] * 120
    for i, fl in enumerate(flags):
        a, b = ico.edges[fl.e]
        partner_v[i] = index[Flag(a if fl.v == b else b, fl.e, fl.f)]
        face = ico.faces[fl.f]
        other_e = next(
            ico.edge_index(fl.v, u)
            for u in face
            if u != fl.v and ico.edge_index(fl.v, u) != fl.e
        )
        partner_e[i] = index[Flag(fl.v, other_e, fl.f)]
        other_f = next(fi for fi in ico.faces_of_edge(a, b) if fi != fl.f)
        partner_f[i] = index[Flag(fl.v, fl.e, other_f)]

    coords = []
    for fl in flags:
        a, b = ico.edges[fl.e]
        emid = _scale(_add(ico.coords[a], ico.coords[b]), 0.5)
        fc = ico.faces[fl.f]
        fcent = _scale(
            _add(_add(ico.coords[fc[0]], ico.coords[fc[1]]), ico.coords[fc[2]]),
            1.0 / 3.0,
        )
        p = _add(_add(_scale(ico.coords[fl.v], 6.0), _scale(emid, 2.0)), fcent)
        coords.append(_unit(p))

    decagons = []
    for v in range(12):
        start = next(i for i, fl in enumerate(flags) if fl.v == v)
        decagons.append(_face_cycle(start, partner_e, partner_f))
    squares = []
    for e in range(30):
        start = next(i for i, fl in enumerate(flags) if fl.e == e)
        squares.append(_face_cycle(start, partner_v, partner_f))
    hexagons = []
    for f in range(20):
        start = next(i for i, fl in enumerate(flags) if fl.f == f)
        hexagons.append(_face_cycle(start, partner_v, partner_e))
    for name, cycles, k in (
        ("decagon", decagons, 10),
        ("square", squares, 4),
        ("hexagon", hexagons, 6),
    ):
        for cyc in cycles:
            if len(cyc) != k:
                raise GraphError(f"{name} cycle has length {len(cyc)}")

    green_darts = orient_hexagons(flags, coords, partner_v, hexagons)
    solid = FlagSolid(
        ico=ico,
        flags=flags,
        index=index,
        coords=coords,
        partner_v=partner_v,
        partner_e=partner_e,
        partner_f=partner_f,
        decagons=decagons,
        squares=squares,
        hexagons=hexagons,
        green_darts=green_darts,
    )
    _check_orientation(solid)
    return solid


def _cycle_is_ccw(cycle, coords):
    """True if the closed vertex cycle is counter-clockwise as seen from
    outside the sphere (signed area points along the outward centroid)."""
    cent = (0.0, 0.0, 0.0)
    for i in cycle:
        cent = _add(cent, coords[i])
    cent = _unit(cent)
    area = (0.0, 0.0, 0.0)
    for i, a in enumerate(cycle):
        b = cycle[(i + 1) % len(cycle)]
        area = _add(area, _cross(coords[a], coords[b]))
    return _dot(area, cent) > 0


def orient_hexagons(flags, coords, partner_v, hexagons):
    """Direct every green (vertex-change) edge along its hexagon's
    counter-clockwise boundary.  Each green edge lies on exactly one hexagon,
    so this orients each exactly once."""
    darts = {}
    for cyc in hexagons:
        if not _cycle_is_ccw(cyc, coords):
            cyc = cyc[::-1]
        for i, a in enumerate(cyc):
            b = cyc[(i + 1) % len(cyc)]
            if partner_v[a] == b:
                key = (min(a, b), max(a, b))
                if key in darts:
                    raise GraphError("green edge oriented twice")
                darts[key] = (a, b)
    if len(darts) != 60:
        raise GraphError(f"oriented {len(darts)} green edges, expected 60")
    return sorted(darts.values())


def _check_orientation(solid: FlagSolid):
    tails = {a for a, _ in solid.green_darts}
    heads = {b for _, b in solid.green_darts}
    # each square carries one green edge into each incident decagon
    dart_set = set(solid.green_darts)
    for sq in solid.squares:
        greens = [
            (a, b)
            for i, a in enumerate(sq)
            for b in [sq[(i + 1) % 4]]
            if solid.partner_v[a] == b
        ]
        units = set()
        for a, b in greens:
            d = (a, b) if (a, b) in dart_set else (b, a)
            units.add(solid.flags[d[1]].v)  # unit being entered
        if len(units) != 2:
            raise GraphError("square does not feed both of its decagons")
    # exits and entries alternate around every decagon
    for cyc in solid.decagons:
        kinds = ["exit" if x in tails else "entry" for x in cyc]
        for i, k in enumerate(kinds):
            if k == kinds[(i + 1) % 10]:
                raise GraphError("exits/entries do not alternate on a decagon")
    if tails | heads != set(range(120)) or tails & heads:
        raise GraphError("each flag must be exactly one of exit/entry")


# --------------------------------------------------------------------------
# parameters and assembled construction


@dataclass(frozen=True)
class ConstructionParams:
    green_len: int = 1000  # G: turns to traverse a unit-to-unit path
    spoke_len: int = 10  # S: turns along a spoke
    chain_len: int = 16  # C: turns end-to-end along a chain gadget

    def validate(self):
        if self.green_len < 2 or self.spoke_len < 1 or self.chain_len < 2:
            raise GraphError(f"invalid params {self}")


def vertex_count_formula(p: ConstructionParams) -> int:
    s, c, g = p.spoke_len, p.chain_len, p.green_len
    return 12 * (1 + 10 + 10 * (s - 1) + 20 * (c - 1)) + 60 * (g - 1)


def arc_count_formula(p: ConstructionParams) -> int:
    s, c, g = p.spoke_len, p.chain_len, p.green_len
    return 60 * g + 120 * s + 120 * (4 * c - 2)


def exit_budget(p: ConstructionParams) -> int:
    """Conservative robber moves needed to exit a unit after the 1-cop
    trigger: a full perimeter circuit plus the return-to-center detour and
    the final center-to-exit sprint."""
    s, c = p.spoke_len, p.chain_len
    return 1 + 10 * c + (1 + c + 2 * s)


def admissible(p: ConstructionParams):
    """The green paths must outlast the worst-case exit sequence."""
    p.validate()
    t_exit = exit_budget(p)
    threshold = t_exit + 2 * p.spoke_len
    return p.green_len > threshold, {
        "green_len": p.green_len,
        "exit_budget": t_exit,
        "threshold": threshold,
    }


# vertex roles ------------------------------------------------------------

RoleCenter = namedtuple("RoleCenter", "unit")
RoleSpoke = namedtuple("RoleSpoke", "unit spoke pos inbound")
RoleCorner = namedtuple("RoleCorner", "unit corner kind")  # kind: exit|entry
RoleChain = namedtuple("RoleChain", "unit chain lane pos")  # lane: f|b
RoleGreen = namedtuple("RoleGreen", "src dst pos path")

Unit = namedtuple(
    "Unit",
    "center corners corner_kinds spokes chains exits entries neighbors",
)
GreenPath = namedtuple("GreenPath", "src dst exit_corner entry_corner interior")
ChainGadget = namedtuple("ChainGadget", "unit chain a b flane blane")


@dataclass
class Construction:
    params: ConstructionParams
    graph: Digraph
    rotation: RotationSystem
    coords: list
    roles: list
    units: list  # 12 Unit records
    unit_adjacency: list  # icosahedron adjacency
    green_paths: list  # 60 GreenPath records
    chain_gadgets: list  # 120 ChainGadget records
    solid: FlagSolid

    def unit_of(self, v):
        """Unit id for in-unit vertices; ('transit', src, dst) for green
        interiors."""
        self.graph.check_vertex(v)
        r = self.roles[v]
        if isinstance(r, RoleGreen):
            return ("transit", r.src, r.dst)
        return r.unit

    def effective_unit(self, v):
        """Unit a cop at v should be charged to: transit cops count at their
        destination (they have nowhere else to go)."""
        r = self.roles[v]
        return r.dst if isinstance(r, RoleGreen) else r.unit

    def effective_position(self, v):
        """Transit cops are treated as already at the entry corner they are
        headed for; everyone else is where they stand."""
        r = self.roles[v]
        if isinstance(r, RoleGreen):
            return self.green_paths[r.path].entry_corner
        return v


def assemble(params: ConstructionParams = ConstructionParams()) -> Construction:
    params.validate()
    g_len, s_len, c_len = params.green_len, params.spoke_len, params.chain_len
    ico = build_icosahedron()
    solid = build_flag_solid(ico)

    n = 12 + 120
    coords = [ico.coords[u] for u in range(12)] + list(solid.coords)
    roles = [RoleCenter(u) for u in range(12)] + [None] * 120
    arcs = []

    tails = {a for a, _ in solid.green_darts}

    def corner_id(flag):
        return 12 + flag

    def alloc(k, coord_fn):
        nonlocal n
        ids = list(range(n, n + k))
        n += k
        coords.extend(coord_fn(i) for i in range(k))
        roles.extend([None] * k)
        return ids

    units = []
    for u in range(12):
        cyc = solid.decagons[u]
        if not _cycle_is_ccw(cyc, solid.coords):
            cyc = cyc[::-1]
        corners = [corner_id(x) for x in cyc]
        kinds = ["exit" if x in tails else "entry" for x in cyc]
        for ci, (vid, kind) in enumerate(zip(corners, kinds)):
            roles[vid] = RoleCorner(u, ci, kind)
        units.append(
            Unit(
                center=u,
                corners=corners,
                corner_kinds=kinds,
                spokes=[],
                chains=[],
                exits=[],
                entries=[],
                neighbors=list(ico.adj[u]),
            )
        )

    # spokes: outbound center->corner at exits, inbound corner->center at entries
    for u in range(12):
        unit = units[u]
        for ci, (vid, kind) in enumerate(zip(unit.corners, unit.corner_kinds)):
            a, b = coords[u], coords[vid]
            ids = alloc(s_len - 1, lambda i: _slerp(a, b, (i + 1) / s_len))
            inbound = kind == "entry"
            for p, w in enumerate(ids, start=1):
                roles[w] = RoleSpoke(u, ci, p, inbound)
            chain_vertices = [u] + ids + [vid]  # center -> corner order
            if inbound:
                chain_vertices = chain_vertices[::-1]
            for x, y in zip(chain_vertices, chain_vertices[1:]):
                arcs.append((x, y))
            unit.spokes.append(ids)

    # chain gadgets: one per decagon edge, spanning corners[i] -> corners[i+1]
    chain_gadgets = []
    for u in range(12):
        unit = units[u]
        for ci in range(10):
            va = unit.corners[ci]
            vb = unit.corners[(ci + 1) % 10]
            a, b = coords[va], coords[vb]
            mid = _unit(_add(a, b))
            perp = _cross(mid, _sub(b, a))
            eps = 0.10 * _norm(_sub(b, a))
            perp = _scale(_unit(perp), eps)

            def lane_coord(i, sign, a=a, b=b, perp=perp):
                base = _slerp(a, b, (i + 1) / c_len)
                return _unit(_add(base, _scale(perp, sign)))

            flane = alloc(c_len - 1, lambda i: lane_coord(i, 1.0))
            blane = alloc(c_len - 1, lambda i: lane_coord(i, -1.0))
            for p, w in enumerate(flane, start=1):
                roles[w] = RoleChain(u, ci, "f", p)
            for p, w in enumerate(blane, start=1):
                roles[w] = RoleChain(u, ci, "b", p)
            fl = [va] + flane + [vb]
            bl = [va] + blane + [vb]
            for x, y in zip(fl, fl[1:]):
                arcs.append((x, y))  # forward lane runs a -> b
            for x, y in zip(bl, bl[1:]):
                arcs.append((y, x))  # backward lane runs b -> a
            for fx, bx in zip(flane, blane):
                arcs.append((fx, bx))
                arcs.append((bx, fx))
            gadget = ChainGadget(unit=u, chain=ci, a=va, b=vb, flane=flane, blane=blane)
            chain_gadgets.append(gadget)
            unit.chains.append(gadget)

    # green paths: one per oriented green dart
    green_paths = []
    for pid, (fa, fb) in enumerate(solid.green_darts):
        src, dst = solid.flags[fa].v, solid.flags[fb].v
        va, vb = corner_id(fa), corner_id(fb)
        a, b = coords[va], coords[vb]
        ids = alloc(g_len - 1, lambda i: _slerp(a, b, (i + 1) / g_len))
        for p, w in enumerate(ids, start=1):
            roles[w] = RoleGreen(src, dst, p, pid)
        path_vertices = [va] + ids + [vb]
        for x, y in zip(path_vertices, path_vertices[1:]):
            arcs.append((x, y))
        green_paths.append(
            GreenPath(src=src, dst=dst, exit_corner=va, entry_corner=vb, interior=ids)
        )
        units[src].exits.append((roles[va].corner, dst, pid))
        units[dst].entries.append((roles[vb].corner, src, pid))

    graph = Digraph.from_arcs(n, arcs)
    rotation = rotation_from_coords(graph.undirected_adj(), coords)
    return Construction(
        params=params,
        graph=graph,
        rotation=rotation,
        coords=coords,
        roles=roles,
        units=units,
        unit_adjacency=[list(a) for a in ico.adj],
        green_paths=green_paths,
        chain_gadgets=chain_gadgets,
        solid=solid,
    )


# --------------------------------------------------------------------------
# invariant checks (used by tests and `build --check`)


def check_chain_gadget(c: Construction, gadget: ChainGadget):
    """Min corner-to-corner distance equals C both ways; every interior lane
    vertex can switch lanes in exactly one arc."""
    members = {gadget.a, gadget.b} | set(gadget.flane) | set(gadget.blane)
    garcs = _gadget_arcs(gadget)
    sub_out = {
        v: [w for w in c.graph.out_adj[v] if (v, w) in garcs] for v in members
    }

    def dist(s, t):
        seen = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                for y in sub_out[x]:
                    if y not in seen:
                        seen[y] = seen[x] + 1
                        nxt.append(y)
            frontier = nxt
        return seen.get(t)

    if dist(gadget.a, gadget.b) != c.params.chain_len:
        raise GraphError("chain forward traverse != C")
    if dist(gadget.b, gadget.a) != c.params.chain_len:
        raise GraphError("chain backward traverse != C")
    for fx, bx in zip(gadget.flane, gadget.blane):
        if bx not in c.graph.out_adj[fx] or fx not in c.graph.out_adj[bx]:
            raise GraphError("missing lane-switch rung")


def _gadget_arcs(gadget: ChainGadget):
    fl = [gadget.a] + list(gadget.flane) + [gadget.b]
    bl = [gadget.a] + list(gadget.blane) + [gadget.b]
    arcs = set(zip(fl, fl[1:])) | {(y, x) for x, y in zip(bl, bl[1:])}
    for fx, bx in zip(gadget.flane, gadget.blane):
        arcs.add((fx, bx))
        arcs.add((bx, fx))
    return arcs


def check_neighborhood_overlap(unit_adj):
    """|N(u) ∩ N[u']| <= 3, equality only for neighboring u, u'."""
    for u in range(len(unit_adj)):
        nu = set(unit_adj[u])
        for up in range(len(unit_adj)):
            if up == u:
                continue
            closed = set(unit_adj[up]) | {up}
            k = len(nu & closed)
            if k > 3 or (k == 3 and up not in nu):
                raise GraphError(f"neighborhood overlap violated at {u},{up}")


def validate(c: Construction):
    p = c.params
    if c.graph.n != vertex_count_formula(p):
        raise GraphError(f"vertex count {c.graph.n} != formula")
    if len(c.graph.arcs) != arc_count_formula(p):
        raise GraphError(f"arc count {len(c.graph.arcs)} != formula")
    if not strongly_connected(c.graph):
        raise GraphError("construction not strongly connected")
    if not euler_check(c.graph, c.rotation):
        raise GraphError("Euler check failed on assembled construction")
    for unit in c.units:
        if len(unit.exits) != 5 or len(unit.entries) != 5:
            raise GraphError("unit does not have 5 exits and 5 entries")
        dests = {d for _, d, _ in unit.exits}
        if dests != set(unit.neighbors):
            raise GraphError("exits do not reach the 5 distinct neighbors")
    pair_dirs = {}
    for gp in c.green_paths:
        pair_dirs.setdefault((min(gp.src, gp.dst), max(gp.src, gp.dst)), set()).add(
            (gp.src, gp.dst)
        )
    if len(pair_dirs) != 30 or any(len(v) != 2 for v in pair_dirs.values()):
        raise GraphError("green paths do not form 30 antiparallel unit pairs")
    for gadget in c.chain_gadgets:
        check_chain_gadget(c, gadget)
    check_neighborhood_overlap(c.unit_adjacency)
    return True
