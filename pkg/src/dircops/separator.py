"""Planar separators with the 2/3 balance and |C| <= 4*sqrt(n) guarantee.

Works on the underlying undirected graph of an embedded region.  Strategy:
BFS levels from a root; pick two light levels bracketing the weight median
(minimizing level size plus twice the distance to the median, the standard
slack that keeps both the level sizes and the later cycle length in budget).
If the part between them is light, those two levels separate.  Otherwise a
fundamental-cycle step runs on the level-prefix subgraph: fan-triangulate
the embedded faces, take the BFS spanning tree (whose paths climb one level
per step, so any fundamental cycle meets the middle in at most 2*(gap)
vertices), and scan non-tree edges for a cycle splitting the middle weight
no worse than 2/3.  Face weights for all cycles at once come from subtree
sums over the interdigitating dual tree.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .graph import Digraph, GraphError, RotationSystem


@dataclass
class SeparatorResult:
    A: list
    B: list
    C: list

    def check(self, g: Digraph, region=None):
        """Raise unless this is a partition of the region with no A-B arc."""
        region = set(range(g.n)) if region is None else set(region)
        a, b, c = set(self.A), set(self.B), set(self.C)
        if a | b | c != region or (a & b or a & c or b & c):
            raise GraphError("A,B,C do not partition the region")
        for t, h in g.arcs:
            if (t in a and h in b) or (t in b and h in a):
                raise GraphError(f"edge {t}-{h} crosses A-B")


def _pack(pieces, region_sets):
    """Bipartition pieces (weight, set) minimizing the heavier side."""
    m = len(pieces)
    if m <= 16:
        best = None
        for bits in range(1 << m):
            wa = sum(p[0] for i, p in enumerate(pieces) if bits >> i & 1)
            wb = sum(p[0] for i, p in enumerate(pieces) if not bits >> i & 1)
            key = max(wa, wb)
            if best is None or key < best[0]:
                best = (key, bits)
        bits = best[1]
        A, B = [], []
        for i, (_w, s) in enumerate(pieces):
            (A if bits >> i & 1 else B).extend(s)
        return A, B
    # many pieces: greedy largest-first into the lighter side
    A, B, wa, wb = [], [], 0, 0
    for w, s in sorted(pieces, key=lambda p: -p[0]):
        if wa <= wb:
            A.extend(s)
            wa += w
        else:
            B.extend(s)
            wb += w
    return A, B


def separate(g: Digraph, rotation: RotationSystem, region=None, weights=None):
    """Separator of a connected embedded region (defaults to all of g)."""
    region = sorted(range(g.n)) if region is None else sorted(region)
    r = len(region)
    if r == 0:
        return SeparatorResult([], [], [])
    idx = {v: i for i, v in enumerate(region)}
    rset = set(region)
    # restriction of the rotation system keeps a valid embedding
    adj = [[u for u in rotation.order[v] if u in rset] for v in region]
    adj = [[idx[u] for u in nbrs] for nbrs in adj]
    w = (
        [1] * r
        if weights is None
        else [int(weights[v]) for v in region]
    )
    total = sum(w)

    if r <= 2:
        return SeparatorResult([], [], list(region))

    # BFS levels
    level = [-1] * r
    level[0] = 0
    order = [0]
    q = deque([0])
    parent = [-1] * r
    while q:
        u = q.popleft()
        for v in adj[u]:
            if level[v] < 0:
                level[v] = level[u] + 1
                parent[v] = u
                order.append(v)
                q.append(v)
    if len(order) != r:
        raise GraphError("region is not connected")
    nlev = max(level) + 1
    levels = [[] for _ in range(nlev + 1)]  # sentinel empty level at the end
    for v in range(r):
        levels[level[v]].append(v)
    lw = [sum(w[v] for v in lv) for lv in levels]

    # weight-median level
    acc = 0
    mu = 0
    for l in range(nlev):
        acc += lw[l]
        if 2 * acc >= total:
            mu = l
            break

    l0 = min(range(mu + 1), key=lambda l: len(levels[l]) + 2 * (mu - l))
    l2 = min(
        range(mu + 1, nlev + 1), key=lambda l: len(levels[l]) + 2 * (l - mu - 1)
    )

    below = [v for v in range(r) if level[v] < l0]
    middle = [v for v in range(r) if l0 < level[v] < l2]
    above = [v for v in range(r) if level[v] > l2]
    wm = sum(w[v] for v in middle)

    if 3 * wm <= 2 * total:
        C = levels[l0] + levels[l2]
        pieces = [
            (sum(w[v] for v in part), part)
            for part in (below, middle, above)
            if part
        ]
        A, B = _pack(pieces, None)
        return SeparatorResult(
            sorted(region[v] for v in A),
            sorted(region[v] for v in B),
            sorted(region[v] for v in C),
        )

    # heavy middle: fundamental-cycle step on levels < l2
    cyc_mid = _cycle_separator(adj, level, parent, w, l0, l2, wm)
    C = levels[l0] + levels[l2] + cyc_mid
    cset = set(C)
    # components of the middle with the cycle removed
    comp_pieces = []
    seen = [False] * r
    mid_set = set(middle)
    for s in middle:
        if seen[s] or s in cset:
            continue
        comp = []
        seen[s] = True
        stack = [s]
        while stack:
            u = stack.pop()
            comp.append(u)
            for v in adj[u]:
                if v in mid_set and not seen[v] and v not in cset:
                    seen[v] = True
                    stack.append(v)
        comp_pieces.append((sum(w[v] for v in comp), comp))
    pieces = comp_pieces + [
        (sum(w[v] for v in part), part) for part in (below, above) if part
    ]
    A, B = _pack(pieces, None)
    return SeparatorResult(
        sorted(region[v] for v in A),
        sorted(region[v] for v in B),
        sorted(region[v] for v in C),
    )


def _trace_local_faces(adj, keep):
    """Face walks of the embedded subgraph on ``keep`` (dart tracing)."""
    pos = [
        {u: i for i, u in enumerate(nbrs)} if keep[v] else None
        for v, nbrs in enumerate(adj)
    ]
    faces = []
    face_of_dart = {}
    for v0 in range(len(adj)):
        if not keep[v0]:
            continue
        for u0 in adj[v0]:
            if (v0, u0) in face_of_dart:
                continue
            fid = len(faces)
            walk = []
            d = (v0, u0)
            while d not in face_of_dart:
                face_of_dart[d] = fid
                walk.append(d)
                u, v = d
                nbrs = adj[v]
                d = (v, nbrs[(pos[v][u] + 1) % len(nbrs)])
            faces.append(walk)
    return faces, face_of_dart


def _cycle_separator(adj, level, parent, w, l0, l2, wm):
    """Vertices of a fundamental cycle restricted to the middle levels,
    splitting the middle weight at worst 2/3 vs 1/3."""
    r = len(adj)
    keep = [0 <= level[v] < l2 for v in range(r)]
    sub_adj = [
        [u for u in adj[v] if keep[u]] if keep[v] else [] for v in range(r)
    ]
    faces, face_of_dart = _trace_local_faces(sub_adj, keep)
    nfaces = len(faces)

    # fan-triangulate big faces; collect per-edge-instance face pairs
    dual_edges = []  # (face1, face2, a, b) for every non-tree instance later
    inst_faces = {}  # canonical original edge -> [faces of its two darts]
    owner = {}  # vertex -> an incident face id
    for walk_id, walk in enumerate(faces):
        pass
    for (u, v), f in face_of_dart.items():
        owner.setdefault(u, f)
        inst_faces.setdefault((min(u, v), max(u, v)), []).append(f)

    extra = []  # diagonal instances: (face1, face2)
    next_face = nfaces
    dart_face = dict(face_of_dart)
    for fid in range(nfaces):
        walk = faces[fid]
        m = len(walk)
        if m <= 3:
            continue
        verts = [d[0] for d in walk]
        # apex: least-repeated vertex on the walk
        occ = {}
        for x in verts:
            occ[x] = occ.get(x, 0) + 1
        k = min(range(m), key=lambda i: (occ[verts[i]], i))
        verts = verts[k:] + verts[:k]
        walk = walk[k:] + walk[:k]
        # triangles T_j = (apex, verts[j], verts[j+1]), j = 1..m-2; reuse fid
        # for T_1 and allocate new face ids for the rest
        tri_ids = [None, fid] + [next_face + j for j in range(m - 3)]
        next_face += m - 3
        apex = verts[0]
        for j in range(1, m - 1):
            dart_face[walk[j]] = tri_ids[j]
        dart_face[walk[0]] = tri_ids[1]
        dart_face[walk[m - 1]] = tri_ids[m - 2]
        for j in range(2, m - 1):
            if verts[j] == apex:
                continue  # would be a self-loop; leaves a bigon, harmless
            extra.append((tri_ids[j - 1], tri_ids[j], apex, verts[j]))
    nfaces = next_face
    # refresh incidences after re-assignment
    inst_faces = {}
    owner = {}
    for (u, v), f in dart_face.items():
        owner.setdefault(u, f)
        key = (min(u, v), max(u, v))
        inst_faces.setdefault(key, []).append(f)

    # spanning tree = BFS tree arcs (restricted to kept vertices, which form
    # a level prefix, so every parent link survives)
    tree = set()
    for v in range(r):
        if keep[v] and parent[v] >= 0:
            a, b = v, parent[v]
            tree.add((min(a, b), max(a, b)))

    # dual tree edges: one per non-tree edge instance
    dual_adj = [[] for _ in range(nfaces)]
    cand = []
    for key, fs in inst_faces.items():
        if key in tree:
            continue
        f1, f2 = fs
        eid = len(cand)
        cand.append((key[0], key[1]))
        dual_adj[f1].append((f2, eid))
        dual_adj[f2].append((f1, eid))
    for f1, f2, a, b in extra:
        eid = len(cand)
        cand.append((a, b))
        dual_adj[f1].append((f2, eid))
        dual_adj[f2].append((f1, eid))

    # root the dual tree; subtree owner-weight sums and Euler intervals
    own_w = [0] * nfaces
    for v, f in owner.items():
        if level[v] > l0:  # only middle weight participates
            own_w[f] += w[v]
    tin = [-1] * nfaces
    tout = [0] * nfaces
    sub = list(own_w)
    child_of = [None] * len(cand)  # eid -> child face
    timer = 0
    stack = [(0, -1, False)]
    while stack:
        f, pe, done = stack.pop()
        if done:
            tout[f] = timer
            if pe >= 0:
                child_of[pe] = f
            continue
        tin[f] = timer
        timer += 1
        stack.append((f, pe, True))
        for f2, eid in dual_adj[f]:
            if tin[f2] < 0:
                stack.append((f2, eid, False))
    # accumulate subtree sums bottom-up by tin order
    by_depth = sorted(range(nfaces), key=lambda f: -tin[f])
    parent_face = {}
    for f in range(nfaces):
        for f2, eid in dual_adj[f]:
            if child_of[eid] == f2:
                parent_face[f2] = f
    for f in by_depth:
        p = parent_face.get(f)
        if p is not None:
            sub[p] += sub[f]

    def inside(f, eid):
        cf = child_of[eid]
        return tin[cf] <= tin[f] < tout[cf]

    def middle_cycle(a, b):
        """Middle-level vertices of the fundamental cycle of edge (a,b)."""
        pa, seen_a = [], {}
        x = a
        while x >= 0 and level[x] > l0:
            seen_a[x] = len(pa)
            pa.append(x)
            x = parent[x]
        pb = []
        x = b
        while x >= 0 and level[x] > l0:
            if x in seen_a:  # met the other climb: cut both at the junction
                return pa[: seen_a[x] + 1] + pb
            pb.append(x)
            x = parent[x]
        return pa + pb

    # scan candidates, most promising split first
    half = wm / 2
    ordered = sorted(
        range(len(cand)), key=lambda e: abs(sub[child_of[e]] - half)
    )
    best = None
    for eid in ordered:
        a, b = cand[eid]
        cyc = middle_cycle(a, b)
        wc = sum(w[v] for v in cyc)
        w_in = sub[child_of[eid]] - sum(
            w[v] for v in cyc if inside(owner[v], eid)
        )
        w_out = wm - w_in - wc
        score = max(w_in, w_out)
        if best is None or score < best[0]:
            best = (score, cyc)
        if 3 * score <= 2 * wm:
            break
    return best[1]


def separate_components(g: Digraph, rotation: RotationSystem, region=None, weights=None):
    """Separator for possibly-disconnected regions: split a dominant
    component if one exists, else just balance whole components."""
    region = sorted(range(g.n)) if region is None else sorted(region)
    rset = set(region)
    w = {v: 1 if weights is None else int(weights[v]) for v in region}
    total = sum(w.values())
    seen = set()
    comps = []
    for s in region:
        if s in seen:
            continue
        comp = [s]
        seen.add(s)
        stack = [s]
        while stack:
            u = stack.pop()
            for v in rotation.order[u]:
                if v in rset and v not in seen:
                    seen.add(v)
                    comp.append(v)
                    stack.append(v)
        comps.append(comp)
    big = max(comps, key=lambda c: sum(w[v] for v in c))
    if 3 * sum(w[v] for v in big) > 2 * total:
        inner = separate(g, rotation, big, weights)
        pieces = [(sum(w[v] for v in inner.A), list(inner.A))]
        pieces.append((sum(w[v] for v in inner.B), list(inner.B)))
        for c in comps:
            if c is not big:
                pieces.append((sum(w[v] for v in c), c))
        A, B = _pack(pieces, None)
        return SeparatorResult(sorted(A), sorted(B), list(inner.C))
    pieces = [(sum(w[v] for v in c), c) for c in comps]
    A, B = _pack(pieces, None)
    return SeparatorResult(sorted(A), sorted(B), [])
