"""Cop strategies: baselines, chasers, blockers, and a scripted 4-cop trap.

All strategies are deterministic in (config, seed).  Strategies that know
the arena is a unit construction take it (plus a distance oracle) for O(1)
distance queries; the generic ones fall back to cached BFS.
"""

from __future__ import annotations

from .construction import Construction, RoleChain, RoleCorner, RoleGreen
from .engine import COP_TURN, CopStrategy
from .graph import bfs_distances
from .oracle import ConstructionOracle


class _DistMixin:
    """dist(x, y) via oracle when available, else cached backward BFS."""

    def _init_dist(self, construction=None, oracle=None):
        self.construction = construction
        if construction is not None and oracle is None:
            oracle = ConstructionOracle(construction)
        self.oracle = oracle
        self._bfs_cache = {}

    def dist(self, x, y):
        if self.oracle is not None:
            return self.oracle.dist(x, y)
        if y not in self._bfs_cache:
            if len(self._bfs_cache) > 256:
                self._bfs_cache.clear()
            self._bfs_cache[y] = bfs_distances(self.config.graph, y, "backward")
        return self._bfs_cache[y][x]

    def _greedy_step(self, p, target):
        """Out-neighbor (or stay) minimizing distance to target."""
        best, best_d = p, self.dist(p, target)
        if best_d < 0:
            best_d = 10**9
        for w in self.config.graph.out_adj[p]:
            d = self.dist(w, target)
            if 0 <= d < best_d or (d == best_d and w < best):
                best, best_d = w, d
        return best


class RandomCops(CopStrategy):
    """Uniform random placement and moves."""

    def place(self, state):
        return tuple(
            self.rng.randrange(self.config.graph.n) for _ in range(self.config.k)
        )

    def move(self, state):
        out = self.config.graph.out_adj
        return tuple(self.rng.choice((p,) + out[p]) for p in state.cops)


class GreedyBFS(_DistMixin, CopStrategy):
    """Every cop steps along a shortest directed path to the robber."""

    def __init__(self, construction=None, oracle=None):
        self._init_dist(construction, oracle)

    def place(self, state):
        return tuple(
            self.rng.randrange(self.config.graph.n) for _ in range(self.config.k)
        )

    def move(self, state):
        r = state.robber
        return tuple(self._greedy_step(p, r) for p in state.cops)


class ExitBlocker(_DistMixin, CopStrategy):
    """Cop 0 chases the robber greedily; cops 1-2 camp the entry corners of
    the two units behind the robber's lowest-numbered exits, retargeting
    whenever the robber changes unit.  Extra cops (k > 3) camp further exits.
    Built to stress the evader's center case analysis."""

    def __init__(self, construction: Construction, oracle=None):
        self._init_dist(construction, oracle)

    def begin(self, config, rng):
        super().begin(config, rng)
        self._targets = None
        self._unit = None

    def _retarget(self, state):
        c = self.construction
        unit = c.effective_unit(state.robber)
        if unit == self._unit and self._targets is not None:
            return
        self._unit = unit
        # destination units of the robber's exits, lowest exit index first
        exits = sorted(c.units[unit].exits)
        targets = []
        for i in range(self.config.k - 1):
            _ci, dst, pid = exits[i % len(exits)]
            targets.append(c.green_paths[pid].entry_corner)
        self._targets = targets

    def place(self, state):
        return tuple(
            self.rng.randrange(self.config.graph.n) for _ in range(self.config.k)
        )

    def move(self, state):
        self._retarget(state)
        r = state.robber
        out = self.config.graph.out_adj
        moves = [self._greedy_step(state.cops[0], r)]
        for p, t in zip(state.cops[1:], self._targets):
            if r in out[p]:
                moves.append(r)
            elif p == t:
                moves.append(p)
            else:
                moves.append(self._greedy_step(p, t))
        return tuple(moves)


class FuzzedHybrid(_DistMixin, CopStrategy):
    """Randomized mix of chasing, exit camping, random walking, and idling.
    Per-cop behavior weights are drawn from the match RNG, so distinct seeds
    exercise distinct cop ecologies."""

    def __init__(self, construction: Construction, oracle=None):
        self._init_dist(construction, oracle)

    def begin(self, config, rng):
        super().begin(config, rng)
        self._weights = [
            (rng.random(), rng.random(), rng.random(), rng.random())
            for _ in range(config.k)
        ]

    def place(self, state):
        return tuple(
            self.rng.randrange(self.config.graph.n) for _ in range(self.config.k)
        )

    def move(self, state):
        c, r = self.construction, state.robber
        unit = c.effective_unit(r)
        corners = c.units[unit].corners
        out = self.config.graph.out_adj
        moves = []
        for i, p in enumerate(state.cops):
            if r in out[p]:
                moves.append(r)
                continue
            wc, we, wr, ws = self._weights[i]
            x = self.rng.random() * (wc + we + wr + ws)
            if x < wc:
                moves.append(self._greedy_step(p, r))
            elif x < wc + we:
                moves.append(self._greedy_step(p, corners[i % 10]))
            elif x < wc + we + wr:
                moves.append(self.rng.choice((p,) + out[p]))
            else:
                moves.append(p)
        return tuple(moves)


class ScriptedCops(CopStrategy):
    """Replays a fixed placement and per-cop routes; cops hold position once
    their route is exhausted."""

    def __init__(self, placement, routes):
        self.placement = tuple(placement)
        self.routes = [list(r) for r in routes]

    def begin(self, config, rng):
        super().begin(config, rng)
        self._idx = [0] * config.k

    def place(self, state):
        return self.placement

    def move(self, state):
        assert state.phase == COP_TURN
        moves = []
        for i, p in enumerate(state.cops):
            route = self.routes[i]
            if self._idx[i] < len(route):
                moves.append(route[self._idx[i]])
                self._idx[i] += 1
            else:
                moves.append(p)
        return tuple(moves)


class FourCopTrap(CopStrategy):
    """One chaser plus three campers that capture the center-idling robber.

    The chaser rides an inbound unit-to-unit path into unit 0 and closes on
    the center, putting the robber in its one-cop case: it drops to the
    perimeter at its lowest-numbered exit and holds.  Camper A sits on the
    center of that exit's destination unit and camper B on a non-adjacent
    neighbor, so between them their closed neighborhoods cover all five
    neighbors of unit 0 and the robber's safe-exit computation comes up
    empty.  Camper C then steps onto a transit path toward unit 0, which is
    exactly the robber's cue to flee: its fallback exit set allows the exit
    it is standing on, it commits to the full transit, and walks down the
    destination's inbound spoke into camper A.
    """

    def __init__(self, construction: Construction):
        if construction is None:
            raise ValueError("needs the unit construction")
        self.c = construction

    def begin(self, config, rng):
        super().begin(config, rng)
        if config.k != 4:
            raise ValueError("trap is scripted for exactly 4 cops")
        c = self.c
        unit = 0
        exits = sorted(c.units[unit].exits)
        self.trap_unit = exits[0][1]  # destination of the lowest exit
        ring = c.unit_adjacency[unit]  # 5 neighbors of unit 0
        ring_adj = {
            u: [w for w in c.unit_adjacency[u] if w in ring and w != u] for u in ring
        }
        covered = {self.trap_unit, *ring_adj[self.trap_unit]}
        self.blocker_unit = next(
            u
            for u in sorted(ring)
            if u != self.trap_unit and covered | {u, *ring_adj[u]} >= set(ring)
        )
        # chaser rides the first inbound path down to the center's doorstep
        entries = sorted(c.units[unit].entries)
        ci, _src, pid = entries[0]
        gp = c.green_paths[pid]
        spoke = list(reversed(c.units[unit].spokes[ci]))
        self.chaser_start = gp.exit_corner
        self.chaser_route = list(gp.interior) + [gp.entry_corner] + spoke
        self._chaser_idx = 0
        # camper C waits on another inbound path's exit corner; one step onto
        # the path is the robber's flee trigger
        _ci2, _src2, pid2 = entries[1]
        gp2 = c.green_paths[pid2]
        self.trigger_start = gp2.exit_corner
        self.trigger_step = gp2.interior[0]
        self._triggered = False

    def place(self, state):
        return (
            self.chaser_start,
            self.c.units[self.trap_unit].center,
            self.c.units[self.blocker_unit].center,
            self.trigger_start,
        )

    def move(self, state):
        c = self.c
        moves = list(state.cops)
        if self._chaser_idx < len(self.chaser_route):
            moves[0] = self.chaser_route[self._chaser_idx]
            self._chaser_idx += 1
        # fire the trigger once the robber sits on unit 0's perimeter
        if not self._triggered:
            role = c.roles[state.robber]
            on_perimeter = (
                isinstance(role, (RoleCorner, RoleChain)) and role.unit == 0
            )
            if on_perimeter and self._chaser_idx >= len(self.chaser_route):
                moves[3] = self.trigger_step
                self._triggered = True
        # campers pounce if the robber ever steps next to them
        out = self.config.graph.out_adj
        for j in (1, 2):
            if state.robber in out[moves[j]]:
                moves[j] = state.robber
        return tuple(moves)


class SweepBudgetError(Exception):
    """Raised when a sweep level needs more free cops than remain."""


class SeparatorSweep(CopStrategy):
    """Separator-driven winning strategy with a spend certificate.

    All cops start stacked on one vertex.  Each level computes a planar
    separator of the robber's current region, routes free cops along
    shortest directed paths to occupy every separator vertex (farthest
    targets dispatched first), and pins them there for good.  The robber's
    region therefore shrinks by a factor of at most 2/3 per level; once it
    has at most 16 vertices the remaining free cops flood it outright, so
    the final level also respects the 4*sqrt(region) spend bound.

    ``certificate`` records region size, spend, and makespan per level.
    """

    def __init__(self, rotation, start=0, flood_at=16):
        self.rotation = rotation
        self.start = start
        self.flood_at = flood_at

    def begin(self, config, rng):
        super().begin(config, rng)
        self.pinned = {}  # cop index -> vertex, static forever
        self.routes = {}  # cop index -> (path list, next index)
        self.free = list(range(config.k))
        self.certificate = []
        self.total_spend = 0
        self.done = False
        self._und = config.graph.undirected_adj()

    def place(self, state):
        return (self.start,) * self.config.k

    def _region_of(self, robber):
        """Component of unpinned vertices containing the robber."""
        blocked = set(self.pinned.values())
        seen = {robber}
        stack = [robber]
        comp = [robber]
        while stack:
            u = stack.pop()
            for v in self._und[u]:
                if v not in seen and v not in blocked:
                    seen.add(v)
                    comp.append(v)
                    stack.append(v)
        return comp

    def _plan(self, state):
        from .separator import separate

        g = self.config.graph
        region = self._region_of(state.robber)
        if len(region) <= self.flood_at:
            targets = sorted(region)
            self.done = True
        else:
            res = separate(g, self.rotation, region)
            targets = list(res.C)
        if len(targets) > len(self.free):
            raise SweepBudgetError(
                f"level needs {len(targets)} cops, {len(self.free)} free"
            )
        # route one free cop per target, farthest target first
        jobs = []
        for t in targets:
            dist = bfs_distances(g, t, "backward")
            cop = min(self.free, key=lambda i: dist[state.cops[i]])
            self.free.remove(cop)
            jobs.append((dist[state.cops[cop]], cop, t, dist))
        makespan = 0
        for d, cop, t, dist in sorted(jobs, reverse=True):
            path = []
            v = state.cops[cop]
            while v != t:
                v = min(
                    u for u in g.out_adj[v] if 0 <= dist[u] == dist[v] - 1
                )
                path.append(v)
            if path:
                self.routes[cop] = (path, 0)
            else:
                self.pinned[cop] = t
            makespan = max(makespan, d)
        self.total_spend += len(targets)
        self.certificate.append(
            {
                "level": len(self.certificate),
                "region": len(region),
                "spend": len(targets),
                "makespan": makespan,
                "flood": self.done,
            }
        )

    def move(self, state):
        if not self.routes and not self.done:
            self._plan(state)
        cur = list(state.cops)
        for cop in list(self.routes):
            path, i = self.routes[cop]
            cur[cop] = path[i]
            if i + 1 < len(path):
                self.routes[cop] = (path, i + 1)
            else:
                del self.routes[cop]
                self.pinned[cop] = path[i]
        return tuple(cur)


class StationaryCops(CopStrategy):
    """Fixed placement, never moves.  Useful as a control."""

    def __init__(self, placement):
        self.placement = tuple(placement)

    def place(self, state):
        return self.placement

    def move(self, state):
        return state.cops
