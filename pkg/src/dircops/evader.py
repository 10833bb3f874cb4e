"""The deterministic robber policy that indefinitely evades three cops.

Mode automaton: the robber idles at a unit center until a cop becomes
adjacent along an inbound spoke, then escapes by case analysis on how many
cops are charged to its unit.  With two or more it sprints straight to a
safe exit; with exactly one it drops to the perimeter, shadow-steps the
in-unit cop, and only commits to an exit once some outside cop is locked
into a one-way unit-to-unit path.  Cops in transit are charged to their
destination unit and treated as already standing on its entry corner.
"""

from __future__ import annotations

from .construction import (
    Construction,
    RoleChain,
    RoleCorner,
    RoleGreen,
    RoleSpoke,
)
from .engine import ROBBER_TURN, RobberStrategy
from .oracle import ConstructionOracle

WAIT = "wait_at_center"
ESCAPE = "escape_center"
TO_PERIMETER = "to_perimeter"
HOLD = "perimeter_hold"
RUN = "perimeter_run"
RETURN = "return_to_center"
BREAKOUT = "breakout"
TRANSIT = "transit"
ENTER = "enter_unit"


class ContractViolation(RuntimeError):
    """A reachable state falsifies one of the escape lemmas."""


class ThreatView:
    """Per-unit cop accounting with transit cops charged to destinations."""

    def __init__(self, c: Construction, cops, unit):
        self.unit = unit
        self.in_unit = []  # cop indices charged to this unit
        self.outside_units = []  # effective units of the remaining cops
        self.mobile = 0  # charged cops not on inbound spoke interiors
        for i, v in enumerate(cops):
            r = c.roles[v]
            eff = c.effective_unit(v)
            if eff == unit:
                self.in_unit.append(i)
                if not (isinstance(r, RoleSpoke) and r.inbound):
                    self.mobile += 1
            else:
                self.outside_units.append(eff)


def threat_view(c: Construction, state, unit) -> ThreatView:
    return ThreatView(c, state.cops, unit)


def safe_exits(c: Construction, unit, outside_units):
    """Exits whose destination avoids the closed neighborhood of every
    outside cop's effective unit."""
    blocked = set()
    for x in outside_units:
        blocked.add(x)
        blocked.update(c.unit_adjacency[x])
    return [
        (ci, dst, pid) for ci, dst, pid in c.units[unit].exits if dst not in blocked
    ]


class Evader(RobberStrategy):
    def __init__(self, c: Construction, oracle: ConstructionOracle = None):
        self.c = c
        self.oracle = oracle or ConstructionOracle(c)
        self.S = c.params.spoke_len
        self.C = c.params.chain_len
        self.G = c.params.green_len
        self.perim_len = 10 * self.C
        self._coord_cache = {}

    # -- lifecycle ---------------------------------------------------------

    def begin(self, config, rng):
        super().begin(config, rng)
        self.mode = WAIT
        self.unit = None
        self.route = None
        self.route_idx = 0
        self.direction = 1
        self.run_paths = None  # green path ids acceptable for exit
        self.return_then_wait = False
        self.stall = 0
        self.turn = 0  # robber half-rounds seen
        self.case = None
        self.target = None
        self.stats = {
            "wait_reentries": [],
            "episodes": [],
            "lemma_flags": 0,
        }
        self._episode = None

    def annotation(self):
        return {"mode": self.mode, "case": self.case, "target": self.target}

    # -- placement ---------------------------------------------------------

    def place(self, state):
        occupied = {self.c.effective_unit(v) for v in state.cops}
        for u in range(12):
            if u not in occupied:
                self.unit = u
                self.stats["wait_reentries"].append({"turn": 0, "unit": u})
                return u  # center vertex id == unit id
        # out of contract (cops cover all 12 units): maximize cop distance
        best = max(
            (v for v in range(self.c.graph.n) if v not in state.cops),
            key=lambda v: min(self.oracle.dist(cv, v) for cv in state.cops),
        )
        self.unit = self.c.effective_unit(best)
        role = self.c.roles[best]
        if isinstance(role, (RoleCorner, RoleChain)):
            self.mode = HOLD
        elif best != self.c.units[self.unit].center:
            self.route = self._shortest_route_to_center_from(best)
            self.route_idx = 0
            self.mode = RETURN
            self.return_then_wait = True
        return best

    # -- helpers -----------------------------------------------------------

    def _coord(self, unit, v):
        """Perimeter coordinate in [0, 10C); spokes/center/green map to the
        nearest corner's coordinate (None for the center)."""
        r = self.c.roles[v]
        C = self.C
        if isinstance(r, RoleCorner) and r.unit == unit:
            return r.corner * C
        if isinstance(r, RoleChain) and r.unit == unit:
            return r.chain * C + r.pos
        if isinstance(r, RoleSpoke) and r.unit == unit:
            return r.spoke * C
        if isinstance(r, RoleGreen):
            entry = self.c.green_paths[r.path].entry_corner
            er = self.c.roles[entry]
            if er.unit == unit:
                return er.corner * C
        return None

    def _perimeter_step(self, v, d):
        """One travel step along the perimeter in direction d (+1 follows the
        decagon's corner order); a rung move when on the opposing lane."""
        c, r = self.c, self.c.roles[v]
        if isinstance(r, RoleCorner):
            unit = c.units[r.unit]
            if d > 0:
                return unit.chains[r.corner].flane[0]
            return unit.chains[(r.corner - 1) % 10].blane[-1]
        unit = c.units[r.unit]
        chain = unit.chains[r.chain]
        if r.lane == "f":
            if d > 0:
                if r.pos < self.C - 1:
                    return chain.flane[r.pos]
                return unit.corners[(r.chain + 1) % 10]
            return chain.blane[r.pos - 1]
        if d < 0:
            if r.pos > 1:
                return chain.blane[r.pos - 2]
            return unit.corners[r.chain]
        return chain.flane[r.pos - 1]

    def _occupied(self, state, v):
        return v in state.cops

    def _attacked(self, state, v):
        in_adj = self.config.graph.in_adj[v]
        return any(cv in in_adj for cv in state.cops)

    def _route_safe(self, state, route):
        """Lemma 3.1 safety: no cop's effective position can reach the t-th
        route vertex within t moves."""
        o = self.oracle
        eff = [self.c.effective_position(cv) for cv in state.cops]
        for t, rv in enumerate(route, start=1):
            for p in eff:
                d = o.dist(p, rv)
                if 0 <= d <= t:
                    return False
        return True

    def _spoke_route(self, unit, corner_idx):
        """Center -> exit corner along the outbound spoke."""
        u = self.c.units[unit]
        return list(u.spokes[corner_idx]) + [u.corners[corner_idx]]

    def _enter_route(self, unit, corner_idx):
        """Entry corner -> center along the inbound spoke."""
        u = self.c.units[unit]
        return list(reversed(u.spokes[corner_idx])) + [u.center]

    def _shortest_route_to_center(self, state, start):
        return self._shortest_route_to_center_from(start)

    def _shortest_route_to_center_from(self, start):
        o, g, center = self.oracle, self.c.graph, self.c.units[self.unit].center
        route, x = [], start
        while x != center:
            dx = o.dist(x, center)
            x = min(w for w in g.out_adj[x] if o.dist(w, center) == dx - 1)
            route.append(x)
        return route

    def _trigger_paths(self, state):
        """Green paths currently carrying a cop toward the robber's unit."""
        hits = []
        for cv in state.cops:
            r = self.c.roles[cv]
            if isinstance(r, RoleGreen) and r.dst == self.unit:
                hits.append(r.path)
        return hits

    def _free_outside_units(self, state):
        return [
            self.c.effective_unit(cv)
            for cv in state.cops
            if self.c.effective_unit(cv) != self.unit
        ]

    def _path_occupied(self, state, pid):
        for cv in state.cops:
            r = self.c.roles[cv]
            if isinstance(r, RoleGreen) and r.path == pid:
                return True
        return False

    def _exit_candidates(self, state, restrict_safe=True):
        """Exit list honoring outside-cop blocking, with fallbacks so the
        policy is total even out of contract."""
        unit = self.unit
        cands = safe_exits(self.c, unit, self._free_outside_units(state))
        cands = [e for e in cands if not self._path_occupied(state, e[2])]
        if not cands and restrict_safe:
            cands = [
                e
                for e in self.c.units[unit].exits
                if not self._path_occupied(state, e[2])
            ]
        if not cands:
            cands = list(self.c.units[unit].exits)
        return sorted(cands)

    # -- episode stats -----------------------------------------------------

    def _begin_episode(self, case):
        self._episode = {
            "case": case,
            "start_turn": self.turn,
            "run_trigger_turn": None,
            "exit_turn": None,
            "center_turn": None,
            "unit_from": self.unit,
        }

    def _close_episode(self, new_unit):
        if self._episode is not None:
            self._episode["center_turn"] = self.turn
            self._episode["unit_to"] = new_unit
            self.stats["episodes"].append(self._episode)
            self._episode = None

    # -- mode transitions --------------------------------------------------

    def _decide_escape(self, state):
        tv = threat_view(self.c, state, self.unit)
        m = len(tv.in_unit)
        if m >= 2:
            self.case = f"{min(m, 3)}-in-unit"
            self._begin_episode(self.case)
            self._commit_escape(state)
        else:
            self.case = "1-in-unit"
            self._begin_episode(self.case)
            exits = sorted(self.c.units[self.unit].exits)
            chosen = None
            for ci, dst, pid in exits:
                route = self._spoke_route(self.unit, ci)
                if self._route_safe(state, route):
                    chosen = (ci, dst, pid)
                    break
            if chosen is None:
                chosen = exits[0]
            self.route = self._spoke_route(self.unit, chosen[0])
            self.route_idx = 0
            self.mode = TO_PERIMETER
            self.target = chosen[0]

    def _commit_escape(self, state, cands=None):
        """Lemma 3.1 sprint: pick a safe exit among the candidates and commit
        to its outbound spoke."""
        if cands is None:
            cands = self._exit_candidates(state)
        chosen = None
        for ci, dst, pid in cands:
            route = self._spoke_route(self.unit, ci)
            if self._route_safe(state, route):
                chosen = (ci, dst, pid, route)
                break
        if chosen is None:
            self.stats["lemma_flags"] += 1
            ci, dst, pid = cands[0]
            chosen = (ci, dst, pid, self._spoke_route(self.unit, ci))
        self.route = chosen[3]
        self.route_idx = 0
        self.mode = ESCAPE
        self.target = chosen[2]  # green path id to take on arrival
        self._transit_pid = chosen[2]

    def _start_transit(self, pid):
        gp = self.c.green_paths[pid]
        self.route = list(gp.interior) + [gp.entry_corner]
        self.route_idx = 0
        self.mode = TRANSIT
        self.target = gp.dst
        self._next_unit = gp.dst
        self._entry_corner_idx = self.c.roles[gp.entry_corner].corner
        if self._episode is not None and self._episode["exit_turn"] is None:
            self._episode["exit_turn"] = self.turn

    def _start_run(self, state):
        self.mode = RUN
        cands = self._exit_candidates(state)
        self.run_paths = {pid for _, _, pid in cands}
        self.case = "1-in-unit-run"
        if self._episode is not None:
            self._episode["run_trigger_turn"] = self.turn
        r = state.robber
        x = self._coord(self.unit, r)
        cop_coords = [
            self._coord(self.unit, cv)
            for cv in state.cops
            if not isinstance(self.c.roles[cv], RoleGreen)
            and self.c.roles[cv].unit == self.unit
        ]
        cop_coords = [cc for cc in cop_coords if cc is not None]
        P = self.perim_len
        self.direction = None
        if x is not None:
            # prefer a direction whose nearest acceptable exit is reached
            # strictly before any in-unit cop can close the gap
            exit_coords = [
                ci * self.C
                for ci, _, pid in self.c.units[self.unit].exits
                if pid in self.run_paths
            ]
            best = None
            for d in (1, -1):
                gap = lambda a, b: (b - a) % P if d > 0 else (a - b) % P
                edist = min((gap(x, e) for e in exit_coords), default=None)
                cdist = min((gap(x, cc) for cc in cop_coords if gap(x, cc)), default=P)
                if edist is not None and 2 * edist < cdist:
                    if best is None or edist < best[0]:
                        best = (edist, d)
            if best is not None:
                self.direction = best[1]
        if self.direction is None:
            # fall back: run away from the nearest in-unit cop
            if x is not None and cop_coords:
                y = min(cop_coords, key=lambda cc: min((cc - x) % P, (x - cc) % P))
                self.direction = 1 if (y - x) % P > (x - y) % P else -1
            else:
                self.direction = -1
        self.stall = 0

    # -- main policy -------------------------------------------------------

    def move(self, state):
        assert state.phase == ROBBER_TURN
        self.turn += 1
        r = state.robber
        if self.mode == WAIT:
            return self._move_wait(state, r)
        if self.mode in (ESCAPE, TO_PERIMETER, TRANSIT, ENTER, RETURN):
            return self._move_route(state, r)
        if self.mode == BREAKOUT:
            self._commit_escape(state, cands=self._breakout_cands(state))
            return self._move_route(state, r)
        if self.mode == HOLD:
            return self._move_hold(state, r)
        if self.mode == RUN:
            return self._move_run(state, r)
        raise AssertionError(self.mode)

    def _breakout_cands(self, state):
        cands = [
            e
            for e in sorted(self.c.units[self.unit].exits)
            if e[2] in (self.run_paths or set())
            and not self._path_occupied(state, e[2])
        ]
        return cands or self._exit_candidates(state)

    def _move_wait(self, state, r):
        center = self.c.units[self.unit].center
        in_adj = self.config.graph.in_adj[center]
        if any(cv in in_adj for cv in state.cops):
            self._decide_escape(state)
            return self._move_route(state, r)
        self.case = None
        self.target = None
        return r

    def _move_route(self, state, r):
        nxt = self.route[self.route_idx]
        self.route_idx += 1
        if self.route_idx >= len(self.route):
            self._on_route_end(state, nxt)
        return nxt

    def _on_route_end(self, state, final_vertex):
        if self.mode == ESCAPE:
            self._start_transit(self._transit_pid)
        elif self.mode == TO_PERIMETER:
            if self._trigger_paths(state):
                self._start_run(state)
            else:
                self.mode = HOLD
                self.stall = 0
        elif self.mode == TRANSIT:
            self.unit = self._next_unit
            self.route = self._enter_route(self.unit, self._entry_corner_idx)
            self.route_idx = 0
            self.mode = ENTER
        elif self.mode == ENTER:
            self.mode = WAIT
            self._close_episode(self.unit)
            self.stats["wait_reentries"].append({"turn": self.turn, "unit": self.unit})
        elif self.mode == RETURN:
            if self.return_then_wait:
                self.mode = WAIT
                self.return_then_wait = False
            else:
                self.mode = BREAKOUT

    def _physical_cops_in_unit(self, state):
        return [
            cv
            for cv in state.cops
            if not isinstance(self.c.roles[cv], RoleGreen)
            and self.c.roles[cv].unit == self.unit
        ]

    def _move_hold(self, state, r):
        if self._trigger_paths(state):
            self._start_run(state)
            return self._move_run(state, r)
        if not self._physical_cops_in_unit(state):
            self.route = self._shortest_route_to_center(state, r)
            self.route_idx = 0
            self.mode = RETURN
            self.return_then_wait = True
            if self.route:
                return self._move_route(state, r)
            self._on_route_end(state, r)
            return r
        if not self._attacked(state, r):
            return r
        # pushed: step away from the attacker
        in_adj = self.config.graph.in_adj[r]
        attacker = next(cv for cv in state.cops if cv in in_adj)
        x = self._coord(self.unit, r)
        y = self._coord(self.unit, attacker)
        P = self.perim_len
        if x is not None and y is not None and (y - x) % P != (x - y) % P:
            d = 1 if ((y - x) % P) > ((x - y) % P) else -1
        else:
            d = -1
        for cand in (self._perimeter_step(r, d), self._perimeter_step(r, -d)):
            if not self._occupied(state, cand) and not self._attacked(state, cand):
                return cand
        for cand in (self._perimeter_step(r, d), self._perimeter_step(r, -d)):
            if not self._occupied(state, cand):
                return cand
        return r

    def _move_run(self, state, r):
        role = self.c.roles[r]
        # reached an acceptable exit: leave the unit
        if (
            isinstance(role, RoleCorner)
            and role.kind == "exit"
            and role.unit == self.unit
        ):
            pid = next(
                pid for ci, _, pid in self.c.units[self.unit].exits if ci == role.corner
            )
            if pid in self.run_paths and not self._path_occupied(state, pid):
                self._start_transit(pid)
                return self._move_route(state, r)
        # cop heading through the center: apply the return-to-center lemma
        for cv in self._physical_cops_in_unit(state):
            cr = self.c.roles[cv]
            if isinstance(cr, RoleSpoke) and not cr.inbound and cr.pos == 1:
                self.route = self._shortest_route_to_center(state, r)
                self.route_idx = 0
                self.mode = RETURN
                self.return_then_wait = False
                if self.route:
                    return self._move_route(state, r)
                self._on_route_end(state, r)
                return r
        nv = self._perimeter_step(r, self.direction)
        danger = self._occupied(state, nv) or self._attacked(state, nv)
        if not danger:
            self.stall = 0
            return nv
        if self._attacked(state, r):
            # single cop cannot attack both r and nv; move out
            if not self._occupied(state, nv):
                return nv
            alt = self._perimeter_step(r, -self.direction)
            if not self._occupied(state, alt):
                self.direction = -self.direction
                return alt
            return r
        self.stall += 1
        if self.stall >= 2:
            # blocker refuses to yield; go the other way round
            self.direction = -self.direction
            self.stall = 0
        return r


class RandomRobber(RobberStrategy):
    """Baseline robber: uniform random placement and moves."""

    def place(self, state):
        cops = set(state.cops)
        free = [v for v in range(self.config.graph.n) if v not in cops]
        return self.rng.choice(free or list(range(self.config.graph.n)))

    def move(self, state):
        r = state.robber
        opts = [r] + [
            v for v in self.config.graph.out_adj[r] if v not in set(state.cops)
        ]
        return self.rng.choice(opts)


class StationaryRobber(RobberStrategy):
    """Places far from the cops and never moves."""

    def begin(self, config, rng):
        super().begin(config, rng)
        self._tables = {}

    def _dist(self, s, t):
        from .graph import bfs_distances

        if s not in self._tables:
            self._tables[s] = bfs_distances(self.config.graph, s, "forward")
        d = self._tables[s][t]
        return d if d >= 0 else 10**9

    def place(self, state):
        best, best_d = 0, -1
        for v in range(self.config.graph.n):
            if v in state.cops:
                continue
            d = min(self._dist(cv, v) for cv in state.cops)
            if d > best_d:
                best, best_d = v, d
        return best

    def move(self, state):
        return state.robber
