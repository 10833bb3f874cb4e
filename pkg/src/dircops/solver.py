"""Exact k-cop game solver and exhaustive escape-lemma verifiers.

The solver classifies every (cops, robber, mover) state as cop-win or
robber-win by backward-induction attractor over the alternating game, with
cop multisets canonicalized so permuted cop configurations coincide.  It is
the ground truth for cop numbers of small digraphs and for optimal-play
cross-checks in the engine.

The lemma verifiers certify the two escape subroutines the robber policy
relies on: reaching a safe exit from the center in S moves, and regaining
the center from the perimeter in 1+C+S moves, against every qualifying cop
placement.
"""

from __future__ import annotations

import math
from array import array
from collections import deque
from dataclasses import dataclass
from itertools import combinations_with_replacement, product

from .construction import Construction, RoleChain, RoleCorner, RoleSpoke
from .engine import CopStrategy, RobberStrategy
from .graph import Digraph
from .oracle import ConstructionOracle

COPS = 0
ROBBER = 1


class SolverBudgetError(ValueError):
    pass


@dataclass
class SolveResult:
    graph: Digraph
    k: int
    multisets: list  # rank -> sorted cop tuple
    rank: dict  # sorted cop tuple -> rank
    win: bytearray  # state id -> 1 iff cop-win
    dist: array  # plies to capture for cop-win states, else -1

    def sid(self, cops, robber, mover):
        return (self.rank[tuple(sorted(cops))] * self.graph.n + robber) * 2 + mover

    def is_cop_win(self, cops, robber, mover):
        return bool(self.win[self.sid(cops, robber, mover)])

    def capture_distance(self, cops, robber, mover):
        """Optimal-play plies (half-moves) to capture; -1 for robber-win."""
        return self.dist[self.sid(cops, robber, mover)]


def _cop_move_multisets(g, cops):
    """Distinct sorted position tuples reachable in one cop half-move."""
    opts = [(p,) + g.out_adj[p] for p in cops]
    return {tuple(sorted(q)) for q in product(*opts)}


def solve(g: Digraph, k: int, max_states: int = 20_000_000) -> SolveResult:
    n = g.n
    multisets = list(combinations_with_replacement(range(n), k))
    m = len(multisets)
    nstates = m * n * 2
    if nstates > max_states:
        raise SolverBudgetError(f"{nstates} states exceed budget {max_states}")
    rank = {t: i for i, t in enumerate(multisets)}
    win = bytearray(nstates)
    dist = array("i", [-1]) * nstates
    counter = array("i", [0]) * nstates

    out_sets = [set(a) for a in g.out_adj]
    in_sets = [set(a) for a in g.in_adj]

    def sid(pr, r, mover):
        return (pr * n + r) * 2 + mover

    # robber-move successor counts (capture moves excluded: the robber
    # will never take them, and they count as cop-win branches)
    for pr, P in enumerate(multisets):
        pset = set(P)
        for r in range(n):
            if r in pset:
                continue
            cnt = 1 + sum(1 for w in out_sets[r] if w not in pset)
            counter[sid(pr, r, ROBBER)] = cnt

    queue = deque()

    def mark(s, d):
        if not win[s]:
            win[s] = 1
            dist[s] = d
            queue.append(s)

    # seeds: cop-to-move states with an immediate capture available
    for pr, P in enumerate(multisets):
        pset = set(P)
        reach = set()
        for p in P:
            reach |= out_sets[p]
        for r in reach - pset:
            mark(sid(pr, r, COPS), 1)

    # backward attractor
    while queue:
        s = queue.popleft()
        d = dist[s]
        mover = s & 1
        pr, r = divmod(s >> 1, n)
        P = multisets[pr]
        pset = set(P)
        if mover == COPS:
            # predecessors are robber-move states (P, r0) with an arc r0->r
            for r0 in in_sets[r] | {r}:
                if r0 in pset:
                    continue
                t = sid(pr, r0, ROBBER)
                if win[t]:
                    continue
                counter[t] -= 1
                if counter[t] == 0:
                    mark(t, d + 1)
        else:
            # predecessors are cop-move states (Q, r) with P reachable from Q
            opts = [(p,) + tuple(in_sets[p]) for p in P]
            seen = set()
            for combo in product(*opts):
                q = tuple(sorted(combo))
                if q in seen:
                    continue
                seen.add(q)
                if r in q:
                    continue
                t = sid(rank[q], r, COPS)
                if not win[t]:
                    mark(t, d + 1)
    return SolveResult(graph=g, k=k, multisets=multisets, rank=rank, win=win, dist=dist)


def cops_win_from_placement(result: SolveResult, placement) -> bool:
    """True iff after placing at ``placement`` every robber reply is lost."""
    pset = set(placement)
    free = [r for r in range(result.graph.n) if r not in pset]
    if not free:
        return True
    return all(result.is_cop_win(placement, r, COPS) for r in free)


def best_placement(result: SolveResult):
    """A winning placement minimizing worst-case capture distance, or None."""
    best = None
    for P in result.multisets:
        pset = set(P)
        free = [r for r in range(result.graph.n) if r not in pset]
        if not free:
            return P
        if all(result.is_cop_win(P, r, COPS) for r in free):
            worst = max(result.capture_distance(P, r, COPS) for r in free)
            if best is None or worst < best[0]:
                best = (worst, P)
    return None if best is None else best[1]


def cop_number(g: Digraph, k_max: int, max_states: int = 20_000_000):
    """Least k <= k_max cops that win with optimal play, else None."""
    for k in range(1, k_max + 1):
        result = solve(g, k, max_states=max_states)
        if best_placement(result) is not None:
            return k
    return None


class SolverOptimalCops(CopStrategy):
    """Plays the attractor table: always moves to a cop-win successor of
    minimal capture distance."""

    def __init__(self, result: SolveResult):
        self.result = result
        if best_placement(result) is None:
            raise ValueError("initial position is not a cop win")

    def place(self, state):
        return best_placement(self.result)

    def move(self, state):
        res, g = self.result, self.config.graph
        r = state.robber
        best = None
        for q in sorted(_cop_move_multisets(g, state.cops)):
            if r in q:
                best = (0, q)
                break
            if res.is_cop_win(q, r, ROBBER):
                d = res.capture_distance(q, r, ROBBER)
                if best is None or d < best[0]:
                    best = (d, q)
        if best is None:  # robber-win position: stall
            return state.cops
        # map the chosen multiset back to per-cop moves
        target = list(best[1])
        moves = []
        for p in state.cops:
            picked = None
            for i, t in enumerate(target):
                if t == p or t in g.out_adj[p]:
                    picked = i
                    if t == p:
                        break
            moves.append(target.pop(picked))
        return tuple(moves)


class SolverOptimalRobber(RobberStrategy):
    """Plays the attractor table from the robber side: stays out of the
    cop-win region when possible, else maximizes capture distance."""

    def __init__(self, result: SolveResult):
        self.result = result

    def _pick(self, options, cops, mover):
        res = self.result
        safe = [r for r in options if not res.is_cop_win(cops, r, mover)]
        if safe:
            return min(safe)
        return max(options, key=lambda r: (res.capture_distance(cops, r, mover), -r))

    def place(self, state):
        free = [r for r in range(self.config.graph.n) if r not in state.cops]
        if not free:
            return 0
        return self._pick(free, state.cops, COPS)

    def move(self, state):
        pset = set(state.cops)
        options = [state.robber] + [
            w for w in self.config.graph.out_adj[state.robber] if w not in pset
        ]
        return self._pick(options, state.cops, COPS)


# --------------------------------------------------------------------------
# escape-lemma verifiers


def eligible_cop_vertices(c: Construction, unit: int):
    """Unit vertices a qualifying cop may occupy: everything in the unit
    except the center and the inbound spoke interiors."""
    out = []
    for v, r in enumerate(c.roles):
        if isinstance(r, RoleCorner) and r.unit == unit:
            out.append(v)
        elif isinstance(r, RoleChain) and r.unit == unit:
            out.append(v)
        elif isinstance(r, RoleSpoke) and r.unit == unit and not r.inbound:
            out.append(v)
    return out


def _exit_routes(c: Construction, unit: int):
    """Per exit (sorted by corner index): the S-move center-to-corner route."""
    u = c.units[unit]
    routes = []
    for ci, dst, pid in sorted(u.exits):
        routes.append((ci, pid, list(u.spokes[ci]) + [u.corners[ci]]))
    return routes


def intercept_mask(oracle: ConstructionOracle, routes, v):
    """Bit j set iff a cop at v can intercept the j-th exit route: it can
    reach the robber's position at some step t within t moves."""
    mask = 0
    for j, (_ci, _pid, route) in enumerate(routes):
        for t, rv in enumerate(route, start=1):
            d = oracle.dist(v, rv)
            if 0 <= d <= t:
                mask |= 1 << j
                break
    return mask


def verify_l31(c: Construction, c_count: int, unit: int = 0, oracle=None):
    """For every placement of c_count qualifying cops and every exit subset
    of size c_count+1, certify a subset exit whose straight spoke route is
    uninterceptable (hence reachable in S moves against any cop play)."""
    oracle = oracle or ConstructionOracle(c)
    routes = _exit_routes(c, unit)
    vertices = eligible_cop_vertices(c, unit)
    masks = [intercept_mask(oracle, routes, v) for v in vertices]
    n_exits = len(routes)
    failures = []
    placements = 0
    max_blocked = 0
    for combo in combinations_with_replacement(range(len(vertices)), c_count):
        placements += 1
        m = 0
        for i in combo:
            m |= masks[i]
        blocked = bin(m).count("1")
        max_blocked = max(max_blocked, blocked)
        # every (c+1)-subset of exits contains a safe one iff at most c
        # exits are intercepted in total
        if blocked > c_count:
            failures.append(tuple(vertices[i] for i in combo))
    subset_count = math.comb(n_exits, c_count + 1)
    return {
        "lemma": "l31",
        "c": c_count,
        "unit": unit,
        "placements": placements,
        "subsets_per_placement": subset_count,
        "budget_moves": c.params.spoke_len,
        "max_exits_blocked": max_blocked,
        "failures": failures,
        "ok": not failures,
    }


def l31_search(c: Construction, unit, cops, goal_exits, budget, _memo=None):
    """Depth-bounded minimax: can the robber, starting at the center, step
    onto the first transit vertex of some goal exit within budget+1 moves
    against adversarial unit-confined cops?  Independent certification of
    the route-screening argument."""
    g = c.graph
    u = c.units[unit]
    unit_set = {u.center}
    unit_set.update(u.corners)
    for s in u.spokes:
        unit_set.update(s)
    for ch in u.chains:
        unit_set.update(ch.flane)
        unit_set.update(ch.blane)
    goals = {}
    for ci, dst, pid in u.exits:
        if (ci, dst, pid) in goal_exits or ci in goal_exits:
            goals[u.corners[ci]] = c.green_paths[pid].interior[0]
    memo = {} if _memo is None else _memo

    def cop_opts(p):
        return (p,) + tuple(w for w in g.out_adj[p] if w in unit_set)

    def robber_wins(r, cop_pos, moves_left):
        key = (r, cop_pos, moves_left)
        if key in memo:
            return memo[key]
        ans = False
        if moves_left > 0:
            cop_set = set(cop_pos)
            steps = [w for w in g.out_adj[r] if w in unit_set and w not in cop_set]
            if r in goals and goals[r] not in cop_set:
                ans = True  # steps onto the transit path, cops cannot follow
            if not ans:
                for r2 in steps:
                    ok = True
                    for q in product(*(cop_opts(p) for p in cop_pos)):
                        if r2 in q or not robber_wins(
                            r2, tuple(sorted(q)), moves_left - 1
                        ):
                            ok = False
                            break
                    if ok:
                        ans = True
                        break
        memo[key] = ans
        return ans

    # budget robber moves to reach the exit, plus one to leave it
    return robber_wins(u.center, tuple(sorted(cops)), budget + 1)


def verify_l32(c: Construction, unit: int = 0, oracle=None):
    """For every perimeter robber position and every cop start one vertex
    out along an outbound spoke, certify the robber's shortest route to the
    center stays ahead of any cop trajectory, within 1 + C + S moves."""
    oracle = oracle or ConstructionOracle(c)
    g = c.graph
    u = c.units[unit]
    budget = 1 + c.params.chain_len + c.params.spoke_len
    perimeter = list(u.corners)
    for ch in u.chains:
        perimeter.extend(ch.flane)
        perimeter.extend(ch.blane)
    cop_starts = [
        u.spokes[ci][0]
        for ci, kind in enumerate(u.corner_kinds)
        if kind == "exit"  # outbound spokes only
    ]
    center = u.center
    failures = []
    cases = 0
    max_moves = 0
    for r0 in perimeter:
        # canonical shortest route, same tie-break as the robber policy
        route = []
        x = r0
        while x != center:
            dx = oracle.dist(x, center)
            x = min(w for w in g.out_adj[x] if oracle.dist(w, center) == dx - 1)
            route.append(x)
        if len(route) > budget:
            failures.append((r0, None, "over budget", len(route)))
            continue
        max_moves = max(max_moves, len(route))
        for cop in cop_starts:
            cases += 1
            for t, rv in enumerate(route, start=1):
                d = oracle.dist(cop, rv)
                if 0 <= d <= t:
                    failures.append((r0, cop, "intercepted", t))
                    break
    return {
        "lemma": "l32",
        "unit": unit,
        "robber_positions": len(perimeter),
        "cop_starts": len(cop_starts),
        "cases": cases,
        "budget_moves": budget,
        "max_moves_observed": max_moves,
        "failures": failures,
        "ok": not failures,
    }


def l32_search(c: Construction, unit, robber_start, cop_start, budget):
    """Depth-bounded minimax for the return-to-center claim: robber at a
    perimeter vertex vs one adversarial unit-confined cop."""
    g = c.graph
    u = c.units[unit]
    unit_set = {u.center}
    unit_set.update(u.corners)
    for s in u.spokes:
        unit_set.update(s)
    for ch in u.chains:
        unit_set.update(ch.flane)
        unit_set.update(ch.blane)
    center = u.center
    memo = {}

    def robber_wins(r, cop, moves_left):
        if r == center:
            return True
        if moves_left == 0:
            return False
        key = (r, cop, moves_left)
        if key in memo:
            return memo[key]
        ans = False
        for r2 in g.out_adj[r]:
            if r2 not in unit_set or r2 == cop:
                continue
            ok = True
            for q in (cop,) + tuple(w for w in g.out_adj[cop] if w in unit_set):
                if q == r2:
                    ok = False
                    break
                if r2 != center and not robber_wins(r2, q, moves_left - 1):
                    ok = False
                    break
            if ok:
                ans = True
                break
        memo[key] = ans
        return ans

    return robber_wins(robber_start, cop_start, budget)
