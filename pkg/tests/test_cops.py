import math

import pytest

from dircops.construction import RoleCenter
from dircops.cops import (
    ExitBlocker,
    FourCopTrap,
    FuzzedHybrid,
    GreedyBFS,
    RandomCops,
    ScriptedCops,
    SeparatorSweep,
    SweepBudgetError,
)
from dircops.engine import (
    COPS_WIN,
    ROBBER_SURVIVED,
    GameConfig,
    run_match,
)
from dircops.evader import Evader, RandomRobber, StationaryRobber
from dircops.oracle import ConstructionOracle


def _all(c, oracle):
    return [
        RandomCops(),
        GreedyBFS(c, oracle),
        ExitBlocker(c, oracle),
        FuzzedHybrid(c, oracle),
    ]


def test_strategies_emit_legal_moves(small, small_oracle):
    """No strategy may abort a match: every emitted move must be legal."""
    cfg = GameConfig(graph=small.graph, k=3, max_rounds=1500)
    for strat in _all(small, small_oracle):
        for seed in range(3):
            res = run_match(cfg, strat, RandomRobber(), seed=seed)
            assert res.abort_reason is None, (type(strat).__name__, seed)


def test_greedy_catches_stationary(small, small_oracle):
    cfg = GameConfig(graph=small.graph, k=3, max_rounds=5000)
    res = run_match(cfg, GreedyBFS(small, small_oracle), StationaryRobber(), seed=1)
    assert res.outcome == COPS_WIN


def test_scripted_replay_and_hold(small):
    center = small.units[0].center
    spoke = small.units[0].spokes[0]  # outbound at corner 0
    placement = (center, center, center)
    routes = [[spoke[0]], [], []]
    cfg = GameConfig(graph=small.graph, k=3, max_rounds=5)
    strat = ScriptedCops(placement, routes)
    res = run_match(cfg, strat, StationaryRobber(), seed=0, record_trace=True)
    recs = [r for r in res.trace if r.get("side") == "cops" and r["round"] >= 1]
    assert recs[0]["cops"] == [spoke[0], center, center]
    # route exhausted: everyone holds afterwards
    assert recs[1]["cops"] == recs[2]["cops"] == [spoke[0], center, center]


def test_exitblocker_targets_follow_robber(small, small_oracle):
    strat = ExitBlocker(small, small_oracle)
    cfg = GameConfig(graph=small.graph, k=3, max_rounds=10)
    import random

    strat.begin(cfg, random.Random(0))

    class S:
        robber = small.units[4].center
        cops = (0, 1, 2)

    strat._retarget(S())
    exits = sorted(small.units[4].exits)
    expect = [small.green_paths[pid].entry_corner for _, _, pid in exits[:2]]
    assert strat._targets == expect


def test_four_cop_trap_captures_evader(small, small_oracle):
    cfg = GameConfig(graph=small.graph, k=4, max_rounds=20000)
    res = run_match(cfg, FourCopTrap(small), Evader(small, small_oracle), seed=0)
    assert res.outcome == COPS_WIN
    assert isinstance(small.roles[res.capture_vertex], RoleCenter)


def test_four_cop_trap_needs_four(small):
    cfg = GameConfig(graph=small.graph, k=3, max_rounds=10)
    with pytest.raises(ValueError):
        run_match(cfg, FourCopTrap(small), RandomRobber(), seed=0)


def test_sweep_certificate_bounds(small, small_oracle):
    n = small.graph.n
    k = math.ceil(16 * math.sqrt(n))
    cfg = GameConfig(graph=small.graph, k=k, max_rounds=100_000)
    sweep = SeparatorSweep(small.rotation)
    res = run_match(cfg, sweep, RandomRobber(), seed=2)
    assert res.outcome == COPS_WIN
    cert = sweep.certificate
    assert cert and sweep.total_spend <= k
    for row in cert:
        assert row["spend"] <= 4 * math.sqrt(row["region"])
    for a, b in zip(cert, cert[1:]):
        assert b["region"] <= 2 * a["region"] / 3


def test_sweep_pins_are_static(small):
    n = small.graph.n
    k = math.ceil(16 * math.sqrt(n))
    cfg = GameConfig(graph=small.graph, k=k, max_rounds=100_000)
    sweep = SeparatorSweep(small.rotation)
    res = run_match(cfg, sweep, RandomRobber(), seed=0, record_trace=True)
    assert res.outcome == COPS_WIN
    # replay the cop tracks: once a cop stops moving on a pinned vertex it
    # never moves again
    recs = [r for r in res.trace if r.get("side") == "cops" and r["round"] >= 1]
    tracks = {i: [rec["cops"][i] for rec in recs] for i in sweep.pinned}
    for i, v in sweep.pinned.items():
        track = tracks[i]
        assert track[-1] == v
        arrived = track.index(v)
        assert all(p == v for p in track[arrived:]), f"pinned cop {i} moved"


def test_sweep_budget_error(small):
    cfg = GameConfig(graph=small.graph, k=2, max_rounds=100)
    sweep = SeparatorSweep(small.rotation)
    with pytest.raises(SweepBudgetError):
        run_match(cfg, sweep, StationaryRobber(), seed=0)


def test_sweep_region_walls_hold(small):
    """After each planning step, every undirected edge out of the robber's
    region ends on a pinned vertex."""
    n = small.graph.n
    k = math.ceil(16 * math.sqrt(n))
    cfg = GameConfig(graph=small.graph, k=k, max_rounds=100_000)
    sweep = SeparatorSweep(small.rotation)
    orig_plan = sweep._plan
    checks = []

    def checked_plan(state):
        orig_plan(state)
        region = set(sweep._region_of(state.robber))
        pinned = set(sweep.pinned.values())
        und = small.graph.undirected_adj()
        ok = all(
            (u in region) or (u in pinned)
            for v in region
            for u in und[v]
        )
        checks.append(ok)

    sweep._plan = checked_plan
    res = run_match(cfg, sweep, RandomRobber(), seed=3)
    assert res.outcome == COPS_WIN
    assert checks and all(checks)
