import pytest

from dircops.construction import RoleCenter
from dircops.cops import (
    ExitBlocker,
    FuzzedHybrid,
    GreedyBFS,
    RandomCops,
    StationaryCops,
)
from dircops.engine import COPS_WIN, ROBBER_SURVIVED, GameConfig, run_match
from dircops.evader import (
    Evader,
    RandomRobber,
    StationaryRobber,
    safe_exits,
    threat_view,
)


def _match(c, oracle, cop_strategy, rounds=5000, seed=0, k=3):
    cfg = GameConfig(graph=c.graph, k=k, max_rounds=rounds)
    ev = Evader(c, oracle)
    res = run_match(cfg, cop_strategy, ev, seed=seed)
    return res, ev


def test_places_at_free_center(small, small_oracle):
    cfg = GameConfig(graph=small.graph, k=3, max_rounds=10)
    ev = Evader(small, small_oracle)
    ev.begin(cfg, None)

    class S:
        cops = (0, 1, 2)

    v = ev.place(S())
    assert isinstance(small.roles[v], RoleCenter)
    assert small.roles[v].unit == 3  # lowest cop-free unit


def test_survives_greedy(small, small_oracle):
    res, ev = _match(small, small_oracle, GreedyBFS(small, small_oracle))
    assert res.outcome == ROBBER_SURVIVED
    assert ev.stats["lemma_flags"] == 0


def test_survives_exitblocker(small, small_oracle):
    res, ev = _match(small, small_oracle, ExitBlocker(small, small_oracle))
    assert res.outcome == ROBBER_SURVIVED


def test_survives_random_seeds(small, small_oracle):
    for seed in range(5):
        res, _ = _match(small, small_oracle, RandomCops(), rounds=2000, seed=seed)
        assert res.outcome == ROBBER_SURVIVED, seed


def test_survives_fuzzed_seeds(small, small_oracle):
    for seed in range(5):
        res, _ = _match(
            small, small_oracle, FuzzedHybrid(small, small_oracle), rounds=2000, seed=seed
        )
        assert res.outcome == ROBBER_SURVIVED, seed


def test_modes_and_episodes_exercised(small, small_oracle):
    """A pressing chaser must push the evader through the full cycle:
    trigger, escape, transit, re-enter, wait again."""
    res, ev = _match(small, small_oracle, GreedyBFS(small, small_oracle), rounds=20000)
    assert res.outcome == ROBBER_SURVIVED
    assert len(ev.stats["wait_reentries"]) >= 2
    assert len(ev.stats["episodes"]) >= 1
    for ep in ev.stats["episodes"]:
        assert ep["center_turn"] is not None
        assert ep["unit_to"] in range(12)


def test_episode_budgets(small, small_oracle):
    from dircops.construction import exit_budget

    budget = exit_budget(small.params)
    limit = small.params.green_len + small.params.spoke_len
    for seed in range(3):
        res, ev = _match(
            small, small_oracle, ExitBlocker(small, small_oracle), rounds=20000, seed=seed
        )
        assert res.outcome == ROBBER_SURVIVED
        for ep in ev.stats["episodes"]:
            if ep["exit_turn"] is not None:
                trigger = (
                    ep["run_trigger_turn"]
                    if ep["run_trigger_turn"] is not None
                    else ep["start_turn"]
                )
                assert ep["exit_turn"] - trigger <= budget, ep
                assert ep["center_turn"] - ep["exit_turn"] <= limit, ep


def test_annotation_shape(small, small_oracle):
    cfg = GameConfig(graph=small.graph, k=3, max_rounds=10)
    ev = Evader(small, small_oracle)
    ev.begin(cfg, None)
    ann = ev.annotation()
    assert set(ann) == {"mode", "case", "target"}
    assert ann["mode"] == "wait_at_center"


def test_threat_view_charges_transit_cops(small):
    gp = small.green_paths[0]

    class S:
        cops = (gp.interior[3], small.units[gp.dst].center)
        robber = small.units[gp.dst].center

    tv = threat_view(small, S(), gp.dst)
    assert len(tv.in_unit) == 2  # transit cop charged to its destination


def test_safe_exits_excludes_occupied_neighborhood(small):
    # cops idle at units 1 and 2: exits into their closed neighborhoods drop
    occupied = {1, 2}
    exits = safe_exits(small, 0, occupied)
    banned = occupied | {
        w for u in occupied for w in small.unit_adjacency[u]
    }
    assert exits
    assert all(dst not in banned for _, dst, _ in exits)


def test_stationary_cops_never_trigger_exit(small, small_oracle):
    center0 = small.units[6].center
    res, ev = _match(
        small, small_oracle, StationaryCops((center0, center0, center0)), rounds=3000
    )
    assert res.outcome == ROBBER_SURVIVED
    assert ev.stats["episodes"] == []  # never left the starting center


def test_random_robber_legal(small):
    cfg = GameConfig(graph=small.graph, k=3, max_rounds=500)
    res = run_match(cfg, RandomCops(), RandomRobber(), seed=4)
    assert res.outcome in (COPS_WIN, ROBBER_SURVIVED)
    assert res.abort_reason is None


def test_stationary_robber_sits(small):
    cfg = GameConfig(graph=small.graph, k=2, max_rounds=50)
    res = run_match(cfg, StationaryCops((0, 1)), StationaryRobber(), seed=0)
    assert res.outcome == ROBBER_SURVIVED
    assert res.robber_moves == 0
