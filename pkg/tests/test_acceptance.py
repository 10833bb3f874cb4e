"""End-to-end acceptance checks.

These pin the package's headline behaviors at full or near-full scale:
construction census, exhaustive in-unit escape verification, the long
survival suite, the capture control, solver oracles, separator bounds on a
large random corpus, the full sweep, and the HTTP play loop.  The whole
file runs in a few minutes; the survival suite dominates.
"""

import math
import random
import time

import numpy as np
import pytest
from scipy.spatial import Delaunay

from dircops.construction import ConstructionParams, admissible, assemble, exit_budget
from dircops.cops import (
    ExitBlocker,
    FourCopTrap,
    FuzzedHybrid,
    GreedyBFS,
    RandomCops,
    SeparatorSweep,
)
from dircops.engine import COPS_WIN, ROBBER_SURVIVED, GameConfig, run_match
from dircops.evader import Evader, RandomRobber
from dircops.graph import (
    Digraph,
    RotationSystem,
    euler_check,
    strongly_connected,
)
from dircops.oracle import ConstructionOracle
from dircops.separator import separate
from dircops.solver import cop_number, verify_l31, verify_l32

DEFAULTS = ConstructionParams(green_len=1000, spoke_len=10, chain_len=16)
SURVIVAL = ConstructionParams(green_len=250, spoke_len=10, chain_len=16)
LEMMA = ConstructionParams(green_len=20, spoke_len=10, chain_len=16)


@pytest.fixture(scope="module")
def arena250():
    return assemble(SURVIVAL)


@pytest.fixture(scope="module")
def oracle250(arena250):
    return ConstructionOracle(arena250)


@pytest.fixture(scope="module")
def arena20():
    return assemble(LEMMA)


@pytest.fixture(scope="module")
def oracle20(arena20):
    return ConstructionOracle(arena20)


def test_construction_census():
    t0 = time.monotonic()
    c = assemble(DEFAULTS)
    elapsed = time.monotonic() - t0
    assert c.graph.n == 64_752
    assert len(c.graph.arcs) == 68_640
    assert len(c.units) == 12
    assert sum(len(u.exits) for u in c.units) == 60
    pairs = {frozenset((gp.src, gp.dst)) for gp in c.green_paths}
    assert len(c.green_paths) == 60 and len(pairs) == 30  # antiparallel pairs
    assert strongly_connected(c.graph)
    assert euler_check(c.graph, c.rotation)
    assert elapsed < 5.0, elapsed


def test_unit_escape_with_few_cops(arena20, oracle20):
    # short transit paths leave the in-unit geometry untouched
    assert arena20.params.spoke_len == 10 and arena20.params.chain_len == 16
    for c_count in (1, 2):
        report = verify_l31(arena20, c_count, oracle=oracle20)
        assert report["ok"], report["failures"][:3]
        assert report["budget_moves"] == 10
        assert report["max_exits_blocked"] <= c_count
        assert report["subsets_per_placement"] == math.comb(5, c_count + 1)


def test_return_to_center(arena20, oracle20):
    t0 = time.monotonic()
    report = verify_l32(arena20, oracle=oracle20)
    assert report["ok"], report["failures"][:3]
    assert report["budget_moves"] == 27
    assert report["max_moves_observed"] <= 27
    assert time.monotonic() - t0 < 60.0


def _survives(c, oracle, cop, seed):
    cfg = GameConfig(graph=c.graph, k=3, max_rounds=100_000)
    ev = Evader(c, oracle)
    res = run_match(cfg, cop, ev, seed=seed)
    assert res.outcome == ROBBER_SURVIVED, (type(cop).__name__, seed, res.outcome)
    budget = exit_budget(c.params)
    transit = c.params.green_len + c.params.spoke_len
    for ep in ev.stats["episodes"]:
        if ep["exit_turn"] is None:
            continue
        trigger = (
            ep["run_trigger_turn"]
            if ep["run_trigger_turn"] is not None
            else ep["start_turn"]
        )
        assert ep["exit_turn"] - trigger <= budget, ep
        if ep["center_turn"] is not None:
            assert ep["center_turn"] - ep["exit_turn"] <= transit, ep


def test_survival_greedy(arena250, oracle250):
    assert admissible(SURVIVAL)[0]
    _survives(arena250, oracle250, GreedyBFS(arena250, oracle250), seed=0)


def test_survival_exitblocker(arena250, oracle250):
    _survives(arena250, oracle250, ExitBlocker(arena250, oracle250), seed=0)


def test_survival_random_100_seeds(arena250, oracle250):
    for seed in range(100):
        _survives(arena250, oracle250, RandomCops(), seed=seed)


def test_survival_fuzzed_20_seeds(arena250, oracle250):
    for seed in range(20):
        _survives(arena250, oracle250, FuzzedHybrid(arena250, oracle250), seed=seed)


def test_capture_control_four_cops(arena250, oracle250):
    """The harness does detect captures: one chaser plus three exit campers
    with a fourth cop brings the evader down."""
    cfg = GameConfig(graph=arena250.graph, k=4, max_rounds=200_000)
    res = run_match(cfg, FourCopTrap(arena250), Evader(arena250, oracle250), seed=0)
    assert res.outcome == COPS_WIN
    print(
        f"\n  four-cop control: captured at vertex {res.capture_vertex} "
        f"after {res.rounds} rounds"
    )


def test_solver_oracle_families():
    t0 = time.monotonic()

    def und(n, edges):
        return Digraph.from_arcs(n, [(a, b) for a, b in edges] + [(b, a) for a, b in edges])

    assert cop_number(Digraph.from_arcs(1, []), 2) == 1
    rng = random.Random(1)
    for n in range(2, 11):
        tree = und(n, [(i, rng.randrange(i)) for i in range(1, n)])
        assert cop_number(tree, 2) == 1, n
    for n in range(4, 9):
        assert cop_number(und(n, [(i, (i + 1) % n) for i in range(n)]), 3) == 2, n
    for n in range(3, 9):
        g = Digraph.from_arcs(n, [(i, (i + 1) % n) for i in range(n)])
        assert cop_number(g, 3) == 2, n
    assert time.monotonic() - t0 < 60.0
    # live-play agreement with the tables is covered in the solver tests


def _delaunay(m, seed):
    pts = np.random.default_rng(seed).random((m, 2))
    tri = Delaunay(pts)
    eset = set()
    for simp in tri.simplices:
        for i in range(3):
            a, b = int(simp[i]), int(simp[(i + 1) % 3])
            eset.add((min(a, b), max(a, b)))
    adj = [[] for _ in range(m)]
    for a, b in eset:
        adj[a].append(b)
        adj[b].append(a)
    order = [
        sorted(adj[v], key=lambda u: math.atan2(pts[u][1] - pts[v][1], pts[u][0] - pts[v][0]))
        for v in range(m)
    ]
    arcs = [(a, b) for a, b in eset] + [(b, a) for a, b in eset]
    return Digraph.from_arcs(m, arcs), RotationSystem(order)


def test_separator_bounds_1000_triangulations():
    rng = random.Random(2024)
    # sizes up to 10^4, weighted toward small so the corpus stays fast
    sizes = [rng.randrange(50, 2000) for _ in range(900)]
    sizes += [rng.randrange(2000, 10_001) for _ in range(100)]
    for i, m in enumerate(sizes):
        g, rot = _delaunay(m, i)
        res = separate(g, rot)
        res.check(g)  # partition and the no-A-B-edge scan
        assert len(res.A) <= 2 * m / 3 and len(res.B) <= 2 * m / 3, (i, m)
        assert len(res.C) <= 4 * math.sqrt(m), (i, m, len(res.C))


def test_separator_bounds_on_arena(arena250):
    g = arena250.graph
    res = separate(g, arena250.rotation)
    res.check(g)
    assert max(len(res.A), len(res.B)) <= 2 * g.n / 3
    assert len(res.C) <= 4 * math.sqrt(g.n)


def _sweep_capture(c, robber, seed):
    n = c.graph.n
    k = math.ceil(16 * math.sqrt(n))
    cfg = GameConfig(graph=c.graph, k=k, max_rounds=200_000)
    sweep = SeparatorSweep(c.rotation)
    res = run_match(cfg, sweep, robber, seed=seed)
    assert res.outcome == COPS_WIN
    for row in sweep.certificate:
        assert row["spend"] <= 4 * math.sqrt(row["region"]), row
    for a, b in zip(sweep.certificate, sweep.certificate[1:]):
        assert b["region"] <= 2 * a["region"] / 3
    return sweep.total_spend / math.sqrt(n)


def test_full_scale_sweep():
    """Budgeted sweep on the full 64,752-vertex arena captures both a random
    robber and the evader; per-level spend and shrink certified."""
    c = assemble(DEFAULTS)
    k_rand = _sweep_capture(c, RandomRobber(), seed=1)
    oracle = ConstructionOracle(c)
    k_ev = _sweep_capture(c, Evader(c, oracle), seed=1)
    assert max(k_rand, k_ev) <= 16.0
    print(f"\n  sweep constant K: random {k_rand:.2f}, evader {k_ev:.2f} (budget 16)")


def test_http_play_loop():
    from fastapi.testclient import TestClient

    from dircops.engine import legal_cop_targets, replay_trace, trace_from_jsonl
    from dircops.service import create_app

    app = create_app(ConstructionParams(green_len=100, spoke_len=10, chain_len=16))
    client = TestClient(app)
    doc = client.post(
        "/sessions", json={"k": 3, "robber": "evader", "seed": 0}
    ).json()
    sid = doc["id"]
    t0 = time.monotonic()
    doc = client.post(f"/sessions/{sid}/cops", json={"positions": [0, 1, 2]}).json()
    rounds = 0
    moves = 1
    while doc["phase"] == "cop_turn" and rounds < 20:
        s = app.state.sessions[sid]
        for i in range(3):
            assert doc["legal"][i] == list(legal_cop_targets(s.config, s.state, i))
        picks = [doc["legal"][i][-1] for i in range(3)]
        doc = client.post(f"/sessions/{sid}/cops", json={"positions": picks}).json()
        rounds += 1
        moves += 1
    assert rounds == 20
    assert (time.monotonic() - t0) / moves < 0.1  # per-move latency
    trace = trace_from_jsonl(client.get(f"/sessions/{sid}/trace").text)
    assert replay_trace(app.state.sessions[sid].config, trace)
