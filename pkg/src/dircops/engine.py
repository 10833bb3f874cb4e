"""Cops-and-Robbers rules as a deterministic, replayable state machine.

Turn structure: cops place, robber places, then rounds of one cop turn
followed by one robber turn.  Capture is vertex coincidence checked after
every placement and half-round.  A round bound turns the infinite game into
a finite match with a RobberSurvived verdict.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, replace

from .graph import Digraph

COP_PLACEMENT = "cop_placement"
ROBBER_PLACEMENT = "robber_placement"
COP_TURN = "cop_turn"
ROBBER_TURN = "robber_turn"
COPS_WIN = "cops_win"
ROBBER_SURVIVED = "robber_survived"


class EngineError(ValueError):
    pass


class IllegalMove(EngineError):
    pass


@dataclass(frozen=True)
class GameConfig:
    graph: Digraph
    k: int
    max_rounds: int = 100_000

    def __post_init__(self):
        if self.k < 1:
            raise EngineError("need at least one cop")
        if self.graph.n < 1:
            raise EngineError("empty graph")

    def digest(self):
        h = hashlib.sha256()
        h.update(f"{self.graph.n};{self.k};{self.max_rounds};".encode())
        h.update(str(sorted(self.graph.arcs)).encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class GameState:
    phase: str = COP_PLACEMENT
    cops: tuple = ()
    robber: int = None
    round: int = 0

    def digest(self):
        s = f"{self.phase}|{self.cops}|{self.robber}|{self.round}"
        return hashlib.sha256(s.encode()).hexdigest()[:16]


def initial_state(config: GameConfig) -> GameState:
    return GameState()


def place_cops(config: GameConfig, state: GameState, positions) -> GameState:
    if state.phase != COP_PLACEMENT:
        raise IllegalMove(f"cannot place cops in phase {state.phase}")
    positions = tuple(int(p) for p in positions)
    if len(positions) != config.k:
        raise IllegalMove(f"expected {config.k} cop positions, got {len(positions)}")
    for p in positions:
        config.graph.check_vertex(p)
    return replace(state, phase=ROBBER_PLACEMENT, cops=positions)


def place_robber(config: GameConfig, state: GameState, v: int) -> GameState:
    if state.phase != ROBBER_PLACEMENT:
        raise IllegalMove(f"cannot place robber in phase {state.phase}")
    config.graph.check_vertex(v)
    if v in state.cops:
        return replace(state, phase=COPS_WIN, robber=v)
    return replace(state, phase=COP_TURN, robber=v, round=1)


def legal_cop_targets(config: GameConfig, state: GameState, cop_index: int):
    cur = state.cops[cop_index]
    return (cur,) + config.graph.out_adj[cur]


def apply_cop_move(config: GameConfig, state: GameState, move) -> GameState:
    """``move`` is a tuple of new positions, one per cop (same vertex = stay)."""
    if state.phase != COP_TURN:
        raise IllegalMove(f"not the cops' turn (phase {state.phase})")
    move = tuple(int(p) for p in move)
    if len(move) != config.k:
        raise IllegalMove(f"cop move has {len(move)} entries, expected {config.k}")
    out = config.graph.out_adj
    for cur, nxt in zip(state.cops, move):
        if nxt != cur and nxt not in out[cur]:
            raise IllegalMove(f"no arc {cur}->{nxt}")
    if state.robber in move:
        return replace(state, phase=COPS_WIN, cops=move)
    return replace(state, phase=ROBBER_TURN, cops=move)


def apply_robber_move(config: GameConfig, state: GameState, v: int) -> GameState:
    if state.phase != ROBBER_TURN:
        raise IllegalMove(f"not the robber's turn (phase {state.phase})")
    v = int(v)
    cur = state.robber
    if v != cur and v not in config.graph.out_adj[cur]:
        raise IllegalMove(f"no arc {cur}->{v}")
    if v in state.cops:
        return replace(state, phase=COPS_WIN, robber=v)
    if state.round >= config.max_rounds:
        return replace(state, phase=ROBBER_SURVIVED, robber=v)
    return replace(state, phase=COP_TURN, robber=v, round=state.round + 1)


# --------------------------------------------------------------------------
# strategies and matches


class CopStrategy:
    """Base cop policy: override place/move.  ``begin`` receives a private RNG."""

    def begin(self, config: GameConfig, rng: random.Random):
        self.config = config
        self.rng = rng

    def place(self, state: GameState):
        raise NotImplementedError

    def move(self, state: GameState):
        raise NotImplementedError


class RobberStrategy:
    def begin(self, config: GameConfig, rng: random.Random):
        self.config = config
        self.rng = rng

    def place(self, state: GameState):
        raise NotImplementedError

    def move(self, state: GameState):
        raise NotImplementedError

    def annotation(self):
        """Optional per-move annotation merged into the trace record."""
        return None


@dataclass
class MatchResult:
    outcome: str  # cops_win | robber_survived | aborted
    rounds: int
    robber_moves: int
    cop_moves: int
    final_state: GameState
    trace: list = None
    abort_reason: str = None
    capture_vertex: int = None


def run_match(
    config: GameConfig,
    cop_strategy: CopStrategy,
    robber_strategy: RobberStrategy,
    seed: int = 0,
    record_trace: bool = False,
) -> MatchResult:
    """Play one match to completion.  Deterministic in (config, strategies,
    seed).  Strategy exceptions of type IllegalMove abort the match."""
    cop_strategy.begin(config, random.Random(f"cops:{seed}"))
    robber_strategy.begin(config, random.Random(f"robber:{seed}"))
    state = initial_state(config)
    trace = [] if record_trace else None
    if record_trace:
        trace.append(
            {
                "v": 1,
                "kind": "header",
                "config": config.digest(),
                "k": config.k,
                "max_rounds": config.max_rounds,
                "seed": seed,
            }
        )

    def record(side, moves):
        if record_trace:
            rec = {
                "round": state.round,
                "side": side,
                "moves": moves,
                "cops": list(state.cops),
                "robber": state.robber,
                "digest": state.digest(),
            }
            if side == "robber":
                ann = robber_strategy.annotation()
                if ann:
                    rec.update(ann)
            trace.append(rec)

    robber_moves = 0
    cop_moves = 0
    offender = None
    try:
        placement = cop_strategy.place(state)
        state = place_cops(config, state, placement)
        record("cops", list(state.cops))
        v = robber_strategy.place(state)
        state = place_robber(config, state, v)
        record("robber", v)
        while state.phase in (COP_TURN, ROBBER_TURN):
            offender = "cops"
            move = cop_strategy.move(state)
            prev = state.cops
            state = apply_cop_move(config, state, move)
            cop_moves += sum(1 for a, b in zip(prev, state.cops) if a != b)
            record("cops", list(state.cops))
            if state.phase != ROBBER_TURN:
                break
            offender = "robber"
            v = robber_strategy.move(state)
            prev_r = state.robber
            state = apply_robber_move(config, state, v)
            if state.robber != prev_r:
                robber_moves += 1
            record("robber", state.robber)
    except IllegalMove as exc:
        return MatchResult(
            outcome="aborted",
            rounds=state.round,
            robber_moves=robber_moves,
            cop_moves=cop_moves,
            final_state=state,
            trace=trace,
            abort_reason=f"{offender}: {exc}",
        )
    outcome = state.phase
    capture = state.robber if state.phase == COPS_WIN else None
    return MatchResult(
        outcome=outcome,
        rounds=state.round,
        robber_moves=robber_moves,
        cop_moves=cop_moves,
        final_state=state,
        trace=trace,
        capture_vertex=capture,
    )


# --------------------------------------------------------------------------
# trace serialization and replay


def trace_to_jsonl(trace):
    return "\n".join(json.dumps(rec, separators=(",", ":")) for rec in trace) + "\n"


def trace_from_jsonl(text):
    return [json.loads(line) for line in text.splitlines() if line.strip()]


def replay_trace(config: GameConfig, trace):
    """Re-apply every recorded half-round; returns True iff all state digests
    match the recording."""
    records = [r for r in trace if r.get("kind") != "header"]
    state = initial_state(config)
    for rec in records:
        side = rec["side"]
        if state.phase == COP_PLACEMENT:
            state = place_cops(config, state, rec["moves"])
        elif state.phase == ROBBER_PLACEMENT:
            state = place_robber(config, state, rec["moves"])
        elif side == "cops":
            state = apply_cop_move(config, state, rec["moves"])
        else:
            state = apply_robber_move(config, state, rec["moves"])
        if state.digest() != rec["digest"]:
            return False
    return True
