"""HTTP play service: a human commands the cops against a robber strategy.

Sessions are in-memory; every state transition goes through the engine, and
each half-round is appended to a trace in the same format run_match records,
so replaying a session trace reproduces the final digest.  The robber
replies synchronously inside the same request.  Per-session writes are
serialized with a non-blocking lock; the loser of a race gets 409.
"""

from __future__ import annotations

import itertools
import queue
import random
import threading
import time
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from fastapi.responses import PlainTextResponse
from pydantic import BaseModel

from .construction import Construction, ConstructionParams, admissible, assemble
from .engine import (
    COP_PLACEMENT,
    COP_TURN,
    COPS_WIN,
    ROBBER_SURVIVED,
    ROBBER_TURN,
    CopStrategy,
    GameConfig,
    IllegalMove,
    apply_cop_move,
    apply_robber_move,
    initial_state,
    legal_cop_targets,
    place_cops,
    place_robber,
    trace_to_jsonl,
)


def _basis(pole):
    """Two orthonormal tangent vectors at the pole."""
    px, py, pz = pole
    a = (1.0, 0.0, 0.0) if abs(px) < 0.9 else (0.0, 1.0, 0.0)
    d = a[0] * px + a[1] * py + a[2] * pz
    e1 = (a[0] - d * px, a[1] - d * py, a[2] - d * pz)
    s = (e1[0] ** 2 + e1[1] ** 2 + e1[2] ** 2) ** 0.5
    e1 = (e1[0] / s, e1[1] / s, e1[2] / s)
    e2 = (
        py * e1[2] - pz * e1[1],
        pz * e1[0] - px * e1[2],
        px * e1[1] - py * e1[0],
    )
    return e1, e2


def stereographic_layout(c: Construction):
    """Project sphere coords to the plane from a face-centroid pole, so no
    vertex maps to infinity."""
    # centroid of one hexagonal face of the solid: the three unit centers of
    # an icosahedron face surround it and no arena vertex sits there
    ico_face = c.solid.ico.faces[0]
    cx = sum(c.coords[u][0] for u in ico_face)
    cy = sum(c.coords[u][1] for u in ico_face)
    cz = sum(c.coords[u][2] for u in ico_face)
    s = (cx * cx + cy * cy + cz * cz) ** 0.5
    pole = (cx / s, cy / s, cz / s)
    e1, e2 = _basis(pole)
    pts = []
    for v in c.coords:
        d = 1.0 - (v[0] * pole[0] + v[1] * pole[1] + v[2] * pole[2])
        d = max(d, 1e-9)
        x = (v[0] * e1[0] + v[1] * e1[1] + v[2] * e1[2]) / d
        y = (v[0] * e2[0] + v[1] * e2[1] + v[2] * e2[2]) / d
        pts.append((round(x, 5), round(y, 5)))
    return pts


@dataclass
class _Arena:
    id: str
    params: ConstructionParams
    construction: Construction
    layout: list
    admissible: bool


@dataclass
class _Session:
    id: str
    arena: _Arena
    config: GameConfig
    robber: object
    state: object
    trace: list
    seed: int
    lock: threading.Lock = field(default_factory=threading.Lock)
    created: float = field(default_factory=time.time)
    updated: float = field(default_factory=time.time)


class SessionCreate(BaseModel):
    k: int = 3
    robber: str = "evader"
    seed: int = 0
    max_rounds: int = 100_000
    green: int | None = None
    spoke: int | None = None
    chain: int | None = None


class CopMoveBody(BaseModel):
    positions: list[int]


def create_app(
    default_params: ConstructionParams | None = None, static_dir=None
) -> FastAPI:
    app = FastAPI(title="dircops play service")
    default_params = default_params or ConstructionParams(
        green_len=100, spoke_len=10, chain_len=16
    )
    arenas: dict[str, _Arena] = {}
    sessions: dict[str, _Session] = {}
    counter = itertools.count(1)

    def get_arena(params: ConstructionParams) -> _Arena:
        aid = f"g{params.green_len}s{params.spoke_len}c{params.chain_len}"
        if aid not in arenas:
            c = assemble(params)
            arenas[aid] = _Arena(
                id=aid,
                params=params,
                construction=c,
                layout=stereographic_layout(c),
                admissible=admissible(params)[0],
            )
        return arenas[aid]

    def record(s: _Session, side, moves):
        rec = {
            "round": s.state.round,
            "side": side,
            "moves": moves,
            "cops": list(s.state.cops),
            "robber": s.state.robber,
            "digest": s.state.digest(),
        }
        if side == "robber":
            ann = s.robber.annotation()
            if ann:
                rec.update(ann)
        s.trace.append(rec)

    def view(s: _Session):
        st = s.state
        doc = {
            "v": 1,
            "id": s.id,
            "arena": s.arena.id,
            "admissible": s.arena.admissible,
            "k": s.config.k,
            "max_rounds": s.config.max_rounds,
            "seed": s.seed,
            "phase": st.phase,
            "round": st.round,
            "cops": list(st.cops),
            "robber": st.robber,
            "robber_kind": type(s.robber).__name__,
            "updated": s.updated,
        }
        if st.phase == COP_TURN:
            doc["legal"] = [
                list(legal_cop_targets(s.config, st, i)) for i in range(s.config.k)
            ]
        ann = s.robber.annotation()
        if ann:
            doc["annotation"] = ann
        if st.phase in (COPS_WIN, ROBBER_SURVIVED):
            doc["outcome"] = st.phase
            doc["capture_vertex"] = st.robber if st.phase == COPS_WIN else None
            doc["trace_url"] = f"/sessions/{s.id}/trace"
        return doc

    def robber_reply(s: _Session):
        if s.state.phase == ROBBER_TURN:
            v = s.robber.move(s.state)
            s.state = apply_robber_move(s.config, s.state, v)
            record(s, "robber", s.state.robber)

    @app.post("/sessions")
    def create_session(body: SessionCreate):
        from .cli import make_robber_strategy

        if body.k < 1:
            raise HTTPException(422, "need at least one cop")
        p = default_params
        if body.green is not None:
            p = ConstructionParams(
                green_len=body.green,
                spoke_len=body.spoke or 10,
                chain_len=body.chain or 16,
            )
        try:
            arena = get_arena(p)
        except Exception as exc:
            raise HTTPException(422, f"invalid arena: {exc}")
        try:
            robber = make_robber_strategy(body.robber, arena.construction)
        except Exception:
            raise HTTPException(422, f"unknown robber strategy {body.robber!r}")
        config = GameConfig(
            graph=arena.construction.graph, k=body.k, max_rounds=body.max_rounds
        )
        robber.begin(config, random.Random(f"robber:{body.seed}"))
        sid = f"s{next(counter)}"
        s = _Session(
            id=sid,
            arena=arena,
            config=config,
            robber=robber,
            state=initial_state(config),
            trace=[
                {
                    "v": 1,
                    "kind": "header",
                    "config": config.digest(),
                    "k": config.k,
                    "max_rounds": config.max_rounds,
                    "seed": body.seed,
                }
            ],
            seed=body.seed,
        )
        sessions[sid] = s
        return view(s)

    def get_session(sid) -> _Session:
        if sid not in sessions:
            raise HTTPException(404, f"no session {sid!r}")
        return sessions[sid]

    @app.get("/sessions/{sid}")
    def get_view(sid: str):
        return view(get_session(sid))

    @app.post("/sessions/{sid}/cops")
    def post_cops(sid: str, body: CopMoveBody):
        s = get_session(sid)
        if not s.lock.acquire(blocking=False):
            raise HTTPException(409, "session busy: concurrent move in flight")
        try:
            if s.state.phase == COP_PLACEMENT:
                try:
                    s.state = place_cops(s.config, s.state, body.positions)
                except IllegalMove as exc:
                    raise HTTPException(422, str(exc))
                record(s, "cops", list(s.state.cops))
                v = s.robber.place(s.state)
                s.state = place_robber(s.config, s.state, v)
                record(s, "robber", s.state.robber)
            elif s.state.phase == COP_TURN:
                try:
                    s.state = apply_cop_move(s.config, s.state, body.positions)
                except IllegalMove as exc:
                    raise HTTPException(422, str(exc))
                record(s, "cops", list(s.state.cops))
                robber_reply(s)
            else:
                raise HTTPException(409, f"not the cops' turn (phase {s.state.phase})")
            s.updated = time.time()
            return view(s)
        finally:
            s.lock.release()

    @app.get("/sessions/{sid}/trace", response_class=PlainTextResponse)
    def get_trace(sid: str):
        return trace_to_jsonl(get_session(sid).trace)

    @app.get("/arena/{aid}")
    def get_arena_doc(aid: str):
        if aid not in arenas:
            raise HTTPException(404, f"no arena {aid!r}")
        a = arenas[aid]
        c = a.construction
        return {
            "v": 1,
            "id": aid,
            "params": {
                "green": a.params.green_len,
                "spoke": a.params.spoke_len,
                "chain": a.params.chain_len,
            },
            "admissible": a.admissible,
            "n": c.graph.n,
            "arcs": [list(arc) for arc in c.graph.arcs],
            "roles": [
                [type(r).__name__.removeprefix("Role").lower(), *r] for r in c.roles
            ],
            "layout": [list(p) for p in a.layout],
            "units": [
                {
                    "center": u.center,
                    "corners": list(u.corners),
                    "corner_kinds": list(u.corner_kinds),
                    "exits": [list(e) for e in u.exits],
                }
                for u in c.units
            ],
            "green_paths": [
                {
                    "src": gp.src,
                    "dst": gp.dst,
                    "exit_corner": gp.exit_corner,
                    "entry_corner": gp.entry_corner,
                    "interior": list(gp.interior),
                }
                for gp in c.green_paths
            ],
        }

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=static_dir, html=True), name="ui")

    app.state.sessions = sessions
    app.state.arenas = arenas
    app.state.get_arena = get_arena
    return app


class HumanRemote(CopStrategy):
    """Bridges run_match to an external move feed: each place/move blocks
    until someone supplies a positions tuple via ``submit``."""

    def __init__(self, timeout=60.0):
        self.inbox = queue.Queue()
        self.timeout = timeout

    def submit(self, positions):
        self.inbox.put(tuple(positions))

    def place(self, state):
        return self.inbox.get(timeout=self.timeout)

    def move(self, state):
        return self.inbox.get(timeout=self.timeout)
