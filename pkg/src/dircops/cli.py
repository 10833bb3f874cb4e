"""Command line front end.

Subcommands: build, simulate, tournament, verify, solve, separate, serve.
Exit codes: 0 success, 1 property violation (lost game, failed check,
aborted match), 2 usage error.  A JSON config file can supply defaults for
any flag via --config.  All seeds are explicit and echoed into artifacts.
"""

from __future__ import annotations

import json
import math
import os
import struct
import sys

import click

from .construction import (
    Construction,
    ConstructionParams,
    admissible,
    assemble,
    exit_budget,
)
from .engine import (
    COPS_WIN,
    ROBBER_SURVIVED,
    GameConfig,
    run_match,
    trace_to_jsonl,
)
from .graph import load_graph, save_graph


def _params(green, spoke, chain) -> ConstructionParams:
    return ConstructionParams(green_len=green, spoke_len=spoke, chain_len=chain)


def make_cop_strategy(name: str, c: Construction, k: int):
    from . import cops as _cops

    name = name.lower()
    if name == "random":
        return _cops.RandomCops()
    if name == "greedy":
        return _cops.GreedyBFS(c)
    if name == "exitblocker":
        return _cops.ExitBlocker(c)
    if name == "fuzzed":
        return _cops.FuzzedHybrid(c)
    if name == "trap":
        return _cops.FourCopTrap(c)
    if name == "sweep":
        return _cops.SeparatorSweep(c.rotation)
    raise click.UsageError(f"unknown cop strategy {name!r}")


def make_robber_strategy(name: str, c: Construction):
    from .evader import Evader, RandomRobber, StationaryRobber

    name = name.lower()
    if name == "evader":
        return Evader(c)
    if name == "random":
        return RandomRobber()
    if name == "stationary":
        return StationaryRobber()
    raise click.UsageError(f"unknown robber strategy {name!r}")


def _load_config(ctx, _param, path):
    if path:
        with open(path) as fh:
            ctx.default_map = json.load(fh)
    return path


@click.group()
@click.option(
    "--config",
    type=click.Path(exists=True),
    callback=_load_config,
    expose_value=False,
    is_eager=True,
    help="JSON file mapping subcommand -> flag defaults.",
)
def main():
    """Pursuit-evasion laboratory for directed planar arenas."""


_arena_opts = [
    click.option("--green", default=1000, show_default=True, help="green path length"),
    click.option("--spoke", default=10, show_default=True, help="spoke length"),
    click.option("--chain", default=16, show_default=True, help="chain length"),
]


def arena_options(f):
    for opt in reversed(_arena_opts):
        f = opt(f)
    return f


def _role_doc(r):
    return [type(r).__name__.removeprefix("Role").lower(), *r]


@main.command()
@arena_options
@click.option("--out", type=click.Path(), default=None, help="output directory")
def build(green, spoke, chain, out):
    """Generate the arena; report counts and the admissibility diagnostic."""
    p = _params(green, spoke, chain)
    c = assemble(p)
    ok, info = admissible(p)
    threshold = info["threshold"]
    click.echo(
        f"vertices {c.graph.n}  arcs {len(c.graph.arcs)}  units {len(c.units)}  "
        f"exits {sum(len(u.exits) for u in c.units)}  green paths {len(c.green_paths)}"
    )
    if ok:
        click.echo(f"admissible: green {green} > {threshold} = T_exit + 2S")
    else:
        click.echo(f"warning: not admissible ({green} <= {threshold})")
    if out:
        os.makedirs(out, exist_ok=True)
        save_graph(os.path.join(out, "graph.json"), c.graph, c.rotation, c.coords)
        doc = {
            "v": 1,
            "params": {"green": green, "spoke": spoke, "chain": chain},
            "admissible": ok,
            "coords": c.coords,
            "roles": [_role_doc(r) for r in c.roles],
            "units": [
                {
                    "center": u.center,
                    "corners": list(u.corners),
                    "corner_kinds": list(u.corner_kinds),
                    "exits": [list(e) for e in u.exits],
                    "entries": [list(e) for e in u.entries],
                    "neighbors": list(u.neighbors),
                }
                for u in c.units
            ],
            "green_paths": [
                {
                    "src": gp.src,
                    "dst": gp.dst,
                    "exit_corner": gp.exit_corner,
                    "entry_corner": gp.entry_corner,
                }
                for gp in c.green_paths
            ],
        }
        with open(os.path.join(out, "arena.json"), "w") as fh:
            json.dump(doc, fh)
        click.echo(f"wrote {out}/graph.json and {out}/arena.json")


def _run_one(p, cop_name, robber_name, k, rounds, seed, trace_dir):
    c = _arena_cache(p)
    cfg = GameConfig(graph=c.graph, k=k, max_rounds=rounds)
    cop = make_cop_strategy(cop_name, c, k)
    rob = make_robber_strategy(robber_name, c)
    res = run_match(cfg, cop, rob, seed=seed, record_trace=trace_dir is not None)
    row = {
        "cops": cop_name,
        "robber": robber_name,
        "k": k,
        "seed": seed,
        "outcome": res.outcome,
        "rounds": res.rounds,
        "capture_vertex": res.capture_vertex,
        "abort_reason": res.abort_reason,
    }
    if trace_dir is not None:
        fname = f"{cop_name}-{robber_name}-k{k}-s{seed}.jsonl"
        with open(os.path.join(trace_dir, fname), "w") as fh:
            fh.write(trace_to_jsonl(res.trace))
        row["trace"] = fname
    return row


_arenas = {}


def _arena_cache(p: ConstructionParams) -> Construction:
    key = (p.green_len, p.spoke_len, p.chain_len)
    if key not in _arenas:
        _arenas[key] = assemble(p)
    return _arenas[key]


@main.command()
@arena_options
@click.option("--cops", "cop_name", default="greedy", show_default=True)
@click.option("--robber", "robber_name", default="evader", show_default=True)
@click.option("-k", default=3, show_default=True)
@click.option("--rounds", default=100_000, show_default=True)
@click.option("--seed", "seeds", multiple=True, type=int, default=(0,))
@click.option("--trace-dir", type=click.Path(), default=None)
def simulate(green, spoke, chain, cop_name, robber_name, k, rounds, seeds, trace_dir):
    """Run one match per seed and print a summary line each."""
    p = _params(green, spoke, chain)
    if trace_dir:
        os.makedirs(trace_dir, exist_ok=True)
    bad = False
    for seed in seeds:
        row = _run_one(p, cop_name, robber_name, k, rounds, seed, trace_dir)
        click.echo(json.dumps(row))
        bad = bad or row["outcome"] == "aborted"
    sys.exit(1 if bad else 0)


@main.command()
@arena_options
@click.option("--cops", "cop_names", multiple=True, default=("greedy", "random"))
@click.option("--robber", "robber_name", default="evader", show_default=True)
@click.option("-k", default=3, show_default=True)
@click.option("--rounds", default=100_000, show_default=True)
@click.option("--seeds", default=5, show_default=True, help="seeds 0..N-1 per strategy")
@click.option("--out", type=click.Path(), required=True)
@click.option("--traces/--no-traces", default=False, show_default=True)
@click.option("--jobs", default=0, show_default=True, help="0 = sequential")
def tournament(
    green, spoke, chain, cop_names, robber_name, k, rounds, seeds, out, traces, jobs
):
    """Round-robin of cop strategies against one robber; JSON summary plus
    optional per-match JSONL traces, merged deterministically."""
    p = _params(green, spoke, chain)
    os.makedirs(out, exist_ok=True)
    trace_dir = out if traces else None
    keys = [(name, seed) for name in cop_names for seed in range(seeds)]
    if jobs > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futs = {
                key: pool.submit(
                    _run_one, p, key[0], robber_name, k, rounds, key[1], trace_dir
                )
                for key in keys
            }
            rows = [futs[key].result() for key in sorted(futs)]
    else:
        rows = [
            _run_one(p, name, robber_name, k, rounds, seed, trace_dir)
            for name, seed in sorted(keys)
        ]
    summary = {
        "v": 1,
        "params": {"green": green, "spoke": spoke, "chain": chain},
        "robber": robber_name,
        "k": k,
        "rounds": rounds,
        "matches": rows,
        "captures": sum(r["outcome"] == COPS_WIN for r in rows),
        "survivals": sum(r["outcome"] == ROBBER_SURVIVED for r in rows),
    }
    with open(os.path.join(out, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=1)
    click.echo(
        f"{len(rows)} matches: {summary['captures']} captures, "
        f"{summary['survivals']} survivals -> {out}/summary.json"
    )
    sys.exit(1 if any(r["outcome"] == "aborted" for r in rows) else 0)


@main.command()
@click.argument("lemma", type=click.Choice(["l31", "l32"]))
@click.option("--c", "c_count", default=1, show_default=True, help="cops (l31 only)")
@click.option("--green", default=20, show_default=True)
@click.option("--spoke", default=10, show_default=True)
@click.option("--chain", default=16, show_default=True)
@click.option("--unit", default=0, show_default=True)
def verify(lemma, c_count, green, spoke, chain, unit):
    """Exhaustive in-unit escape checks; non-zero exit on any counterexample."""
    from .oracle import ConstructionOracle
    from .solver import verify_l31, verify_l32

    c = _arena_cache(_params(green, spoke, chain))
    oracle = ConstructionOracle(c)
    if lemma == "l31":
        report = verify_l31(c, c_count, unit=unit, oracle=oracle)
    else:
        report = verify_l32(c, unit=unit, oracle=oracle)
    click.echo(json.dumps(report, indent=1))
    sys.exit(0 if report["ok"] else 1)


TABLE_MAGIC = b"DCSOLV1\0"


def write_strategy_table(path, result):
    """Binary layout: 8-byte magic, then little-endian uint32 n, k,
    state count; then win flags (1 byte per state); then capture distances
    (int32 per state, -1 where the robber wins)."""
    with open(path, "wb") as fh:
        fh.write(TABLE_MAGIC)
        ns = len(result.win)
        fh.write(struct.pack("<III", result.graph.n, result.k, ns))
        fh.write(bytes(result.win))
        fh.write(struct.pack(f"<{ns}i", *result.dist))


@main.command()
@click.argument("graph_file", type=click.Path(exists=True))
@click.option("-k", default=0, show_default=True, help="fixed k; 0 = search upward")
@click.option("--kmax", default=4, show_default=True)
@click.option("--max-states", default=20_000_000, show_default=True)
@click.option("--table", type=click.Path(), default=None)
def solve(graph_file, k, kmax, max_states, table):
    """Exact cop number of a small graph via the attractor solver."""
    from .solver import SolverBudgetError, best_placement, cop_number, solve as _solve

    g, _rot, _coords = load_graph(graph_file)
    try:
        if k:
            res = _solve(g, k, max_states=max_states)
            win = best_placement(res) is not None
            click.echo(f"k={k}: {'cops win' if win else 'robber survives'}")
            if table:
                write_strategy_table(table, res)
                click.echo(f"wrote {table}")
            sys.exit(0)
        num = cop_number(g, kmax, max_states=max_states)
    except SolverBudgetError as e:
        click.echo(f"state budget exceeded: {e}", err=True)
        sys.exit(1)
    if num is None:
        click.echo(f"cop number > {kmax}")
        sys.exit(1)
    click.echo(f"cop number {num}")


@main.command()
@arena_options
@click.option("--weights", type=click.Path(exists=True), default=None)
def separate(green, spoke, chain, weights):
    """Separator of the arena's underlying graph; checks the size bounds."""
    from .separator import separate as _separate

    c = _arena_cache(_params(green, spoke, chain))
    w = None
    if weights:
        with open(weights) as fh:
            w = json.load(fh)
    res = _separate(c.graph, c.rotation, weights=w)
    res.check(c.graph)
    n = c.graph.n
    bound = 4 * math.sqrt(n)
    ok = max(len(res.A), len(res.B)) <= 2 * n / 3 and len(res.C) <= bound
    click.echo(
        json.dumps(
            {
                "n": n,
                "A": len(res.A),
                "B": len(res.B),
                "C": len(res.C),
                "C_bound": bound,
                "ok": ok,
            }
        )
    )
    sys.exit(0 if ok else 1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8100, show_default=True)
@click.option("--green", default=100, show_default=True)
@click.option("--spoke", default=10, show_default=True)
@click.option("--chain", default=16, show_default=True)
def serve(host, port, green, spoke, chain):
    """Serve the interactive play API (and the built web client, if present)."""
    import uvicorn

    from .service import create_app

    ui = os.path.join(os.path.dirname(__file__), "..", "..", "frontend")
    static_dir = ui if os.path.exists(os.path.join(ui, "dist")) else None
    app = create_app(_params(green, spoke, chain), static_dir=static_dir)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
