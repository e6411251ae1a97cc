"""Command-line front end.

Commands: grundy, winner, best-move, trim, verify, selfcheck, serve.
Exit codes: 0 success, 1 verification found mismatches, 2 invalid input,
3 resource limit exceeded.  All iteration is sorted, so identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import catalog as cat
from .corpus import corpus_graphs, enumerate_states, large_sweep_graphs, random_state
from .engine import GrundyEngine, Mode, best_dormant_move_via_trimming
from .errors import ArrowsError, FormatError, ResourceLimitError
from .graphs import Graph, format_graph, trimming
from .kernel import BACKEND
from .states import Arrow, DormantState, State, state_trim

_EXIT_OK, _EXIT_MISMATCH, _EXIT_INVALID, _EXIT_RESOURCE = 0, 1, 2, 3


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise FormatError(0, f"cannot read {path}: {exc}") from None


def _parse_arrow_lines(text: str, graph: Graph) -> list[Arrow]:
    from .graphs import _format_lines

    arrows = []
    for line_no, fields in _format_lines(text):
        if fields[0] != "a" or len(fields) != 3:
            raise FormatError(line_no, "state files contain only 'a <tail> <head>' lines")
        try:
            t, h = int(fields[1]), int(fields[2])
        except ValueError:
            raise FormatError(line_no, "non-integer arrow endpoint") from None
        if not graph.has_edge(t, h):
            raise FormatError(line_no, f"arrow {t} {h} is not on an edge")
        arrows.append(Arrow(t, h))
    return arrows


def _load_position(args) -> tuple[Graph, State]:
    from .states import parse_position

    graph, arrows = parse_position(_read(args.graph))
    if getattr(args, "state", None):
        arrows = arrows + tuple(_parse_arrow_lines(_read(args.state), graph))
    mode = Mode(getattr(args, "mode", "trimmed"))
    cls = DormantState if mode is Mode.ARROWS else State
    return graph, cls.from_arrows(graph, arrows)


def _print_stats(engine: GrundyEngine, out) -> None:
    s = engine.stats()
    print(
        f"stats: nodes={s['nodes']} naive_nodes={s['naive_nodes']} "
        f"cache={s['cache_size']} hits={s['hits']} misses={s['misses']} backend={BACKEND}",
        file=out,
    )


def _cmd_grundy(args, out) -> int:
    engine = GrundyEngine()
    graph, state = _load_position(args)
    if Mode(args.mode) is Mode.ARROWS:
        trim = trimming(graph)
        value = engine.grundy(state_trim(trim, state))
    else:
        value = engine.grundy(state)
    if args.json:
        print(json.dumps({"grundy": value}), file=out)
    else:
        print(value, file=out)
    if args.stats:
        _print_stats(engine, out)
    return _EXIT_OK


def _cmd_winner(args, out) -> int:
    engine = GrundyEngine()
    from .states import parse_position

    graph, arrows = parse_position(_read(args.graph))
    if arrows:
        raise FormatError(0, "winner evaluates the empty position; graph file must carry no arrows")
    who = engine.winner(graph, Mode(args.mode))
    print(json.dumps({"winner": who.value}) if args.json else who.value, file=out)
    if args.stats:
        _print_stats(engine, out)
    return _EXIT_OK


def _cmd_best_move(args, out) -> int:
    engine = GrundyEngine()
    graph, state = _load_position(args)
    if Mode(args.mode) is Mode.ARROWS:
        move = best_dormant_move_via_trimming(engine, trimming(graph), state)
    else:
        move = engine.best_move(state)
    if args.json:
        payload = None if move is None else {"tail": move.tail, "head": move.head}
        print(json.dumps({"move": payload}), file=out)
    else:
        print("none" if move is None else f"a {move.tail} {move.head}", file=out)
    if args.stats:
        _print_stats(engine, out)
    return _EXIT_OK


def _cmd_trim(args, out) -> int:
    from .states import parse_position

    graph, arrows = parse_position(_read(args.graph))
    if arrows:
        raise FormatError(0, "trim takes a bare graph file")
    trimmed = trimming(graph).graph
    text = format_graph(trimmed)
    if args.out == "-":
        out.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return _EXIT_OK


def _cmd_verify(args, out) -> int:
    engine = GrundyEngine()
    ids = cat.entry_ids() if args.entry == "all" else [args.entry]
    for i in ids:
        if i not in cat.entry_ids():
            raise FormatError(0, f"unknown entry '{i}' (expected one of {', '.join(cat.entry_ids())})")

    def run(entry_id: str):
        return entry_id, cat.verify_entry(engine, entry_id, args.max)

    results: dict[str, list[cat.VerifyRow]] = {}
    if args.jobs > 1 and len(ids) > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            for entry_id, rows in pool.map(run, ids):
                results[entry_id] = rows
    else:
        for entry_id in ids:
            results[entry_id] = run(entry_id)[1]

    all_rows = [r for i in ids for r in results[i]]
    failures = 0
    for entry_id in ids:
        rows = results[entry_id]
        bad = sum(1 for r in rows if not r.match)
        failures += bad
        print(f"{entry_id}: {len(rows)} rows, {bad} failures", file=out)
        for r in rows:
            if not r.match:
                print(f"  FAIL {r.params}: claimed {r.claim}, engine {r.engine}", file=out)
    if args.report:
        bounds = f"entry={args.entry} max={'default' if args.max is None else args.max}"
        with open(args.report, "w", encoding="utf-8", newline="") as fh:
            cat.write_report(all_rows, fh, bounds)
    print(f"total: {len(all_rows)} rows, {failures} failures", file=out)
    return _EXIT_OK if failures == 0 else _EXIT_MISMATCH


def _cmd_selfcheck(args, out) -> int:
    engine = GrundyEngine()
    graphs = [(n, g) for n, g in corpus_graphs() if g.edge_count <= args.edges
              and not g.isolated_vertices()]

    def check(item):
        name, g = item
        n, bad = 0, 0
        for x in enumerate_states(g):
            n += 1
            if engine.grundy(x) != engine.grundy_naive(x):
                bad += 1
        return name, n, bad

    mismatches = 0
    states = 0
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            reports = list(pool.map(check, graphs))
    else:
        reports = [check(item) for item in graphs]
    for name, n, bad in reports:
        states += n
        mismatches += bad
        if bad:
            print(f"{name}: {bad} mismatches over {n} positions", file=out)
    print(f"exhaustive: {len(graphs)} graphs, {states} positions, {mismatches} mismatches", file=out)

    rng = random.Random(args.seed)
    sampled = 0
    for name, g in large_sweep_graphs():
        for _ in range(args.samples):
            x = random_state(rng, g)
            sampled += 1
            if engine.grundy(x) != engine.grundy_naive(x):
                mismatches += 1
                print(f"{name}: mismatch at random position {x.slots}", file=out)
    print(f"random: {sampled} positions, total mismatches {mismatches}", file=out)
    return _EXIT_OK if mismatches == 0 else _EXIT_MISMATCH


def _cmd_serve(args, out) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(ui_dir=args.ui)
    print(f"serving on http://{args.host}:{args.port}", file=out)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return _EXIT_OK


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="arrows", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def add_position_flags(sp, with_state=True):
        sp.add_argument("--graph", required=True, help="graph or position file")
        if with_state:
            sp.add_argument("--state", help="extra arrow lines applied on top")
        sp.add_argument("--mode", choices=["trimmed", "arrows"], default="trimmed")
        sp.add_argument("--stats", action="store_true", help="print search statistics")
        sp.add_argument("--json", action="store_true", help="machine-readable output")

    add_position_flags(sub.add_parser("grundy", help="Grundy value of a position"))
    w = sub.add_parser("winner", help="perfect-play winner on an unmarked graph")
    w.add_argument("--graph", required=True)
    w.add_argument("--mode", choices=["trimmed", "arrows"], default="arrows")
    w.add_argument("--stats", action="store_true")
    w.add_argument("--json", action="store_true")
    add_position_flags(sub.add_parser("best-move", help="a perfect-play move"))

    t = sub.add_parser("trim", help="write the trimmed graph")
    t.add_argument("--graph", required=True)
    t.add_argument("--out", required=True, help="output file, or - for stdout")

    v = sub.add_parser("verify", help="sweep the closed-form catalog")
    v.add_argument("--entry", default="all", help="all or one of E1..E22")
    v.add_argument("--max", type=int, default=None, help="override the grid bound")
    v.add_argument("--report", help="write a CSV report here")
    v.add_argument("--jobs", type=int, default=_default_jobs())

    s = sub.add_parser("selfcheck", help="oracle equivalence over the corpus")
    s.add_argument("--edges", type=int, default=8, help="exhaustive bound (default 8)")
    s.add_argument("--samples", type=int, default=25,
                   help="random positions per large graph (default 25)")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--jobs", type=int, default=_default_jobs())

    srv = sub.add_parser("serve", help="run the play service")
    srv.add_argument("--port", type=int, default=8000)
    srv.add_argument("--host", default="127.0.0.1")
    srv.add_argument("--ui", default=None, help="directory of built UI assets to mount at /ui")
    return p


def _default_jobs() -> int:
    import os

    return os.cpu_count() or 1


_COMMANDS = {
    "grundy": _cmd_grundy,
    "winner": _cmd_winner,
    "best-move": _cmd_best_move,
    "trim": _cmd_trim,
    "verify": _cmd_verify,
    "selfcheck": _cmd_selfcheck,
    "serve": _cmd_serve,
}


def run(argv: list[str], out=None, err=None) -> int:
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return _EXIT_INVALID if exc.code not in (0, None) else _EXIT_OK
    try:
        return _COMMANDS[args.command](args, out)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=err)
        return _EXIT_RESOURCE
    except ArrowsError as exc:
        print(f"error: {exc}", file=err)
        return _EXIT_INVALID


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
