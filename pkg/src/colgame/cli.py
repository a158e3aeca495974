"""The ``col`` command.

Exit codes: 0 for success (a TOP verdict, a legal run, a passed check),
1 for a BOT verdict or a found counterexample, 2 for usage, parse, or
input errors.  ``--json`` switches to a stable machine-readable envelope
{command, verdict, run, counterexample?, trace_path?, detail?}.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional

from .core import (
    BOT,
    TOP,
    MoveError,
    Player,
    RunFormatError,
    delays,
    format_run,
    moves,
    parse_run,
    replay,
    static_check,
    winner,
)
from .formula import InterpretError, Interpretation, ParseError, interpret, parse, render
from .machine import DEFAULT_TAIL_CYCLES, MalformedSpec, simulate, trace_to_text, verify_wins
from .strategies import ShapeMismatch, UnknownStrategy, make_env, make_strategy
from .toymachines import ProgramError, default_catalog


def _player(text: str) -> Player:
    norm = text.strip().upper()
    if norm in ("T", "TOP"):
        return TOP
    if norm in ("B", "BOT"):
        return BOT
    raise argparse.ArgumentTypeError(f"player must be T or B, got {text!r}")


def _move_token(text: str) -> str:
    return text if text else "_"


def _load_interp(path: Optional[str]) -> Interpretation:
    if path is None:
        return Interpretation(atoms={}, catalog=default_catalog())
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    return Interpretation.from_dict(doc, default_catalog=default_catalog())


def _emit(args, payload: dict, plain: str) -> None:
    if args.json:
        doc = {"command": args.command, "verdict": payload.get("verdict", "OK"), "run": payload.get("run", "")}
        for key in ("counterexample", "trace_path", "detail"):
            if payload.get(key) is not None:
                doc[key] = payload[key]
        print(json.dumps(doc))
    elif plain:
        print(plain)


def _build_game(args):
    tree = parse(args.formula)
    interp = _load_interp(args.interp)
    return tree, interp, interpret(tree.expr, interp)


def _cmd_parse(args) -> int:
    tree = parse(args.formula)
    _emit(args, {"detail": {"rendered": render(tree.expr)}}, render(tree.expr))
    return 0


def _cmd_legal(args) -> int:
    _, _, game = _build_game(args)
    run = parse_run(args.run)
    _, bad_index = replay(game, run)
    if bad_index is None:
        _emit(args, {"verdict": "LEGAL", "run": format_run(run)}, "LEGAL")
        return 0
    offender = run[bad_index].label.value
    _emit(
        args,
        {
            "verdict": "ILLEGAL",
            "run": format_run(run),
            "detail": {"offender": offender, "index": bad_index},
        },
        f"ILLEGAL at index {bad_index} (offender {offender})",
    )
    return 1


def _cmd_winner(args) -> int:
    _, _, game = _build_game(args)
    run = parse_run(args.run)
    verdict = winner(game, run)
    name = "TOP" if verdict.winner is TOP else "BOT"
    detail = None
    plain = name
    if verdict.offender is not None:
        detail = {"offender": verdict.offender.value, "index": verdict.offender_index}
        plain = f"{name} (illegal move by {verdict.offender.value} at index {verdict.offender_index})"
    _emit(args, {"verdict": name, "run": format_run(run), "detail": detail}, plain)
    return 0 if verdict.winner is TOP else 1


def _cmd_moves(args) -> int:
    _, _, game = _build_game(args)
    run = parse_run(args.run)
    options = sorted(moves(game, run, args.player, args.universe))
    tokens = [_move_token(m) for m in options]
    _emit(args, {"run": format_run(run), "detail": {"moves": tokens}}, "\n".join(tokens))
    return 0


def _cmd_delays(args) -> int:
    run = parse_run(args.run)
    found = sorted(format_run(r) for r in delays(run, args.player, args.max_len))
    _emit(args, {"run": format_run(run), "detail": {"delays": found}}, "\n".join(found))
    return 0


def _cmd_static(args) -> int:
    _, _, game = _build_game(args)
    example = static_check(game, args.depth, args.universe)
    if example is None:
        _emit(args, {"verdict": "OK static"}, "OK static")
        return 0
    counter = {
        "run": format_run(example.run),
        "delayed": format_run(example.delayed),
        "player": example.player.value,
    }
    _emit(
        args,
        {"verdict": "NON-STATIC", "counterexample": counter},
        "NON-STATIC\n"
        f"  run     {format_run(example.run)!r} won by {example.player.value}\n"
        f"  delayed {format_run(example.delayed)!r} is not",
    )
    return 1


def _cmd_simulate(args) -> int:
    tree, interp, game = _build_game(args)
    machine = make_strategy(args.machine, game, tree.expr, interp, bound=args.universe)
    env = make_env(args.env, game, bound=args.universe)
    result = simulate(game, machine, env, args.steps, args.seed)
    trace_text = trace_to_text(result.trace)
    trace_path = None
    if args.trace:
        Path(args.trace).write_text(trace_text + "\n", encoding="utf-8")
        trace_path = args.trace
    name = "TOP" if result.verdict.winner is TOP else "BOT"
    plain = (trace_text + "\n" if trace_text and not args.trace else "") + name
    _emit(args, {"verdict": name, "run": format_run(result.run), "trace_path": trace_path}, plain)
    return 0 if result.verdict.winner is TOP else 1


def _cmd_verify(args) -> int:
    tree, interp, game = _build_game(args)
    machine = make_strategy(args.machine, game, tree.expr, interp, bound=args.env_bound)
    lost = verify_wins(game, machine, args.env_depth, args.env_bound, step_budget=args.steps)
    if lost is None:
        _emit(args, {"verdict": "OK"}, "OK")
        return 0
    counter = {
        "run": format_run(lost.run),
        "script": [m if m is not None else "" for m in lost.script],
    }
    _emit(
        args,
        {"verdict": "LOSS", "run": format_run(lost.run), "counterexample": counter},
        f"LOSS\n  run    {format_run(lost.run)!r}\n  script {counter['script']}",
    )
    return 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import build_app

    default_doc = None
    if args.interp:
        default_doc = json.loads(Path(args.interp).read_text(encoding="utf-8"))
    app = build_app(default_interp=default_doc)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="col", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formula=True, interp=True):
        if formula:
            p.add_argument("--formula", required=True, help="game expression")
        if interp:
            p.add_argument("--interp", help="interpretation JSON file (default: empty atoms, shipped catalog)")
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("parse", help="parse a formula and print its canonical form")
    common(p, interp=False)
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("legal", help="check a run for legality")
    common(p)
    p.add_argument("--run", required=True, help='run text, e.g. "B:5 T:5"')
    p.set_defaults(func=_cmd_legal)

    p = sub.add_parser("winner", help="adjudicate a run")
    common(p)
    p.add_argument("--run", required=True)
    p.set_defaults(func=_cmd_winner)

    p = sub.add_parser("moves", help="list legal moves at a position")
    common(p)
    p.add_argument("--run", default="", help="position (default: empty)")
    p.add_argument("--player", type=_player, default=BOT, help="T or B (default B)")
    p.add_argument("--universe", type=int, default=8, help="numeral/length bound")
    p.set_defaults(func=_cmd_moves)

    p = sub.add_parser("delays", help="enumerate player-delays of a run")
    p.add_argument("--run", required=True)
    p.add_argument("--player", type=_player, required=True)
    p.add_argument("--max-len", type=int, default=12, help="refuse longer runs")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_delays)

    p = sub.add_parser("static", help="search for a static-property counterexample")
    common(p)
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--universe", type=int, default=3)
    p.set_defaults(func=_cmd_static)

    p = sub.add_parser("simulate", help="play a machine against an environment")
    common(p)
    p.add_argument("--machine", required=True, help="registry name, e.g. copycat or fsm:file.json")
    p.add_argument("--env", default="silent", help="silent | script:<file> | random[:<seed>]")
    p.add_argument("--steps", type=int, default=256, help="cycle budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--universe", type=int, default=8)
    p.add_argument("--trace", help="write the cycle trace to this file")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("verify", help="exhaustively test a machine against bounded environments")
    common(p)
    p.add_argument("--machine", required=True)
    p.add_argument("--env-depth", type=int, required=True, help="environment move opportunities")
    p.add_argument("--env-bound", type=int, required=True, help="numeral/length bound on environment moves")
    p.add_argument("--steps", type=int, default=None,
                   help=f"cycle budget (default env-depth + {DEFAULT_TAIL_CYCLES})")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP play service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--interp", help="default interpretation JSON file for new sessions")
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InterpretError, MoveError, RunFormatError, UnknownStrategy,
            ShapeMismatch, MalformedSpec, ProgramError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"col {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
