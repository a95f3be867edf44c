"""Offline driver: grade attempts, generate problems, validate documents,
play the pumping game in a terminal, launch the HTTP service.

Exit codes for `grade`: 0 full score, 1 partial or zero, 2 invalid input.
"""

from __future__ import annotations

import argparse
import errno
import json
import os
import sys

from . import apg, documents, grading, grammar, machines, pda, regular
from .errors import FormalGradeError, ParseError
from .pumping import GameState, game_transcript, pumping_game_step

EXIT_FULL = 0
EXIT_PARTIAL = 1
EXIT_INVALID = 2
EXIT_PORT_IN_USE = 3


def _load_json(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as handle:
        return json.load(handle)


def _print_report(report: grading.GradeReport, fmt: str, out) -> None:
    if fmt == "structured":
        json.dump(report.to_doc(), out, indent=2, sort_keys=True)
        out.write("\n")
        return
    frac = report.fraction
    out.write(f"points: {report.points}/{report.max_points} "
              f"(fraction {frac.numerator}/{frac.denominator})\n")
    if report.not_counted:
        out.write("this attempt is not counted\n")
    for f in report.feedback:
        line = f"[{f.severity}] {f.text}"
        out.write(line + "\n")
    for key in sorted(report.metadata):
        out.write(f"{key}: {report.metadata[key]}\n")


def cmd_grade(args, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        problem_doc = _load_json(args.problem)
        attempt_doc = _load_json(args.attempt)
        problem, warnings = documents.problem_from_doc(problem_doc)
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
        attempt = documents.parse_attempt(problem, attempt_doc)
        report = grading.grade(problem, attempt, budget=args.budget)
    except (OSError, json.JSONDecodeError, FormalGradeError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    _print_report(report, args.format, out)
    return EXIT_FULL if report.fraction == 1 else EXIT_PARTIAL


def cmd_generate(args, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        docs = []
        for i in range(args.count):
            req = apg.GenerationRequest(kind=args.kind, d_min=args.min, d_max=args.max,
                                        seed=args.seed + i)
            docs.append(documents.problem_to_doc(apg.generate(req)))
    except (ValueError, FormalGradeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    json.dump(docs if args.count > 1 else docs[0], out, indent=2, sort_keys=True)
    out.write("\n")
    return EXIT_FULL


_VALIDATORS = {
    "re": lambda doc: regular.parse_regex(doc["regex"], doc.get("alphabet")),
    "cfg": lambda doc: grammar.parse_cfg(doc["grammar"]),
    "pda": lambda doc: pda.pda_from_doc(doc["pda"]),
    "tm": lambda doc: machines.tm_from_doc(doc["tm"]),
    "while": lambda doc: machines.parse_while(doc["program"], doc.get("var_count")),
    "problem": lambda doc: documents.problem_from_doc(doc),
}


def cmd_validate(args, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        doc = _load_json(args.file)
        result = _VALIDATORS[args.kind](doc)
    except (OSError, json.JSONDecodeError, KeyError, ValueError,
            FormalGradeError, ParseError) as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.kind == "problem":
        _, warnings = result
        for w in warnings:
            out.write(f"warning: {w}\n")
    out.write("ok\n")
    return EXIT_FULL


def cmd_game(args, inp=None, out=None) -> int:
    inp = inp if inp is not None else sys.stdin
    out = out if out is not None else sys.stdout
    try:
        problem, _ = documents.problem_from_doc(_load_json(args.problem))
    except (OSError, json.JSONDecodeError, FormalGradeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if problem.kind != documents.PUMPING_GAME:
        print("error: not a pumping-game problem", file=sys.stderr)
        return EXIT_INVALID
    payload = grading.game_payload(problem)
    state = GameState()
    out.write("pumping-lemma game; answer the prompts\n")

    def ask(prompt: str) -> str:
        out.write(prompt)
        out.flush()
        line = inp.readline()
        if not line:
            raise EOFError
        return line.strip()

    try:
        while state.winner is None:
            if state.phase == "claim":
                claim = ask("is the language regular or nonregular? ")
                move = {"kind": "claim", "claim": claim}
            elif state.phase == "choose_n":
                move = {"kind": "n", "n": int(ask("choose the pumping bound n: "))}
            elif state.phase == "choose_word":
                move = {"kind": "word",
                        "word": ask(f"choose a word in the language, length >= {state.n}: ")}
            elif state.phase == "choose_split":
                out.write(f"the word is {state.w!r}; give the split\n")
                move = {"kind": "split", "x": ask("x: "), "y": ask("y: "), "z": ask("z: ")}
            else:
                x, y, z = state.split
                out.write(f"the split is x={x!r} y={y!r} z={z!r}\n")
                move = {"kind": "i", "i": int(ask("choose the pump count i: "))}
            try:
                state = pumping_game_step(payload, state, move)
            except FormalGradeError as exc:
                out.write(f"illegal move: {exc}\n")
            except ValueError as exc:
                out.write(f"bad input: {exc}\n")
    except (EOFError, KeyboardInterrupt):
        out.write("\ngame abandoned\n")
        return EXIT_INVALID
    for line in game_transcript(payload, state):
        out.write(line + "\n")
    return EXIT_FULL if state.winner == "student" else EXIT_PARTIAL


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    config = {}
    if args.config:
        try:
            config = _load_json(args.config)
        except (OSError, json.JSONDecodeError) as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return EXIT_INVALID
    addr = os.environ.get("FG_ADDR", config.get("addr", "127.0.0.1:8000"))
    store_path = os.environ.get("FG_STORE_PATH", config.get("store_path", ":memory:"))
    secret = os.environ.get("FG_TOKEN_SECRET", config.get("token_secret", "dev-secret"))
    host, _, port_text = addr.rpartition(":")
    try:
        port = int(port_text)
    except ValueError:
        print(f"error: bad address {addr!r}", file=sys.stderr)
        return EXIT_INVALID
    if store_path != ":memory:" and not os.path.isdir(os.path.dirname(store_path) or "."):
        print(f"error: store directory for {store_path!r} does not exist", file=sys.stderr)
        return EXIT_INVALID
    app = create_app(store_path=store_path, token_secret=secret,
                     budget=config.get("budget", 1.0))
    try:
        uvicorn.run(app, host=host or "127.0.0.1", port=port, log_level="warning")
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            print(f"error: address {addr} already in use", file=sys.stderr)
            return EXIT_PORT_IN_USE
        raise
    except SystemExit as exc:
        # uvicorn exits 1 on bind failures; map to the distinct port code
        if exc.code:
            print(f"error: could not bind {addr}", file=sys.stderr)
            return EXIT_PORT_IN_USE
    return EXIT_FULL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="formalgrade",
        description="grade, generate and serve automata/formal-language exercises")
    sub = parser.add_subparsers(dest="command", required=True)

    p_grade = sub.add_parser("grade", help="grade an attempt file against a problem file")
    p_grade.add_argument("problem")
    p_grade.add_argument("attempt")
    p_grade.add_argument("--budget", type=float, default=1.0,
                         help="seconds for bounded equivalence checks")
    p_grade.add_argument("--format", choices=("text", "structured"), default="text")
    p_grade.set_defaults(func=cmd_grade)

    p_gen = sub.add_parser("generate", help="generate fresh problems")
    p_gen.add_argument("--kind", required=True, choices=apg.SUPPORTED_KINDS)
    p_gen.add_argument("--min", type=int, default=1, help="minimum difficulty (1..10)")
    p_gen.add_argument("--max", type=int, default=10, help="maximum difficulty (1..10)")
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("--count", type=int, default=1)
    p_gen.set_defaults(func=cmd_generate)

    p_val = sub.add_parser("validate", help="validate a formalism or problem document")
    p_val.add_argument("--kind", required=True, choices=sorted(_VALIDATORS))
    p_val.add_argument("file")
    p_val.set_defaults(func=cmd_validate)

    p_game = sub.add_parser("game", help="play the pumping-lemma game in the terminal")
    p_game.add_argument("problem")
    p_game.set_defaults(func=cmd_game)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", help="JSON config: addr, store_path, token_secret")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
