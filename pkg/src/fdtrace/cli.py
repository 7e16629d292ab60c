"""Command line: ``fdtrace run|query|check``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .events import get_events, loads
from .kernel import Kernel
from .program import ProgramError, parse_program, run_program
from .replay import check
from .terms import Int, TermSyntaxError, parse_term


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _load_log(path: str) -> list:
    try:
        return loads(_read(path))
    except (OSError, ValueError) as exc:
        raise SystemExit(f"fdtrace: {path}: {exc}")


def cmd_run(args: argparse.Namespace) -> int:
    try:
        goals = parse_program(_read(args.program))
    except OSError as exc:
        print(f"fdtrace: {exc}", file=sys.stderr)
        return 2
    except ProgramError as exc:
        print(f"fdtrace: {args.program}: {exc}", file=sys.stderr)
        return 2
    kernel = Kernel()
    limit = None if args.max_solutions == 0 else args.max_solutions
    outcome = run_program(goals, kernel, limit)
    for line in outcome.lines():
        print(line)
    if args.trace_out:
        Path(args.trace_out).write_text(kernel.log.dumps(), encoding="utf-8")
    if args.check:
        violations = check(kernel.log)
        for v in violations:
            print(v, file=sys.stderr)
        if violations:
            return 1
    return 0


def cmd_query(args: argparse.Namespace) -> int:
    events = _load_log(args.log)
    try:
        selector = parse_term(args.selector)
        if isinstance(selector, Int):
            selector = selector.value
        matched = get_events(events, selector)
    except (TermSyntaxError, ValueError) as exc:
        print(f"fdtrace: bad selector: {exc}", file=sys.stderr)
        return 2
    for e in matched:
        print(e)
    return 0


def cmd_check(args: argparse.Namespace) -> int:
    violations = check(_load_log(args.log))
    for v in violations:
        print(v)
    if not violations:
        print("ok")
    return 1 if violations else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fdtrace", description="Traced finite-domain constraint solving.")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a constraint program")
    run.add_argument("program")
    run.add_argument("--trace-out", metavar="FILE", help="write the trace log here")
    run.add_argument("--max-solutions", type=int, default=1, metavar="N", help="0 for all (default 1)")
    run.add_argument("--check", action="store_true", help="validate the trace before exiting")
    run.set_defaults(func=cmd_run)

    query = sub.add_parser("query", help="print the events of a log that match a selector")
    query.add_argument("log")
    query.add_argument("selector", help="an event id, an event name or a pattern with _ slots")
    query.set_defaults(func=cmd_query)

    chk = sub.add_parser("check", help="validate the nesting and replay a log")
    chk.add_argument("log")
    chk.set_defaults(func=cmd_check)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
