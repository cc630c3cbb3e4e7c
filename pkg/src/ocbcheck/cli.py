"""Command line front end: validate models, check conformance, generate fixtures.

Exit codes: 0 success/conforming (warnings allowed in --prefix mode),
1 violations or model defects, 2 unusable input.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .conformance import check_all
from .formats import FormatError, ModelDefectsError, load_log, load_model, save_log, save_report
from .generator import GenerationError, InjectionError, generate_conforming, inject_violation
from .report import render_text
from .violations import KINDS


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    return Path(path).read_bytes()


def _parse_kinds(text: str) -> tuple[str, ...]:
    kinds = tuple(part.strip() for part in text.split(",") if part.strip())
    for kind in kinds:
        if kind not in KINDS:
            raise argparse.ArgumentTypeError(
                f"unknown problem type {kind!r} (choose from {', '.join(KINDS)})"
            )
    return kinds


def _parse_injection(text: str) -> tuple[str, int]:
    kind, _, times = text.partition("x")
    kind = kind.strip()
    if kind not in KINDS:
        raise argparse.ArgumentTypeError(
            f"unknown problem type {kind!r} (choose from {', '.join(KINDS)})"
        )
    count = int(times) if times else 1
    if count < 1:
        raise argparse.ArgumentTypeError("injection count must be positive")
    return kind, count


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ocbcheck",
        description="Conformance checking of object-centric event logs against OCBC models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="check a log against a model")
    check.add_argument("model", help="model document (.ocbc.json)")
    check.add_argument("log", help="event log (.oclog.jsonl), or - for stdin")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument(
        "--prefix",
        action="store_true",
        help="treat the log as a running prefix: eventual violations become warnings",
    )
    check.add_argument(
        "--types",
        type=_parse_kinds,
        default=None,
        metavar="KINDS",
        help="comma-separated subset of problem types to check (e.g. VII,IX)",
    )
    check.add_argument("--out", default=None, help="write the report here instead of stdout")

    validate = sub.add_parser("validate-model", help="report model well-formedness defects")
    validate.add_argument("model", help="model document (.ocbc.json)")

    generate = sub.add_parser("generate", help="generate a conforming log for a model")
    generate.add_argument("model", help="model document (.ocbc.json)")
    generate.add_argument("--events", type=int, default=20, help="target event count")
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument(
        "--inject",
        type=_parse_injection,
        default=None,
        metavar="KIND[xN]",
        help="afterwards inject N violations of the given problem type (e.g. IX or VIIx2)",
    )
    return parser


def _cmd_check(args: argparse.Namespace) -> int:
    try:
        model = load_model(_read(args.model))
        log = load_log(_read(args.log))
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for warning in log.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    report = check_all(model, log, kinds=args.types, prefix=args.prefix)
    payload = save_report(report) if args.format == "json" else render_text(report).encode()
    if args.out:
        Path(args.out).write_bytes(payload)
    else:
        sys.stdout.write(payload.decode("utf-8"))
    return 0 if report.conforms else 1


def _cmd_validate_model(args: argparse.Namespace) -> int:
    try:
        data = _read(args.model)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        model = load_model(data)
    except ModelDefectsError as exc:
        for defect in exc.defects:
            print(f"defect {defect}")
        return 1
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(
        f"model OK: {len(model.bcm.activities)} activities, "
        f"{len(model.clam.classes)} classes, {len(model.clam.rel_types)} relationships, "
        f"{len(model.bcm.constraints)} constraints"
    )
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    try:
        model = load_model(_read(args.model))
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        log = generate_conforming(model, events=args.events, seed=args.seed)
        if args.inject:
            kind, times = args.inject
            for i in range(times):
                log, outcome = inject_violation(model, log, kind, seed=args.seed + i)
                print(f"injected {kind}: {outcome.description}", file=sys.stderr)
    except (GenerationError, InjectionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(save_log(log).decode("utf-8"))
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "check": _cmd_check,
        "validate-model": _cmd_validate_model,
        "generate": _cmd_generate,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
