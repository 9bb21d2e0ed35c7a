"""``mw`` command-line front end.

Exit codes: 0 success, 1 usage error, 2 parse error, 3 validation error,
4 unclassified or empty result, 5 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import vocabulary
from .classifier import EmptyService, classify, explain, format_decimal
from .discovery import INDIVIDUALS, TYPES, PreferenceQuery, QueryError, discover
from .kb import ROOT, KBError, KnowledgeBase, build_seed_kb, kb_from_document, kb_to_document
from .parser import ParseError, ValidationFailed, detect_kind, parse_ontology, parse_service

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_PARSE = 2
EXIT_INVALID = 3
EXIT_EMPTY = 4
EXIT_INTERNAL = 5


class _Exit(Exception):
    def __init__(self, code: int, message: str = ""):
        self.code = code
        self.message = message


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Exit(EXIT_USAGE, f"{self.prog}: error: {message}")


def _read(path: str) -> str:
    try:
        data = Path(path).read_bytes()
    except OSError as exc:
        raise _Exit(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise _Exit(EXIT_PARSE, f"{path}: not valid UTF-8 (byte {exc.start})") from None


def _parse_failure(path: str, exc: ParseError) -> _Exit:
    return _Exit(EXIT_PARSE, f"{path}:{exc.position.line}:{exc.position.column}: "
                             f"expected {exc.expected}, found {exc.found}")


def _invalid(path: str, violations) -> _Exit:
    return _Exit(EXIT_INVALID, "\n".join(f"{path}: {v}" for v in violations))


def _load_kb(path: str | None) -> KnowledgeBase:
    if path is None:
        return build_seed_kb()
    text = _read(path)
    try:
        return kb_from_document(text)
    except ParseError as exc:
        raise _parse_failure(path, exc) from None
    except ValidationFailed as exc:
        raise _invalid(path, exc.violations) from None
    except KBError as exc:
        raise _Exit(EXIT_INVALID, f"{path}: {exc}") from None


def _emit_json(obj) -> None:
    sys.stdout.write(json.dumps(obj, indent=2, ensure_ascii=False) + "\n")


# -- commands ----------------------------------------------------------------


def cmd_validate(args) -> int:
    text = _read(args.path)
    try:
        if detect_kind(text) == "service":
            parse_service(text)
        else:
            parse_ontology(text)
    except ParseError as exc:
        raise _parse_failure(args.path, exc) from None
    except ValidationFailed as exc:
        raise _invalid(args.path, exc.violations) from None
    print("OK")
    return EXIT_OK


def cmd_classify(args) -> int:
    if args.top < 1:
        raise _Exit(EXIT_USAGE, "--top must be at least 1")
    kb = _load_kb(args.kb)
    text = _read(args.service)
    try:
        service = parse_service(text)
    except ParseError as exc:
        raise _parse_failure(args.service, exc) from None
    try:
        result = classify(kb, service)
    except EmptyService as exc:
        raise _Exit(EXIT_INVALID, f"{args.service}: EmptyService: {exc}") from None

    shown = result.ranking[: args.top]
    verdict = result.verdict
    if args.json:
        _emit_json({
            "service": result.service,
            "verdict": {"status": verdict.status, "types": list(verdict.types)},
            "ranking": [
                {
                    "type": m.type_class,
                    "score_num": m.score.numerator,
                    "score_den": m.score.denominator,
                    "comparable": m.comparable,
                }
                for m in shown
            ],
        })
    else:
        top_score = format_decimal(result.top.score) if result.top else "0.00"
        if verdict.status == "Unclassified":
            print(f"Unclassified (top score {top_score})")
        else:
            print(f"{verdict.status}: {', '.join(verdict.types)} (score {top_score})")
        width = max((len(m.type_class) for m in shown), default=0)
        for rank, m in enumerate(shown, 1):
            print(f"  {rank}. {m.type_class.ljust(width)}  {format_decimal(m.score)}  "
                  f"({m.comparable} comparable)")
        if args.explain:
            sys.stdout.write(explain(result))
    return EXIT_EMPTY if verdict.status == "Unclassified" else EXIT_OK


def _split_pair(flag: str, raw: str) -> tuple[str, str]:
    key, sep, value = raw.partition("=")
    if not sep or not key or not value:
        raise _Exit(EXIT_USAGE, f"{flag} expects key=value, got '{raw}'")
    return key, value


def _feature(flag: str, key: str, value: str):
    try:
        return vocabulary.parse_value(key, value)
    except vocabulary.VocabularyError as exc:
        raise _Exit(EXIT_USAGE, f"{flag}: {exc}") from None


def cmd_query(args) -> int:
    required = {}
    for raw in args.require:
        key, value = _split_pair("--require", raw)
        required[key] = _feature("--require", key, value)
    preferred = {}
    for raw in args.prefer:
        key, value = _split_pair("--prefer", raw)
        weight = Fraction(1)
        if ":" in value:
            value, _, weight_text = value.rpartition(":")
            try:
                weight = Fraction(weight_text)
            except (ValueError, ZeroDivisionError):
                raise _Exit(EXIT_USAGE, f"--prefer: bad weight '{weight_text}' for {key}") from None
        preferred[key] = (_feature("--prefer", key, value), weight)

    kb = _load_kb(args.kb)
    try:
        result = discover(kb, PreferenceQuery(required, preferred), args.target)
    except QueryError as exc:
        raise _Exit(EXIT_USAGE, str(exc)) from None

    if args.json:
        _emit_json({
            "target": result.target,
            "matches": [
                {"entity": m.entity, "score_num": m.score.numerator, "score_den": m.score.denominator}
                for m in result.matches
            ],
        })
    else:
        width = max((len(m.entity) for m in result.matches), default=0)
        for m in result.matches:
            print(f"{m.entity.ljust(width)}  {format_decimal(m.score)}")
    if not result.matches:
        print("no candidate satisfies the required features", file=sys.stderr)
        return EXIT_EMPTY
    return EXIT_OK


def taxonomy_lines(kb: KnowledgeBase, root: str) -> list[str]:
    ont = kb.ontology
    lines = []

    def walk(cls, depth):
        lines.append("  " * depth + cls)
        for child in ont.subclasses(cls):
            walk(child, depth + 1)

    walk(root, 0)
    return lines


def cmd_taxonomy(args) -> int:
    kb = _load_kb(args.kb)
    if args.root not in kb.ontology.classes:
        raise _Exit(EXIT_USAGE, f"unknown class '{args.root}'")
    for line in taxonomy_lines(kb, args.root):
        print(line)
    return EXIT_OK


def cmd_export(args) -> int:
    text = kb_to_document(build_seed_kb())
    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        raise _Exit(EXIT_INTERNAL, f"cannot write {args.out}: {exc.strerror}") from None
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="mw", description="Middleware ontology toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    p = sub.add_parser("validate", help="check an ontology or service file")
    p.add_argument("path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("classify", help="classify a service description")
    p.add_argument("service")
    p.add_argument("--kb", help="ontology file to use instead of the embedded seed")
    p.add_argument("--top", type=int, default=3, help="ranking entries to show (default 3)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--explain", action="store_true", help="append per-feature contributions")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("query", help="find types or technologies matching preferences")
    p.add_argument("--require", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--prefer", action="append", default=[], metavar="KEY=VALUE[:WEIGHT]")
    p.add_argument("--target", choices=(TYPES, INDIVIDUALS), default=TYPES)
    p.add_argument("--kb", help="ontology file to use instead of the embedded seed")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("taxonomy", help="print the class hierarchy")
    p.add_argument("--root", default=ROOT)
    p.add_argument("--kb", help="ontology file to use instead of the embedded seed")
    p.set_defaults(func=cmd_taxonomy)

    p = sub.add_parser("export", help="write the seed knowledge base as MWO")
    p.add_argument("--out", help="output path (default: standard output)")
    p.set_defaults(func=cmd_export)
    return parser


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            print(exc.message, file=sys.stderr)
        return exc.code
    except Exception as exc:  # noqa: BLE001 - last-resort exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
