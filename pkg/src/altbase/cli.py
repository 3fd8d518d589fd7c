"""Batch command line: validate word lists, synthesize bases, print codings.

Exit codes: 0 success, 1 failed validation or a failed cross-check, 2 parse
or usage error, 3 depth or window exhausted, 4 undecidable at the working
precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .bases import AlternateBase
from .coding import Directive, base_from_directive, faithful_coding, sadic_limit
from .errors import (
    AltBaseError,
    CeilUndecidable,
    ClassingUndecidable,
    CodingMismatch,
    DepthExhausted,
    DigitRangeError,
    DLessThanN,
    FailsIfAllZeroTail,
    FloorUndecidable,
    NoLimit,
    ParseError,
    Undecidable,
    ZeroLeadDigit,
)
from .synthesis import certificate_json, certify, synthesize_periodic
from .words import ExpansionList, check_parry, parse_word

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_PARSE = 2
EXIT_DEPTH = 3
EXIT_UNDECIDABLE = 4


def _emit(ns, payload: dict, text_lines: Sequence[str]) -> None:
    if ns.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, separators=(",", ":")))
        sys.stdout.write("\n")
    else:
        for line in text_lines:
            sys.stdout.write(line + "\n")


def _gather_words(raw: Sequence[str]) -> list[str]:
    if list(raw) == ["-"]:
        return sys.stdin.read().split()
    return list(raw)


def _parse_list(raw: Sequence[str], p: int) -> ExpansionList:
    texts = _gather_words(raw)
    if len(texts) != p:
        raise ParseError(f"expected {p} words for period {p}, got {len(texts)}")
    return ExpansionList(tuple(parse_word(t) for t in texts))


def _interval_str(enc) -> str:
    return f"[{enc.lo.decimal()}, {enc.hi.decimal()}]"


def _report_payload(report) -> dict:
    return {
        "ok": report.ok,
        "p": report.p,
        "checked_up_to": report.checked_up_to,
        "partial": report.partial,
        "violations": [
            {"entry": v.entry, "shift": v.shift, "position": v.position}
            for v in report.violations
        ],
    }


def _report_lines(report) -> list[str]:
    lines = [f"p = {report.p}", f"checked suffixes up to {report.checked_up_to}"]
    for v in report.violations:
        lines.append(f"violation: {v.describe()}")
    lines.append("parry: ok" if report.ok else "parry: FAIL")
    return lines


def cmd_validate(ns) -> int:
    lst = _parse_list(ns.words, ns.p)
    report = check_parry(lst, depth=ns.depth)
    _emit(ns, _report_payload(report), _report_lines(report))
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_synthesize(ns) -> int:
    lst = _parse_list(ns.words, ns.p)
    if not ns.skip_parry:
        report = check_parry(lst, depth=ns.depth)
        if not report.ok:
            _emit(ns, _report_payload(report), _report_lines(report))
            return EXIT_INVALID
    base, _ = synthesize_periodic(lst, tol_bits=ns.tol)
    cert = certify(lst, base)
    payload = certificate_json(base, cert)
    p = base.p
    lines = [f"p = {p}"]
    for i, b in enumerate(base.betas):
        lines.append(f"beta_{p - 1 - i} = {_interval_str(b)}")
    lines.append("parry: " + ("ok" if all(cert.parry_ok) else "FAIL"))
    lines.append(f"uniqueness: {cert.uniqueness}")
    lines.append("classification: " + ",".join(cert.classification))
    for i, r in enumerate(cert.residuals):
        lines.append(f"residual_{i} = {_interval_str(r)}")
    _emit(ns, payload, lines)
    return EXIT_OK


def _parse_directive(text: str) -> Directive:
    try:
        blocks = tuple(
            tuple(int(x) for x in part.split(",")) for part in text.split(";")
        )
    except ValueError as exc:
        raise ParseError(f"bad directive {text!r}: {exc}") from exc
    try:
        return Directive(blocks)
    except ValueError as exc:
        raise ParseError(f"bad directive {text!r}: {exc}") from exc


def _word_str(word: tuple[int, ...]) -> str:
    if any(a > 9 for a in word):
        return ",".join(map(str, word))
    return "".join(map(str, word))


def cmd_code(ns) -> int:
    if (ns.directive is None) == (not ns.base):
        raise ParseError("pick exactly one of --directive or --base")
    check: Optional[str] = None
    if ns.directive is not None:
        directive = _parse_directive(ns.directive)
        if ns.check:
            base = base_from_directive(directive, tol_bits=ns.tol)
            word = faithful_coding(base, ns.len, depth=ns.depth)
            check = "ok"
        else:
            word = sadic_limit(directive, ns.len)
    else:
        texts = _gather_words(ns.base)
        lst = ExpansionList(tuple(parse_word(t) for t in texts))
        base, _ = synthesize_periodic(lst, tol_bits=ns.tol)
        word = faithful_coding(base, ns.len, depth=ns.depth)
        if ns.check:
            check = "ok"
    payload = {"length": len(word), "word": list(word)}
    lines = [_word_str(word)]
    if ns.check:
        payload["check"] = check
        lines.append(f"check: {check}")
    _emit(ns, payload, lines)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="altbase",
        description="Parry validation, base synthesis, and B-integer codings "
        "for alternate bases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--format", choices=("json", "text"), default="text")
        sp.add_argument("--tol", type=int, default=64, metavar="Q",
                        help="target enclosure width 2^-Q, Q >= 8")
        sp.add_argument("--depth", type=int, default=None,
                        help="suffix depth for validation, table depth for coding")

    sp = sub.add_parser("validate", help="check the lexicographic conditions")
    sp.add_argument("-p", type=int, required=True, help="period")
    sp.add_argument("words", nargs="+", help="words a_0 a_1 ... as pre(period); '-' reads stdin")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("synthesize", help="solve for the base of an expansion list")
    sp.add_argument("-p", type=int, required=True, help="period")
    sp.add_argument("words", nargs="+", help="words a_0 a_1 ... as pre(period); '-' reads stdin")
    sp.add_argument("--skip-parry", action="store_true")
    common(sp)
    sp.set_defaults(func=cmd_synthesize)

    sp = sub.add_parser("code", help="print a faithful coding or S-adic word")
    sp.add_argument("--directive", help="eta blocks, e.g. '1,1' or '2,2;1,1'")
    sp.add_argument("--base", nargs="*", default=(),
                    help="expansion words to synthesize the base from")
    sp.add_argument("--len", type=int, required=True, help="prefix length")
    sp.add_argument("--check", action="store_true",
                    help="cross-check the direct and S-adic codings")
    common(sp)
    sp.set_defaults(func=cmd_code)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(ns, "tol", 64) < 8:
        sys.stderr.write("error: --tol must be at least 8\n")
        return EXIT_PARSE
    if getattr(ns, "depth", None) is None and ns.command == "code":
        ns.depth = 16
    if getattr(ns, "len", 0) < 0:
        sys.stderr.write("error: --len must be non-negative\n")
        return EXIT_PARSE
    try:
        return ns.func(ns)
    except (ParseError, DigitRangeError, ZeroLeadDigit, FailsIfAllZeroTail,
            DLessThanN) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (DepthExhausted, NoLimit) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_DEPTH
    except (Undecidable, ClassingUndecidable, FloorUndecidable,
            CeilUndecidable) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_UNDECIDABLE
    except CodingMismatch as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID
    except (ValueError, TypeError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except AltBaseError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
