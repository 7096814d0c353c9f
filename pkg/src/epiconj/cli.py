"""Command-line front end.

Exit codes: 0 success, 1 criterion/oracle mismatch, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from . import automata
from .errors import EpiconjError
from .report import ALL_FAMILIES, build_family, classes_report, eggbox, format_eggbox, thread_count
from .semigroup import DEFAULT_CAP

MAX_K = 10


class UsageError(Exception):
    pass


def _family_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", required=True, choices=ALL_FAMILIES)
    p.add_argument("--n", type=int, required=True, help="ground-set size or dimension")
    p.add_argument("--field", type=int, default=2, help="prime field size for linear families")
    p.add_argument("--max-elements", type=int, default=DEFAULT_CAP)


def _positive(value: int, name: str) -> None:
    if value < 1:
        raise UsageError(f"{name} must be positive")


def cmd_classes(args) -> int:
    _positive(args.n, "--n")
    report = classes_report(args.family, args.n, args.field, args.max_elements)
    args.out.write(report.to_csv() if args.format == "csv" else report.to_json() + "\n")
    return 0


def cmd_check(args) -> int:
    _positive(args.n, "--n")
    report = classes_report(
        args.family, args.n, args.field, args.max_elements, audit=True, threads=thread_count()
    )
    args.out.write(report.to_csv() if args.format == "csv" else report.to_json() + "\n")
    if not report.agreement:
        for a in report.audit:
            if not a.agreement:
                print(
                    f"mismatch ({a.criterion}): {a.counterexample[0]} vs {a.counterexample[1]}",
                    file=sys.stderr,
                )
        return 1
    return 0


def appendix_a_rows(machine: automata.MealyMachine, max_k: int, max_word_length: int) -> list[dict]:
    """Per ``k``: the orbit of ``z^(2k)`` and chains at length ``2k+2``.

    ``z`` is the last letter of the alphabet (``1`` for the bundled machine),
    and the chain word is ``z^(2k)`` followed by the first and last letters.
    """
    first, last = machine.alphabet[0], machine.alphabet[-1]
    rows = []
    for k in range(1, max_k + 1):
        if 2 * k + 2 > max_word_length:
            raise automata.LengthCapExceeded(
                f"word length {2 * k + 2} exceeds --max-word-length {max_word_length}"
            )
        short = automata.orbit_report(machine, 2 * k)
        long = automata.orbit_report(machine, 2 * k + 2)
        kind, length = short.orbit_of(last * (2 * k))
        ckind, clength = long.orbit_of(last * (2 * k) + first + last)
        rows.append(
            {
                "k": k,
                "word_length": 2 * k,
                "orbit_kind": kind,
                "orbit_length": length,
                "chain_word_kind": ckind,
                "chain_word_length": clength,
                "max_chain_length": long.max_chain,
            }
        )
    return rows


def cmd_appendix_a(args) -> int:
    if not 1 <= args.max_k <= MAX_K:
        raise UsageError(f"--max-k must lie in 1..{MAX_K}")
    machine = automata.load_machine(args.machine) if args.machine else automata.appendix_a_machine()
    rows = appendix_a_rows(machine, args.max_k, args.max_word_length)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        args.out.write(buf.getvalue())
    else:
        args.out.write(json.dumps({"schema": 1, "rows": rows}, indent=2) + "\n")
    return 0


def cmd_green(args) -> int:
    _positive(args.n, "--n")
    S = build_family(args.family, args.n, args.field, args.max_elements)
    boxes = eggbox(S)
    if args.format == "json":
        args.out.write(json.dumps({"schema": 1, "family": args.family, "d_classes": boxes}, indent=2) + "\n")
    else:
        args.out.write(format_eggbox(boxes))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epiconj", description="Conjugacy classes in finite regular epigroups."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classes", help="oracle conjugacy classes of a family")
    _family_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_classes)

    p = sub.add_parser("check", help="audit the family criterion against the oracle")
    _family_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("appendix-a", help="cycle and chain growth of a partial Mealy machine")
    p.add_argument("--max-k", type=int, default=8)
    p.add_argument("--max-word-length", type=int, default=2 * MAX_K + 2)
    p.add_argument("--machine", help="machine file; defaults to the bundled four-state machine")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(func=cmd_appendix_a)

    p = sub.add_parser("green", help="eggbox picture of Green's relations")
    _family_args(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_green)
    return parser


def main(argv=None, out=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.out = out or sys.stdout
    try:
        return args.func(args)
    except (UsageError, EpiconjError, ValueError, OSError) as exc:
        print(f"epiconj: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
