"""Command-line surface.

Commands: ``validate``, ``classify``, ``report``, ``theorems``,
``example``, ``search``.  Exit codes: 0 success, 2 validation failure,
3 theorem counterexample found (witness written to a file named in the
output), 64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import EngineError
from .fixtures import BUILTIN_NAMES
from .io import (
    builtin_example,
    canonical_json,
    document_from_triple,
    parse_document,
    report_document,
    report_text,
)
from .search import SAMPLE_KINDS, random_structure_search
from .structures import classify

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_COUNTEREXAMPLE = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> _Parser:
    parser = _Parser(prog="hermlie", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a structure file")
    p.add_argument("file")

    p = sub.add_parser("classify", help="print Kahler-type flags")
    p.add_argument("file")

    p = sub.add_parser("report", help="full curvature/theorem report")
    p.add_argument("file")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("theorems", help="run all theorem decision procedures")
    p.add_argument("file")

    p = sub.add_parser("example", help="show or emit a builtin example")
    p.add_argument("name", choices=BUILTIN_NAMES)
    p.add_argument("--emit", action="store_true", help="print the document JSON")

    p = sub.add_parser("search", help="seeded random-structure theorem search")
    p.add_argument("--dim", type=int, required=True, choices=(4, 6, 8))
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--workers", type=int, default=1)
    return parser


def _load(path: str):
    try:
        data = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_INVALID)
    return parse_document(data)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _dispatch(args)
    except EngineError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def _dispatch(args) -> int:
    if args.command == "validate":
        doc = _load(args.file)
        print(f"ok: {doc.name} (dim {doc.dim}) is a valid hermitian structure")
        return EXIT_OK

    if args.command == "classify":
        doc = _load(args.file)
        flags = classify(doc.triple)
        for key in ("integrable", "kahler", "almost_kahler", "quasi_kahler"):
            print(f"{key}: {flags[key]}")
        return EXIT_OK

    if args.command == "report":
        doc = _load(args.file)
        report = report_document(doc)
        if args.format == "json":
            print(canonical_json(report))
        else:
            print(report_text(report))
        return EXIT_OK

    if args.command == "theorems":
        doc = _load(args.file)
        report = report_document(doc)
        bad = False
        for v in report["theorems"]:
            print(
                f"{v['statement']}: hypotheses={v['hypotheses_met']} "
                f"conclusion={v['conclusion_holds']} consistent={v['consistent']}"
            )
            bad = bad or not v["consistent"]
        if bad:
            witness_path = Path(f"witness_{doc.name}.json")
            witness_path.write_text(
                canonical_json(
                    {
                        "input": document_from_triple(doc.triple, doc.name),
                        "theorems": report["theorems"],
                    }
                ),
                encoding="utf-8",
            )
            print(f"counterexample found; witness written to {witness_path}")
            return EXIT_COUNTEREXAMPLE
        return EXIT_OK

    if args.command == "example":
        doc = builtin_example(args.name)
        if args.emit:
            print(canonical_json(document_from_triple(doc.triple, doc.name)))
        else:
            flags = classify(doc.triple)
            tags = ", ".join(k for k, v in flags.items() if v) or "none"
            print(f"{doc.name}: dim {doc.dim}, classification: {tags}")
        return EXIT_OK

    if args.command == "search":
        if args.samples < 0 or args.workers < 1:
            print("error: samples must be >= 0 and workers >= 1", file=sys.stderr)
            return EXIT_USAGE
        totals: dict = {}
        counterexamples = []
        for result in random_structure_search(
            args.dim, args.samples, args.seed, workers=args.workers
        ):
            totals[result.kind] = totals.get(result.kind, 0) + 1
            for v in result.counterexamples:
                counterexamples.append((result, v))
        for kind in SAMPLE_KINDS:
            if kind in totals:
                print(f"{kind}: {totals[kind]} samples")
        print(f"total: {sum(totals.values())} samples, "
              f"{len(counterexamples)} counterexamples")
        if counterexamples:
            result, verdict = counterexamples[0]
            witness_path = Path(
                f"witness_search_dim{args.dim}_seed{args.seed}_{result.index}.json"
            )
            witness_path.write_text(
                canonical_json(
                    {
                        "input": document_from_triple(
                            result.triple(),
                            f"search_dim{args.dim}_seed{args.seed}_{result.index}",
                        ),
                        "statement": verdict.statement,
                        "witness": verdict.witness,
                    }
                ),
                encoding="utf-8",
            )
            print(f"counterexample found; witness written to {witness_path}")
            return EXIT_COUNTEREXAMPLE
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
