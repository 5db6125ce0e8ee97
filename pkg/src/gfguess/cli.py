"""Command line front end.

Exit status: 0 when every sequence yields a conjecture, 1 for a clean negative
result, 2 for unreadable input.
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from .exceptions import InputError
from .pipeline import MODES, PipelineConfig, Report, emit_report, exit_code, parse_sequence, run_batch
from .pipeline import run_pipeline


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gfguess",
        description="Guess an algebraic equation for the generating function of a sequence.",
    )
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--sequence", help="comma or space separated terms (integers or p/q)")
    src.add_argument("--file", help="path to a sequence file ('-' for stdin)")
    parser.add_argument("--format", choices=("list", "bfile"), default="list", help="input file format")
    parser.add_argument("--batch", action="store_true", help="treat each line (or b-file block) as a sequence")

    d = PipelineConfig()
    parser.add_argument("--m0", type=int, default=d.m0, help="first evaluation point z = 1/m0")
    parser.add_argument("--points", type=int, default=None, help="evaluation points (default deg-z-bound + 4)")
    parser.add_argument("--deg-y", type=int, default=d.deg_y, help="starting degree in y")
    parser.add_argument("--deg-y-cap", type=int, default=d.deg_y_cap, help="largest degree in y tried")
    parser.add_argument("--deg-z-bound", type=int, default=d.deg_z_bound, help="bound on coefficient degree in z")
    parser.add_argument("--precision", type=int, default=d.precision, help="decimal digits per evaluation")
    parser.add_argument("--max-order", type=int, default=d.max_order, help="largest recurrence order")
    parser.add_argument("--max-degree", type=int, default=d.max_degree, help="largest recurrence coefficient degree")
    parser.add_argument("--guard", type=int, default=d.guard, help="spare equations required by every fit")
    parser.add_argument("--slack", type=int, default=d.slack, help="allowed shortfall in the verification valuation")
    parser.add_argument("--mode", choices=MODES, default=d.mode)
    parser.add_argument("--workers", type=int, default=1, help="processes for evaluation or batch records")
    parser.add_argument("--output", choices=("text", "json"), default="text")
    parser.add_argument("--no-timings", action="store_true", help="omit timings (stable output)")
    parser.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _emit(reports: Sequence[Report], args) -> None:
    out = sys.stdout.buffer
    if args.output == "json" and args.batch:
        import json

        docs = [r.to_dict(timings=not args.no_timings) for r in reports]
        out.write((json.dumps(docs, indent=2, sort_keys=True) + "\n").encode())
    else:
        for i, r in enumerate(reports):
            if i and args.output == "text":
                out.write(b"\n")
            out.write(emit_report(r, args.output, timings=not args.no_timings))
    out.flush()


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2), format="%(levelname)s %(message)s")
    try:
        config = PipelineConfig(
            m0=args.m0,
            points=args.points,
            deg_y=args.deg_y,
            deg_y_cap=max(args.deg_y_cap, args.deg_y),
            deg_z_bound=args.deg_z_bound,
            precision=args.precision,
            max_order=args.max_order,
            max_degree=args.max_degree,
            guard=args.guard,
            slack=args.slack,
            mode=args.mode,
            workers=args.workers,
        )
        text = args.sequence.encode() if args.sequence is not None else _read(args.file)
        if args.batch:
            reports = run_batch(config, text, args.format)
        else:
            reports = [run_pipeline(config, parse_sequence(text, args.format))]
    except (InputError, OSError) as exc:
        print(f"gfguess: error: {exc}", file=sys.stderr)
        return 2
    _emit(reports, args)
    return exit_code(reports)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
