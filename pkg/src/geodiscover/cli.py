"""geodiscover: run discovery on a construction file."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .engine import Options, discover
from .numeric import DegenerateInstance, instantiate
from .parser import ParseError, parse
from .report import render_json, render_svg, render_text, report_dict

EXIT_OK, EXIT_PARSE, EXIT_ABORTED, EXIT_DEGENERATE = 0, 2, 3, 4


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="geodiscover", description=__doc__)
    ap.add_argument("input", help="construction program")
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument("--svg", metavar="PATH", help="write a figure with related objects coloured alike")
    ap.add_argument("--target", action="append", help="point to discover (overrides discover lines)")
    ap.add_argument("--timeout-ms", type=float, help="time limit per symbolic check (default 5000)")
    ap.add_argument("--show-trivial", action="store_true", default=None)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--epsilon", type=float, help="relative tolerance of the numeric filter")
    ap.add_argument("--instances", type=int, help="numeric instances per check")
    ap.add_argument("--normalize", action="store_true", default=None,
                    help="fix the first two free points at (0,0) and (1,0)")
    ap.add_argument("--workers", type=int, help="parallel prover processes")
    return ap


def _options(c, args) -> Options:
    over = {}
    for flag, key in (
        ("timeout_ms", "per_check_timeout_ms"),
        ("show_trivial", "show_trivial"),
        ("seed", "seed"),
        ("epsilon", "epsilon_rel"),
        ("instances", "instance_count"),
        ("normalize", "normalize"),
        ("workers", "parallel_workers"),
    ):
        value = getattr(args, flag)
        if value is not None:
            over[key] = value
    return Options.from_construction(c, **over)


def _svg_path(base: str, target: str, many: bool) -> Path:
    p = Path(base)
    return p.with_name(f"{p.stem}-{target}{p.suffix}") if many else p


def run(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        source = Path(args.input).read_text()
    except OSError as e:
        print(f"geodiscover: {e}", file=sys.stderr)
        return EXIT_PARSE
    try:
        c = parse(source)
    except ParseError as e:
        for err in e.errors:
            print(f"{args.input}:{err}", file=sys.stderr)
        return EXIT_PARSE
    targets = args.target or list(c.targets)
    unknown = [t for t in targets if t not in c.point_names()]
    if not targets or unknown:
        msg = f"unknown target {unknown[0]}" if unknown else "no discover directive and no --target"
        print(f"geodiscover: {msg}", file=sys.stderr)
        return EXIT_PARSE
    try:
        opts = _options(c, args)
    except ValueError as e:
        print(f"geodiscover: {e}", file=sys.stderr)
        return EXIT_PARSE

    docs, code = [], EXIT_OK
    for target in targets:
        try:
            r = discover(c, target, opts)
            inst = instantiate(c, opts.numeric.seed, opts.numeric)
        except DegenerateInstance as e:
            print(f"geodiscover: {e}", file=sys.stderr)
            return EXIT_DEGENERATE
        if args.format == "text":
            sys.stdout.write(("\n" if docs else "") + render_text(r, opts.show_trivial))
        docs.append(r)
        if args.svg:
            _svg_path(args.svg, target, len(targets) > 1).write_text(render_svg(c, inst, r))
        if r.aborted:
            print(f"geodiscover: discovery aborted: {r.abort_reason}", file=sys.stderr)
            code = EXIT_ABORTED
            break
    if args.format == "json":
        if len(docs) == 1:
            sys.stdout.write(render_json(docs[0]))
        else:
            sys.stdout.write(json.dumps([report_dict(r) for r in docs], indent=2) + "\n")
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
