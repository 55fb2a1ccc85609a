"""Command line interface: ``digiseg <command> ...``.

Exit codes: 0 when clean, 1 when a violation was found, 2 on a bad
configuration or a failing external oracle. All output is deterministic;
randomness only enters through ``--seed``.
"""

from __future__ import annotations

import argparse
import re
import sys
from typing import Sequence

from . import conformance as cf
from . import hausdorff as hd
from . import highdim, lines
from .errors import DomainError, InconclusiveError, OracleError, OrderExtractionError, PreconditionError
from .order import IntegerInterval, parse_order
from .render import RenderSpec, render_ppm, render_svg, sweep_figure
from .segments import ExternalSystem, parse_system

EXIT_OK, EXIT_VIOLATION, EXIT_CONFIG = 0, 1, 2


def _ints(text: str, n: int | None = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma separated integers, got {text!r}") from None
    if n is not None and len(vals) != n:
        raise argparse.ArgumentTypeError(f"expected {n} integers, got {text!r}")
    return vals


def _point(text: str) -> tuple[int, int]:
    return _ints(text, 2)  # type: ignore[return-value]


def _pair_list(text: str) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """``x1,y1:x2,y2;x3,y3:x4,y4``"""
    out = []
    for item in filter(None, text.split(";")):
        a, _, b = item.partition(":")
        out.append((_point(a), _point(b)))
    return out


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--order", help="order spec: natural, pow2 or perm:<seed>:<lo>:<hi>")
    common.add_argument("--system", help="system spec: order:<o>, box, waterline, specialline:<file>, extern:<cmd>")
    common.add_argument("--window", type=int, help="half-width or size of the window examined")
    common.add_argument("--seed", type=int, default=0, help="seed for every random choice")
    common.add_argument("--out", help="write the main output here instead of standard output")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="digiseg", description="Consistent digital line segments.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", parents=[common], help="draw segments as SVG or PPM")
    p.add_argument("spec", nargs="?", help="system spec (same as --system)")
    p.add_argument("--pairs", type=_pair_list, default=[], help="x1,y1:x2,y2;... endpoint pairs")
    p.add_argument("--fan", help="x,y:n  rays from (x,y) to every boundary point of [x,x+n]x[y,y+n]")
    p.add_argument("--bounds", type=lambda s: _ints(s, 4), help="xmin,ymin,xmax,ymax (default: fit)")
    p.add_argument("--cell", type=int, default=12)
    p.add_argument("--format", choices=("svg", "ppm"), default="svg")
    p.add_argument("--no-chords", action="store_true")

    p = sub.add_parser("verify", parents=[common], help="check axioms and consequences on a window")
    p.add_argument("spec", nargs="?", help="system spec (same as --system)")
    p.add_argument("which", nargs="?", default="all", choices=("axioms", "consequences", "obs1", "all"))
    p.add_argument("--c3-window", type=int, default=4, help="half-width for the intersection check")
    p.add_argument("--max-report", type=int, default=50, help="violations printed per suite")

    p = sub.add_parser("sweep", parents=[common], help="Hausdorff statistics as CSV")
    p.add_argument("spec", nargs="?", help="order spec (same as --order)")
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--exhaustive", type=int, metavar="N", help="all pairs in [0,N]^2")
    mode.add_argument("--random", type=int, metavar="COUNT", help="COUNT random pairs")
    p.add_argument("--max-l", type=int, default=1 << 16)
    p.add_argument("--figure", help="also plot the rows to this image file (png or svg)")

    p = sub.add_parser("extract", parents=[common], help="print the order induced at a point")
    p.add_argument("spec", nargs="?", help="system spec (same as --system)")
    p.add_argument("--point", type=_point, required=True)
    p.add_argument("--domain", type=lambda s: _ints(s, 2), required=True)

    p = sub.add_parser("lines", parents=[common], help="build a digital line and its parallels")
    p.add_argument("--slope", default="all", help="all, empty, ratinc:<c>, ratexc:<c>, pred:<file>")
    p.add_argument("--point", type=_point, default=(0, 0))
    p.add_argument("--diag", type=lambda s: _ints(s, 2), default=(-8, 8))
    p.add_argument("--through", type=_point, help="external point to look for parallels through")
    p.add_argument("--gap-neighbours", action="store_true", help="also try slopes across an order gap")

    p = sub.add_parser("demo3d", parents=[common], help="three-dimensional construction and its failure")
    p.add_argument("--dim", type=int, default=3)
    parser.commands = sub.choices  # name -> subparser, used by parse_args
    return parser


def _system_spec(args) -> str:
    spec = args.spec or args.system
    if spec is None and args.order:
        spec = f"order:{args.order}"
    if spec is None:
        raise ValueError("no system given")
    return spec


class _Output:
    def __init__(self, path: str | None, binary: bool = False):
        self.path, self.binary = path, binary
        self.parts: list = []

    def write(self, data) -> None:
        self.parts.append(data)

    def close(self) -> None:
        data = (b"" if self.binary else "").join(self.parts)
        if self.path is None:
            if self.binary:
                sys.stdout.buffer.write(data)
            else:
                sys.stdout.write(data)
        else:
            with open(self.path, "wb" if self.binary else "w") as fh:
                fh.write(data)


def cmd_render(args) -> int:
    system = parse_system(_system_spec(args))
    pairs = list(args.pairs)
    if args.fan:
        a, _, n = args.fan.partition(":")
        x0, y0 = _point(a)
        n = int(n)
        boundary = sorted({(x0 + i, y0 + n) for i in range(n + 1)} | {(x0 + n, y0 + j) for j in range(n + 1)})
        pairs += [((x0, y0), q) for q in boundary]
    if not pairs:
        raise ValueError("nothing to draw: give --pairs or --fan")
    segments = [system.segment(p, q) for p, q in pairs]
    if args.bounds:
        lo, hi = args.bounds[:2], args.bounds[2:]
    else:
        pts = [u for s in segments for u in s]
        lo = (min(u[0] for u in pts), min(u[1] for u in pts))
        hi = (max(u[0] for u in pts), max(u[1] for u in pts))
    spec = RenderSpec(segments, tuple(lo), tuple(hi), cell=args.cell, chords=not args.no_chords, title=system.name)
    out = _Output(args.out, binary=args.format == "ppm")
    out.write(render_svg(spec) if args.format == "svg" else render_ppm(spec))
    out.close()
    return EXIT_OK


def cmd_verify(args) -> int:
    system = parse_system(_system_spec(args))
    n = 6 if args.window is None else args.window
    w = cf.Window.square(n)
    memo = cf.Memo(system)
    suites = ("axioms", "consequences", "obs1") if args.which == "all" else (args.which,)
    out = _Output(args.out)
    total = 0
    try:
        for suite in suites:
            if suite == "axioms":
                inconclusive: list = []
                found = cf.check_axioms(system, w, inconclusive=inconclusive, memo=memo)
                if inconclusive:
                    print(f"axioms: {len(inconclusive)} prolongation(s) inconclusive", file=sys.stderr)
            elif suite == "consequences":
                found = cf.check_consequences(system, w, cf.Window.square(min(n, args.c3_window)), memo=memo)
            else:
                found = cf.check_translation_invariance(system, w, memo=memo)
            for v in found[:args.max_report]:
                out.write(v.to_json() + "\n")
            total += len(found)
            print(f"{suite}: {len(found)} violation(s) on [-{n},{n}]^2", file=sys.stderr)
    finally:
        out.close()
        if isinstance(system, ExternalSystem):
            system.close()
    return EXIT_VIOLATION if total else EXIT_OK


def cmd_sweep(args) -> int:
    order = parse_order(args.spec or args.order or "pow2")
    if args.exhaustive is not None:
        result = hd.sweep_exhaustive(order, 0, args.exhaustive)
        title = f"{order.name}, all pairs in [0,{args.exhaustive}]^2"
    else:
        result = hd.sweep_random(order, args.random, args.max_l, args.seed)
        title = f"{order.name}, {args.random} random pairs, L <= {args.max_l}, seed {args.seed}"
    out = _Output(args.out)
    for line in result.csv_lines():
        out.write(line + "\n")
    out.close()
    if args.figure:
        sweep_figure(result.rows, args.figure, title=title)
    print(f"pairs={result.pairs} max_ratio={result.max_ratio:.12g} violations={len(result.violations)}", file=sys.stderr)
    return EXIT_VIOLATION if result.violations else EXIT_OK


def cmd_extract(args) -> int:
    system = parse_system(_system_spec(args))
    try:
        induced = cf.extract_order(system, args.point, IntegerInterval(*args.domain))
    except OrderExtractionError as exc:
        print(f"no strict total order: {exc} {exc.pair}", file=sys.stderr)
        return EXIT_VIOLATION
    finally:
        if isinstance(system, ExternalSystem):
            system.close()
    out = _Output(args.out)
    out.write(" ".join(map(str, induced.increasing)) + "\n")
    out.close()
    return EXIT_OK


def cmd_lines(args) -> int:
    order = parse_order(args.order or "pow2")
    slope = lines.parse_slope(args.slope, order)
    lw = lines.line_window(order, args.point, slope, IntegerInterval(*args.diag))
    out = _Output(args.out)
    out.write("points " + " ".join(f"{x},{y}" for x, y in lw.points) + "\n")
    ok = lines.contains_own_segments(order, lw)
    out.write(f"contains_own_segments {str(ok).lower()}\n")
    status = EXIT_OK if ok else EXIT_VIOLATION
    if args.through:
        try:
            found = lines.parallels_through(order, lw, args.through, gap_neighbours=args.gap_neighbours)
            out.write(f"parallels {len(found)} " + " ".join(str(s) for s in found) + "\n")
        except InconclusiveError as exc:
            out.write(f"parallels inconclusive: {exc}\n")
    out.close()
    return status


def cmd_demo3d(args) -> int:
    order = parse_order(args.order or "pow2")
    n = 4 if args.window is None else args.window
    out = _Output(args.out)
    found = highdim.check_axioms_d(order, highdim.BoxD(0, n, args.dim))
    out.write(f"axioms on [0,{n}]^{args.dim}: {len(found)} violation(s)\n")
    for v in found[:20]:
        out.write(v.to_json() + "\n")
    witness = highdim.find_mixed_s3_violation(order, highdim.BoxD(-n, n, args.dim))
    if witness is None:
        out.write("mixed slope types: NONE\n")
    else:
        p, q, r = witness
        out.write(f"mixed slope types: S3 fails for p={p} q={q} r={r}\n")
        out.write(f"  S(p,q) = {highdim.mixed_segment(order, p, q)}\n")
        out.write(f"  S(p,r) = {highdim.mixed_segment(order, p, r)}\n")
    out.close()
    return EXIT_VIOLATION if found else EXIT_OK


COMMANDS = {
    "render": cmd_render,
    "verify": cmd_verify,
    "sweep": cmd_sweep,
    "extract": cmd_extract,
    "lines": cmd_lines,
    "demo3d": cmd_demo3d,
}


_NEGATIVE = re.compile(r"^-\d[\d,:;-]*$")


def _glue_negative_values(argv: list[str]) -> list[str]:
    """Turn ``--domain -2,5`` into ``--domain=-2,5`` so argparse keeps the value."""
    out: list[str] = []
    for tok in argv:
        if _NEGATIVE.match(tok) and out and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    parser = build_parser()
    argv = _glue_negative_values(list(sys.argv[1:] if argv is None else argv))
    commands = parser.commands
    if not argv or argv[0] not in commands:
        return parser.parse_args(argv)
    # intermixed parsing lets a positional follow options, as in "verify X --window 6 all"
    args = commands[argv[0]].parse_intermixed_args(argv[1:])
    args.command = argv[0]
    return args


def main(argv: Sequence[str] | None = None) -> int:
    args = parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except OracleError as exc:
        print(f"oracle error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, DomainError, PreconditionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
