"""Command line front end.

The construction file format is line oriented; ``#`` starts a comment.

    point <id> = [<q> : <q> : <q>]     free input point, exact rationals
    line <id> = join <id> <id>         line through two earlier points
    point <id> = meet <id> <id>        stable meet of two earlier lines
    output <id> [<id> ...]             declare outputs (may repeat)

Subcommands: ``run`` prints canonical coordinates of the outputs, ``check``
reports per-output admissibility with cycle witnesses, ``lift-verify`` runs
the commutation check on seeded generic lifts, ``pappus`` builds and
certifies the Pappus configuration, ``plot`` renders a figure.  Output is
deterministic: identical file, flags and seed give identical bytes.

Exit codes: 0 success, 1 usage or parse problems, 2 verification failure,
3 degenerate lift.
"""

from __future__ import annotations

import argparse
import random
import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from .construction import (
    ConstructionProgram,
    Element,
    LiftDegenerateError,
    NonAdmissibleError,
    ProgramError,
    execute_tropical,
    is_tropically_admissible,
    verify_commutation,
)
from .maxplus import TropPoint
from .plane import (
    WitnessNotFound,
    common_point_witness,
    pappus_construct,
    TropLine,
)

__all__ = [
    "ParseError",
    "ConstructionDocument",
    "parse_construction",
    "render_construction",
    "main",
    "entry",
]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_DEGENERATE = 3


class ParseError(ValueError):
    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")


@dataclass(frozen=True)
class ConstructionDocument:
    """A parsed construction file: the program plus its input coordinates."""

    program: ConstructionProgram
    inputs: dict


_ID = r"[^\s#=\[\]:,]+"
_INPUT_RE = re.compile(rf"^point\s+({_ID})\s*=\s*\[([^\]]*)\]$")
_JOIN_RE = re.compile(rf"^line\s+({_ID})\s*=\s*join\s+({_ID})\s+({_ID})$")
_MEET_RE = re.compile(rf"^point\s+({_ID})\s*=\s*meet\s+({_ID})\s+({_ID})$")
_OUTPUT_RE = re.compile(rf"^output(\s+{_ID})+$")


def parse_construction(text: str) -> ConstructionDocument:
    """Parse the construction format; errors carry 1-based line numbers."""
    elements = []
    kinds = {}
    inputs = {}
    outputs = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _INPUT_RE.match(line)
        if match:
            name, body = match.groups()
            parts = body.split(":")
            if len(parts) != 3:
                raise ParseError(lineno, f"expected 3 coordinates, got {len(parts)}")
            try:
                coords = tuple(Fraction(p.strip()) for p in parts)
            except (ValueError, ZeroDivisionError) as exc:
                raise ParseError(lineno, f"bad rational coordinate: {exc}") from None
            if name in kinds:
                raise ParseError(lineno, f"duplicate id {name!r}")
            elements.append(Element(name, "point"))
            kinds[name] = "point"
            inputs[name] = TropPoint(coords)
            continue
        match = _JOIN_RE.match(line)
        if match is None:
            match = _MEET_RE.match(line)
            op, parent_kind, result_kind = "meet", "line", "point"
        else:
            op, parent_kind, result_kind = "join", "point", "line"
        if match:
            name, left, right = match.groups()
            if name in kinds:
                raise ParseError(lineno, f"duplicate id {name!r}")
            for ref in (left, right):
                if ref not in kinds:
                    raise ParseError(lineno, f"undefined id {ref!r}")
                if kinds[ref] != parent_kind:
                    raise ParseError(
                        lineno,
                        f"{op} needs {parent_kind}s, but {ref!r} is a {kinds[ref]}",
                    )
            if left == right:
                raise ParseError(lineno, f"{op} of {left!r} with itself is degenerate")
            elements.append(Element(name, result_kind, op, (left, right)))
            kinds[name] = result_kind
            continue
        if _OUTPUT_RE.match(line):
            for name in line.split()[1:]:
                if name not in kinds:
                    raise ParseError(lineno, f"undefined output {name!r}")
                if name not in outputs:
                    outputs.append(name)
            continue
        raise ParseError(lineno, f"cannot parse: {raw.strip()!r}")
    program = ConstructionProgram(elements, tuple(outputs))
    return ConstructionDocument(program, inputs)


def render_construction(document: ConstructionDocument) -> str:
    """Inverse of `parse_construction`, up to comments and whitespace."""
    lines = []
    for el in document.program.elements:
        if el.op is None:
            coords = " : ".join(str(c) for c in document.inputs[el.name].coords)
            lines.append(f"point {el.name} = [{coords}]")
        elif el.op == "join":
            lines.append(f"line {el.name} = join {el.parents[0]} {el.parents[1]}")
        else:
            lines.append(f"point {el.name} = meet {el.parents[0]} {el.parents[1]}")
    if document.program.outputs:
        lines.append("output " + " ".join(document.program.outputs))
    return "\n".join(lines) + "\n"


def _load(path: str) -> ConstructionDocument:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_construction(handle.read())


def _fmt_point(point: TropPoint, affine: bool = False) -> str:
    if affine:
        x, y = point.affine()
        return f"({x}, {y})"
    return repr(point.canonical())


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _cmd_run(args) -> int:
    document = _load(args.file)
    values = execute_tropical(document.program, document.inputs)
    for name in document.program.effective_outputs():
        kind = document.program.element(name).kind
        print(f"{name}\t{kind}\t{_fmt_point(values[name], args.affine)}")
    return EXIT_OK


def _cmd_check(args) -> int:
    document = _load(args.file)
    status = EXIT_OK
    for name in document.program.effective_outputs():
        ok, cycle = is_tropically_admissible(document.program, name)
        if ok:
            print(f"{name}\tadmissible\t-")
        else:
            print(f"{name}\tNOT-ADMISSIBLE\tcycle: {','.join(cycle)}")
            status = EXIT_VERIFICATION
    return status


def _cmd_lift_verify(args) -> int:
    document = _load(args.file)
    print(f"# seed: {args.seed}")
    status = EXIT_OK
    for trial in range(args.trials):
        report = verify_commutation(
            document.program,
            document.inputs,
            args.seed + trial,
            require_admissible=not args.allow_cycles,
        )
        print(f"# trial {trial}: resamples={report.resamples}")
        for check in report.checks:
            lifted = "none" if check.lifted is None else _fmt_point(check.lifted)
            verdict = "ok" if check.matches else "MISMATCH"
            print(
                f"{trial}\t{check.name}\t{_fmt_point(check.tropical)}"
                f"\t{lifted}\t{verdict}"
            )
        if not report.ok:
            status = EXIT_VERIFICATION
    return status


def _parse_affine_pair(text: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected x,y - got {text!r}")
    return TropPoint.from_affine((Fraction(parts[0]), Fraction(parts[1])))


def _pappus_rows(points):
    elements = pappus_construct(points)
    finals = [elements["a''"], elements["b''"], elements["c''"]]
    witness = common_point_witness(finals)
    return elements, witness


def _cmd_pappus(args) -> int:
    if args.points is not None:
        try:
            pts = [_parse_affine_pair(p) for p in args.points.split()]
        except (ValueError, ZeroDivisionError) as exc:
            raise _UsageError(f"bad --points: {exc}") from None
        if len(pts) != 5:
            raise _UsageError(f"--points needs 5 pairs, got {len(pts)}")
        elements, witness = _pappus_rows(pts)
        for name, value in elements.items():
            if isinstance(value, TropLine):
                print(f"{name}\tline\t{_fmt_point(value.coeffs)}")
            else:
                print(f"{name}\tpoint\t{_fmt_point(value)}")
        if witness is None:
            print("witness\tpoint\tNONE")
            return EXIT_VERIFICATION
        print(f"witness\tpoint\t{_fmt_point(witness)}")
        if args.plot:
            from .plotting import render_figure

            figure_points = {str(i + 1): pts[i] for i in range(5)}
            figure_lines = {}
            for name, value in elements.items():
                if isinstance(value, TropLine):
                    figure_lines[name] = value
                else:
                    figure_points[name] = value
            figure_points["w"] = witness
            render_figure(figure_points, figure_lines, args.plot)
        return EXIT_OK
    print(f"# seed: {args.seed}")
    rng = random.Random(args.seed)
    status = EXIT_OK
    for index in range(args.random):
        pairs = [
            (rng.randint(-100, 100), rng.randint(-100, 100)) for _ in range(5)
        ]
        pretty = " ".join(f"({x},{y})" for x, y in pairs)
        print(f"# config {index}: {pretty}")
        _, witness = _pappus_rows([TropPoint.from_affine(p) for p in pairs])
        if witness is None:
            print(f"{index}\twitness\tNONE")
            status = EXIT_VERIFICATION
        else:
            print(f"{index}\twitness\t{_fmt_point(witness)}")
    return status


def _parse_bbox(text: str):
    parts = text.split(",")
    if len(parts) != 4:
        raise _UsageError(f"--bbox needs xmin,ymin,xmax,ymax - got {text!r}")
    try:
        box = tuple(Fraction(p.strip()) for p in parts)
    except (ValueError, ZeroDivisionError) as exc:
        raise _UsageError(f"bad --bbox: {exc}") from None
    if box[0] >= box[2] or box[1] >= box[3]:
        raise _UsageError("--bbox must have xmin < xmax and ymin < ymax")
    return box


def _cmd_plot(args) -> int:
    from .plotting import render_figure

    document = _load(args.file)
    values = execute_tropical(document.program, document.inputs)
    points = {}
    lines = {}
    for el in document.program.elements:
        if el.kind == "point":
            points[el.name] = values[el.name]
        else:
            lines[el.name] = TropLine(values[el.name])
    bbox = _parse_bbox(args.bbox) if args.bbox else None
    render_figure(points, lines, args.out, bbox=bbox)
    return EXIT_OK


def _build_parser() -> _Parser:
    parser = _Parser(prog="troplin", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute a construction file tropically")
    run.add_argument("file")
    run.add_argument("--affine", action="store_true",
                     help="print affine coordinates instead of homogeneous")
    run.set_defaults(func=_cmd_run)

    check = sub.add_parser("check", help="report admissibility of the outputs")
    check.add_argument("file")
    check.set_defaults(func=_cmd_check)

    lift = sub.add_parser(
        "lift-verify",
        help="compare the tropical run against seeded generic lifts",
    )
    lift.add_argument("file")
    lift.add_argument("--seed", type=int, default=0)
    lift.add_argument("--trials", type=int, default=1)
    lift.add_argument("--allow-cycles", action="store_true",
                      help="lift even when outputs are not admissible")
    lift.set_defaults(func=_cmd_lift_verify)

    pappus = sub.add_parser(
        "pappus", help="build the Pappus configuration and certify concurrency"
    )
    source = pappus.add_mutually_exclusive_group(required=True)
    source.add_argument("--points", help='five affine pairs: "0,0 4,1 1,5 6,2 2,7"')
    source.add_argument("--random", type=int, metavar="N",
                        help="verify N random integer configurations")
    pappus.add_argument("--seed", type=int, default=0)
    pappus.add_argument("--plot", metavar="FILE",
                        help="also render the configuration (with --points)")
    pappus.set_defaults(func=_cmd_pappus)

    plot = sub.add_parser("plot", help="render a construction file to a figure")
    plot.add_argument("file")
    plot.add_argument("--out", required=True)
    plot.add_argument("--bbox", help="xmin,ymin,xmax,ymax (default: auto fit)")
    plot.set_defaults(func=_cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonAdmissibleError as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except WitnessNotFound as exc:
        print(f"verification failed: {exc}", file=sys.stderr)
        return EXIT_VERIFICATION
    except LiftDegenerateError as exc:
        print(f"degenerate lift: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (ParseError, ProgramError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
