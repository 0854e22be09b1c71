"""``tensorbounds`` command-line entry point.

Exit codes: 0 success, 1 certification negative, 2 parse error,
3 validation error, 4 unsupported input, 5 certification inconclusive.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__, oracle, report
from .bounds import BoundsError, MissingDeterminantError
from .tensorfile import ParseError, ValidationError, load

EXIT_OK = 0
EXIT_NOT_CERTIFIED = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_UNSUPPORTED = 4
EXIT_INCONCLUSIVE = 5


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")

    parser = argparse.ArgumentParser(
        prog="tensorbounds",
        description="Eigenvalue bounds, spectra and positivity certificates for symmetric tensors.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--json", action="store_true", default=False, help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="exact spectrum (n = 2 or m = 2)")
    p.add_argument("file")

    p = sub.add_parser("bounds", parents=[common], help="trace/determinant bounds and Gershgorin disks")
    p.add_argument("file")
    p.add_argument("--k", type=_positive_int, default=1)
    p.add_argument("--l", type=_positive_int, default=None)

    p = sub.add_parser("compare", parents=[common], help="bound comparison datasets")
    p.add_argument("file")
    p.add_argument("--csv", metavar="DIR", help="write hierarchy/distribution/intervals CSV files to DIR")
    p.add_argument("--svg", metavar="DIR", help="write SVG charts to DIR")

    p = sub.add_parser("certify", parents=[common], help="positive-definiteness and Lyapunov check")
    p.add_argument("file")
    p.add_argument("--samples", type=_positive_int, default=1000)
    p.add_argument("--seed", type=int, default=42)
    return parser


def _emit(data: dict, text: str, as_json: bool) -> None:
    if as_json:
        sys.stdout.write(json.dumps(data, indent=2) + "\n")
    else:
        sys.stdout.write(text)


def _fail(code: int, message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return code


def run(args: argparse.Namespace) -> int:
    try:
        doc = load(args.file)
    except OSError as exc:
        return _fail(EXIT_PARSE, f"cannot read {args.file}: {exc.strerror}")
    except ParseError as exc:
        return _fail(EXIT_PARSE, str(exc))
    except ValidationError as exc:
        return _fail(EXIT_VALIDATION, str(exc))

    try:
        if args.command == "spectrum":
            data = report.build_spectrum(doc)
            _emit(data, report.render_spectrum(data), args.json)
            return EXIT_OK
        if args.command == "bounds":
            data = report.build_bounds(doc, args.k, args.l)
            _emit(data, report.render_bounds(data), args.json)
            return EXIT_OK
        if args.command == "compare":
            data = report.build_compare(doc)
            _emit(data, report.render_compare(data), args.json)
            if args.csv:
                for path in report.write_csv(data, args.csv):
                    print(f"wrote {path}", file=sys.stderr)
            if args.svg:
                for path in report.write_svg(data, args.svg):
                    print(f"wrote {path}", file=sys.stderr)
            return EXIT_OK
        data = report.build_certify(doc, args.samples, args.seed)
        _emit(data, report.render_certify(data), args.json)
        return data["exit_code"]
    except oracle.UnsupportedDimensionError as exc:
        return _fail(EXIT_UNSUPPORTED, str(exc))
    except MissingDeterminantError as exc:
        return _fail(EXIT_UNSUPPORTED, str(exc))
    except (BoundsError, oracle.OracleError) as exc:
        return _fail(EXIT_UNSUPPORTED, str(exc))


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
