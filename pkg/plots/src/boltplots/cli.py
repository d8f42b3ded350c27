"""``plot <kind> --in <files> --out <png>``."""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, render
from .io import InputError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plot",
        description="Render figures from boltlab CSV/JSON artifacts.")
    parser.add_argument("kind", help="figure kind: " + ", ".join(sorted(KINDS)))
    parser.add_argument("--in", dest="inputs", nargs="+", required=True,
                        metavar="FILE",
                        help="input artifact files (CSV series, JSON summaries)")
    parser.add_argument("--out", required=True, metavar="PNG",
                        help="output image path")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(kind=args.kind, inputs=tuple(args.inputs), out=args.out)
    try:
        out = render(spec)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
