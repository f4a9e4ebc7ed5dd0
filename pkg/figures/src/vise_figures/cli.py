"""Command line for the figure renderers.

Exit codes: 0 success, 2 schema mismatch or bad arguments, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .render import render, render_all
from .schema import SchemaError


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vise-figures",
        description="Render the eight ViSE reference figures from vise CSV outputs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="render one figure")
    p.add_argument("id", type=int, help="figure id, 1..8")
    p.add_argument("--data-dir", default=".", help="directory holding the vise figure CSVs")
    p.add_argument("--out", required=True, help="output image path (format from extension)")

    p = sub.add_parser("render-all", help="render figures 1..8")
    p.add_argument("--data-dir", default=".", help="directory holding the vise figure CSVs")
    p.add_argument("--out-dir", default=".", help="directory for the images")
    p.add_argument("--format", default="png", help="image format/extension (default png)")

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "render":
            path = render(args.id, args.data_dir, args.out)
            print(f"wrote {path}")
        else:
            for path in render_all(args.data_dir, args.out_dir, args.format):
                print(f"wrote {path}")
        return 0
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
