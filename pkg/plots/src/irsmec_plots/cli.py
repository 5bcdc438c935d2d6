"""CLI for the batch renderer: ``plots --in DIR --out DIR [--figure N]``."""

from __future__ import annotations

import argparse
import sys

from .render import render_all
from .schema import FIGURE_IDS, SchemaError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="irsmec-plots",
        description="Render irsmec figure dataset CSVs into PNG figures.",
    )
    parser.add_argument("--in", dest="in_dir", required=True, metavar="DIR",
                        help="directory holding fig2.csv ... fig9.csv")
    parser.add_argument("--out", dest="out_dir", required=True, metavar="DIR",
                        help="directory to write fig2.png ... fig9.png")
    parser.add_argument("--figure", type=int, choices=FIGURE_IDS, default=None,
                        help="render a single figure instead of all eight")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    ids = (args.figure,) if args.figure else FIGURE_IDS
    try:
        results = render_all(args.in_dir, args.out_dir, ids)
    except (SchemaError, FileNotFoundError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    for r in results:
        print(r.out_path)
    return 0


if __name__ == "__main__":
    sys.exit(main())
