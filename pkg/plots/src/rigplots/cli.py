"""`plot` command: render rigepi CSVs to images.

    plot figure1 figure1.csv -o fig1.png
    plot diag degree.csv -o diag.png

Exit codes: 0 success, 2 usage, 1 malformed or empty CSV.
"""

from __future__ import annotations

import argparse
import sys

from .render import CsvFormatError, FigureSpec, render_diagnostics, render_figure1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="plot", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("figure1", help="two-panel R0/pi sweep figure")
    sp.add_argument("csv")
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--dpi", type=int, default=150)
    sp.set_defaults(render=render_figure1)

    sp = sub.add_parser("diag", help="degree-law or census-scaling diagnostic")
    sp.add_argument("csv")
    sp.add_argument("-o", "--out", required=True)
    sp.add_argument("--dpi", type=int, default=150)
    sp.set_defaults(render=render_diagnostics)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(out_path=args.out, dpi=args.dpi)
    try:
        args.render(args.csv, spec)
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except CsvFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
