"""Command-line figure rendering: ``banditab-plot lines|heatmap <csv> -o <img>``."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureSpec, PlotInputError, render_heatmap, render_lines


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="banditab-plot",
        description="Render banditab experiment CSVs as figures (SVG by default).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_lines = sub.add_parser("lines", help="cumulative-regret curves from a curve CSV")
    p_lines.add_argument("csv")
    p_lines.add_argument("-o", "--out", required=True, help="output image path (.svg, .png, ...)")
    p_lines.add_argument("--title", default=None)

    p_heat = sub.add_parser("heatmap", help="diverging comparison heatmap from a grid CSV")
    p_heat.add_argument("csv")
    p_heat.add_argument("-o", "--out", required=True)
    p_heat.add_argument(
        "--value",
        choices=("mean_diff", "prob_correct"),
        default="mean_diff",
        help="which grid column to color (default: mean_diff)",
    )
    p_heat.add_argument("--title", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "lines":
            render_lines(FigureSpec(csv_path=args.csv, kind="lines", out_path=args.out, title=args.title))
        else:
            render_heatmap(
                FigureSpec(
                    csv_path=args.csv,
                    kind="heatmap",
                    out_path=args.out,
                    value_column=args.value,
                    title=args.title,
                )
            )
    except (PlotInputError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    print(args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
