"""plotkit command line: render one figure from a sweep CSV."""

import argparse
import sys

from .figures import CI_COLUMNS, FigureSpec, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="plotkit", description="Render figures from isacsim sweep CSVs")
    parser.add_argument("--csv", required=True, help="sweep results CSV")
    parser.add_argument("--kind", choices=("lines", "heatmap"), required=True)
    parser.add_argument("--x", default="hole_radius_m", help="x-axis column")
    parser.add_argument("--series", default="beta_per_m", help="series column")
    parser.add_argument("--metric", default="asp", choices=sorted(CI_COLUMNS))
    parser.add_argument("--out", required=True, help="output image (PNG/SVG)")
    parser.add_argument("--height", type=float, default=None,
                        help="keep only rows at this height_m")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    spec = FigureSpec(csv_path=args.csv, figure_kind=args.kind, x_axis=args.x,
                      series_axis=args.series, metric=args.metric,
                      output_path=args.out, height_filter=args.height)
    try:
        path, meta = render(spec)
    except (OSError, ValueError) as exc:
        print(f"plotkit: {exc}", file=sys.stderr)
        return 1
    print(path)
    if "annotation" in meta:
        print(meta["annotation"])
    return 0


if __name__ == "__main__":
    sys.exit(main())
