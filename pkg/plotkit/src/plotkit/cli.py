"""Command line interface.

    plotkit --kind curves --csv a.csv:LabelA --csv b.csv:LabelB --out fig.png
    plotkit --kind kl_trace --csv run.csv:PPO --threshold 0.01 --out kl.png
    plotkit --kind action_density --csv probe.csv:lecun --out density.png

A ``--csv`` value is ``path`` or ``path:label``; without a label the path is
used as the legend entry.
"""

from __future__ import annotations

import argparse

from .spec import KINDS, PlotSpec
from .render import render


def _parse_csv_arg(value: str):
    path, sep, label = value.rpartition(":")
    if not sep or not path:
        return value, value
    return path, label


def build_parser():
    parser = argparse.ArgumentParser(prog="plotkit")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--csv", action="append", required=True,
                        metavar="PATH[:LABEL]")
    parser.add_argument("--out", required=True)
    parser.add_argument("--threshold", type=float, default=None)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    spec = PlotSpec(inputs=[_parse_csv_arg(c) for c in args.csv],
                    kind=args.kind, out_path=args.out,
                    threshold=args.threshold)
    render(spec)
    print(f"wrote {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
