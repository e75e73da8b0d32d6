"""Command line interface.

    trickbench run --config cfg.ini [--jobs N] [--out DIR]
    trickbench ablate --config cfg.ini --toggle lrs=on,off [--toggle ...]
                      [--jobs N] --out DIR

`ablate` runs the cross product of all toggle values and writes one result
directory per cell plus a summary.csv comparing each cell against the first
(baseline) cell.
"""

from __future__ import annotations

import argparse
import itertools
import os

from .config import ExperimentConfig
from .harness import final_returns, run_experiment, run_or_load, write_results
from .stats import bootstrap_ci, effect_size


def _parse_toggle(spec: str):
    if "=" not in spec:
        raise ValueError(f"toggle must look like name=v1,v2 (got {spec!r})")
    name, raw = spec.split("=", 1)
    values = []
    for v in raw.split(","):
        if v in ("on", "true"):
            values.append(True)
        elif v in ("off", "false"):
            values.append(False)
        else:
            try:
                values.append(int(v))
            except ValueError:
                try:
                    values.append(float(v))
                except ValueError:
                    values.append(v)
    return name.strip(), values


def _cell_label(names, values):
    return "_".join(f"{n}={str(v).lower()}" for n, v in zip(names, values))


def cmd_run(args):
    config = ExperimentConfig.from_file(args.config)
    results = run_experiment(config, out_dir=args.out, jobs=args.jobs)
    for res in results:
        status = f"FAILED at step {res.fail_step}" if res.failed else \
            f"final return {res.records[-1].mean_return:.1f}" if res.records else "no evals"
        print(f"seed {res.seed}: {status}")
    return 0


def cmd_ablate(args):
    config = ExperimentConfig.from_file(args.config)
    names, value_lists = zip(*[_parse_toggle(t) for t in args.toggle])
    cells = list(itertools.product(*value_lists))
    rows = []
    baseline_finals = None
    for values in cells:
        label = _cell_label(names, values)
        cell_config = config.replace(**dict(zip(names, values)))
        cell_dir = os.path.join(args.out, label)
        by_seed, failed = run_or_load(cell_config, cell_dir, jobs=args.jobs)
        finals = final_returns(by_seed, failed)
        ci = bootstrap_ci(finals)
        if baseline_finals is None:
            baseline_finals = finals
            effect = 0.0
        else:
            effect = effect_size(finals, baseline_finals)
        rows.append((label, cell_config.config_hash(), ci.point, ci.lower,
                     ci.upper, effect, len(failed)))
        print(f"{label}: mean {ci.point:.1f} [{ci.lower:.1f}, {ci.upper:.1f}] "
              f"d={effect:.2f} failures={len(failed)}")
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "summary.csv"), "w") as f:
        f.write("cell,config_hash,final_mean,ci_low,ci_high,"
                "effect_size_vs_baseline,failures\n")
        for label, h, mean, lo, hi, d, nfail in rows:
            f.write(f"{label},{h},{mean:.17g},{lo:.17g},{hi:.17g},"
                    f"{d:.17g},{nfail}\n")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="trickbench")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment config")
    run_p.add_argument("--config", required=True)
    run_p.add_argument("--jobs", type=int, default=1)
    run_p.add_argument("--out", default=None)
    run_p.set_defaults(func=cmd_run)

    ab_p = sub.add_parser("ablate", help="run a toggle cross-product")
    ab_p.add_argument("--config", required=True)
    ab_p.add_argument("--toggle", action="append", required=True,
                      metavar="NAME=V1,V2")
    ab_p.add_argument("--jobs", type=int, default=1)
    ab_p.add_argument("--out", required=True)
    ab_p.set_defaults(func=cmd_ablate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
