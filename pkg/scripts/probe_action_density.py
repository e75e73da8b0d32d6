"""Write initial-action-density CSVs for each policy kind and init scheme.

Each output file pools one sampled action per state over many fresh policy
initializations, histogrammed over [-3, 3]. The CSVs follow the
``bin_center,density`` schema plotkit's ``action_density`` kind reads:

    python3 scripts/probe_action_density.py --out-dir probes
    plotkit --kind action_density \\
        --csv probes/tanh_gaussian_lecun.csv:LeCun \\
        --csv probes/tanh_gaussian_orthogonal.csv:Orthogonal \\
        --out density.png
"""

from __future__ import annotations

import argparse
import os
import sys

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from trickbench.initschemes import SCHEMES, InitScheme
from trickbench.numcore import SeededRng
from trickbench.policies import (
    PROBE_KINDS,
    probe_initial_action_density,
    write_probe_csv,
)


def main(argv=None):
    parser = argparse.ArgumentParser()
    parser.add_argument("--out-dir", default="probes")
    parser.add_argument("--obs-dim", type=int, default=5)
    parser.add_argument("--act-dim", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)

    os.makedirs(args.out_dir, exist_ok=True)
    for kind in PROBE_KINDS:
        for scheme in sorted(SCHEMES):
            rng = SeededRng(args.seed).derive(f"probe/{kind}/{scheme}")
            centers, density = probe_initial_action_density(
                kind, InitScheme(scheme), args.obs_dim, args.act_dim, rng)
            path = os.path.join(args.out_dir, f"{kind}_{scheme}.csv")
            write_probe_csv(path, centers, density)
            print(f"wrote {path}", flush=True)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
