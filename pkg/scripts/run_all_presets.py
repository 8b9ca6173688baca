#!/usr/bin/env python3
"""Run every preset sweep and drop the CSVs into one directory.

    python scripts/run_all_presets.py --out out/presets [--seed 7] [--reps N]

At the default replication counts this reproduces all shipped figure
data in a few minutes (the Thompson grids dominate the runtime).
"""

import argparse

from banditab.presets import PRESET_NAMES, run_preset


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="out/presets")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--reps", type=int, default=None, help="override per-preset defaults")
    args = parser.parse_args()
    for name in PRESET_NAMES:
        for path in run_preset(name, args.out, seed=args.seed, reps=args.reps):
            print(path)


if __name__ == "__main__":
    main()
