#!/usr/bin/env python3
"""Regenerate the golden CSVs shipped with the plotting package.

Run from the repository root:

    python scripts/make_golden_csvs.py
"""

from pathlib import Path

from banditab.presets import run_preset

OUT = Path(__file__).resolve().parent.parent / "plots" / "tests" / "data"


def main() -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    for name in ("fig2b", "fig3_egreedy"):
        for path in run_preset(name, OUT, seed=7):
            print(path)


if __name__ == "__main__":
    main()
