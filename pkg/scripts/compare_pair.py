#!/usr/bin/env python3
"""Compare two algorithms every way at once: reference, shared-data, verdict.

    python scripts/compare_pair.py greedy "ucb:alpha=0" --horizon 100 --reps 10000

Policy syntax: kind[:param=value,...], e.g. "egreedy:alpha=0.5,c=1" or
"thompson:m=5,gamma=0.1".
"""

import argparse

from banditab import (
    PolicySpec,
    dm_estimate,
    gte_reference,
    make_instance,
    prob_correct_comparison,
    sign_verdict,
)
from banditab.batch import run_batch


def parse_policy(text: str) -> PolicySpec:
    kind, _, params = text.partition(":")
    kwargs = {}
    if params:
        for item in params.split(","):
            key, _, value = item.partition("=")
            kwargs[key.strip()] = float(value)
    return PolicySpec(kind.strip(), **kwargs)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("spec1")
    parser.add_argument("spec2")
    parser.add_argument("--means", type=float, nargs=2, default=(0.8, 0.2))
    parser.add_argument("--horizon", type=int, default=100)
    parser.add_argument("--reps", type=int, default=10_000)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    instance = make_instance(args.means)
    s1, s2 = parse_policy(args.spec1), parse_policy(args.spec2)

    ref = gte_reference(s1, s2, instance, 2 * args.horizon, args.reps, args.seed)
    joint = run_batch("joint", (s1, s2), instance, args.horizon, args.reps, args.seed)
    dm = dm_estimate(joint)
    verdict = sign_verdict(ref, dm)
    p = prob_correct_comparison(joint, true_better=0 if ref.mean < 0 else 1)

    print(f"pair: {s1.label()} (slot 1) vs {s2.label()} (slot 2) on means {args.means}")
    print(f"reference difference at horizon {2 * args.horizon}: "
          f"{ref.mean:+.4f} +- {ref.se:.4f}  (z = {ref.z():+.1f})")
    print(f"shared-data difference at horizon {args.horizon}:   "
          f"{dm.mean:+.4f} +- {dm.se:.4f}  (z = {dm.z():+.1f})")
    print(f"sign verdict: {verdict.verdict}")
    print(f"P(truly better algorithm wins the joint run): {p.mean:.4f} +- {p.se:.4f}")


if __name__ == "__main__":
    main()
