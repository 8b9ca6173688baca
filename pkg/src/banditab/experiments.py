"""Mid-level experiment drivers: regret curves, rate sweeps, comparison grids.

These produce plain rows (lists of dicts) that the CLI serializes to CSV;
they are also what the acceptance tests call directly.
"""

from __future__ import annotations

import numpy as np

from .batch import ReplicationSet, combine_individual, run_batch
from .core import BanditInstance
from .metrics import prob_correct_comparison, regret_difference
from .policies import PolicySpec
from .ratefit import RateCurve


def regret_curve(repset: ReplicationSet, slot: int) -> tuple[np.ndarray, np.ndarray]:
    """Mean cumulative regret at each timestep, with standard errors.

    Needs a replication set run with ``keep_rewards=True``.
    """
    if repset.rewards is None:
        raise ValueError("regret curves need per-timestep rewards (keep_rewards=True)")
    t = np.arange(1, repset.horizon + 1)
    cum = t * repset.instance.best_mean - np.cumsum(repset.rewards[slot], axis=1)
    return cum.mean(axis=0), cum.std(ddof=1, axis=0) / np.sqrt(repset.reps)


def rate_sweep(
    mode: str,
    specs,
    instance: BanditInstance,
    horizons,
    reps: int,
    seed,
) -> list[RateCurve]:
    """Final mean regret per slot at each horizon on the grid.

    Replication r reuses the stream keys (seed, r) at every horizon, so
    points along one curve share randomness and the fitted slope is less
    noisy than with fresh seeds per horizon.
    """
    specs = tuple(specs)
    horizons = sorted(int(h) for h in horizons)
    means = np.zeros((len(specs), len(horizons)))
    ses = np.zeros_like(means)
    for i, horizon in enumerate(horizons):
        if mode == "individual" and len(specs) == 2:
            a = run_batch(mode, specs[:1], instance, horizon, reps, seed)
            repset = combine_individual(a, run_batch(mode, specs[1:], instance, horizon, reps, seed))
        else:
            repset = run_batch(mode, specs, instance, horizon, reps, seed)
        means[:, i] = repset.realized.mean(axis=0)
        ses[:, i] = repset.realized.std(ddof=1, axis=0) / np.sqrt(reps)
    return [
        RateCurve(
            horizons=np.array(horizons, dtype=float),
            mean_regret=means[s],
            se=ses[s],
            meta={"mode": mode, "slot": s + 1, "spec": specs[s]},
        )
        for s in range(len(specs))
    ]


def comparison_cell(repset: ReplicationSet) -> dict:
    """One grid cell: slot-1-minus-slot-2 regret and P(slot 1 worse).

    The probability is oriented by slot, not by ground truth, so a full
    grid renders as the red/blue triangle picture; it equals the
    probability of a correct comparison whenever slot 2 holds the truly
    better configuration.
    """
    diff = regret_difference(repset)
    p_slot1_worse = prob_correct_comparison(repset, true_better=1)
    return {
        "mean_diff": diff.mean,
        "se": diff.se,
        "prob_correct": p_slot1_worse.mean,
        "prob_se": p_slot1_worse.se,
        "reps": repset.reps,
    }


def joint_grid(
    make_spec,
    values,
    instance: BanditInstance,
    horizon: int,
    reps: int,
    seed,
) -> list[dict]:
    """All (v1, v2) joint cells for one policy family.

    ``make_spec`` maps a grid value to a PolicySpec. Every cell runs with
    the same master seed: tapes are shared across cells, smoothing the
    grid without biasing any cell.
    """
    rows = []
    for v1 in values:
        for v2 in values:
            repset = run_batch(
                "joint", (make_spec(v1), make_spec(v2)), instance, horizon, reps, seed
            )
            rows.append({"v1": v1, "v2": v2, **comparison_cell(repset)})
    return rows


def individual_grid(
    make_spec,
    values,
    instance: BanditInstance,
    horizon: int,
    reps: int,
    seed,
) -> list[dict]:
    """All (v1, v2) cells from paired individual runs.

    An individual run depends only on its own value, so each value is
    simulated once and the cells reuse the cached runs pairwise.
    """
    cache = {
        v: run_batch("individual", (make_spec(v),), instance, horizon, reps, seed) for v in values
    }
    rows = []
    for v1 in values:
        for v2 in values:
            repset = combine_individual(cache[v1], cache[v2])
            rows.append({"v1": v1, "v2": v2, **comparison_cell(repset)})
    return rows
