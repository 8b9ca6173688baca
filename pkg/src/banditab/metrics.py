"""Regret metrics, the two estimators being compared, and sign verdicts.

The deployment effect of swapping algorithm 2 for algorithm 1 is measured
two ways: a reference from paired individual runs (the ground truth an
A/B test is trying to estimate) and the difference-in-means readout of a
single joint run with data sharing. ``sign_verdict`` says whether the two
agree in sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .batch import ReplicationSet, run_batch, run_paired_individual
from .core import BanditInstance
from .policies import PolicySpec
from .runner import RunTrace


@dataclass(frozen=True)
class ReplicationSummary:
    """One replication's outcomes: regrets per algorithm and pull counts."""

    realized: tuple[float, ...]
    pseudo: tuple[float, ...]
    counts: tuple[tuple[int, ...], ...]
    seed: tuple[int, ...]


def summaries(repset: ReplicationSet) -> list[ReplicationSummary]:
    return [
        ReplicationSummary(
            realized=tuple(repset.realized[r]),
            pseudo=tuple(repset.pseudo[r]),
            counts=tuple(tuple(int(c) for c in row) for row in repset.counts[r]),
            seed=repset.rep_seed(r),
        )
        for r in range(repset.reps)
    ]


@dataclass(frozen=True)
class MonteCarloEstimate:
    mean: float
    se: float
    reps: int
    label: str = ""

    def z(self) -> float:
        """Mean in units of its standard error (signed inf when se is 0)."""
        if self.se == 0.0:
            return 0.0 if self.mean == 0.0 else math.copysign(math.inf, self.mean)
        return self.mean / self.se


@dataclass(frozen=True)
class SignVerdict:
    verdict: str  # "preserved" | "violated" | "inconclusive"
    z_reference: float
    z_dm: float


def realized_regret(trace: RunTrace, instance: BanditInstance, slot: int = 0) -> float:
    """T * best mean minus the rewards this algorithm collected."""
    return trace.horizon * instance.best_mean - trace.reward_sum(slot)


def pseudo_regret(counts, instance: BanditInstance) -> float:
    """Gap-weighted pull counts, sum_k gap_k * N_k."""
    return float(np.asarray(counts, dtype=np.float64) @ instance.gaps_array())


def _mean_se(values: np.ndarray, label: str) -> MonteCarloEstimate:
    n = len(values)
    if n < 2:
        raise ValueError("need at least 2 replications for a standard error")
    return MonteCarloEstimate(
        mean=float(values.mean()),
        se=float(values.std(ddof=1) / math.sqrt(n)),
        reps=n,
        label=label,
    )


def mean_regret(repset: ReplicationSet, slot: int = 0, pseudo: bool = False) -> MonteCarloEstimate:
    values = repset.pseudo[:, slot] if pseudo else repset.realized[:, slot]
    which = "pseudo" if pseudo else "realized"
    return _mean_se(values, f"{which} regret of {repset.specs[slot].label()} ({repset.mode})")


def regret_difference(repset: ReplicationSet, label: str = "") -> MonteCarloEstimate:
    """Slot-1 minus slot-2 mean regret, with the SE of the paired difference.

    The mean is computed as the difference of the two slot means so the
    pairing identity (difference of means == mean of differences) holds
    exactly, not just up to rounding.
    """
    if repset.n_slots != 2:
        raise ValueError("regret difference needs a two-algorithm replication set")
    diffs = repset.realized[:, 0] - repset.realized[:, 1]
    if repset.reps < 2:
        raise ValueError("need at least 2 replications for a standard error")
    return MonteCarloEstimate(
        mean=float(repset.realized[:, 0].mean()) - float(repset.realized[:, 1].mean()),
        se=float(diffs.std(ddof=1) / math.sqrt(repset.reps)),
        reps=repset.reps,
        label=label,
    )


def dm_estimate(repset: ReplicationSet) -> MonteCarloEstimate:
    """Difference-in-means readout of a joint data-sharing run."""
    if repset.mode != "joint":
        raise ValueError(f"dm_estimate needs summaries from a joint run, got mode {repset.mode!r}")
    pair = f"{repset.specs[0].label()} vs {repset.specs[1].label()}"
    return regret_difference(repset, label=f"DM estimate, {pair}")


def gte_reference(
    spec1: PolicySpec,
    spec2: PolicySpec,
    instance: BanditInstance,
    horizon: int,
    reps: int,
    seed,
) -> MonteCarloEstimate:
    """Ground-truth regret difference from paired individual runs.

    ``horizon`` is the deploy-to-everyone horizon; by the two-users-per-
    timestep convention that is 2T for a joint experiment of length T,
    but any horizon may be passed. Tapes are shared between the two runs
    (common random numbers), which shrinks the SE without moving the mean.
    """
    repset = run_paired_individual(spec1, spec2, instance, horizon, reps, seed)
    pair = f"{spec1.label()} vs {spec2.label()}"
    return regret_difference(repset, label=f"GTE reference at horizon {horizon}, {pair}")


def sign_verdict(
    gte_ref: MonteCarloEstimate, dm: MonteCarloEstimate, z_threshold: float = 3.0
) -> SignVerdict:
    """Do the reference and the DM estimate agree in sign?

    Both must be significant at ``z_threshold`` to call it either way;
    otherwise the verdict is inconclusive.
    """
    z1, z2 = gte_ref.z(), dm.z()
    if abs(z1) >= z_threshold and abs(z2) >= z_threshold:
        verdict = "preserved" if (z1 > 0) == (z2 > 0) else "violated"
    else:
        verdict = "inconclusive"
    return SignVerdict(verdict=verdict, z_reference=z1, z_dm=z2)


def prob_correct_comparison(repset: ReplicationSet, true_better: int) -> MonteCarloEstimate:
    """How often the truly better algorithm shows strictly lower regret.

    ``true_better`` is the slot index (0 or 1) of the better algorithm.
    Exact ties count half, so swapping the slots maps p to 1 - p.
    """
    if repset.n_slots != 2:
        raise ValueError("comparison needs a two-algorithm replication set")
    if true_better not in (0, 1):
        raise ValueError(f"true_better must be 0 or 1, got {true_better}")
    better = repset.realized[:, true_better]
    worse = repset.realized[:, 1 - true_better]
    wins = (worse > better).astype(np.float64) + 0.5 * (worse == better)
    p = float(wins.mean())
    return MonteCarloEstimate(
        mean=p,
        se=math.sqrt(p * (1.0 - p) / repset.reps),
        reps=repset.reps,
        label=f"P(correct comparison), better = slot {true_better + 1} ({repset.mode})",
    )


def pull_count_threshold(instance: BanditInstance, horizon: int) -> float:
    """The optimal-arm pull budget (4 / min_gap^2) * log(horizon)."""
    return 4.0 / instance.min_gap**2 * math.log(horizon)


def optimal_pull_tail(
    spec: PolicySpec,
    instance: BanditInstance,
    horizon: int,
    reps: int,
    seed,
    repset: ReplicationSet | None = None,
) -> MonteCarloEstimate:
    """Tail probability that, running jointly with greedy, the partner
    algorithm pulls the best arm at most (4/min_gap^2)*log(T) times.

    A small value is the empirical form of the free-riding condition that
    drives greedy's constant regret under sharing. Pass ``repset`` to
    reuse an existing joint run of (spec, greedy).
    """
    if repset is None:
        repset = run_batch("joint", (spec, PolicySpec("greedy")), instance, horizon, reps, seed)
    if repset.mode != "joint" or repset.specs[1].kind != "greedy":
        raise ValueError("optimal_pull_tail needs a joint run with greedy in slot 2")
    threshold = pull_count_threshold(instance, horizon)
    hits = repset.counts[:, 0, instance.best_arm] <= threshold
    p = float(hits.mean())
    return MonteCarloEstimate(
        mean=p,
        se=math.sqrt(p * (1.0 - p) / repset.reps),
        reps=repset.reps,
        label=f"P(N_best <= {threshold:.2f}) for {spec.label()} with greedy",
    )
