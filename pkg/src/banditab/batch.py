"""Vectorized Monte Carlo engine: many replications in lockstep.

Replication r of a sweep with master seed ``m`` uses exactly the random
streams of ``runner`` called with seed ``(m, r)``: same tape, same
pre-drawn policy uniforms. The two engines therefore produce identical
traces and this one is just the fast path. Aggregation order is fixed by
replication index, which keeps every downstream mean bit-stable.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    STREAM_SINK_TAPE,
    STREAM_SLOT,
    STREAM_TAPE,
    BanditInstance,
    _sample_cells,
    rng_stream,
    seed_key,
)
from .policies import (
    PolicySpec,
    StepKind,
    egreedy_select,
    exp3_init,
    exp3_select,
    exp3_update,
    greedy_select,
    thompson_priors,
    thompson_step,
    ucb_select,
)
from .runner import check_run_setup


@dataclass
class ReplicationSet:
    """Per-replication outcomes of one experiment configuration.

    realized/pseudo have shape (reps, n_slots); counts has shape
    (reps, n_slots, K). ``rewards`` (one (reps, horizon) array per slot)
    is retained only when cumulative-regret curves were requested.
    """

    mode: str
    specs: tuple[PolicySpec, ...]
    instance: BanditInstance
    horizon: int
    master_seed: tuple[int, ...]
    realized: np.ndarray
    pseudo: np.ndarray
    counts: np.ndarray
    rewards: tuple[np.ndarray, ...] | None = None

    @property
    def reps(self) -> int:
        return self.realized.shape[0]

    @property
    def n_slots(self) -> int:
        return len(self.specs)

    def rep_seed(self, r: int) -> tuple[int, ...]:
        return self.master_seed + (r,)


class _BatchSlot:
    """Pre-drawn randomness and private state for one slot, all reps."""

    def __init__(self, spec, instance, horizon, reps, rep_keys, slot):
        self.spec = spec
        self.n_arms = instance.n_arms
        kind = spec.kind
        if kind == "egreedy":
            self.us = np.empty((reps, horizon))
            self.js = np.empty((reps, horizon), dtype=np.int64)
            for r, key in enumerate(rep_keys):
                rng = rng_stream(key, STREAM_SLOT[slot])
                self.us[r] = rng.random(horizon)
                self.js[r] = rng.integers(0, self.n_arms, size=horizon)
        elif kind == "thompson":
            self.uth = np.empty((reps, horizon, self.n_arms))
            for r, key in enumerate(rep_keys):
                self.uth[r] = rng_stream(key, STREAM_SLOT[slot]).random((horizon, self.n_arms))
            self.prior = thompson_priors(spec, instance)
        elif kind == "exp3":
            self.ue = np.empty((reps, horizon))
            for r, key in enumerate(rep_keys):
                self.ue[r] = rng_stream(key, STREAM_SLOT[slot]).random(horizon)
            self.state = exp3_init(self.n_arms, reps)

    def select(self, counts, sums, t):
        kind = self.spec.kind
        if kind == "greedy":
            arms = greedy_select(counts, sums)
            prob = None
        elif kind == "ucb":
            arms = ucb_select(counts, sums, self.spec.alpha)
            prob = None
        elif kind == "egreedy":
            arms, _ = egreedy_select(
                counts, sums, self.spec.alpha, self.spec.c, self.us[:, t - 1], self.js[:, t - 1]
            )
            prob = None
        elif kind == "thompson":
            arms, _ = thompson_step(self.prior, counts, sums, self.uth[:, t - 1, :])
            prob = None
        else:
            arms, prob = exp3_select(self.state, t, self.n_arms, self.ue[:, t - 1])
        return arms, prob

    def observe_own(self, rows, arms, rewards, prob):
        if self.spec.kind == "exp3":
            exp3_update(self.state, arms, rewards, prob)


def _rep_tapes(instance, horizon, rep_keys, route):
    reps = len(rep_keys)
    cells = np.empty((reps, instance.n_arms, 2 * horizon))
    for r, key in enumerate(rep_keys):
        cells[r] = _sample_cells(instance, horizon, rng_stream(key, route))
    return cells


def run_batch(
    mode: str,
    specs,
    instance: BanditInstance,
    horizon: int,
    reps: int,
    master_seed,
    keep_rewards: bool = False,
) -> ReplicationSet:
    """Run ``reps`` independent replications of one configuration.

    Within a timestep the slots act in order: slot 1 selects and draws its
    tape cell first, exactly as in the per-step runner.
    """
    specs = tuple(specs)
    check_run_setup(specs, instance, mode)
    expected_slots = 1 if mode == "individual" else 2
    if len(specs) != expected_slots:
        raise ValueError(
            f"{mode} mode takes {expected_slots} spec(s), got {len(specs)}; "
            "pair individual runs via run_paired_individual"
        )
    if reps < 1:
        raise ValueError(f"reps must be >= 1, got {reps}")
    master = seed_key(master_seed)
    rep_keys = [master + (r,) for r in range(reps)]
    n_slots = len(specs)
    K = instance.n_arms
    rows = np.arange(reps)

    tapes = _rep_tapes(instance, horizon, rep_keys, STREAM_TAPE)
    cursors = np.zeros((reps, K), dtype=np.int64)
    if mode == "one_way":
        sink_tapes = _rep_tapes(instance, horizon, rep_keys, STREAM_SINK_TAPE)
        sink_cursors = np.zeros((reps, K), dtype=np.int64)

    slots = [_BatchSlot(s, instance, horizon, reps, rep_keys, i) for i, s in enumerate(specs)]
    own_counts = np.zeros((reps, n_slots, K), dtype=np.int64)
    own_sums = np.zeros((reps, n_slots, K))
    reward_sums = np.zeros((reps, n_slots))
    rewards = [np.zeros((reps, horizon)) for _ in range(n_slots)] if keep_rewards else None
    if mode == "joint":
        shared_counts = np.zeros((reps, K), dtype=np.int64)
        shared_sums = np.zeros((reps, K))

    for t in range(1, horizon + 1):
        picks = []
        for i, slot in enumerate(slots):
            if mode == "joint":
                counts, sums = shared_counts, shared_sums
            elif mode == "individual" or i == 0:
                counts, sums = own_counts[:, 0, :], own_sums[:, 0, :]
            else:  # one-way sink sees the union of both sample sets
                counts = own_counts[:, 0, :] + own_counts[:, 1, :]
                sums = own_sums[:, 0, :] + own_sums[:, 1, :]
            picks.append(slot.select(counts, sums, t))
        for i, (arms, prob) in enumerate(picks):
            if mode == "one_way" and i == 1:
                cells, cur = sink_tapes, sink_cursors
            else:
                cells, cur = tapes, cursors
            rew = cells[rows, arms, cur[rows, arms]]
            cur[rows, arms] += 1
            own_counts[rows, i, arms] += 1
            own_sums[rows, i, arms] += rew
            reward_sums[:, i] += rew
            if mode == "joint":
                shared_counts[rows, arms] += 1
                shared_sums[rows, arms] += rew
            slots[i].observe_own(rows, arms, rew, prob)
            if keep_rewards:
                rewards[i][:, t - 1] = rew

    realized = horizon * instance.best_mean - reward_sums
    pseudo = own_counts @ instance.gaps_array()
    return ReplicationSet(
        mode=mode,
        specs=specs,
        instance=instance,
        horizon=horizon,
        master_seed=master,
        realized=realized,
        pseudo=pseudo,
        counts=own_counts,
        rewards=tuple(rewards) if keep_rewards else None,
    )


def combine_individual(a: ReplicationSet, b: ReplicationSet) -> ReplicationSet:
    """Stack two single-algorithm sweeps into one paired two-slot set.

    Meaningful when both were run with the same master seed (shared tapes,
    common random numbers), so that per-replication differences pair up.
    """
    if a.mode != "individual" or b.mode != "individual":
        raise ValueError("can only pair two individual-mode replication sets")
    if a.master_seed != b.master_seed or a.horizon != b.horizon or a.reps != b.reps:
        raise ValueError("paired sets need matching seed, horizon and replication count")
    keep = a.rewards is not None and b.rewards is not None
    return ReplicationSet(
        mode="paired_individual",
        specs=(a.specs[0], b.specs[0]),
        instance=a.instance,
        horizon=a.horizon,
        master_seed=a.master_seed,
        realized=np.column_stack([a.realized[:, 0], b.realized[:, 0]]),
        pseudo=np.column_stack([a.pseudo[:, 0], b.pseudo[:, 0]]),
        counts=np.concatenate([a.counts, b.counts], axis=1),
        rewards=(a.rewards[0], b.rewards[0]) if keep else None,
    )


def run_paired_individual(
    spec1: PolicySpec,
    spec2: PolicySpec,
    instance: BanditInstance,
    horizon: int,
    reps: int,
    master_seed,
    keep_rewards: bool = False,
) -> ReplicationSet:
    """Two individual sweeps under common random numbers, rep by rep.

    Both runs share the reward tapes (and the slot-1 policy stream), so
    per-replication differences are paired and the comparison variance
    drops without changing either marginal.
    """
    a = run_batch("individual", (spec1,), instance, horizon, reps, master_seed, keep_rewards)
    b = run_batch("individual", (spec2,), instance, horizon, reps, master_seed, keep_rewards)
    return combine_individual(a, b)
