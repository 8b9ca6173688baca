"""Single-replication runners: individual, joint data sharing, one-way sharing.

This is the per-step reference implementation. The Monte Carlo sweeps in
:mod:`banditab.batch` run many replications in lockstep with the same
per-replication random streams; a test pins the two engines to identical
traces. Keep the semantics here authoritative:

* joint mode: both algorithms select from the same pre-update shared
  history, then both reward samples land; the slot-1 algorithm draws its
  tape cell first when both pull the same arm.
* one-way mode: the source (slot 1) sees only its own samples and is
  byte-identical to its individual run under the same seed; the sink
  (slot 2) sees the union of both sample sets, with the source's sample
  from timestep t visible only from t+1 on. The sink draws rewards from a
  separate tape stream so the source's trace cannot depend on it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    STREAM_SINK_TAPE,
    STREAM_SLOT,
    BanditInstance,
    RewardTape,
    SharedHistory,
    _sample_cells,
    rng_stream,
    sample_tape,
    seed_key,
    tape_draw,
)
from .policies import (
    HISTORY_BASED,
    Exp3State,
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

RUN_MODES = ("individual", "joint", "one_way")


@dataclass
class RunTrace:
    """Everything one replication produced.

    arms/rewards/kinds have one row per participating algorithm and one
    column per timestep; counts holds each algorithm's final per-arm pull
    counts. ``tapes`` keeps the consumed tapes for invariant checks.
    """

    mode: str
    horizon: int
    seed: tuple[int, ...]
    specs: tuple[PolicySpec, ...]
    arms: np.ndarray
    rewards: np.ndarray
    kinds: np.ndarray
    counts: np.ndarray
    tapes: tuple[RewardTape, ...]

    @property
    def n_slots(self) -> int:
        return len(self.specs)

    def reward_sum(self, slot: int = 0) -> float:
        return float(self.rewards[slot].sum())


def check_run_setup(specs, instance: BanditInstance, mode: str) -> None:
    """Reject configurations the protocol cannot support."""
    if mode not in RUN_MODES:
        raise ValueError(f"unknown run mode {mode!r}")
    for spec in specs:
        if spec.kind == "thompson" and instance.kind != "bernoulli":
            raise ValueError("thompson requires Bernoulli rewards")
    if mode == "joint" and any(s.kind == "exp3" for s in specs):
        raise ValueError(
            "exp3 cannot consume shared samples (no sampling probability for them); "
            "use one_way mode with exp3 as the source"
        )
    if mode == "one_way" and specs[1].kind not in HISTORY_BASED:
        raise ValueError(f"one_way sink must be a history-based policy, not {specs[1].kind!r}")


class _SlotRuntime:
    """One algorithm's pre-drawn randomness and private state for one run.

    The full draw budget is taken up front from the slot's stream, one
    fixed block per policy kind, and consumed positionally per timestep.
    """

    def __init__(self, spec: PolicySpec, instance: BanditInstance, horizon: int, seed, slot: int):
        self.spec = spec
        self.n_arms = instance.n_arms
        kind = spec.kind
        if kind == "egreedy":
            rng = rng_stream(seed, STREAM_SLOT[slot])
            self.us = rng.random(horizon)
            self.js = rng.integers(0, self.n_arms, size=horizon)
        elif kind == "thompson":
            rng = rng_stream(seed, STREAM_SLOT[slot])
            self.uth = rng.random((horizon, self.n_arms))
            self.prior = thompson_priors(spec, instance)
        elif kind == "exp3":
            rng = rng_stream(seed, STREAM_SLOT[slot])
            self.ue = rng.random(horizon)
            self.state: Exp3State = exp3_init(self.n_arms)

    def select(self, counts, sums, t: int):
        """Pick an arm from the visible history at timestep t (1-based).

        Returns (arm, StepKind code, sampling probability or None).
        """
        kind = self.spec.kind
        if kind == "greedy":
            arm = greedy_select(counts, sums)
            step = StepKind.FORCED if counts[arm] == 0 else StepKind.GREEDY_STEP
            return int(arm), int(step), None
        if kind == "ucb":
            arm = ucb_select(counts, sums, self.spec.alpha)
            step = StepKind.FORCED if counts[arm] == 0 else StepKind.GREEDY_STEP
            return int(arm), int(step), None
        if kind == "egreedy":
            arm, step = egreedy_select(
                counts, sums, self.spec.alpha, self.spec.c, self.us[t - 1], self.js[t - 1]
            )
            return int(arm), int(step), None
        if kind == "thompson":
            arm, step = thompson_step(self.prior, counts, sums, self.uth[t - 1])
            return int(arm), int(step), None
        arm, prob = exp3_select(self.state, t, self.n_arms, self.ue[t - 1])
        return int(arm), int(StepKind.EXPLORE), float(prob)

    def observe_own(self, arm: int, reward: float, prob: float | None) -> None:
        if self.spec.kind == "exp3":
            exp3_update(self.state, arm, reward, prob)


def _empty_trace(mode, horizon, seed, specs, tapes):
    n = len(specs)
    return RunTrace(
        mode=mode,
        horizon=horizon,
        seed=seed_key(seed),
        specs=tuple(specs),
        arms=np.zeros((n, horizon), dtype=np.int64),
        rewards=np.zeros((n, horizon), dtype=np.float64),
        kinds=np.zeros((n, horizon), dtype=np.int8),
        counts=np.zeros((n, len(tapes[0].cells)), dtype=np.int64),
        tapes=tuple(tapes),
    )


def run_individual(spec: PolicySpec, instance: BanditInstance, horizon: int, seed) -> RunTrace:
    """Run one algorithm alone: it sees only its own t-1 samples."""
    check_run_setup((spec,), instance, "individual")
    tape = sample_tape(instance, horizon, seed)
    slot = _SlotRuntime(spec, instance, horizon, seed, 0)
    trace = _empty_trace("individual", horizon, seed, (spec,), (tape,))
    history = SharedHistory(instance.n_arms)
    for t in range(1, horizon + 1):
        arm, step, prob = slot.select(history.counts, history.sums, t)
        reward = tape_draw(tape, arm)
        history.add(arm, reward)
        slot.observe_own(arm, reward, prob)
        trace.arms[0, t - 1] = arm
        trace.rewards[0, t - 1] = reward
        trace.kinds[0, t - 1] = step
        trace.counts[0, arm] += 1
    return trace


def run_joint(
    spec1: PolicySpec, spec2: PolicySpec, instance: BanditInstance, horizon: int, seed
) -> RunTrace:
    """Run two algorithms under two-way data sharing.

    Each timestep both select from the shared history as it stood after
    timestep t-1 (so its total count is 2*(t-1)), then both samples are
    added.
    """
    specs = (spec1, spec2)
    check_run_setup(specs, instance, "joint")
    tape = sample_tape(instance, horizon, seed)
    slots = [_SlotRuntime(s, instance, horizon, seed, i) for i, s in enumerate(specs)]
    trace = _empty_trace("joint", horizon, seed, specs, (tape,))
    shared = SharedHistory(instance.n_arms)
    for t in range(1, horizon + 1):
        picks = [s.select(shared.counts, shared.sums, t) for s in slots]
        for i, (arm, step, prob) in enumerate(picks):
            reward = tape_draw(tape, arm)
            shared.add(arm, reward)
            slots[i].observe_own(arm, reward, prob)
            trace.arms[i, t - 1] = arm
            trace.rewards[i, t - 1] = reward
            trace.kinds[i, t - 1] = step
            trace.counts[i, arm] += 1
    return trace


def run_one_way(
    source_spec: PolicySpec,
    sink_spec: PolicySpec,
    instance: BanditInstance,
    horizon: int,
    seed,
) -> RunTrace:
    """Run two algorithms where only the source supplies data to the sink."""
    specs = (source_spec, sink_spec)
    check_run_setup(specs, instance, "one_way")
    src_tape = sample_tape(instance, horizon, seed)
    sink_tape = RewardTape(
        cells=_sample_cells(instance, horizon, rng_stream(seed, STREAM_SINK_TAPE)),
        cursors=np.zeros(instance.n_arms, dtype=np.int64),
        horizon=horizon,
        seed=seed_key(seed),
    )
    slots = [_SlotRuntime(s, instance, horizon, seed, i) for i, s in enumerate(specs)]
    trace = _empty_trace("one_way", horizon, seed, specs, (src_tape, sink_tape))
    src_hist = SharedHistory(instance.n_arms)
    sink_hist = SharedHistory(instance.n_arms)
    for t in range(1, horizon + 1):
        src_arm, src_step, src_prob = slots[0].select(src_hist.counts, src_hist.sums, t)
        union_counts = src_hist.counts + sink_hist.counts
        union_sums = src_hist.sums + sink_hist.sums
        sink_arm, sink_step, _ = slots[1].select(union_counts, union_sums, t)
        src_reward = tape_draw(src_tape, src_arm)
        sink_reward = tape_draw(sink_tape, sink_arm)
        src_hist.add(src_arm, src_reward)
        sink_hist.add(sink_arm, sink_reward)
        slots[0].observe_own(src_arm, src_reward, src_prob)
        for i, (arm, reward, step) in enumerate(
            ((src_arm, src_reward, src_step), (sink_arm, sink_reward, sink_step))
        ):
            trace.arms[i, t - 1] = arm
            trace.rewards[i, t - 1] = reward
            trace.kinds[i, t - 1] = step
            trace.counts[i, arm] += 1
    return trace
