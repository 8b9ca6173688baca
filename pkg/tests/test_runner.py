"""Run-protocol contracts and the lockstep equality of the two engines."""

import numpy as np
import pytest

from banditab import (
    PolicySpec,
    StepKind,
    make_instance,
    run_individual,
    run_joint,
    run_one_way,
)
from banditab.batch import run_batch
from banditab.core import BanditInstance

INSTANCE = make_instance((0.8, 0.2))

GREEDY = PolicySpec("greedy")
EGR0 = PolicySpec("egreedy", alpha=0.0, c=1.0)
UCB0 = PolicySpec("ucb", alpha=0.0)
TS = PolicySpec("thompson", m=5.0, gamma=0.3)
EXP3 = PolicySpec("exp3")

ALL_KINDS = [GREEDY, EGR0, UCB0, TS, EXP3]


class TestIndividual:
    def test_greedy_on_deterministic_arms(self):
        # forced pulls fill both arms in the first two steps, then the
        # deterministic best arm wins every remaining step
        inst = make_instance((1.0, 0.0))
        trace = run_individual(GREEDY, inst, 10, 3)
        assert list(trace.arms[0, :2]) == [0, 1]
        assert list(trace.counts[0]) == [9, 1]
        assert trace.rewards[0, 0] == 1.0
        assert trace.rewards[0, 1] == 0.0
        assert trace.kinds[0, 0] == StepKind.FORCED
        assert trace.kinds[0, 1] == StepKind.FORCED

    @pytest.mark.parametrize("spec", ALL_KINDS, ids=lambda s: s.kind)
    def test_horizon_one(self, spec):
        trace = run_individual(spec, INSTANCE, 1, 5)
        assert trace.arms.shape == (1, 1)
        assert trace.counts[0].sum() == 1

    @pytest.mark.parametrize("spec", ALL_KINDS, ids=lambda s: s.kind)
    def test_same_seed_same_trace(self, spec):
        a = run_individual(spec, INSTANCE, 40, 11)
        b = run_individual(spec, INSTANCE, 40, 11)
        assert np.array_equal(a.arms, b.arms)
        assert np.array_equal(a.rewards, b.rewards)

    def test_cursor_conservation(self):
        trace = run_individual(EGR0, INSTANCE, 35, 2)
        assert trace.tapes[0].cursors.sum() == 35

    @pytest.mark.parametrize("spec", [GREEDY, EGR0, UCB0, TS], ids=lambda s: s.kind)
    def test_forced_completion_within_k_steps(self, spec):
        trace = run_individual(spec, INSTANCE, 10, 13)
        assert set(trace.arms[0, :2]) == {0, 1}
        # forced steps exist only while some arm has zero samples, which
        # the first-K coverage above ends
        assert int(StepKind.FORCED) not in trace.kinds[0, 2:]

    def test_uniform_regime_explores_every_step(self):
        # C=200 keeps the rate capped at 1 for every total below 200, so
        # after the forced phase every step is an exploration step
        spec = PolicySpec("egreedy", alpha=0.0, c=200.0)
        trace = run_individual(spec, INSTANCE, 100, 17)
        assert set(trace.kinds[0, 2:].tolist()) == {int(StepKind.EXPLORE)}


class TestJoint:
    def test_total_pulls_2t(self):
        trace = run_joint(GREEDY, UCB0, INSTANCE, 60, 21)
        assert trace.counts.sum() == 120
        assert trace.counts[0].sum() == 60
        assert trace.tapes[0].cursors.sum() == 120

    def test_identical_greedy_pair_moves_together(self):
        trace = run_joint(GREEDY, GREEDY, INSTANCE, 50, 23)
        assert np.array_equal(trace.arms[0], trace.arms[1])

    def test_tape_order_slot1_first(self):
        # replay the tape: when both slots pull the same arm in one step,
        # slot 1 must hold the earlier cell and slot 2 the next one
        trace = run_joint(GREEDY, GREEDY, INSTANCE, 50, 23)
        cells = trace.tapes[0].cells
        cursor = np.zeros(2, dtype=int)
        for t in range(50):
            for slot in (0, 1):
                arm = trace.arms[slot, t]
                assert trace.rewards[slot, t] == cells[arm, cursor[arm]]
                cursor[arm] += 1

    def test_joint_uniform_rate_sees_shared_total(self):
        # shared history totals 2(t-1) <= 198 < C=200, so the cap holds
        # through the whole run and every non-forced step explores
        spec = PolicySpec("egreedy", alpha=0.0, c=200.0)
        trace = run_joint(spec, GREEDY, INSTANCE, 100, 29)
        assert set(trace.kinds[0, 2:].tolist()) == {int(StepKind.EXPLORE)}

    def test_exp3_rejected_in_joint(self):
        with pytest.raises(ValueError, match="one_way"):
            run_joint(EXP3, GREEDY, INSTANCE, 10, 1)

    @pytest.mark.parametrize("pair", [(GREEDY, UCB0), (EGR0, TS)], ids=("grd-ucb", "egr-ts"))
    def test_forced_completion(self, pair):
        trace = run_joint(*pair, INSTANCE, 10, 31)
        assert set(trace.arms[:, :2].ravel()) == {0, 1}


class TestOneWay:
    def test_source_trace_matches_individual_run(self):
        one = run_one_way(EXP3, GREEDY, INSTANCE, 50, 37)
        ind = run_individual(EXP3, INSTANCE, 50, 37)
        assert np.array_equal(one.arms[0], ind.arms[0])
        assert np.array_equal(one.rewards[0], ind.rewards[0])

    def test_source_invariant_to_sink_identity(self):
        a = run_one_way(EXP3, GREEDY, INSTANCE, 50, 41)
        b = run_one_way(EXP3, UCB0, INSTANCE, 50, 41)
        assert np.array_equal(a.arms[0], b.arms[0])
        assert np.array_equal(a.rewards[0], b.rewards[0])

    def test_total_pulls_2t(self):
        trace = run_one_way(GREEDY, EGR0, INSTANCE, 40, 43)
        assert trace.counts.sum() == 80

    def test_sink_sees_union_totals(self):
        # the sink's visible total is 2(t-1): with C=200 it stays capped
        spec = PolicySpec("egreedy", alpha=0.0, c=200.0)
        trace = run_one_way(GREEDY, spec, INSTANCE, 100, 47)
        sink_kinds = set(trace.kinds[1].tolist()) - {int(StepKind.FORCED)}
        assert sink_kinds == {int(StepKind.EXPLORE)}

    def test_exp3_sink_rejected(self):
        with pytest.raises(ValueError, match="history-based"):
            run_one_way(GREEDY, EXP3, INSTANCE, 10, 1)


class TestValidation:
    def test_thompson_needs_bernoulli(self):
        fake = BanditInstance(
            means=(0.8, 0.2), kind="scaled-beta", best_arm=0, gaps=(0.0, 0.6), min_gap=0.6
        )
        with pytest.raises(ValueError, match="Bernoulli"):
            run_individual(TS, fake, 5, 1)

    def test_batch_slot_count_enforced(self):
        with pytest.raises(ValueError, match="1 spec"):
            run_batch("individual", (GREEDY, UCB0), INSTANCE, 5, 5, 1)
        with pytest.raises(ValueError, match="2 spec"):
            run_batch("joint", (GREEDY,), INSTANCE, 5, 5, 1)


EQUALITY_CASES = [
    ("individual", (GREEDY,)),
    ("individual", (PolicySpec("egreedy", alpha=0.5, c=1.0),)),
    ("individual", (PolicySpec("ucb", alpha=0.7),)),
    ("individual", (UCB0,)),
    ("individual", (TS,)),
    ("individual", (EXP3,)),
    ("joint", (GREEDY, UCB0)),
    ("joint", (EGR0, PolicySpec("egreedy", alpha=1.0, c=2.0))),
    ("joint", (TS, GREEDY)),
    ("joint", (PolicySpec("ucb", alpha=0.25), EGR0)),
    ("one_way", (EXP3, GREEDY)),
    ("one_way", (EGR0, UCB0)),
    ("one_way", (GREEDY, TS)),
]


@pytest.mark.parametrize(
    "mode,specs",
    EQUALITY_CASES,
    ids=[f"{m}-{'+'.join(s.kind for s in sp)}" for m, sp in EQUALITY_CASES],
)
def test_batch_engine_matches_sequential_runner(mode, specs):
    """The vectorized engine must reproduce the per-step runner bit for bit."""
    horizon, reps, master = 30, 6, 97
    runners = {
        "individual": lambda seed: run_individual(specs[0], INSTANCE, horizon, seed),
        "joint": lambda seed: run_joint(*specs, INSTANCE, horizon, seed),
        "one_way": lambda seed: run_one_way(*specs, INSTANCE, horizon, seed),
    }
    repset = run_batch(mode, specs, INSTANCE, horizon, reps, master, keep_rewards=True)
    for r in range(reps):
        trace = runners[mode]((master, r))
        for slot in range(len(specs)):
            assert np.array_equal(trace.rewards[slot], repset.rewards[slot][r]), (r, slot)
            assert np.array_equal(trace.counts[slot], repset.counts[r, slot]), (r, slot)
            expected = horizon * INSTANCE.best_mean - trace.rewards[slot].sum()
            assert repset.realized[r, slot] == expected
