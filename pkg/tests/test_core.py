"""Environment, reward tape, and shared-history contracts."""

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from banditab import (
    SharedHistory,
    empirical_mean,
    history_update,
    make_instance,
    sample_tape,
    tape_draw,
)
from banditab.core import seed_key


class TestMakeInstance:
    def test_two_arm_standard(self):
        inst = make_instance((0.8, 0.2), "bernoulli")
        assert inst.best_arm == 0
        assert inst.gaps[0] == 0.0
        assert inst.gaps[1] == pytest.approx(0.6)
        assert inst.min_gap == pytest.approx(0.6)

    def test_degenerate_deterministic_arms(self):
        inst = make_instance((1.0, 0.0))
        assert inst.gaps[1] == 1.0
        assert inst.min_gap == 1.0

    def test_duplicate_maximum_rejected(self):
        with pytest.raises(ValueError, match="unique best arm"):
            make_instance((0.8, 0.8))

    def test_mean_out_of_range_rejected(self):
        with pytest.raises(ValueError, match=r"\[0, 1\]"):
            make_instance((0.8, 1.2))

    def test_single_arm_rejected(self):
        with pytest.raises(ValueError, match="2 arms"):
            make_instance((0.8,))

    def test_unknown_kind_rejected(self):
        with pytest.raises(ValueError, match="unsupported"):
            make_instance((0.8, 0.2), "cauchy")

    def test_three_arms(self):
        inst = make_instance((0.3, 0.9, 0.5))
        assert inst.best_arm == 1
        assert inst.gaps == (pytest.approx(0.6), 0.0, pytest.approx(0.4))
        assert inst.min_gap == pytest.approx(0.4)


class TestRewardTape:
    def test_deterministic_in_seed(self):
        inst = make_instance((0.8, 0.2))
        t1 = sample_tape(inst, 50, 7)
        t2 = sample_tape(inst, 50, 7)
        assert np.array_equal(t1.cells, t2.cells)
        t3 = sample_tape(inst, 50, 8)
        assert not np.array_equal(t1.cells, t3.cells)

    def test_cell_mean_matches_bernoulli(self):
        # binomial oracle: SE of the mean of 2T draws is sqrt(p(1-p)/(2T))
        horizon = 10_000
        inst = make_instance((0.8, 0.2))
        tape = sample_tape(inst, horizon, 123)
        se = math.sqrt(0.8 * 0.2 / (2 * horizon))
        assert abs(tape.cells[0].mean() - 0.8) <= 3 * se

    def test_deterministic_arm_all_ones(self):
        tape = sample_tape(make_instance((1.0, 0.0)), 100, 5)
        assert np.all(tape.cells[0] == 1.0)
        assert np.all(tape.cells[1] == 0.0)

    def test_draw_advances_cursor(self):
        tape = sample_tape(make_instance((1.0, 0.0)), 5, 1)
        tape.cells[0, :2] = (0.0, 1.0)
        assert tape_draw(tape, 0) == 0.0
        assert tape.cursors[0] == 1
        assert tape_draw(tape, 0) == 1.0
        assert tape.cursors[0] == 2
        assert tape.cursors[1] == 0

    def test_consecutive_draws_follow_cells(self):
        inst = make_instance((0.8, 0.2))
        tape = sample_tape(inst, 20, 9)
        drawn = [tape_draw(tape, 1) for _ in range(8)]
        assert drawn == list(tape.cells[1, :8])

    def test_exhaustion_raises_after_2T_draws(self):
        tape = sample_tape(make_instance((1.0, 0.0)), 4, 3)
        for _ in range(8):
            tape_draw(tape, 0)
        assert tape.cursors[0] == 8
        with pytest.raises(RuntimeError, match="exhausted"):
            tape_draw(tape, 0)

    @given(pulls=st.lists(st.integers(0, 1), max_size=60))
    @settings(max_examples=50, deadline=None)
    def test_conservation_and_prefix_consistency(self, pulls):
        # arbitrary pull sequences: cursor totals count the pulls, and the
        # history samples are exactly the tape prefix for each arm
        inst = make_instance((0.8, 0.2))
        tape = sample_tape(inst, max(len(pulls), 1), 11)
        hist = SharedHistory(2, keep_samples=True)
        for arm in pulls:
            history_update(hist, arm, tape_draw(tape, arm))
        assert tape.cursors.sum() == len(pulls)
        for arm in range(2):
            assert hist.samples[arm] == list(tape.cells[arm, : hist.counts[arm]])


class TestSharedHistory:
    def test_single_update(self):
        h = SharedHistory(2)
        history_update(h, 1, 0.5)
        assert list(h.counts) == [0, 1]
        assert h.total == 1
        assert h.sums[1] == 0.5

    def test_two_updates_per_timestep(self):
        h = SharedHistory(2)
        history_update(h, 0, 1.0)
        history_update(h, 0, 0.0)
        assert h.total == 2
        assert h.counts[0] == 2

    @given(
        updates=st.lists(
            st.tuples(st.integers(0, 2), st.integers(0, 16)), min_size=1, max_size=80
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_sums_exact_for_dyadic_rewards(self, updates):
        h = SharedHistory(3)
        exact = [Fraction(0)] * 3
        for arm, sixteenth in updates:
            history_update(h, arm, sixteenth / 16.0)
            exact[arm] += Fraction(sixteenth, 16)
        for arm in range(3):
            assert h.sums[arm] == float(exact[arm])
            if h.counts[arm] > 0:
                assert empirical_mean(h, arm) == float(exact[arm] / h.counts[arm])
        assert h.total == sum(h.counts)

    def test_empirical_mean_examples(self):
        h = SharedHistory(2)
        history_update(h, 0, 1.0)
        history_update(h, 0, 0.0)
        assert empirical_mean(h, 0) == 0.5
        assert empirical_mean(h, 1) == math.inf
        history_update(h, 1, 0.8)
        assert empirical_mean(h, 1) == 0.8

    def test_means_vector_uses_sentinel(self):
        h = SharedHistory(2)
        history_update(h, 0, 0.3)
        means = h.means()
        assert means[0] == pytest.approx(0.3)
        assert math.isinf(means[1])


class TestSeeds:
    def test_seed_key_forms(self):
        assert seed_key(5) == (5,)
        assert seed_key((5, 2)) == (5, 2)

    def test_bad_seed_rejected(self):
        with pytest.raises(ValueError):
            seed_key(-1)
        with pytest.raises(ValueError):
            seed_key(())
