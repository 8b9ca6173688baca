"""Asymptotic claims demonstrated in the regimes where they actually bind.

The acceptance suite pins its checks at desk scale (T <= 4000, C = 1,
10^4 replications), where several asymptotic orderings have not set in
yet. The tests here restore the missing ingredient (a longer horizon,
more replications, or a theory-scale exploration constant) and show that
the corresponding claim then holds in this implementation.
"""

import pytest

from banditab import PolicySpec, classify_growth, make_instance
from banditab.batch import combine_individual, run_batch
from banditab.experiments import rate_sweep
from banditab.metrics import regret_difference

INSTANCE = make_instance((0.8, 0.2))
SEED = 7


def test_greedy_beats_egreedy0_individually_with_enough_replications():
    """The +0.27 ordering at T=100 is real; it needs ~10^5 reps for 3 sigma."""
    g = run_batch("individual", (PolicySpec("greedy"),), INSTANCE, 100, 100_000, SEED)
    e = run_batch(
        "individual", (PolicySpec("egreedy", alpha=0.0, c=1.0),), INSTANCE, 100, 100_000, SEED
    )
    d = regret_difference(combine_individual(g, e))
    assert d.mean >= 3 * d.se, f"diff {d.mean:.4f} se {d.se:.4f}"


def test_greedy_crosses_above_ucb0_at_larger_horizon():
    """Linear-vs-log: greedy's lock-in cost overtakes UCB_0 near T ~ 1000."""
    g = run_batch("individual", (PolicySpec("greedy"),), INSTANCE, 2000, 2000, SEED)
    u = run_batch("individual", (PolicySpec("ucb", alpha=0.0),), INSTANCE, 2000, 2000, SEED)
    d = regret_difference(combine_individual(g, u))
    assert d.mean >= 3 * d.se, f"diff {d.mean:.3f} se {d.se:.3f}"


def test_greedy_constant_beside_theory_scale_egreedy():
    """With C=200 the partner explores enough for the free ride to kick in.

    This is the constant-regret claim that fails its desk-scale check with
    C=1: restoring a constant of the order the theory assumes makes the
    greedy curve flat across the same grid.
    """
    specs = (PolicySpec("greedy"), PolicySpec("egreedy", alpha=0.0, c=200.0))
    curves = rate_sweep("joint", specs, INSTANCE, (250, 500, 1000, 2000, 4000), 1000, SEED)
    cls = classify_growth(curves[0])
    assert cls.label == "constant", cls.describe()


def test_exponents_monotone_in_alpha_at_theory_scale_c():
    """Fitted growth exponents rise with alpha once C is in the theory range.

    At C=1 the alpha=0 member is nearly pure exploitation and its lock-in
    escapes produce ~sqrt(T) growth, breaking monotonicity at the low end;
    with C=240 (the order the epsilon-greedy guarantees assume for K=2)
    the family's exponents are nondecreasing across the grid.
    """
    slopes = []
    for alpha in (0.0, 0.5, 1.0):
        spec = PolicySpec("egreedy", alpha=alpha, c=240.0)
        curve = rate_sweep("individual", (spec,), INSTANCE, (250, 500, 1000, 2000, 4000), 500, SEED)[0]
        slopes.append(classify_growth(curve).slope)
    assert slopes == sorted(slopes), f"slopes {[round(s, 3) for s in slopes]}"
