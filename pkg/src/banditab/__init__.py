"""Monte Carlo A/B experiments on multi-armed bandit algorithms under data sharing."""

from .batch import ReplicationSet, combine_individual, run_batch, run_paired_individual
from .core import (
    BanditInstance,
    RewardTape,
    SharedHistory,
    empirical_mean,
    history_update,
    make_instance,
    sample_tape,
    tape_draw,
)
from .metrics import (
    MonteCarloEstimate,
    ReplicationSummary,
    SignVerdict,
    dm_estimate,
    gte_reference,
    mean_regret,
    optimal_pull_tail,
    prob_correct_comparison,
    pseudo_regret,
    pull_count_threshold,
    realized_regret,
    regret_difference,
    sign_verdict,
    summaries,
)
from .policies import (
    Exp3State,
    PolicySpec,
    StepKind,
    ThompsonState,
    confidence_radius,
    egreedy_select,
    exploration_rate,
    exp3_probabilities,
    exp3_select,
    exp3_update,
    greedy_select,
    thompson_priors,
    thompson_select,
    ucb_select,
)
from .ratefit import GrowthClassification, RateCurve, Thresholds, classify_growth, loglog_slope
from .runner import RunTrace, run_individual, run_joint, run_one_way

__version__ = "0.1.0"
