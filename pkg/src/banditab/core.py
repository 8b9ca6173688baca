"""Bandit environments, pre-sampled reward tapes, and shared histories.

The reward tape is the random-number discipline for every simulation in
this package: each arm gets ``2 * horizon`` pre-sampled rewards consumed
left to right, so that two algorithms running on the same environment see
common random numbers and every run is reproducible from its seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

SUPPORTED_KINDS = ("bernoulli",)

# Stream routes appended to a seed key. Policy streams are per slot so that
# one algorithm's coin flips never perturb the tape or the other algorithm.
STREAM_TAPE = 0
STREAM_SLOT = (1, 2)
STREAM_SINK_TAPE = 3


def seed_key(seed) -> tuple[int, ...]:
    """Normalize a seed (int or tuple of ints) to an entropy key."""
    if isinstance(seed, (int, np.integer)):
        key = (int(seed),)
    else:
        key = tuple(int(s) for s in seed)
    if not key or any(s < 0 for s in key):
        raise ValueError(f"seed must be a nonnegative int or tuple of them, got {seed!r}")
    return key


def rng_stream(seed, route: int) -> np.random.Generator:
    """Independent generator for one stream of one run."""
    return np.random.default_rng(np.random.SeedSequence(seed_key(seed) + (route,)))


@dataclass(frozen=True)
class BanditInstance:
    """A stochastic environment: K arms with reward distributions on [0, 1].

    Attributes:
        means: expected reward of each arm.
        kind: reward distribution family ("bernoulli").
        best_arm: index of the unique arm with the highest mean.
        gaps: per-arm suboptimality gap, best mean minus arm mean.
        min_gap: smallest nonzero gap.
    """

    means: tuple[float, ...]
    kind: str
    best_arm: int
    gaps: tuple[float, ...]
    min_gap: float

    @property
    def n_arms(self) -> int:
        return len(self.means)

    @property
    def best_mean(self) -> float:
        return self.means[self.best_arm]

    def means_array(self) -> np.ndarray:
        return np.asarray(self.means, dtype=np.float64)

    def gaps_array(self) -> np.ndarray:
        return np.asarray(self.gaps, dtype=np.float64)


def make_instance(means, kind: str = "bernoulli") -> BanditInstance:
    """Build a bandit instance from arm means.

    Requires at least two arms, means in [0, 1], and a unique best arm.
    """
    means = tuple(float(m) for m in means)
    if len(means) < 2:
        raise ValueError(f"need at least 2 arms, got {len(means)}")
    if any(not (0.0 <= m <= 1.0) for m in means):
        raise ValueError(f"arm means must lie in [0, 1], got {means}")
    if kind not in SUPPORTED_KINDS:
        raise ValueError(f"unsupported distribution kind {kind!r} (supported: {SUPPORTED_KINDS})")
    best = max(means)
    if sum(1 for m in means if m == best) != 1:
        raise ValueError("no unique best arm: the maximum mean is attained more than once")
    best_arm = means.index(best)
    gaps = tuple(best - m for m in means)
    min_gap = min(g for g in gaps if g > 0.0)
    return BanditInstance(means=means, kind=kind, best_arm=best_arm, gaps=gaps, min_gap=min_gap)


@dataclass
class RewardTape:
    """Pre-sampled rewards, one row of 2*horizon cells per arm.

    Cells are immutable once sampled; ``cursors[k]`` counts how many cells
    of arm k have been consumed.
    """

    cells: np.ndarray
    cursors: np.ndarray
    horizon: int
    seed: tuple[int, ...]

    @property
    def n_arms(self) -> int:
        return self.cells.shape[0]

    def draw(self, arm: int) -> float:
        return tape_draw(self, arm)


def _sample_cells(instance: BanditInstance, horizon: int, rng: np.random.Generator) -> np.ndarray:
    # P(u < mu) = mu for u ~ U[0, 1), so mu = 1.0 yields the constant cell 1.0.
    u = rng.random((instance.n_arms, 2 * horizon))
    return (u < instance.means_array()[:, None]).astype(np.float64)


def sample_tape(instance: BanditInstance, horizon: int, seed) -> RewardTape:
    """Sample a fresh tape; deterministic in (instance, horizon, seed)."""
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    key = seed_key(seed)
    cells = _sample_cells(instance, horizon, rng_stream(key, STREAM_TAPE))
    return RewardTape(
        cells=cells,
        cursors=np.zeros(instance.n_arms, dtype=np.int64),
        horizon=horizon,
        seed=key,
    )


def tape_draw(tape: RewardTape, arm: int) -> float:
    """Consume the next cell of one arm and advance its cursor."""
    pos = tape.cursors[arm]
    if pos >= tape.cells.shape[1]:
        raise RuntimeError(f"reward tape exhausted for arm {arm} (cursor {pos})")
    tape.cursors[arm] += 1
    return float(tape.cells[arm, pos])


@dataclass
class SharedHistory:
    """Per-arm reward samples visible to the policies.

    Only counts and running sums are needed by every policy in this
    package (they are all order-oblivious); the full sample lists are kept
    only when ``keep_samples`` is set, for debugging and invariant tests.
    """

    counts: np.ndarray
    sums: np.ndarray
    total: int = 0
    samples: list[list[float]] | None = None

    def __init__(self, n_arms: int, keep_samples: bool = False):
        self.counts = np.zeros(n_arms, dtype=np.int64)
        self.sums = np.zeros(n_arms, dtype=np.float64)
        self.total = 0
        self.samples = [[] for _ in range(n_arms)] if keep_samples else None

    @property
    def n_arms(self) -> int:
        return len(self.counts)

    def add(self, arm: int, reward: float) -> "SharedHistory":
        self.counts[arm] += 1
        self.sums[arm] += reward
        self.total += 1
        if self.samples is not None:
            self.samples[arm].append(reward)
        return self

    def mean(self, arm: int) -> float:
        return empirical_mean(self, arm)

    def means(self) -> np.ndarray:
        return np.where(self.counts > 0, self.sums / np.maximum(self.counts, 1), math.inf)


def history_update(history: SharedHistory, arm: int, reward: float) -> SharedHistory:
    """Record one reward sample for one arm."""
    return history.add(arm, reward)


def empirical_mean(history: SharedHistory, arm: int) -> float:
    """Mean of the samples for one arm; +inf for an arm with no samples.

    The infinity sentinel makes unsampled arms win every argmax, which is
    how the forced first pull of each arm is realized deterministically.
    """
    c = history.counts[arm]
    if c == 0:
        return math.inf
    return float(history.sums[arm] / c)
