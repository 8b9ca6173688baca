"""Arm-selection rules: greedy, epsilon-greedy, UCB, EXP3, Thompson sampling.

Every selection function is a pure function of the visible per-arm counts
and reward sums plus any private state, and accepts either a single
history (arrays of shape ``(K,)``) or a batch of histories stacked along a
leading axis (``(reps, K)``). The batched Monte Carlo engine and the
per-step reference runner therefore share one implementation of the
arithmetic, which keeps them bit-identical.

Randomized policies never draw from a generator directly; they consume
pre-drawn uniforms handed in by the runner. The draw budget per timestep
is fixed (it does not depend on the data), so traces are reproducible and
common random numbers survive any change in arm choices.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.special import betaincinv

from .core import BanditInstance

POLICY_KINDS = ("greedy", "egreedy", "ucb", "exp3", "thompson")

# Policies that select arms from the shared reward history. EXP3 is not one
# of them: its importance weights need the sampling probability of each of
# its own pulls, which shared samples do not carry.
HISTORY_BASED = ("greedy", "egreedy", "ucb", "thompson")


class StepKind(enum.IntEnum):
    """Why an arm was selected at one timestep."""

    FORCED = 0      # some arm had no samples yet
    EXPLORE = 1     # internal randomization picked the arm
    GREEDY_STEP = 2 # deterministic argmax given the history


@dataclass(frozen=True)
class PolicySpec:
    """Which algorithm to run, with its parameters.

    alpha: exploration level in [0, 1] for egreedy/ucb (0 = optimal, 1 = most).
    c: multiplicative exploration constant for egreedy.
    m, gamma: Thompson prior size and skew; the better arm gets prior
        Beta(m*(1-gamma), m*gamma) and every other arm the mirrored prior.
    """

    kind: str
    alpha: float | None = None
    c: float | None = None
    m: float | None = None
    gamma: float | None = None

    def __post_init__(self):
        validate_spec(self)

    def label(self) -> str:
        if self.kind == "egreedy":
            return f"egreedy(alpha={self.alpha:g},C={self.c:g})"
        if self.kind == "ucb":
            return f"ucb(alpha={self.alpha:g})"
        if self.kind == "thompson":
            return f"thompson(m={self.m:g},gamma={self.gamma:g})"
        return self.kind

    def to_dict(self) -> dict:
        d = {"kind": self.kind}
        for name in ("alpha", "c", "m", "gamma"):
            v = getattr(self, name)
            if v is not None:
                d[name] = v
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PolicySpec":
        unknown = set(d) - {"kind", "alpha", "c", "m", "gamma"}
        if unknown:
            raise ValueError(f"unknown policy spec fields: {sorted(unknown)}")
        if "kind" not in d:
            raise ValueError("policy spec needs a 'kind'")
        return cls(
            kind=d["kind"],
            alpha=None if d.get("alpha") is None else float(d["alpha"]),
            c=None if d.get("c") is None else float(d["c"]),
            m=None if d.get("m") is None else float(d["m"]),
            gamma=None if d.get("gamma") is None else float(d["gamma"]),
        )


def validate_spec(spec: PolicySpec) -> None:
    if spec.kind not in POLICY_KINDS:
        raise ValueError(f"unknown policy kind {spec.kind!r} (known: {POLICY_KINDS})")
    required = {
        "greedy": (),
        "egreedy": ("alpha", "c"),
        "ucb": ("alpha",),
        "exp3": (),
        "thompson": ("m", "gamma"),
    }[spec.kind]
    for name in ("alpha", "c", "m", "gamma"):
        v = getattr(spec, name)
        if name in required and v is None:
            raise ValueError(f"{spec.kind} requires parameter {name!r}")
        if name not in required and v is not None:
            raise ValueError(f"{spec.kind} takes no parameter {name!r}")
    if spec.alpha is not None and not 0.0 <= spec.alpha <= 1.0:
        raise ValueError(f"alpha must be in [0, 1], got {spec.alpha}")
    if spec.c is not None and not spec.c > 0.0:
        raise ValueError(f"C must be positive, got {spec.c}")
    if spec.m is not None and not spec.m > 0.0:
        raise ValueError(f"prior size m must be positive, got {spec.m}")
    if spec.gamma is not None and not 0.0 <= spec.gamma <= 1.0:
        raise ValueError(f"gamma must be in [0, 1], got {spec.gamma}")


# ---------------------------------------------------------------------------
# Shared helpers


def _empirical_means(counts, sums):
    with np.errstate(invalid="ignore"):
        return np.where(counts > 0, sums / np.maximum(counts, 1), np.inf)


def _first_unsampled(counts):
    """(forced_mask, first unsampled arm index) along the last axis."""
    unsampled = counts == 0
    return unsampled.any(axis=-1), np.argmax(unsampled, axis=-1)


# ---------------------------------------------------------------------------
# Greedy and epsilon-greedy


def greedy_select(counts, sums):
    """Arm with the highest empirical mean.

    Unsampled arms carry mean +inf and therefore win automatically; ties
    (including among several unsampled arms) break to the lowest index.
    """
    return np.argmax(_empirical_means(counts, sums), axis=-1)


def exploration_rate(total_samples, alpha: float, c: float):
    """Exploration probability min{1, C / total^(1-alpha)}."""
    total = np.asarray(total_samples, dtype=np.float64)
    return np.minimum(1.0, c / total ** (1.0 - alpha))


def egreedy_select(counts, sums, alpha: float, c: float, u, j):
    """One epsilon-greedy step.

    ``u`` is this step's uniform draw and ``j`` the uniform arm candidate,
    both consumed whether or not they end up used. If some arm has no
    samples the step is forced onto the lowest-index such arm.

    Returns (arm, StepKind code).
    """
    total = np.maximum(np.asarray(counts).sum(axis=-1), 1)
    eps = exploration_rate(total, alpha, c)
    explore = u < eps
    arm = np.where(explore, j, greedy_select(counts, sums))
    kind = np.where(explore, np.int8(StepKind.EXPLORE), np.int8(StepKind.GREEDY_STEP))
    forced, first = _first_unsampled(counts)
    return np.where(forced, first, arm), np.where(forced, np.int8(StepKind.FORCED), kind)


# ---------------------------------------------------------------------------
# UCB


def confidence_radius(total_samples, arm_samples, alpha: float):
    """Confidence radius sqrt(2*(total^alpha - 1) / (alpha * s)).

    At alpha = 0 this is sqrt(2*log(total)/s), the limit of the general
    form; expm1 keeps the two branches consistent for tiny alpha.
    """
    total = np.asarray(total_samples, dtype=np.float64)
    s = np.asarray(arm_samples, dtype=np.float64)
    if alpha == 0.0:
        return np.sqrt(2.0 * np.log(total) / s)
    return np.sqrt(2.0 * np.expm1(alpha * np.log(total)) / (alpha * s))


def ucb_select(counts, sums, alpha: float):
    """Arm with the highest empirical mean plus confidence radius.

    An arm with no samples has an infinite radius and wins outright, so
    the forced first pull of each arm needs no special casing here.
    """
    counts = np.asarray(counts)
    total = counts.sum(axis=-1, keepdims=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        radius = confidence_radius(np.maximum(total, 2), np.maximum(counts, 1), alpha)
        score = np.where(counts > 0, _empirical_means(counts, sums) + radius, np.inf)
    return np.argmax(score, axis=-1)


# ---------------------------------------------------------------------------
# EXP3


@dataclass
class Exp3State:
    """Cumulative importance-weighted reward estimates, per arm.

    ``y_hat`` has shape (K,) for a single run or (reps, K) for a batch.
    ``prev_rate`` is the learning rate of the previous timestep, used in
    the softmax; ``t`` counts completed timesteps.
    """

    y_hat: np.ndarray
    prev_rate: float = 0.0
    t: int = 0


def exp3_init(n_arms: int, reps: int | None = None) -> Exp3State:
    shape = (n_arms,) if reps is None else (reps, n_arms)
    return Exp3State(y_hat=np.zeros(shape, dtype=np.float64))


def exp3_rate(t: int, n_arms: int) -> float:
    """Learning/exploration rate min{1/K, K^(-2/3) * t^(-1/3)}."""
    if t < 1:
        return 0.0
    return min(1.0 / n_arms, n_arms ** (-2.0 / 3.0) * t ** (-1.0 / 3.0))


def exp3_probabilities(state: Exp3State, t: int, n_arms: int) -> np.ndarray:
    """Sampling distribution: floored softmax of rate-scaled estimates.

    rho(k) = (1 - K*eps_t) * softmax(eps_{t-1} * y_hat)(k) + eps_t, so the
    result is a probability vector with floor eps_t on every arm.
    """
    eps = exp3_rate(t, n_arms)
    z = exp3_rate(t - 1, n_arms) * state.y_hat
    z = z - z.max(axis=-1, keepdims=True)
    w = np.exp(z)
    sm = w / w.sum(axis=-1, keepdims=True)
    return (1.0 - n_arms * eps) * sm + eps


def exp3_select(state: Exp3State, t: int, n_arms: int, u):
    """Draw an arm from the EXP3 distribution via inverse CDF on ``u``.

    Returns (arm, sampling probability of that arm).
    """
    rho = exp3_probabilities(state, t, n_arms)
    cum = np.cumsum(rho, axis=-1)
    arm = np.minimum(np.sum(np.expand_dims(u, -1) >= cum, axis=-1), n_arms - 1)
    prob = np.take_along_axis(rho, np.expand_dims(arm, -1), axis=-1).squeeze(-1)
    return arm, prob


def exp3_update(state: Exp3State, arm, reward, prob) -> Exp3State:
    """Add reward/prob to the selected arm's estimate; record the rate."""
    if np.any(np.asarray(prob) <= 0.0):
        raise ValueError("EXP3 update needs a positive sampling probability")
    n_arms = state.y_hat.shape[-1]
    if state.y_hat.ndim == 1:
        state.y_hat[arm] += reward / prob
    else:
        state.y_hat[np.arange(len(state.y_hat)), arm] += reward / prob
    state.t += 1
    state.prev_rate = exp3_rate(state.t, n_arms)
    return state


# ---------------------------------------------------------------------------
# Thompson sampling


@dataclass(frozen=True)
class ThompsonState:
    """Private per-arm Beta prior parameters (a0, b0), never shared."""

    a0: np.ndarray
    b0: np.ndarray


def thompson_priors(spec: PolicySpec, instance: BanditInstance) -> ThompsonState:
    """Priors from (m, gamma): the best arm believes in itself.

    The best arm gets Beta(m*(1-gamma), m*gamma); every other arm gets
    Beta(m*gamma, m*(1-gamma)). gamma = 0.5 with m = 2 recovers the
    uniform Beta(1, 1) prior; all parameters must stay positive, so the
    endpoints gamma in {0, 1} are rejected.
    """
    m, g = spec.m, spec.gamma
    if m * g <= 0.0 or m * (1.0 - g) <= 0.0:
        raise ValueError(f"Beta prior parameters must be positive; m={m}, gamma={g}")
    a0 = np.full(instance.n_arms, m * g, dtype=np.float64)
    b0 = np.full(instance.n_arms, m * (1.0 - g), dtype=np.float64)
    a0[instance.best_arm] = m * (1.0 - g)
    b0[instance.best_arm] = m * g
    return ThompsonState(a0=a0, b0=b0)


def thompson_select(state: ThompsonState, counts, sums, u):
    """Argmax of per-arm posterior draws theta_k ~ Beta(a0+S, b0+F).

    Rewards must be Bernoulli, so S = sum of rewards and F = count - S.
    Draws are produced as Beta quantiles of the uniforms ``u`` (one per
    arm), which pins each draw to one pre-drawn number.
    """
    s = np.asarray(sums)
    f = np.asarray(counts) - s
    theta = betaincinv(state.a0 + s, state.b0 + f, u)
    return np.argmax(theta, axis=-1)


def thompson_step(state: ThompsonState, counts, sums, u):
    """Thompson selection with the forced-pull rule applied on top.

    The uniforms are consumed either way so the draw discipline stays
    fixed. Returns (arm, StepKind code).
    """
    arm = thompson_select(state, counts, sums, u)
    forced, first = _first_unsampled(np.asarray(counts))
    kind = np.where(forced, np.int8(StepKind.FORCED), np.int8(StepKind.EXPLORE))
    return np.where(forced, first, arm), kind
