"""Empirical regret-growth classification from (horizon, mean regret) curves.

A log-log slope near 0 means constant regret, near 1 linear; logarithmic
growth shows up as a small slope together with a near-perfect linear fit
of the raw means against log(horizon). The thresholds are calibration
policy, not theory, so they are all overridable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class Thresholds:
    """Band edges for the growth labels."""

    constant_max: float = 0.08   # slope below this: constant
    log_max: float = 0.25        # slope below this (and good log fit): logarithmic
    linear_min: float = 0.9      # power exponent at or above this: linear
    log_r2_min: float = 0.98     # R^2 of mean-vs-log(T) required for "logarithmic"
    edge_margin: float = 0.02    # flag slopes this close to a band edge


@dataclass
class RateCurve:
    """Mean regret with standard errors on a grid of horizons."""

    horizons: np.ndarray
    mean_regret: np.ndarray
    se: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.horizons = np.asarray(self.horizons, dtype=np.float64)
        self.mean_regret = np.asarray(self.mean_regret, dtype=np.float64)
        self.se = np.asarray(self.se, dtype=np.float64)
        n = len(self.horizons)
        if not (len(self.mean_regret) == len(self.se) == n):
            raise ValueError("horizons, mean_regret and se must have equal length")
        if n < 4:
            raise ValueError(f"need at least 4 horizons to fit a rate, got {n}")
        if np.any(np.diff(self.horizons) <= 0):
            raise ValueError("horizons must be strictly increasing")


@dataclass(frozen=True)
class GrowthClassification:
    label: str  # "constant" | "logarithmic" | "power" | "linear"
    slope: float
    slope_se: float
    r2_log: float
    near_edge: bool

    def describe(self) -> str:
        name = f"power({self.slope:.3f})" if self.label == "power" else self.label
        return name + (" [near band edge]" if self.near_edge else "")


def _ols(x: np.ndarray, y: np.ndarray, w: np.ndarray | None = None):
    """Straight-line fit; returns (slope, intercept, slope SE, R^2)."""
    if w is None:
        w = np.ones_like(x)
    sw = w.sum()
    xm = (w * x).sum() / sw
    ym = (w * y).sum() / sw
    sxx = (w * (x - xm) ** 2).sum()
    slope = (w * (x - xm) * (y - ym)).sum() / sxx
    intercept = ym - slope * xm
    resid = y - (intercept + slope * x)
    dof = len(x) - 2
    sigma2 = (w * resid**2).sum() / dof
    slope_se = math.sqrt(sigma2 / sxx)
    tss = (w * (y - ym) ** 2).sum()
    r2 = 1.0 if tss == 0.0 else 1.0 - (w * resid**2).sum() / tss
    return slope, intercept, slope_se, r2


def loglog_slope(curve: RateCurve, weighted: bool = False) -> tuple[float, float]:
    """OLS slope of log(mean regret) on log(horizon), with its SE.

    ``weighted`` uses weights 1/se^2 on the log scale (se propagated as
    se/mean); the unweighted fit is the default.
    """
    if np.any(curve.mean_regret <= 0.0):
        raise ValueError(
            "log-log fit needs strictly positive mean regrets; "
            "increase replications until every grid point is positive"
        )
    x = np.log(curve.horizons)
    y = np.log(curve.mean_regret)
    w = None
    if weighted:
        rel = curve.se / curve.mean_regret
        if np.any(rel <= 0.0):
            raise ValueError("weighted fit needs positive standard errors")
        w = 1.0 / rel**2
    slope, _, slope_se, _ = _ols(x, y, w)
    return float(slope), float(slope_se)


def log_fit_r2(curve: RateCurve) -> float:
    """R^2 of the raw means regressed on log(horizon)."""
    _, _, _, r2 = _ols(np.log(curve.horizons), curve.mean_regret)
    return float(r2)


def classify_growth(
    curve: RateCurve, thresholds: Thresholds = Thresholds(), weighted: bool = False
) -> GrowthClassification:
    """Label a curve constant, logarithmic, power(s), or linear."""
    slope, slope_se = loglog_slope(curve, weighted=weighted)
    r2 = log_fit_r2(curve)
    th = thresholds
    if slope < th.constant_max:
        label = "constant"
    elif slope < th.log_max and r2 >= th.log_r2_min:
        label = "logarithmic"
    elif slope >= th.linear_min:
        label = "linear"
    else:
        label = "power"
    near = any(
        abs(slope - edge) < th.edge_margin
        for edge in (th.constant_max, th.log_max, th.linear_min)
    )
    return GrowthClassification(
        label=label, slope=slope, slope_se=slope_se, r2_log=r2, near_edge=near
    )
