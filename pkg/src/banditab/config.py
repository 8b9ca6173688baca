"""Experiment configuration: a single YAML file with explicit keys.

Defaults mirror the standard two-arm setup: Bernoulli means (0.8, 0.2),
horizon 100, 10,000 replications, exploration constant C = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .core import BanditInstance, make_instance
from .policies import PolicySpec
from .runner import RUN_MODES, check_run_setup

DEFAULT_MEANS = (0.8, 0.2)
DEFAULT_HORIZON = 100
DEFAULT_REPS = 10_000
DEFAULT_C = 1.0
DEFAULT_SEED = 0

KNOWN_METRICS = ("curves", "summary", "condition12")


class ConfigError(ValueError):
    """A configuration file failed validation."""


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    mode: str
    instance: BanditInstance
    spec1: PolicySpec
    spec2: PolicySpec | None
    horizon: int | None
    horizons: tuple[int, ...] | None
    replications: int
    seed: int
    metrics: tuple[str, ...] = ("curves",)
    out: str | None = None

    def specs(self) -> tuple[PolicySpec, ...]:
        return (self.spec1,) if self.spec2 is None else (self.spec1, self.spec2)


def _policy_from(value, where: str) -> PolicySpec:
    if not isinstance(value, dict):
        raise ConfigError(f"{where} must be a mapping with a 'kind' key")
    d = dict(value)
    if d.get("kind") == "egreedy" and "c" not in d:
        d["c"] = DEFAULT_C
    try:
        return PolicySpec.from_dict(d)
    except ValueError as e:
        raise ConfigError(f"{where}: {e}") from e


def config_from_dict(raw: dict, strict: bool = False) -> ExperimentConfig:
    """Validate a parsed mapping and fill defaults."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a mapping")
    known = {
        "experiment", "mode", "instance", "spec1", "spec2",
        "horizon", "horizons", "replications", "seed", "metrics", "out",
    }
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")

    mode = raw.get("mode", "joint")
    if mode not in RUN_MODES:
        raise ConfigError(f"mode must be one of {RUN_MODES}, got {mode!r}")

    inst_raw = raw.get("instance") or {}
    means = inst_raw.get("means", list(DEFAULT_MEANS))
    kind = inst_raw.get("kind", "bernoulli")
    try:
        instance = make_instance(means, kind)
    except ValueError as e:
        raise ConfigError(f"instance: {e}") from e

    if "spec1" not in raw:
        raise ConfigError("spec1 is required")
    spec1 = _policy_from(raw["spec1"], "spec1")
    spec2 = _policy_from(raw["spec2"], "spec2") if raw.get("spec2") is not None else None
    if mode in ("joint", "one_way") and spec2 is None:
        raise ConfigError(f"mode {mode!r} requires both spec1 and spec2")
    try:
        check_run_setup((spec1,) if spec2 is None else (spec1, spec2), instance, mode)
    except ValueError as e:
        raise ConfigError(str(e)) from e

    if "horizon" in raw and "horizons" in raw:
        raise ConfigError("give either 'horizon' or 'horizons', not both")
    horizons = None
    horizon = None
    if "horizons" in raw:
        horizons = tuple(int(h) for h in raw["horizons"])
        if any(h < 1 for h in horizons):
            raise ConfigError("horizons must all be >= 1")
    else:
        horizon = int(raw.get("horizon", DEFAULT_HORIZON))
        if horizon < 1:
            raise ConfigError(f"horizon must be >= 1, got {horizon}")

    replications = int(raw.get("replications", DEFAULT_REPS))
    if replications < 1:
        raise ConfigError(f"replications must be >= 1, got {replications}")

    if "seed" not in raw:
        if strict:
            raise ConfigError("seed is required in strict mode")
        seed = DEFAULT_SEED
    else:
        seed = int(raw["seed"])
        if seed < 0:
            raise ConfigError(f"seed must be nonnegative, got {seed}")

    metrics = tuple(raw.get("metrics", ["curves"]))
    unknown_metrics = set(metrics) - set(KNOWN_METRICS)
    if unknown_metrics:
        raise ConfigError(f"unknown metrics: {sorted(unknown_metrics)} (known: {KNOWN_METRICS})")
    if "condition12" in metrics and (mode != "joint" or spec2 is None or spec2.kind != "greedy"):
        raise ConfigError("the condition12 metric needs mode joint with greedy as spec2")

    return ExperimentConfig(
        experiment=str(raw.get("experiment", "experiment")),
        mode=mode,
        instance=instance,
        spec1=spec1,
        spec2=spec2,
        horizon=horizon,
        horizons=horizons,
        replications=replications,
        seed=seed,
        metrics=metrics,
        out=raw.get("out"),
    )


def parse_config(path, strict: bool = False) -> ExperimentConfig:
    """Load and validate a YAML experiment config."""
    text = Path(path).read_text()
    try:
        raw = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ConfigError(f"not valid YAML: {e}") from e
    return config_from_dict(raw, strict=strict)


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """Mapping form of a config; parse(serialize(cfg)) == cfg."""
    d: dict = {
        "experiment": cfg.experiment,
        "mode": cfg.mode,
        "instance": {"means": list(cfg.instance.means), "kind": cfg.instance.kind},
        "spec1": cfg.spec1.to_dict(),
        "replications": cfg.replications,
        "seed": cfg.seed,
        "metrics": list(cfg.metrics),
    }
    if cfg.spec2 is not None:
        d["spec2"] = cfg.spec2.to_dict()
    if cfg.horizons is not None:
        d["horizons"] = list(cfg.horizons)
    else:
        d["horizon"] = cfg.horizon
    if cfg.out is not None:
        d["out"] = cfg.out
    return d


def serialize_config(cfg: ExperimentConfig, path) -> None:
    Path(path).write_text(yaml.safe_dump(config_to_dict(cfg), sort_keys=False))
