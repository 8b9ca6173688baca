"""Command-line front end.

Subcommands:
  run <config.yaml>        run one configured experiment, write CSVs
  preset <name>            run a named preset sweep
  ratefit <curves.csv>     fit growth rates per curve group
  check-condition12 <cfg>  tail probability of the free-riding condition

Output directory precedence: --out flag, then the config's ``out`` key,
then the BANDITAB_OUT environment variable, then the working directory.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from .batch import run_batch, run_paired_individual
from .config import ConfigError, ExperimentConfig, parse_config
from .experiments import rate_sweep, regret_curve
from .metrics import (
    dm_estimate,
    mean_regret,
    optimal_pull_tail,
    pull_count_threshold,
    regret_difference,
)
from .policies import PolicySpec
from .presets import (
    CURVE_HEADER,
    PRESET_NAMES,
    curve_rows,
    emit_csv,
    read_csv,
    run_preset,
)
from .ratefit import RateCurve, classify_growth

OUT_ENV_VAR = "BANDITAB_OUT"

SUMMARY_HEADER = ["experiment_id", "metric", "mean", "se", "reps"]
RATES_HEADER = ["pair", "mode", "slope", "slope_se", "r2_log", "label", "near_edge"]


def _out_dir(flag_value, cfg_value=None) -> Path:
    out = flag_value or cfg_value or os.environ.get(OUT_ENV_VAR) or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _config_repset(cfg: ExperimentConfig, keep_rewards: bool):
    if cfg.mode == "individual" and cfg.spec2 is not None:
        return run_paired_individual(
            cfg.spec1, cfg.spec2, cfg.instance, cfg.horizon,
            cfg.replications, cfg.seed, keep_rewards,
        )
    return run_batch(
        cfg.mode, cfg.specs(), cfg.instance, cfg.horizon,
        cfg.replications, cfg.seed, keep_rewards,
    )


def _cmd_run(args) -> int:
    cfg = parse_config(args.config, strict=args.strict)
    out = _out_dir(args.out, cfg.out)
    meta = {
        "experiment": cfg.experiment,
        "mode": cfg.mode,
        "instance_means": ",".join(format(m, ".17g") for m in cfg.instance.means),
        "instance_kind": cfg.instance.kind,
        "seed": cfg.seed,
        "reps": cfg.replications,
    }
    for i, s in enumerate(cfg.specs(), start=1):
        meta[f"spec{i}"] = s.label()
    written = []

    if cfg.horizons is not None:
        curves = rate_sweep(
            cfg.mode, cfg.specs(), cfg.instance, cfg.horizons, cfg.replications, cfg.seed
        )
        rows = []
        for slot, curve in enumerate(curves, start=1):
            rows += curve_rows(
                cfg.experiment, cfg.mode, slot, cfg.specs()[slot - 1],
                curve.horizons.astype(int), curve.mean_regret, curve.se, cfg.replications,
            )
        written.append(emit_csv(rows, out / f"{cfg.experiment}_curves.csv", CURVE_HEADER, meta))
    else:
        repset = _config_repset(cfg, keep_rewards="curves" in cfg.metrics)
        if "curves" in cfg.metrics:
            rows = []
            ts = range(1, cfg.horizon + 1)
            for slot in range(repset.n_slots):
                mean, se = regret_curve(repset, slot)
                rows += curve_rows(
                    cfg.experiment, cfg.mode, slot + 1, repset.specs[slot],
                    ts, mean, se, cfg.replications,
                )
            written.append(emit_csv(rows, out / f"{cfg.experiment}_curves.csv", CURVE_HEADER, meta))
        if "summary" in cfg.metrics:
            rows = []
            for slot in range(repset.n_slots):
                for pseudo in (False, True):
                    est = mean_regret(repset, slot, pseudo=pseudo)
                    name = f"{'pseudo' if pseudo else 'realized'}_regret_slot{slot + 1}"
                    rows.append({
                        "experiment_id": cfg.experiment, "metric": name,
                        "mean": est.mean, "se": est.se, "reps": est.reps,
                    })
            if repset.n_slots == 2:
                est = dm_estimate(repset) if repset.mode == "joint" else regret_difference(repset)
                rows.append({
                    "experiment_id": cfg.experiment, "metric": "regret_diff",
                    "mean": est.mean, "se": est.se, "reps": est.reps,
                })
            written.append(emit_csv(rows, out / f"{cfg.experiment}_summary.csv", SUMMARY_HEADER, meta))
        if "condition12" in cfg.metrics:
            print(_condition12_report(cfg, repset))
    for path in written:
        print(path)
    return 0


def _condition12_report(cfg: ExperimentConfig, repset=None) -> str:
    if cfg.mode != "joint" or cfg.spec2 is None or cfg.spec2.kind != "greedy":
        raise ConfigError("condition-12 check needs mode joint with greedy as spec2")
    if repset is not None and repset.mode != "joint":
        repset = None
    est = optimal_pull_tail(
        cfg.spec1, cfg.instance, cfg.horizon, cfg.replications, cfg.seed, repset=repset
    )
    threshold = pull_count_threshold(cfg.instance, cfg.horizon)
    return (
        f"condition-12 tail for {cfg.spec1.label()} with greedy, T={cfg.horizon}:\n"
        f"  P(N_best <= {threshold:.4f}) = {est.mean:.6f} (binomial se {est.se:.6f}, "
        f"reps {est.reps})\n"
        f"  reference scale 1/T^2 = {1.0 / cfg.horizon**2:.2e}"
    )


def _cmd_preset(args) -> int:
    out = _out_dir(args.out)
    for path in run_preset(args.name, out, seed=args.seed, reps=args.reps):
        print(path)
    return 0


def _group_label(key: dict) -> str:
    kind = key["policy_kind"]
    params = [
        f"{name}={key[col]}"
        for col, name in (("alpha", "alpha"), ("C", "C"), ("m", "m"), ("gamma", "gamma"))
        if key[col] != ""
    ]
    inner = f"({','.join(params)})" if params else ""
    return f"slot{key['algo_slot']}:{kind}{inner}"


def _cmd_ratefit(args) -> int:
    header, rows = read_csv(args.csv)
    needed = set(CURVE_HEADER)
    if not needed.issubset(header):
        missing = sorted(needed - set(header))
        raise ConfigError(f"not a curve CSV, missing columns: {missing}")
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        if int(row["t"]) < args.min_t:
            continue
        key = tuple(row[c] for c in ("experiment_id", "mode", "algo_slot", "policy_kind", "alpha", "C", "m", "gamma"))
        groups.setdefault(key, []).append(row)
    out_rows, failures = [], []
    for key, grp in groups.items():
        keyd = dict(zip(("experiment_id", "mode", "algo_slot", "policy_kind", "alpha", "C", "m", "gamma"), key))
        grp.sort(key=lambda r: int(r["t"]))
        try:
            curve = RateCurve(
                horizons=np.array([int(r["t"]) for r in grp], dtype=float),
                mean_regret=np.array([float(r["mean_regret"]) for r in grp]),
                se=np.array([float(r["se"]) for r in grp]),
            )
            cls = classify_growth(curve)
        except ValueError as e:
            failures.append(f"{_group_label(keyd)}: {e}")
            continue
        out_rows.append({
            "pair": f"{keyd['experiment_id']}:{_group_label(keyd)}",
            "mode": keyd["mode"],
            "slope": cls.slope, "slope_se": cls.slope_se,
            "r2_log": cls.r2_log, "label": cls.label,
            "near_edge": str(cls.near_edge).lower(),
        })
    for msg in failures:
        print(f"skipped {msg}", file=sys.stderr)
    if not out_rows:
        raise ConfigError("no curve group could be fitted")
    out_path = Path(args.out) if args.out else Path(args.csv).with_name(Path(args.csv).stem + "_rates.csv")
    emit_csv(out_rows, out_path, RATES_HEADER, {"source": args.csv})
    print(out_path)
    return 0


def _cmd_condition12(args) -> int:
    cfg = parse_config(args.config, strict=args.strict)
    print(_condition12_report(cfg))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="banditab",
        description="Monte Carlo A/B experiments on bandit algorithms under data sharing.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run an experiment from a YAML config")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None)
    p_run.add_argument("--strict", action="store_true", help="require an explicit seed")
    p_run.set_defaults(func=_cmd_run)

    p_preset = sub.add_parser("preset", help="run a named preset")
    p_preset.add_argument("name", choices=PRESET_NAMES)
    p_preset.add_argument("--seed", type=int, default=0)
    p_preset.add_argument("--reps", type=int, default=None)
    p_preset.add_argument("--out", default=None)
    p_preset.set_defaults(func=_cmd_preset)

    p_fit = sub.add_parser("ratefit", help="classify regret growth from a curve CSV")
    p_fit.add_argument("csv")
    p_fit.add_argument("--out", default=None)
    p_fit.add_argument("--min-t", type=int, default=0, help="ignore rows with t below this")
    p_fit.set_defaults(func=_cmd_ratefit)

    p_c12 = sub.add_parser("check-condition12", help="free-riding condition tail probability")
    p_c12.add_argument("config")
    p_c12.add_argument("--strict", action="store_true")
    p_c12.set_defaults(func=_cmd_condition12)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
