"""Named experiment presets and deterministic CSV emission.

Curve CSVs carry one row per (slot, timestep); grid CSVs one row per
(v1, v2) cell. All floats are written with 17 significant digits and the
header comment records everything needed to re-run the file exactly.
"""

from __future__ import annotations

import csv
from pathlib import Path

from .batch import run_batch
from .config import DEFAULT_MEANS
from .core import make_instance
from .experiments import individual_grid, joint_grid, rate_sweep, regret_curve
from .policies import PolicySpec

CURVE_HEADER = [
    "experiment_id", "mode", "algo_slot", "policy_kind",
    "alpha", "C", "m", "gamma", "t", "mean_regret", "se", "reps",
]

GRID_HEADER_ALPHA = ["alpha1", "alpha2", "mean_diff", "se", "prob_correct", "prob_se", "reps"]
GRID_HEADER_GAMMA = ["gamma1", "gamma2", "mean_diff", "se", "prob_correct", "prob_se", "reps"]

ALPHA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
GAMMA_GRID = (0.1, 0.25, 0.5, 0.75, 0.9)
HORIZON_GRID = (250, 500, 1000, 2000, 4000)
PRIOR_SIZE = 5.0

PRESET_NAMES = (
    "fig2a", "fig2b", "fig3_egreedy", "fig3_ucb",
    "fig4_egreedy", "fig4_ucb", "fig5", "exp3_oneway",
)


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def emit_csv(rows, path, header, meta=None) -> Path:
    """Write rows (dicts keyed by header names) byte-stably.

    ``meta`` key/value pairs go into leading '#' comment lines so the file
    is self-describing; readers skip those lines.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        for key, value in (meta or {}).items():
            fh.write(f"# {key}={value}\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row.get(col)) for col in header])
    return path


def read_csv(path) -> tuple[list[str], list[dict]]:
    """Read an emitted CSV back: (header, rows as string dicts)."""
    with open(path, newline="") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    reader = csv.reader(lines)
    header = next(reader)
    return header, [dict(zip(header, row)) for row in reader]


def _spec_fields(spec: PolicySpec) -> dict:
    return {
        "policy_kind": spec.kind,
        "alpha": spec.alpha,
        "C": spec.c,
        "m": spec.m,
        "gamma": spec.gamma,
    }


def curve_rows(experiment_id, mode, slot, spec, ts, means, ses, reps) -> list[dict]:
    base = {"experiment_id": experiment_id, "mode": mode, "algo_slot": slot, **_spec_fields(spec)}
    return [
        {**base, "t": int(t), "mean_regret": float(m), "se": float(s), "reps": reps}
        for t, m, s in zip(ts, means, ses)
    ]


def _grid_rows(cells, key1, key2) -> list[dict]:
    return [
        {
            key1: c["v1"], key2: c["v2"],
            "mean_diff": c["mean_diff"], "se": c["se"],
            "prob_correct": c["prob_correct"], "prob_se": c["prob_se"], "reps": c["reps"],
        }
        for c in cells
    ]


def _meta(name, instance, seed, reps, horizon, specs=None, extra=None) -> dict:
    meta = {
        "preset": name,
        "instance_means": ",".join(_fmt(m) for m in instance.means),
        "instance_kind": instance.kind,
        "seed": seed,
        "reps": reps,
        "horizon": horizon,
    }
    if specs:
        for i, s in enumerate(specs, start=1):
            meta[f"spec{i}"] = s.label()
    meta.update(extra or {})
    return meta


def _family_spec(family: str):
    if family == "egreedy":
        return lambda a: PolicySpec("egreedy", alpha=a, c=1.0)
    if family == "ucb":
        return lambda a: PolicySpec("ucb", alpha=a)
    if family == "thompson":
        return lambda g: PolicySpec("thompson", m=PRIOR_SIZE, gamma=g)
    raise ValueError(f"unknown family {family!r}")


def _pair_curves(name, partner, out_dir, seed, reps):
    """Four cumulative-regret curves: each algorithm individually and jointly."""
    instance = make_instance(DEFAULT_MEANS)
    horizon = 100
    greedy = PolicySpec("greedy")
    rows: list[dict] = []
    ts = range(1, horizon + 1)
    for slot, spec in enumerate((greedy, partner), start=1):
        rs = run_batch("individual", (spec,), instance, horizon, reps, seed, keep_rewards=True)
        mean, se = regret_curve(rs, 0)
        rows += curve_rows(name, "individual", slot, spec, ts, mean, se, reps)
    joint = run_batch("joint", (greedy, partner), instance, horizon, reps, seed, keep_rewards=True)
    for slot in (1, 2):
        mean, se = regret_curve(joint, slot - 1)
        rows += curve_rows(name, "joint", slot, joint.specs[slot - 1], ts, mean, se, reps)
    meta = _meta(name, instance, seed, reps, horizon, specs=(greedy, partner))
    return [emit_csv(rows, Path(out_dir) / f"{name}.csv", CURVE_HEADER, meta)]


def _grid_preset(name, family, modes, out_dir, seed, reps):
    instance = make_instance(DEFAULT_MEANS)
    horizon = 100
    make = _family_spec(family)
    values = GAMMA_GRID if family == "thompson" else ALPHA_GRID
    header = GRID_HEADER_GAMMA if family == "thompson" else GRID_HEADER_ALPHA
    key1, key2 = header[0], header[1]
    paths = []
    for mode in modes:
        grid = joint_grid if mode == "joint" else individual_grid
        cells = grid(make, values, instance, horizon, reps, seed)
        meta = _meta(
            name, instance, seed, reps, horizon,
            extra={"family": family, "mode": mode, "grid": ",".join(_fmt(v) for v in values)},
        )
        suffix = "" if len(modes) == 1 else f"_{mode}"
        paths.append(emit_csv(_grid_rows(cells, key1, key2), Path(out_dir) / f"{name}{suffix}.csv", header, meta))
    return paths


def _exp3_oneway(name, out_dir, seed, reps):
    instance = make_instance(DEFAULT_MEANS)
    specs = (PolicySpec("exp3"), PolicySpec("greedy"))
    curves = rate_sweep("one_way", specs, instance, HORIZON_GRID, reps, seed)
    rows: list[dict] = []
    for slot, curve in enumerate(curves, start=1):
        rows += curve_rows(
            name, "one_way", slot, specs[slot - 1],
            curve.horizons.astype(int), curve.mean_regret, curve.se, reps,
        )
    meta = _meta(
        name, instance, seed, reps, "grid", specs=specs,
        extra={"horizon_grid": ",".join(str(h) for h in HORIZON_GRID)},
    )
    return [emit_csv(rows, Path(out_dir) / f"{name}.csv", CURVE_HEADER, meta)]


def run_preset(name: str, out_dir, seed: int = 0, reps: int | None = None) -> list[Path]:
    """Run one named preset; returns the paths of the CSVs it wrote."""
    if name not in PRESET_NAMES:
        raise ValueError(f"unknown preset {name!r} (known: {PRESET_NAMES})")
    if name == "fig2a":
        return _pair_curves(name, PolicySpec("egreedy", alpha=0.0, c=1.0), out_dir, seed, reps or 10_000)
    if name == "fig2b":
        return _pair_curves(name, PolicySpec("ucb", alpha=0.0), out_dir, seed, reps or 10_000)
    if name == "fig3_egreedy":
        return _grid_preset(name, "egreedy", ("joint",), out_dir, seed, reps or 10_000)
    if name == "fig3_ucb":
        return _grid_preset(name, "ucb", ("joint",), out_dir, seed, reps or 10_000)
    if name == "fig4_egreedy":
        return _grid_preset(name, "egreedy", ("individual", "joint"), out_dir, seed, reps or 10_000)
    if name == "fig4_ucb":
        return _grid_preset(name, "ucb", ("individual", "joint"), out_dir, seed, reps or 10_000)
    if name == "fig5":
        return _grid_preset(name, "thompson", ("individual", "joint"), out_dir, seed, reps or 10_000)
    return _exp3_oneway(name, out_dir, seed, reps or 1_000)
