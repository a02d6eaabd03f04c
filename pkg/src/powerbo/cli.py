"""Command-line front end: configuration, sweeps, persistence, plot data.

Subcommands
-----------
bench       benchmark sweep; emits per-step rows (CSV) and regret curves (JSON)
toy         1-D toy sweep; emits rows and best-so-far curves
tp-compare  paired GP/TP runs per seed; emits rows and the log-regret-ratio index
acq-table   dimensionless acquisition grids for external plotting

Configs are single JSON documents; the named presets pin the full-scale
experiment protocols.  Flags override config fields.  Everything is
deterministic given the config: reruns produce byte-identical CSVs.

Exit codes: 0 success, 1 config error, 2 run failures occurred (logged,
sweep continued).
"""

import argparse
import csv
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import objectives
from .acqopt import SearchBudget
from .acquisition import Policy, power_improvement_scaled
from .harness import (
    BENCH_PROTOCOL,
    ExperimentConfig,
    TOY_PROTOCOL,
    aggregate,
    regret_trace,
    run_bo,
    tp_gp_index,
)

__all__ = ["main", "cmd_bench", "cmd_toy", "cmd_tp_compare", "cmd_acq_table", "PRESETS"]

logger = logging.getLogger(__name__)

RESULT_COLUMNS = (
    "task", "surrogate", "policy", "param", "seed",
    "phase", "step", "point", "value", "best_so_far", "regret",
)

BENCH_TASKS = (
    "himmelblau-2d", "eggholder-2d", "hartmann-3d",
    "ackley-3d", "levy-4d", "michalewicz-4d",
)

_BASELINES = (
    {"kind": "random"},
    {"kind": "ei"},
    {"kind": "pi"},
    {"kind": "eps-ei", "epsilon": 0.1},
    {"kind": "ucb", "ucb_nu": 1.0, "ucb_delta": 0.05},
)

PRESETS = {
    "toy-paper": {
        "tasks": ["toy-f1", "toy-f2"],
        "policies": [{"kind": "power-improvement", "p": p} for p in (0.0, 1.0, 3.0, 6.0, 9.0, 12.0)],
        "surrogate": "gp",
        "n_init": TOY_PROTOCOL.n_init,
        "n_iter": TOY_PROTOCOL.n_iter,
        "n_seeds": TOY_PROTOCOL.n_seeds,
        "seed0": 0,
    },
    "bench-paper": {
        "tasks": list(BENCH_TASKS),
        "policies": list(_BASELINES)
        + [{"kind": "power-improvement", "p": p} for p in (0.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0)],
        "surrogate": "gp",
        "n_init": BENCH_PROTOCOL.n_init,
        "n_iter": BENCH_PROTOCOL.n_iter,
        "n_seeds": BENCH_PROTOCOL.n_seeds,
        "seed0": 0,
    },
    "tp-paper": {
        "tasks": list(BENCH_TASKS),
        "policies": [{"kind": "power-improvement", "p": p} for p in (0.5, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0)],
        "surrogate": "gp",  # tp-compare pairs each run with its TP twin
        "n_init": BENCH_PROTOCOL.n_init,
        "n_iter": BENCH_PROTOCOL.n_iter,
        "n_seeds": BENCH_PROTOCOL.n_seeds,
        "seed0": 0,
    },
}

_CONFIG_DEFAULTS = {
    "surrogate": "gp",
    "n_init": 3,
    "n_iter": 50,
    "n_seeds": 64,
    "seed0": 0,
    "budget": {"n_raw": None, "n_refine": 8, "max_local_steps": 200},
    "refit_restarts": 8,
    "workers": 1,
    "out_dir": "results",
    "include_init_steps": False,
}


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


def policy_from_dict(d):
    try:
        return Policy(**d)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad policy {d!r}: {exc}") from exc


def policy_to_dict(policy):
    out = {"kind": policy.kind}
    for name in ("p", "epsilon", "ucb_nu", "ucb_delta"):
        val = getattr(policy, name)
        if val is not None:
            out[name] = val
    return out


def normalize_config(raw):
    """Fill defaults and validate; raises ConfigError on any problem."""
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    cfg = dict(_CONFIG_DEFAULTS)
    cfg["budget"] = dict(_CONFIG_DEFAULTS["budget"])
    for key, val in raw.items():
        if key == "budget":
            cfg["budget"].update(val)
        elif key in ("tasks", "policies") or key in _CONFIG_DEFAULTS:
            cfg[key] = val
        else:
            raise ConfigError(f"unknown config field {key!r}")
    if not cfg.get("tasks"):
        raise ConfigError("config must list at least one task")
    for task in cfg["tasks"]:
        if task not in objectives.TASK_NAMES:
            raise ConfigError(f"unknown task {task!r}")
    if not cfg.get("policies"):
        raise ConfigError("config must list at least one policy")
    cfg["policies"] = [policy_to_dict(policy_from_dict(p)) for p in cfg["policies"]]
    if cfg["surrogate"] not in ("gp", "tp"):
        raise ConfigError(f"surrogate must be 'gp' or 'tp', got {cfg['surrogate']!r}")
    for key in ("n_init", "n_iter", "n_seeds", "seed0", "refit_restarts", "workers"):
        if not isinstance(cfg[key], int):
            raise ConfigError(f"{key} must be an integer")
    return cfg


def serialize_config(cfg):
    return json.dumps(cfg, indent=2, sort_keys=True) + "\n"


def load_config(args):
    if args.config and args.preset:
        raise ConfigError("pass either --config or --preset, not both")
    if args.preset:
        if args.preset not in PRESETS:
            raise ConfigError(f"unknown preset {args.preset!r}; known: {', '.join(PRESETS)}")
        raw = json.loads(json.dumps(PRESETS[args.preset]))
    elif args.config:
        try:
            raw = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
    else:
        raise ConfigError("one of --config or --preset is required")
    for name in ("seeds", "workers", "out_dir"):
        val = getattr(args, name.replace("-", "_"), None)
        if val is not None:
            raw["n_seeds" if name == "seeds" else name] = val
    if getattr(args, "include_init_steps", False):
        raw["include_init_steps"] = True
    return normalize_config(raw)


def _expand(cfg, surrogate=None):
    budget = SearchBudget(**cfg["budget"])
    return [
        (
            task,
            policy_from_dict(pd),
            ExperimentConfig(
                task=task,
                policy=policy_from_dict(pd),
                surrogate=surrogate or cfg["surrogate"],
                n_init=cfg["n_init"],
                n_iter=cfg["n_iter"],
                n_seeds=cfg["n_seeds"],
                seed0=cfg["seed0"],
                budget=budget,
                refit_restarts=cfg["refit_restarts"],
            ),
        )
        for task in cfg["tasks"]
        for pd in cfg["policies"]
    ]


def _safe_run(job):
    config, seed = job
    try:
        return True, run_bo(config, seed)
    except Exception as exc:  # run-level fault; the sweep continues
        return False, f"{config.task}/{config.policy.label()}/seed {seed}: {exc!r}"


def _execute(jobs, workers):
    """Run (config, seed) jobs, preserving job order in the results."""
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_safe_run, jobs, chunksize=1))
    return [_safe_run(j) for j in jobs]


def _fmt(x):
    return repr(float(x))


def _policy_param(policy):
    for name in ("p", "epsilon", "ucb_nu"):
        val = getattr(policy, name)
        if val is not None:
            return _fmt(val)
    return ""


def _record_rows(task, surrogate, policy, seed, record):
    true_max = task.true_max
    for i in range(record.values.size):
        init = i < record.n_init
        yield (
            task.name,
            surrogate,
            policy.kind,
            _policy_param(policy),
            seed,
            "init" if init else "iter",
            (i + 1) if init else (i + 1 - record.n_init),
            ";".join(_fmt(c) for c in record.points[i]),
            _fmt(record.values[i]),
            _fmt(record.best_so_far[i]),
            _fmt(max(true_max - record.best_so_far[i], 0.0)),
        )


def _write_rows(path, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULT_COLUMNS)
        writer.writerows(rows)


def _curve(record, task, metric, include_init):
    start = 0 if include_init else record.n_init
    best = record.best_so_far[start:]
    if metric == "regret":
        return np.maximum(task.true_max - best, 0.0)
    return best


def _sweep(cfg, metric, out_rows, out_curves):
    """Shared engine of cmd_bench / cmd_toy."""
    matrix = _expand(cfg)
    seeds = [cfg["seed0"] + i for i in range(cfg["n_seeds"])]
    jobs = [(econf, s) for (_, _, econf) in matrix for s in seeds]
    results = _execute(jobs, cfg["workers"])

    rows, curves, failures = [], [], []
    idx = 0
    for task_name, policy, econf in matrix:
        task = objectives.benchmark(task_name)
        per_seed = []
        for seed in seeds:
            ok, payload = results[idx]
            idx += 1
            if not ok:
                failures.append(payload)
                continue
            rows.extend(_record_rows(task, econf.surrogate, policy, seed, payload))
            per_seed.append(_curve(payload, task, metric, cfg["include_init_steps"]))
        if per_seed:
            mean, std, stderr = aggregate(per_seed)
            curves.append({
                "task": task_name,
                "surrogate": econf.surrogate,
                "policy": policy.kind,
                "p": policy.p,
                "step": list(range(1, mean.size + 1)),
                "mean": [float(v) for v in mean],
                "std": [float(v) for v in std],
                "stderr": [float(v) for v in stderr],
            })

    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_rows(out_dir / out_rows, rows)
    (out_dir / out_curves).write_text(json.dumps(curves, indent=2, sort_keys=True) + "\n")
    (out_dir / "config.json").write_text(serialize_config(cfg))
    for msg in failures:
        logger.error("run failed: %s", msg)
    return 2 if failures else 0


def cmd_bench(cfg):
    """Benchmark sweep: regret curves per (task, policy)."""
    return _sweep(cfg, "regret", "rows.csv", "aggregates.json")


def cmd_toy(cfg):
    """Toy sweep: best-so-far curves per (task, policy)."""
    return _sweep(cfg, "best_so_far", "rows.csv", "aggregates.json")


def cmd_tp_compare(cfg):
    """Paired GP/TP sweep and the per-seed log-regret-ratio index."""
    gp_matrix = _expand(cfg, surrogate="gp")
    tp_matrix = _expand(cfg, surrogate="tp")
    seeds = [cfg["seed0"] + i for i in range(cfg["n_seeds"])]
    jobs = [(econf, s) for (_, _, econf) in gp_matrix + tp_matrix for s in seeds]
    results = _execute(jobs, cfg["workers"])
    half = len(gp_matrix) * len(seeds)

    rows, failures = [], []
    by_task = {}
    for mi, (task_name, policy, _) in enumerate(gp_matrix):
        task = objectives.benchmark(task_name)
        indices = []
        for si, seed in enumerate(seeds):
            ok_g, rec_g = results[mi * len(seeds) + si]
            ok_t, rec_t = results[half + mi * len(seeds) + si]
            for ok, rec, surro in ((ok_g, rec_g, "gp"), (ok_t, rec_t, "tp")):
                if ok:
                    rows.extend(_record_rows(task, surro, policy, seed, rec))
                else:
                    failures.append(rec)
            if ok_g and ok_t:
                indices.append(tp_gp_index(regret_trace(rec_t, task), regret_trace(rec_g, task)))
        entry = by_task.setdefault(task_name, {"task": task_name, "p": [], "index_mean": [],
                                               "index_stderr": [], "per_seed": []})
        if indices:
            entry["p"].append(policy.p)
            entry["index_mean"].append(float(np.mean(indices)))
            entry["index_stderr"].append(
                float(np.std(indices, ddof=1) / np.sqrt(len(indices))) if len(indices) > 1 else 0.0
            )
            entry["per_seed"].append([float(v) for v in indices])

    out_dir = Path(cfg["out_dir"])
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_rows(out_dir / "rows.csv", rows)
    payload = [by_task[t] for t in cfg["tasks"] if t in by_task]
    (out_dir / "tp_index.json").write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    (out_dir / "config.json").write_text(serialize_config(cfg))
    for msg in failures:
        logger.error("run failed: %s", msg)
    return 2 if failures else 0


def cmd_acq_table(p_values, w_grid, sigma_grid, out_dir):
    """Acquisition-shape grids as CSV for external plotting.

    ``dimensionless.csv`` holds (w, p, scaled value); ``unit_gain.csv``
    holds (sigma, p, alpha_p(gain=1, sigma)^min(1/p,1)).
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "dimensionless.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("w", "p", "value"))
        for p in p_values:
            vals = power_improvement_scaled(w_grid, p, saturate=True)
            for w, v in zip(w_grid, np.atleast_1d(vals)):
                writer.writerow((_fmt(w), _fmt(p), _fmt(v)))
    with open(out_dir / "unit_gain.csv", "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(("sigma", "p", "value"))
        for p in p_values:
            sig = np.asarray(sigma_grid, dtype=float)
            scaled = power_improvement_scaled(1.0 / sig, p, saturate=True)
            # alpha_p(gain=1, sigma)^min(1/p,1) = sigma^min(1,p) * scaled form
            vals = sig ** min(1.0, p) * scaled
            for s, v in zip(sigma_grid, np.atleast_1d(vals)):
                writer.writerow((_fmt(s), _fmt(p), _fmt(v)))
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(prog="powerbo", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_run_flags(sp):
        sp.add_argument("--config", help="path to a JSON experiment config")
        sp.add_argument("--preset", help=f"named preset: {', '.join(PRESETS)}")
        sp.add_argument("--seeds", type=int, help="override the number of seeds")
        sp.add_argument("--workers", type=int, help="parallel run workers")
        sp.add_argument("--out-dir", dest="out_dir", help="output directory")
        sp.add_argument("--include-init-steps", action="store_true",
                        help="include initialization draws in aggregate curves")

    for name in ("bench", "toy", "tp-compare"):
        add_run_flags(sub.add_parser(name))

    sp = sub.add_parser("acq-table")
    sp.add_argument("--p-values", default="0,0.5,1,2,4,8,15",
                    help="comma-separated powers")
    sp.add_argument("--w-min", type=float, default=-6.0)
    sp.add_argument("--w-max", type=float, default=6.0)
    sp.add_argument("--w-points", type=int, default=61)
    sp.add_argument("--sigma-min", type=float, default=0.02)
    sp.add_argument("--sigma-max", type=float, default=5.0)
    sp.add_argument("--sigma-points", type=int, default=100)
    sp.add_argument("--out-dir", dest="out_dir", default="results")
    return parser


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "acq-table":
            p_values = [float(tok) for tok in args.p_values.split(",") if tok.strip()]
            w_grid = np.linspace(args.w_min, args.w_max, args.w_points)
            sigma_grid = np.linspace(args.sigma_min, args.sigma_max, args.sigma_points)
            return cmd_acq_table(p_values, w_grid, sigma_grid, args.out_dir)
        cfg = load_config(args)
        handler = {"bench": cmd_bench, "toy": cmd_toy, "tp-compare": cmd_tp_compare}[args.command]
        return handler(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
