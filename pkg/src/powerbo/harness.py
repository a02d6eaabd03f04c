"""Sequential BO loop, seeded experiment protocol and summary metrics.

A run draws its initial design, then alternates hyperparameter refitting
(after every observation), surrogate fitting, acquisition maximization
and noiseless evaluation.  All randomness flows from the single run seed
through spawned child streams, so a run is reproducible bit for bit and
paired GP/TP runs under the same seed share their initial design.
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import objectives
from .acqopt import SearchBudget, select_next
from .acquisition import AcquisitionContext, Policy
from .gp import Dataset, gp_fit, gp_optimize_hyperparams
from .kernels import FactorizationError
from .tp import tp_fit, tp_optimize_hyperparams

__all__ = [
    "ExperimentConfig",
    "RunRecord",
    "RegretTrace",
    "ProtocolSpec",
    "TOY_PROTOCOL",
    "BENCH_PROTOCOL",
    "run_bo",
    "regret_trace",
    "aggregate",
    "tp_gp_index",
    "run_many",
]

logger = logging.getLogger(__name__)

REGRET_FLOOR = 1e-12  # keeps the TP/GP log-ratio index finite at zero regret


@dataclass(frozen=True)
class ProtocolSpec:
    """Initial design size, sequential evaluations and seed count."""

    n_init: int
    n_iter: int
    n_seeds: int


TOY_PROTOCOL = ProtocolSpec(n_init=2, n_iter=60, n_seeds=64)
BENCH_PROTOCOL = ProtocolSpec(n_init=3, n_iter=50, n_seeds=64)


@dataclass(frozen=True)
class ExperimentConfig:
    task: str
    policy: Policy
    surrogate: str = "gp"
    n_init: int = 3
    n_iter: int = 50
    n_seeds: int = 64
    seed0: int = 0
    budget: SearchBudget = field(default_factory=SearchBudget)
    refit_restarts: int = 8

    def __post_init__(self):
        if self.surrogate not in ("gp", "tp"):
            raise ValueError(f"surrogate must be 'gp' or 'tp', got {self.surrogate!r}")
        if self.n_init < 1 or self.n_iter < 1 or self.n_seeds < 1:
            raise ValueError("n_init, n_iter and n_seeds must all be >= 1")


@dataclass(frozen=True, eq=False)
class RunRecord:
    """One seeded run: evaluated points, values and per-step fit summaries."""

    points: np.ndarray          # (n_init + n_iter, d)
    values: np.ndarray          # (n_init + n_iter,)
    best_so_far: np.ndarray     # running maximum, same length
    hyperparam_trace: tuple     # per-iteration (length_scale, amplitude, nu-or-None)
    n_init: int
    fallback_steps: tuple = ()  # iterations that fell back to a random point


@dataclass(frozen=True, eq=False)
class RegretTrace:
    """Gap to the true optimum after each post-initialization step."""

    regret: np.ndarray


def _fit_surrogate(config, data, rng, warm):
    if config.surrogate == "gp":
        params = gp_optimize_hyperparams(data, restarts=config.refit_restarts, rng=rng, warm_start=warm)
        return gp_fit(data, params), params, (params.length_scale, params.amplitude, None)
    params, nu = tp_optimize_hyperparams(
        data, restarts=config.refit_restarts, rng=rng, warm_start=warm,
    )
    return tp_fit(data, params, nu), (params, nu), (params.length_scale, params.amplitude, nu)


def run_bo(config, seed):
    """Execute one seeded BO run; deterministic given (config, seed)."""
    task = objectives.benchmark(config.task)
    rng = np.random.default_rng(seed)
    X = rng.random((config.n_init, task.dim))
    values = [task.evaluate(x) for x in X]
    points = [x for x in X]
    data = Dataset(np.array(points), np.array(values))

    trace = []
    fallbacks = []
    warm = None
    needs_model = config.policy.kind != "random"
    for t in range(1, config.n_iter + 1):
        fit_rng, sel_rng, fb_rng = rng.spawn(3)
        ctx = AcquisitionContext(incumbent=float(np.max(data.y)), step=t, dim=task.dim)
        if needs_model:
            try:
                model, warm, summary = _fit_surrogate(config, data, fit_rng, warm)
                trace.append(summary)
                x_next = select_next(config.policy, model, ctx, config.budget, sel_rng)
            except FactorizationError:
                logger.warning("surrogate fit failed at step %d (seed %d); random fallback", t, seed)
                trace.append(None)
                fallbacks.append(t)
                x_next = fb_rng.random(task.dim)
        else:
            trace.append(None)
            x_next = select_next(config.policy, None, ctx, config.budget, sel_rng)
        data = data.append(x_next, task.evaluate(x_next))

    return RunRecord(
        points=data.X,
        values=data.y,
        best_so_far=np.maximum.accumulate(data.y),
        hyperparam_trace=tuple(trace),
        n_init=config.n_init,
        fallback_steps=tuple(fallbacks),
    )


def regret_trace(record, task):
    """Per-step regret over the post-initialization steps, clipped at zero.

    The running best includes the initial design, so the trace starts
    from the state the first sequential evaluation sees.
    """
    best = record.best_so_far[record.n_init:]
    return RegretTrace(np.maximum(task.true_max - best, 0.0))


def aggregate(curves):
    """Element-wise mean, sample std and standard error over equal-length curves.

    Returns
    -------
    (mean, std, stderr) arrays; a single curve aggregates with zero spread.
    """
    arr = np.asarray([np.asarray(c, dtype=float) for c in curves])
    if arr.ndim != 2:
        raise ValueError("curves must share one length")
    mean = arr.mean(axis=0)
    if arr.shape[0] < 2:
        std = np.zeros_like(mean)
    else:
        std = arr.std(axis=0, ddof=1)
    return mean, std, std / np.sqrt(arr.shape[0])


def tp_gp_index(trace_tp, trace_gp, floor=REGRET_FLOOR):
    """Mean log regret ratio of paired TP and GP runs; negative favors TP.

    (1/L) sum_t log(max(regret_tp, floor) / max(regret_gp, floor))
    """
    rtp = np.asarray(trace_tp.regret if isinstance(trace_tp, RegretTrace) else trace_tp, dtype=float)
    rgp = np.asarray(trace_gp.regret if isinstance(trace_gp, RegretTrace) else trace_gp, dtype=float)
    if rtp.shape != rgp.shape:
        raise ValueError("paired traces must have equal length")
    if not floor > 0.0:
        raise ValueError("floor must be positive")
    return float(np.mean(np.log(np.maximum(rtp, floor) / np.maximum(rgp, floor))))


def _run_job(args):
    config, seed = args
    return run_bo(config, seed)


def run_many(config, seeds=None, workers=1):
    """Run one config across its seed range; order of results is by seed.

    ``seeds`` defaults to ``seed0 .. seed0 + n_seeds - 1``.  With
    ``workers > 1`` runs execute in a process pool; collection order is
    fixed by the seed index regardless of completion order.
    """
    if seeds is None:
        seeds = [config.seed0 + i for i in range(config.n_seeds)]
    jobs = [(config, s) for s in seeds]
    if workers and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_run_job, jobs))
    return [_run_job(j) for j in jobs]
