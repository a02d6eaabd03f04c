"""Inner-loop acquisition maximization over the unit hypercube.

Strategy: score a scrambled low-discrepancy candidate sweep (plus a small
cloud around the best observed point so exploitation is never lost to
sparse sampling), then polish the top candidates with bounded
Nelder-Mead.  Acquisition surfaces for large powers are extremely flat in
exploited regions and multi-modal, so derivative-free restarts beat
gradient ascent here.  Everything is driven by the passed generator:
identical (policy, surrogate, seed, budget) give the identical point.
"""

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.stats import qmc

from . import acquisition as acq
from .gp import GpModel, gp_predict
from .tp import tp_predict

__all__ = ["SearchBudget", "maximize_acquisition", "select_next"]

RAW_PER_DIM = 2048
ANCHOR_CLOUD = 16
ANCHOR_SPREAD = 0.02


@dataclass(frozen=True)
class SearchBudget:
    """Candidate counts for the raw sweep and the local polish."""

    n_raw: int = None  # None -> 2048 * d
    n_refine: int = 8
    max_local_steps: int = 200

    def __post_init__(self):
        if self.n_raw is not None and self.n_raw < 1:
            raise ValueError("n_raw must be positive")
        if self.n_refine < 1 or self.max_local_steps < 1:
            raise ValueError("refinement budget must be positive")

    def raw_count(self, dim):
        return self.n_raw if self.n_raw is not None else RAW_PER_DIM * dim


def maximize_acquisition(scorer, dim, budget=None, rng=None, anchors=None):
    """Best point of a scoring function over [0, 1]^dim.

    ``scorer`` maps an (m, dim) array to (m,) scores (larger is better);
    ``anchors`` are extra candidate points joined to the sweep.  Ties are
    broken toward the lowest candidate index, and the winner of the raw
    sweep is only displaced by a strictly better polished point, so the
    result is independent of scoring order.
    """
    budget = budget or SearchBudget()
    rng = np.random.default_rng(0) if rng is None else rng
    n_raw = budget.raw_count(dim)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # Sobol balance warning for non-power-of-2
        cands = qmc.Sobol(dim, scramble=True, seed=rng).random(n_raw)
    if anchors is not None and len(anchors):
        cands = np.vstack([np.clip(np.atleast_2d(anchors), 0.0, 1.0), cands])
    scores = np.asarray(scorer(cands), dtype=float)
    scores = np.where(np.isnan(scores), -np.inf, scores)
    best_idx = int(np.argmax(scores))
    best_x, best_val = cands[best_idx].copy(), scores[best_idx]

    order = np.argsort(-scores, kind="stable")[: budget.n_refine]
    neg = lambda x: -float(scorer(np.clip(x, 0.0, 1.0)[None, :])[0])
    for i in order:
        res = minimize(
            neg,
            cands[i],
            method="Nelder-Mead",
            bounds=[(0.0, 1.0)] * dim,
            options={"maxiter": budget.max_local_steps, "xatol": 1e-6, "fatol": 1e-12},
        )
        val = -res.fun
        if np.isfinite(val) and val > best_val:
            best_x, best_val = np.clip(res.x, 0.0, 1.0), val
    return best_x


INTERP_FLOOR_MULT = 2.0


def _batch_scorer(policy, model, ctx):
    """Log-domain scorer over candidate batches for one fitted surrogate.

    Observations are noiseless, so predictive spread at (and microscopically
    between) visited points is purely the diagonal stabilizer leaking into
    the posterior.  Spread below that scale is treated as exact
    interpolation (sigma = 0), which stops the selection from endlessly
    polishing an already-interpolated plateau whose true improvement is nil.
    """
    floor = INTERP_FLOOR_MULT * np.sqrt(model.jitter_used) * model.y_scale

    if isinstance(model, GpModel):
        def scorer(X):
            pred = gp_predict(model, np.atleast_2d(X))
            sigma = np.where(pred.sigma <= floor, 0.0, pred.sigma)
            return acq.log_score(policy, type(pred)(pred.mu, sigma), ctx)
    else:
        def scorer(X):
            pred = tp_predict(model, np.atleast_2d(X))
            scale = np.sqrt(pred.V / (pred.dof - 2.0))
            V = np.where(scale <= floor, 0.0, pred.V)
            return acq.log_score(policy, type(pred)(pred.mu, V, pred.dof), ctx)

    return scorer


def select_next(policy, model, ctx, budget=None, rng=None):
    """Choose the next evaluation point under a policy.

    Random search returns a uniform point.  eps-EI draws the epsilon
    branch first (one draw, fixed order) and otherwise maximizes EI.  All
    other kinds maximize their score; the optimizer stream is spawned
    independently of the epsilon stream so eps-EI with epsilon = 0 selects
    exactly like plain EI under the same seed.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    eps_rng, opt_rng = rng.spawn(2)
    if policy.kind == "random":
        return eps_rng.random(ctx.dim)
    if policy.kind == "eps-ei" and eps_rng.random() < policy.epsilon:
        return eps_rng.random(ctx.dim)
    data = model.data
    best_x = data.X[int(np.argmax(data.y))]
    anchors = np.vstack([
        best_x,
        np.clip(best_x + ANCHOR_SPREAD * opt_rng.standard_normal((ANCHOR_CLOUD, ctx.dim)), 0.0, 1.0),
    ])
    return maximize_acquisition(_batch_scorer(policy, model, ctx), ctx.dim, budget, opt_rng, anchors)
