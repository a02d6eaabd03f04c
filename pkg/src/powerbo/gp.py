"""Exact Gaussian-process regression: fit, prediction, marginal likelihood, refitting.

Targets are standardized internally (zero mean, unit variance) before
fitting so amplitude estimation stays in a comparable range across
objective families; predictions are mapped back to the raw scale.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve, solve_triangular
from scipy.optimize import minimize

from .kernels import (
    LOG_AMPLITUDE_BOUNDS,
    LOG_LENGTH_SCALE_BOUNDS,
    KernelParams,
    cholesky_gram,
    cross_cov,
)

__all__ = [
    "Dataset",
    "GaussianPrediction",
    "GpModel",
    "gp_fit",
    "gp_predict",
    "gp_log_marginal_likelihood",
    "gp_optimize_hyperparams",
    "DEFAULT_LENGTH_SCALE",
    "DEFAULT_AMPLITUDE",
]

DEFAULT_LENGTH_SCALE = 0.3
DEFAULT_AMPLITUDE = 1.0
TARGET_SCALE_FLOOR = 1e-6  # keeps flat data from collapsing the amplitude

LOG2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Dataset:
    """Observed inputs in the unit hypercube with their objective values."""

    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.asarray(self.X, dtype=float))
        y = np.asarray(self.y, dtype=float).ravel()
        if X.shape[0] != y.shape[0]:
            raise ValueError(f"{X.shape[0]} points but {y.shape[0]} values")
        if X.size and (X.min() < 0.0 or X.max() > 1.0):
            raise ValueError("inputs must lie in the unit hypercube")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y)

    @property
    def n(self):
        return self.X.shape[0]

    @property
    def dim(self):
        return self.X.shape[1]

    def append(self, x, value):
        """New dataset with one more observation."""
        x = np.asarray(x, dtype=float).reshape(1, -1)
        return Dataset(np.vstack([self.X, x]), np.append(self.y, float(value)))


@dataclass(frozen=True, eq=False)
class GaussianPrediction:
    """Posterior mean and standard deviation; fields may be scalars or arrays."""

    mu: object
    sigma: object


@dataclass(frozen=True, eq=False)
class GpModel:
    data: Dataset
    params: KernelParams
    chol: np.ndarray = field(repr=False)
    alpha_vec: np.ndarray = field(repr=False)
    mean_offset: float
    y_scale: float
    jitter_used: float


def _standardization(y, standardize):
    mean = float(np.mean(y))
    if standardize:
        scale = float(np.std(y))
        scale = scale if scale > TARGET_SCALE_FLOOR else TARGET_SCALE_FLOOR
    else:
        scale = 1.0
    return mean, scale


def gp_fit(data, params, standardize=True):
    """Fit an exact GP with constant prior mean equal to the target mean."""
    mean, scale = _standardization(data.y, standardize)
    resid = (data.y - mean) / scale
    L, jitter_used = cholesky_gram(data.X, params)
    alpha = cho_solve((L, True), resid, check_finite=False)
    return GpModel(data, params, L, alpha, mean, scale, jitter_used)


def gp_predict(model, x):
    """Posterior mean and standard deviation at one point or a batch.

    Accepts ``x`` of shape (d,) or (m, d); the prediction fields are a
    scalar or an (m,) array accordingly.  Negative variances from
    round-off are clamped to zero.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    Xq = np.atleast_2d(x)
    ks = cross_cov(Xq, model.data.X, model.params)   # (m, n)
    mu = ks @ model.alpha_vec
    v = solve_triangular(model.chol, ks.T, lower=True, check_finite=False)
    var = model.params.amplitude**2 - np.einsum("ij,ij->j", v, v)
    sigma = np.sqrt(np.maximum(var, 0.0))
    mu = model.mean_offset + model.y_scale * mu
    sigma = model.y_scale * sigma
    if single:
        return GaussianPrediction(float(mu[0]), float(sigma[0]))
    return GaussianPrediction(mu, sigma)


def gp_log_marginal_likelihood(data, params, mean_offset=None):
    """Log marginal likelihood of the data under a constant-mean GP.

    -1/2 (y-m)' (K+jI)^{-1} (y-m) - 1/2 log|K+jI| - n/2 log(2 pi),
    with ``m`` defaulting to ``mean(y)``.
    """
    mean = float(np.mean(data.y)) if mean_offset is None else float(mean_offset)
    resid = data.y - mean
    L, _ = cholesky_gram(data.X, params)
    alpha = cho_solve((L, True), resid, check_finite=False)
    logdet = 2.0 * float(np.sum(np.log(np.diag(L))))
    return float(-0.5 * resid @ alpha - 0.5 * logdet - 0.5 * data.n * LOG2PI)


def _lml_standardized(data, standardize=True):
    """Objective closure over (log l, log s) on standardized targets."""
    mean, scale = _standardization(data.y, standardize)
    std_data = Dataset(data.X, (data.y - mean) / scale)

    def neg_lml(theta):
        params = KernelParams(math.exp(theta[0]), math.exp(theta[1]))
        try:
            return -gp_log_marginal_likelihood(std_data, params, mean_offset=0.0)
        except Exception:
            return 1e12

    return neg_lml


_GP_BOUNDS = (LOG_LENGTH_SCALE_BOUNDS, LOG_AMPLITUDE_BOUNDS)


def _multistart_minimize(fun, starts, bounds, max_steps=200):
    """Deterministic multi-start Nelder-Mead; returns the best evaluated point.

    The winner is chosen among every polished optimum *and* every start,
    so the result can never be worse than any start point.
    """
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    best_x, best_f = None, np.inf
    for x0 in starts:
        x0 = np.clip(np.asarray(x0, dtype=float), lo, hi)
        f0 = fun(x0)
        if f0 < best_f:
            best_x, best_f = x0, f0
        res = minimize(
            fun,
            x0,
            method="Nelder-Mead",
            bounds=list(zip(lo, hi)),
            options={"maxiter": max_steps, "xatol": 1e-4, "fatol": 1e-7},
        )
        if res.fun < best_f:
            best_x, best_f = np.clip(res.x, lo, hi), res.fun
    return best_x, best_f


def _fill_starts(starts, restarts, bounds, rng):
    lo = np.array([b[0] for b in bounds])
    hi = np.array([b[1] for b in bounds])
    while len(starts) < restarts:
        starts.append(lo + (hi - lo) * rng.random(len(bounds)))
    return starts[:restarts] if restarts >= 1 else starts[:1]


def gp_optimize_hyperparams(data, restarts=8, rng=None, warm_start=None):
    """Maximize the (standardized-target) marginal likelihood over (l, s).

    Multi-start Nelder-Mead in log space within the kernel bounds; the
    start list is the default heuristic point, the warm start when given,
    and seeded uniform draws up to ``restarts`` total.  Datasets with
    fewer than two points return the defaults.
    """
    if data.n < 2:
        return KernelParams(DEFAULT_LENGTH_SCALE, DEFAULT_AMPLITUDE)
    rng = np.random.default_rng(0) if rng is None else rng
    starts = [np.array([math.log(DEFAULT_LENGTH_SCALE), math.log(DEFAULT_AMPLITUDE)])]
    if warm_start is not None:
        starts.append(np.array([math.log(warm_start.length_scale), math.log(warm_start.amplitude)]))
    starts = _fill_starts(starts, restarts, _GP_BOUNDS, rng)
    theta, _ = _multistart_minimize(_lml_standardized(data), starts, _GP_BOUNDS)
    return KernelParams(math.exp(theta[0]), math.exp(theta[1]))
