"""Student-t process surrogate: predictive law and degrees-of-freedom inference.

The joint law of n observations is the multivariate Student-t with
covariance parametrization

    p(y) = Gamma((nu+n)/2) / ({(nu-2) pi}^{n/2} Gamma(nu/2)) |K|^{-1/2}
           (1 + (y-phi)' K^{-1} (y-phi) / (nu-2))^{-(nu+n)/2},

for which E[y] = phi and cov[y] = K.  The predictive distribution at a
new point is a one-dimensional member of the same family with dof
``nu + n``; unlike a GP, its spread depends on the observed values
through beta = (y-phi)' K^{-1} (y-phi).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_solve, solve_triangular

from .gp import (
    DEFAULT_AMPLITUDE,
    DEFAULT_LENGTH_SCALE,
    Dataset,
    _fill_starts,
    _multistart_minimize,
    _standardization,
)
from .kernels import (
    LOG_AMPLITUDE_BOUNDS,
    LOG_LENGTH_SCALE_BOUNDS,
    KernelParams,
    cholesky_gram,
    cross_cov,
)

__all__ = [
    "StudentPrediction",
    "TpModel",
    "tp_fit",
    "tp_predict",
    "tp_log_likelihood",
    "tp_optimize_hyperparams",
    "DEFAULT_NU",
]

DEFAULT_NU = 5.0

# log(nu - 2) ~ Normal(log 3, 1): keeps nu in a plausible [2.5, 50] band
# a priori while letting the likelihood pull it to either extreme.
NU_PRIOR_LOG_MEAN = math.log(3.0)
NU_PRIOR_LOG_STD = 1.0
LOG_NU_BOUNDS = (math.log(0.1), math.log(1e4))  # bounds on log(nu - 2)

LOG_PI = math.log(math.pi)


@dataclass(frozen=True, eq=False)
class StudentPrediction:
    """Predictive location ``mu``, squared scale ``V`` and dof ``nu + n``.

    The predictive density is ``q_dof((y - mu)/sqrt(V)) / sqrt(V)`` with
    ``q_m`` the scaled Student density, so the predictive variance is
    ``V / (dof - 2)``.
    """

    mu: object
    V: object
    dof: float


@dataclass(frozen=True, eq=False)
class TpModel:
    data: Dataset
    params: KernelParams
    nu: float
    chol: np.ndarray = field(repr=False)
    alpha_vec: np.ndarray = field(repr=False)
    beta: float
    mean_offset: float
    y_scale: float
    jitter_used: float

    def __post_init__(self):
        if not self.nu > 2.0:
            raise ValueError(f"degrees of freedom must exceed 2, got {self.nu}")


def tp_fit(data, params, nu=DEFAULT_NU, standardize=True):
    """Fit the TP surrogate (same mean/standardization policy as the GP)."""
    if not nu > 2.0:
        raise ValueError(f"degrees of freedom must exceed 2, got {nu}")
    mean, scale = _standardization(data.y, standardize)
    resid = (data.y - mean) / scale
    L, jitter_used = cholesky_gram(data.X, params)
    alpha = cho_solve((L, True), resid, check_finite=False)
    beta = float(resid @ alpha)
    return TpModel(data, params, float(nu), L, alpha, beta, mean, scale, jitter_used)


def tp_predict(model, x):
    """Predictive Student law at one point or a batch of points.

    mu = k' K^{-1} (y - phi) + phi
    V  = (nu + beta - 2) * (C - k' K^{-1} k),   dof = nu + n

    ``V`` is clamped at zero against round-off.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    Xq = np.atleast_2d(x)
    ks = cross_cov(Xq, model.data.X, model.params)
    mu = ks @ model.alpha_vec
    v = solve_triangular(model.chol, ks.T, lower=True, check_finite=False)
    gap = model.params.amplitude**2 - np.einsum("ij,ij->j", v, v)
    V = (model.nu + model.beta - 2.0) * np.maximum(gap, 0.0)
    mu = model.mean_offset + model.y_scale * mu
    V = model.y_scale**2 * V
    dof = model.nu + model.data.n
    if single:
        return StudentPrediction(float(mu[0]), float(V[0]), dof)
    return StudentPrediction(mu, V, dof)


def tp_log_likelihood(data, params, nu, mean_offset=None):
    """Log density of the observed values under the joint Student law."""
    if not nu > 2.0:
        raise ValueError(f"degrees of freedom must exceed 2, got {nu}")
    mean = float(np.mean(data.y)) if mean_offset is None else float(mean_offset)
    resid = data.y - mean
    L, _ = cholesky_gram(data.X, params)
    alpha = cho_solve((L, True), resid, check_finite=False)
    beta = float(resid @ alpha)
    logdet = 2.0 * float(np.sum(np.log(np.diag(L))))
    n = data.n
    return float(
        math.lgamma(0.5 * (nu + n))
        - math.lgamma(0.5 * nu)
        - 0.5 * n * (math.log(nu - 2.0) + LOG_PI)
        - 0.5 * logdet
        - 0.5 * (nu + n) * math.log1p(beta / (nu - 2.0))
    )


def _log_nu_prior(log_nu_m2):
    """Log-normal prior density of (nu - 2), evaluated at theta = log(nu - 2)."""
    u = (log_nu_m2 - NU_PRIOR_LOG_MEAN) / NU_PRIOR_LOG_STD
    return -log_nu_m2 - math.log(NU_PRIOR_LOG_STD) - 0.5 * math.log(2.0 * math.pi) - 0.5 * u * u


_TP_BOUNDS = (LOG_LENGTH_SCALE_BOUNDS, LOG_AMPLITUDE_BOUNDS, LOG_NU_BOUNDS)


def tp_optimize_hyperparams(data, restarts=8, rng=None, warm_start=None):
    """MAP fit of (l, s, nu) under the log-normal prior on nu - 2.

    Joint multi-start Nelder-Mead over (log l, log s, log(nu - 2)) on
    standardized targets.  Returns ``(KernelParams, nu)``; datasets with
    fewer than two points return the defaults.
    """
    if data.n < 2:
        return KernelParams(DEFAULT_LENGTH_SCALE, DEFAULT_AMPLITUDE), DEFAULT_NU
    rng = np.random.default_rng(0) if rng is None else rng
    mean, scale = _standardization(data.y, True)
    std_data = Dataset(data.X, (data.y - mean) / scale)

    def neg_objective(theta):
        params = KernelParams(math.exp(theta[0]), math.exp(theta[1]))
        nu = 2.0 + math.exp(theta[2])
        try:
            ll = tp_log_likelihood(std_data, params, nu, mean_offset=0.0)
        except Exception:
            return 1e12
        return -(ll + _log_nu_prior(theta[2]))

    starts = [
        np.array([
            math.log(DEFAULT_LENGTH_SCALE),
            math.log(DEFAULT_AMPLITUDE),
            math.log(DEFAULT_NU - 2.0),
        ])
    ]
    if warm_start is not None:
        prev_params, prev_nu = warm_start
        starts.append(np.array([
            math.log(prev_params.length_scale),
            math.log(prev_params.amplitude),
            math.log(max(prev_nu - 2.0, math.exp(LOG_NU_BOUNDS[0]))),
        ]))
    starts = _fill_starts(starts, restarts, _TP_BOUNDS, rng)
    theta, _ = _multistart_minimize(neg_objective, starts, _TP_BOUNDS)
    return KernelParams(math.exp(theta[0]), math.exp(theta[1])), 2.0 + math.exp(theta[2])
