"""Matern-5/2 covariance, Gram-matrix assembly and Cholesky with jitter escalation."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky
from scipy.spatial.distance import cdist

__all__ = [
    "KernelParams",
    "FactorizationError",
    "matern52",
    "cross_cov",
    "gram_matrix",
    "cholesky_gram",
    "LOG_LENGTH_SCALE_BOUNDS",
    "LOG_AMPLITUDE_BOUNDS",
]

SQRT5 = math.sqrt(5.0)

# Hyperparameter box for log-space marginal-likelihood searches.  Wide enough
# for unit-hypercube inputs and standardized targets, tight enough to keep
# tiny (<= 5 point) datasets away from degenerate optima.
LOG_LENGTH_SCALE_BOUNDS = (math.log(1e-3), math.log(10.0))
LOG_AMPLITUDE_BOUNDS = (math.log(1e-3), math.log(1e3))

DEFAULT_JITTER_SCALE = 1e-8   # default jitter = 1e-8 * amplitude^2
MAX_JITTER_SCALE = 1e-2       # escalation cap, relative to amplitude^2


class FactorizationError(RuntimeError):
    """Cholesky factorization failed even after jitter escalation."""


@dataclass(frozen=True)
class KernelParams:
    """Isotropic Matern-5/2 hyperparameters (unit-hypercube coordinates).

    ``amplitude`` is the signal standard deviation; ``jitter`` is the
    diagonal stabilizer standing in for a noise term (observations are
    noiseless).  ``jitter=None`` picks the default ``1e-8 * amplitude**2``.
    """

    length_scale: float
    amplitude: float
    jitter: float = field(default=None)

    def __post_init__(self):
        if not self.length_scale > 0.0:
            raise ValueError(f"length_scale must be positive, got {self.length_scale}")
        if not self.amplitude > 0.0:
            raise ValueError(f"amplitude must be positive, got {self.amplitude}")
        if self.jitter is None:
            object.__setattr__(self, "jitter", DEFAULT_JITTER_SCALE * self.amplitude**2)
        elif self.jitter < 0.0:
            raise ValueError(f"jitter must be non-negative, got {self.jitter}")


def matern52(x, x2, params):
    """Matern-5/2 covariance between two points.

    k(r) = s^2 (1 + sqrt(5) r / l + 5 r^2 / (3 l^2)) exp(-sqrt(5) r / l)
    """
    x = np.asarray(x, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    if x.shape != x2.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {x2.shape}")
    r = float(np.linalg.norm(x - x2))
    u = SQRT5 * r / params.length_scale
    return params.amplitude**2 * (1.0 + u + u * u / 3.0) * math.exp(-u)


def cross_cov(X, X2, params):
    """Covariance matrix between two point sets, shape (len(X), len(X2))."""
    X = np.atleast_2d(np.asarray(X, dtype=float))
    X2 = np.atleast_2d(np.asarray(X2, dtype=float))
    u = SQRT5 * cdist(X, X2) / params.length_scale
    return params.amplitude**2 * (1.0 + u + u * u / 3.0) * np.exp(-u)


def gram_matrix(X, params):
    """Symmetric Gram matrix ``K + jitter * I`` over one point set."""
    K = cross_cov(X, X, params)
    K.flat[:: K.shape[0] + 1] += params.jitter
    return K


def cholesky_gram(X, params):
    """Lower Cholesky factor of ``K + jitter * I``, escalating jitter on failure.

    The jitter is doubled (starting from ``params.jitter``) until the
    factorization succeeds or the cap ``1e-2 * amplitude**2`` is passed.

    Returns
    -------
    (L, jitter_used) : lower-triangular factor and the jitter that succeeded.

    Raises
    ------
    FactorizationError
        If no jitter up to the cap yields a positive-definite matrix.
    """
    K = cross_cov(X, X, params)
    jitter = params.jitter if params.jitter > 0.0 else DEFAULT_JITTER_SCALE * params.amplitude**2
    cap = MAX_JITTER_SCALE * params.amplitude**2
    while True:
        Kj = K.copy()
        Kj.flat[:: Kj.shape[0] + 1] += jitter
        try:
            return cholesky(Kj, lower=True, check_finite=False), jitter
        except np.linalg.LinAlgError:
            pass
        jitter *= 2.0
        if jitter > cap:
            raise FactorizationError(
                f"Gram matrix not factorizable up to jitter {cap:g} "
                f"(n={len(K)}, length_scale={params.length_scale:g})"
            )
