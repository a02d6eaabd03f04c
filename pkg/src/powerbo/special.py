"""Scalar special functions shared by the acquisition and surrogate layers.

Everything here is a pure function of floats, safe for unrestricted
concurrent use.  The confluent hypergeometric series is implemented
directly because its use is confined to a narrow, well-conditioned
parameter range (``b`` in {1/2, 3/2}, ``x <= 0``); gamma and normal-CDF
evaluations delegate to the C library.
"""

import math

__all__ = [
    "SeriesConvergenceError",
    "log_gamma",
    "std_normal_pdf",
    "std_normal_cdf",
    "kummer_1f1",
    "student_scaled_pdf",
    "log_student_scaled_pdf",
]

SQRT_2PI = math.sqrt(2.0 * math.pi)
_LOG_SQRT_PI = 0.5 * math.log(math.pi)


class SeriesConvergenceError(RuntimeError):
    """A series evaluation failed to reach tolerance within its term cap."""


def log_gamma(x):
    """Natural log of the gamma function for ``x > 0``.

    Raises
    ------
    ValueError
        If ``x <= 0`` (the reflection region is out of scope here).
    """
    if x <= 0.0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def std_normal_pdf(w):
    """Density of the standard normal distribution at ``w``."""
    return math.exp(-0.5 * w * w) / SQRT_2PI


def std_normal_cdf(w):
    """Distribution function of the standard normal, via erfc.

    Using the complementary error function keeps full accuracy in the
    lower tail (``w`` large and negative).
    """
    return 0.5 * math.erfc(-w / math.sqrt(2.0))


def _kummer_series(a, b, x, max_terms, rtol):
    """Plain Taylor series of 1F1(a; b; x); all-positive for a, b, x > 0."""
    term = 1.0
    total = 1.0
    for k in range(max_terms):
        term *= (a + k) / (b + k) * x / (k + 1.0)
        total += term
        if abs(term) <= rtol * abs(total):
            return total
    raise SeriesConvergenceError(
        f"1F1 series did not converge for a={a}, b={b}, x={x} "
        f"within {max_terms} terms"
    )


def kummer_1f1(a, b, x, max_terms=500, rtol=1e-16):
    """Confluent hypergeometric function 1F1(a; b; x).

    For ``x < 0`` the evaluation goes through Kummer's transformation
    ``1F1(a; b; x) = exp(x) * 1F1(b - a; b; -x)`` so the series is summed
    with a positive argument, avoiding the catastrophic cancellation of
    the alternating series.  Intended range: ``b`` in {1/2, 3/2},
    ``a`` in [-8, 1], ``x`` in [-50, 0].

    Raises
    ------
    ValueError
        If ``b`` is zero or a negative integer (poles of 1F1).
    SeriesConvergenceError
        If the series fails to reach ``rtol`` within ``max_terms`` terms.
    """
    if b <= 0.0 and b == math.floor(b):
        raise ValueError(f"1F1 undefined for non-positive integer b={b}")
    if x == 0.0:
        return 1.0
    if x < 0.0:
        return math.exp(x) * _kummer_series(b - a, b, -x, max_terms, rtol)
    return _kummer_series(a, b, x, max_terms, rtol)


def log_student_scaled_pdf(m, z):
    """Log of :func:`student_scaled_pdf`; stable for large ``m`` or ``z``."""
    if m <= 0.0:
        raise ValueError(f"degrees of freedom must be positive, got {m}")
    return (
        math.lgamma(0.5 * (m + 1.0))
        - math.lgamma(0.5 * m)
        - _LOG_SQRT_PI
        - 0.5 * (m + 1.0) * math.log1p(z * z)
    )


def student_scaled_pdf(m, z):
    """Scaled Student-t density with ``m`` degrees of freedom.

    q_m(z) = Gamma((m+1)/2) / (sqrt(pi) Gamma(m/2)) * (1 + z^2)^(-(m+1)/2)

    This parametrization is unit-free in ``z`` and has variance
    ``1 / (m - 2)`` (for ``m > 2``), so a predictive law written as
    ``q_dof((y - mu)/sqrt(V)) / sqrt(V)`` has variance ``V / (dof - 2)``.
    """
    return math.exp(log_student_scaled_pdf(m, z))
