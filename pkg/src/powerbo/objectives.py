"""Test objectives: two 1-D toys and six classical multimodal benchmarks.

Every task is exposed as a maximization problem on the unit hypercube:
inputs are affinely rescaled from the standard native domain and the
classical functions (usually minimized) are negated.  ``true_max`` values
for tasks without an analytic optimum were certified by a dedicated
oracle run (10^6-sample quasi-random scan plus multi-start polish to
xatol 1e-13) and frozen here.
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["Task", "toy_f1", "toy_f2", "benchmark", "TASK_NAMES"]


@dataclass(frozen=True)
class Task:
    """A named objective on [0, 1]^dim with its certified maximum."""

    name: str
    dim: int
    native_domain: tuple
    true_max: float
    _fn: callable
    _negate: bool

    def to_native(self, u):
        """Map a unit-cube point to native coordinates."""
        u = np.asarray(u, dtype=float)
        lo = np.array([b[0] for b in self.native_domain])
        hi = np.array([b[1] for b in self.native_domain])
        return lo + (hi - lo) * u

    def evaluate(self, u):
        u = np.asarray(u, dtype=float)
        if u.shape != (self.dim,):
            raise ValueError(f"{self.name} expects shape ({self.dim},), got {u.shape}")
        if u.min() < 0.0 or u.max() > 1.0:
            raise ValueError("point outside the unit hypercube")
        val = float(self._fn(self.to_native(u)))
        return -val if self._negate else val


def toy_f1(x):
    """Two-peak 1-D toy: broad peak of height 1 near 0.4, narrow peak of
    height 2 near 0.8."""
    return math.exp(-500.0 * (x - 0.4) ** 4) + 2.0 * math.exp(-(((x - 0.8) / 0.08) ** 4))


def toy_f2(x):
    """Harder variant of :func:`toy_f1`: the high peak narrows to width
    0.05 and moves to 0.88."""
    return math.exp(-500.0 * (x - 0.4) ** 4) + 2.0 * math.exp(-(((x - 0.88) / 0.05) ** 4))


def _himmelblau(v):
    x, y = v
    return (x * x + y - 11.0) ** 2 + (x + y * y - 7.0) ** 2


def _eggholder(v):
    x1, x2 = v
    return -(x2 + 47.0) * math.sin(math.sqrt(abs(x2 + 0.5 * x1 + 47.0))) - x1 * math.sin(
        math.sqrt(abs(x1 - x2 - 47.0))
    )


_HARTMANN3_ALPHA = np.array([1.0, 1.2, 3.0, 3.2])
_HARTMANN3_A = np.array(
    [[3.0, 10.0, 30.0], [0.1, 10.0, 35.0], [3.0, 10.0, 30.0], [0.1, 10.0, 35.0]]
)
_HARTMANN3_P = 1e-4 * np.array(
    [[3689.0, 1170.0, 2673.0], [4699.0, 4387.0, 7470.0],
     [1091.0, 8732.0, 5547.0], [381.0, 5743.0, 8828.0]]
)


def _hartmann3(v):
    inner = np.sum(_HARTMANN3_A * (np.asarray(v) - _HARTMANN3_P) ** 2, axis=1)
    return -float(np.sum(_HARTMANN3_ALPHA * np.exp(-inner)))


def _ackley(v):
    v = np.asarray(v)
    d = v.size
    return (
        -20.0 * math.exp(-0.2 * math.sqrt(float(np.sum(v * v)) / d))
        - math.exp(float(np.sum(np.cos(2.0 * math.pi * v))) / d)
        + 20.0
        + math.e
    )


def _levy(v):
    z = 1.0 + (np.asarray(v) - 1.0) / 4.0
    s = math.sin(math.pi * z[0]) ** 2
    s += float(np.sum((z[:-1] - 1.0) ** 2 * (1.0 + 10.0 * np.sin(math.pi * z[:-1] + 1.0) ** 2)))
    s += (z[-1] - 1.0) ** 2 * (1.0 + math.sin(2.0 * math.pi * z[-1]) ** 2)
    return s


def _michalewicz(v, m=10):
    v = np.asarray(v)
    i = np.arange(1, v.size + 1)
    return -float(np.sum(np.sin(v) * np.sin(i * v * v / math.pi) ** (2 * m)))


# Certified maxima of the rescaled maximization problems (see module
# docstring).  The toys are not negated; the six benchmarks are.
_REGISTRY = {
    "toy-f1": dict(
        dim=1, domain=((0.0, 1.0),), fn=lambda v: toy_f1(float(v[0])),
        negate=False, true_max=2.000003118641248,
    ),
    "toy-f2": dict(
        dim=1, domain=((0.0, 1.0),), fn=lambda v: toy_f2(float(v[0])),
        negate=False, true_max=2.000000000002975,
    ),
    "himmelblau-2d": dict(
        dim=2, domain=((-5.0, 5.0),) * 2, fn=_himmelblau, negate=True, true_max=0.0,
    ),
    "eggholder-2d": dict(
        dim=2, domain=((-512.0, 512.0),) * 2, fn=_eggholder, negate=True,
        true_max=959.6406627208506,
    ),
    "hartmann-3d": dict(
        dim=3, domain=((0.0, 1.0),) * 3, fn=_hartmann3, negate=True,
        true_max=3.862779787332663,
    ),
    "ackley-3d": dict(
        dim=3, domain=((-32.768, 32.768),) * 3, fn=_ackley, negate=True, true_max=0.0,
    ),
    "levy-4d": dict(
        dim=4, domain=((-10.0, 10.0),) * 4, fn=_levy, negate=True, true_max=0.0,
    ),
    "michalewicz-4d": dict(
        dim=4, domain=((0.0, math.pi),) * 4, fn=_michalewicz, negate=True,
        true_max=3.6988570984666445,
    ),
}

TASK_NAMES = tuple(_REGISTRY)


def benchmark(name):
    """Task registry lookup by name; see ``TASK_NAMES`` for valid names."""
    try:
        spec = _REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown task {name!r}; known: {', '.join(TASK_NAMES)}") from None
    return Task(
        name=name,
        dim=spec["dim"],
        native_domain=spec["domain"],
        true_max=spec["true_max"],
        _fn=spec["fn"],
        _negate=spec["negate"],
    )
