"""Bayesian optimization with the power-improvement acquisition family.

The acquisition alpha_p(x) = E[((y - y_best)_+)^p] interpolates the
probability of improvement (p = 0) and expected improvement (p = 1) and
extends beyond: larger powers weight the upside tail more and explore
harder.  The library provides closed-form Gaussian evaluation, the
Student-t-process generalization, Matern-5/2 GP/TP surrogates, the
sequential optimization harness and a benchmark CLI.
"""

from .acqopt import SearchBudget, maximize_acquisition, select_next
from .acquisition import (
    AcquisitionContext,
    Policy,
    expected_improvement,
    log_normal_improvement_moment,
    log_power_improvement,
    normal_improvement_moment,
    power_improvement,
    power_improvement_scaled,
    power_improvement_student,
    probability_of_improvement,
    score,
    ucb_beta,
    upper_confidence_bound,
)
from .gp import (
    Dataset,
    GaussianPrediction,
    GpModel,
    gp_fit,
    gp_log_marginal_likelihood,
    gp_optimize_hyperparams,
    gp_predict,
)
from .harness import (
    BENCH_PROTOCOL,
    TOY_PROTOCOL,
    ExperimentConfig,
    RegretTrace,
    RunRecord,
    aggregate,
    regret_trace,
    run_bo,
    run_many,
    tp_gp_index,
)
from .kernels import FactorizationError, KernelParams, gram_matrix, matern52
from .objectives import TASK_NAMES, Task, benchmark, toy_f1, toy_f2
from .special import (
    SeriesConvergenceError,
    kummer_1f1,
    log_gamma,
    std_normal_cdf,
    std_normal_pdf,
    student_scaled_pdf,
)
from .tp import (
    StudentPrediction,
    TpModel,
    tp_fit,
    tp_log_likelihood,
    tp_optimize_hyperparams,
    tp_predict,
)

__version__ = "0.1.0"
