from ._tailsim import (
    empirical_ccdf,
    hill_estimator,
    lower_incomplete_gamma,
    pareto_mean,
    pk_mean_waiting,
    run_genie,
    run_simulation,
    sample_pareto,
    service_ccdf,
    verify_tail_index,
    waiting_tail_asymptote,
)

__all__ = [
    "empirical_ccdf",
    "hill_estimator",
    "lower_incomplete_gamma",
    "pareto_mean",
    "pk_mean_waiting",
    "run_genie",
    "run_simulation",
    "sample_pareto",
    "service_ccdf",
    "verify_tail_index",
    "waiting_tail_asymptote",
]
