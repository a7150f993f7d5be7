"""Risk- and price-constrained investment over decision laws."""

from uirisk.invest.experiment import best_known_value, prop61_experiment, sample_schedule
from uirisk.invest.problem import (
    InvestProblem,
    InvestProblemSpec,
    Utility,
    constraints,
    default_problem,
    objective,
    order_statistic_weights,
    problem_from_spec,
)
from uirisk.invest.solver import solve_eps

__all__ = [
    "InvestProblem",
    "InvestProblemSpec",
    "Utility",
    "best_known_value",
    "constraints",
    "default_problem",
    "objective",
    "order_statistic_weights",
    "problem_from_spec",
    "prop61_experiment",
    "sample_schedule",
    "solve_eps",
]
