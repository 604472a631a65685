"""Sparse L^p approximation by random sampling, with exhaustive checks of
the Khintchine and Marcinkiewicz-Zygmund moment bounds behind it."""

from .cls_sparsifier import (
    SparsificationInstance,
    SparsificationResult,
    approximation_error,
    bad_set_measure_exhaustive,
    choose_L,
    empirical_approximant,
    expected_error_exhaustive,
    make_instance,
    sampling_measure,
    sparsify,
    target_function,
)
from .core_space import (
    DiscreteProbabilitySpace,
    lp_norm,
    make_coefficients,
    make_function_table,
    make_space,
    signum,
    weighted_mean,
)
from .khintchine import (
    haagerup_constant,
    khintchine_bound_check,
    khintchine_sum_even_exact,
    khintchine_sum_exhaustive,
    multinomial_ratio_max,
)
from .marcinkiewicz import (
    CenteredFamily,
    center_check,
    mz_lhs_exhaustive,
    mz_monte_carlo,
    mz_rhs_exhaustive,
    symmetrization_lhs,
)

__version__ = "0.1.0"

__all__ = [
    "CenteredFamily",
    "DiscreteProbabilitySpace",
    "SparsificationInstance",
    "SparsificationResult",
    "approximation_error",
    "bad_set_measure_exhaustive",
    "center_check",
    "choose_L",
    "empirical_approximant",
    "expected_error_exhaustive",
    "haagerup_constant",
    "khintchine_bound_check",
    "khintchine_sum_even_exact",
    "khintchine_sum_exhaustive",
    "lp_norm",
    "make_coefficients",
    "make_function_table",
    "make_instance",
    "make_space",
    "multinomial_ratio_max",
    "mz_lhs_exhaustive",
    "mz_monte_carlo",
    "mz_rhs_exhaustive",
    "sampling_measure",
    "signum",
    "sparsify",
    "symmetrization_lhs",
    "target_function",
    "weighted_mean",
]
