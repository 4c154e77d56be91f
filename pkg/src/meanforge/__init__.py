"""Dyadic refinements of the Young inequality for numbers, operators and Hilbert-Schmidt norms."""
from .dyadic import DEFAULT_DEPTH, DyadicSchedule, make_schedule, parse_weight, reflect_schedule
from .hsnorm import (HSBreakdown, HSInstance, baseline_hs, direct_breakdown, entrywise_oracle,
                     hs_refined_lower, hs_refined_upper)
from .linalg import (DomainError, EigenDecomposition, as_hermitian, classify, eigh,
                     fractional_power, hs_norm, loewner_compare, matrix_function)
from .opmeans import (geometric_harmonic_chain, geometric_mean, operator_heinz_bounds,
                      operator_means, operator_refinement_sum, refined_operator_young)
from .scalar import (SeriesEvaluation, baseline_bounds, heinz_refinements, refined_young_lower,
                     refined_young_reverse, squared_refinements, weighted_means)
from .verdict import InequalityVerdict

__version__ = "0.1.0"
