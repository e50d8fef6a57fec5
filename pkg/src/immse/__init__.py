"""Rate and MMSE trade-offs of MMSE-constrained codes on the Gaussian channel."""

from .curves import Log, PiecewiseCurve, Rational, Zero
from .disturbance import (compare_measures, effective_alpha, max_rate_disturbance,
                          rate_disturbance_point)
from .finite_length import (FiniteLengthParams, fano_mi_lower_bound,
                            finite_length_bound_printed, finite_length_mmse_lower_bound)
from .gaussian import binary_entropy, gaussian_capacity, gaussian_mmse, q_function
from .superposition import (Constraint, InfeasibleError, SuperpositionDesign, alpha_to_beta,
                            beta_to_alpha, equivalent_gaussian_variance, make_design,
                            max_rate_multi, max_rate_single, mi_curve, mmse_curve,
                            mmse_lower_bound_asymptotic, optimal_profile, prune_constraints,
                            closed_form_rate)

__version__ = "0.1.0"
