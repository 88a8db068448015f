"""Lauricella F_A^(n) evaluation, its decomposition into Gauss functions,
multi-sum identities, and fundamental solutions of a singular elliptic operator."""

from .errors import (ConvergenceConditionError, DegenerateGeometryError, DomainError,
                     ParameterError, PoleError, WeightSignError)
from .fa import (LauricellaParams, decomposed_shell_terms, fa_decomposed, fa_direct,
                 fa_left_shifted, fa_recursive)
from .identities import (SummationParams, lemma2_lhs, lemma2_recurrence,
                         lemma2_recurrence_gap, lemma2_rhs, lemma2_shell_sums,
                         lemma3_lhs, lemma3_rhs, lemma3_sequence, richardson_zero)
from .multiindex import (TriangularMultiIndex, a_weight, b_weight, count_by_weight,
                         enumerate_by_weight)
from .pde import (PointPair, SingularPdeConfig, alpha_bar, fundamental_solution,
                  gamma_coeff, pde_residual, sigma_args)
from .series import DEFAULT_CONTROL, EvalResult, SeriesControl
from .special import (gamma, gauss_2f1, gauss_2f1_batch, gauss_2f1_series,
                      gauss_sum_at_one, log_gamma, log_pochhammer, pochhammer)

__version__ = "0.1.0"
