"""Exact verification library for free-boundary symmetric-function
processes, their constant-term contour formulas, and the quasi-open
six-vertex strip."""

from .series import (SeriesRing, TruncatedSeries, TruncationPolicy, Variable,
                     VariableTable, assert_even_powers, constant_term,
                     expand_reciprocal, invert_series, poch_finite, poch_inf,
                     poch2_inf, series_records, substitute)
from .partitions import (HL_P, HL_Q, QW_P, QW_Q, as_partition, conjugate,
                         gaussian_binomial, h_weight, h_weight_conjugate,
                         partitions_upto, q_pochhammer, rogers_szego,
                         shifted_h_conjugate, skew_multi, skew_one_var)
from .process import (ProcessSpec, build_ring, chi_pgf_forms, fb_weight,
                      fbhl_marginal, koornwinder_constant,
                      koornwinder_constant_sum, koornwinder_rhs,
                      partition_function_sides, qw_shift_cdf, ring_letters,
                      symmetry_residual, z_infinity, z_n)
from .contour import (build_delta, build_simpler_integrand, cross_check,
                      eval_nice_formula, eval_simpler_formula)
from .lattice import (NumericStrip, SamplerConfig, FormalStrip, mc_sample,
                      quasi_open_distribution, stabilized_distribution,
                      theorem_matching_report, yang_baxter_residuals)
from .report import VerificationReport

__all__ = [n for n in dir() if not n.startswith("_")]
