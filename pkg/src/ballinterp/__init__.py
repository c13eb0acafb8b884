"""Reconstruction of holomorphic functions on the unit ball of C^2 from their jets on lines."""

from .convergence import ConvergenceReport, GridSpec, convergence_experiment, fit_rate
from .disc1d import DiscConfig, blaschke_eval, disc_defect, disc_interpolant
from .lines import (ConfigError, DomainError, DomainGuard, LineConfig, alpha, capital_n_u,
                    config_from_json, g_eval, hefer_pn, in_domain, validate_config)
from .polyjet import (Jet, NodeCollisionError, NodeSet, Poly, hermite_L, hermite_polynomial,
                      multiset_count, poly_divmod, quotient_power)
from .reconstruct import (LineData, ReconstructionMode, extract_line_data, g_axes_only, g_general,
                          g_single_lines, interp_part_monomial, pv_remainder_monomial, r0_series,
                          r1_series, r2_series, tail_sum)
from .rng import SplitMix64
from .series2d import (TaylorSeries2, build_series, cauchy_coefficient_bound, coefficient_tail_bound,
                       eval2, geometric_product, geometric_sum, line_restriction_jets, slice_sums)

__version__ = "0.1.0"
