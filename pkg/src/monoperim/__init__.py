"""Weighted isoperimetry with monomial weights.

Computes perimeters and volumes of parametric domains against monomial
weights x^A, classifies when the mixed-weight isoperimetric constant
exists, reproduces the degeneration rates of escaping and collapsing
families, and evaluates the sharp constants of the associated Sobolev
inequalities.
"""

from .weight_core import (
    ExponentVector,
    WeightPair,
    as_exponents,
    drop_index,
    drop_two,
    eval_weight,
    in_admissible_cone,
    weight_pair,
)
from .integrate import (
    IntegralEstimate,
    MCEstimate,
    MCSpec,
    QuadratureSpec,
    gauss_weighted_nodes,
    jacobi_rule_01,
    mc_surface,
    mc_volume,
    weighted_surface,
    weighted_volume,
)
from .shapes import (
    Box,
    ConeSlab,
    DegenerateShapeError,
    OrthantBall,
    ShapeFamily,
    TranslatedBall,
    boundary_pieces,
    closed_form_orthant_ball_mass,
    dilate,
    parse_shape,
    unit_orthant_ball_moment,
)
from .isoperimetry import (
    ExistenceVerdict,
    QuotientReport,
    aggregate_reports,
    ball_constant,
    classify_existence,
    conditions_equivalent,
    orthant_reduction_check,
    quotient,
    quotient_tolerance,
    theorem2_constant,
)
from .limits import (
    PowerLawFit,
    SharpRatioResult,
    SweepSchedule,
    boundary_term_breakdown,
    fit_power_law,
    predicted_exponent,
    sharp_ratio_limit,
    sweep,
)
from .sobolev import (
    GridFunction,
    MollifierSpec,
    best_constant,
    best_constant_p1,
    coarea_chain_report,
    coarea_lower_bound_check,
    functional_quotient,
    ibp_inequality_check,
    mollified_indicator,
    standard_bump,
)
from .corpus import standard_corpus
from .checks import CHECK_NAMES, CheckResult, run_check

__version__ = "0.1.0"
