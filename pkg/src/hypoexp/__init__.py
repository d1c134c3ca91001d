"""Hypoexponential distributions and the exponential characterization verifier."""

from .core import (
    BINOMIAL_CAP,
    DISTINCTNESS_TOL,
    HypoexpDistribution,
    RateVector,
    ScaleVector,
    WeightVector,
    binomial_weights,
    complete_homogeneous,
    lagrange_weights,
    validate_rates,
    validate_scales,
    weights_from_scales,
)
from .series import (
    COMPOSITION_BUDGET,
    Series,
    composition_count,
    enumerate_compositions,
    leibniz_coefficient,
    product_of_scaled,
)
from .characterize import (
    DEFAULT_ORDER,
    DEFAULT_TOL,
    ExponentialVerdict,
    Lemma2Report,
    ResidualReport,
    StructuralCoefficients,
    c_coefficients,
    d_coefficients,
    forward_solve_theorem1,
    forward_solve_theorem2,
    is_exponential_series,
    lemma2_check,
    residual_h,
    residual_q,
)
from .oracles import (
    DEFAULT_SEED,
    GridDensity,
    TestReport,
    convolve_numeric,
    exponentiality_test,
    ks_critical,
    ks_distance,
    mc_weighted_sum,
)
from . import errors

__all__ = [
    "BINOMIAL_CAP",
    "COMPOSITION_BUDGET",
    "DEFAULT_ORDER",
    "DEFAULT_SEED",
    "DEFAULT_TOL",
    "DISTINCTNESS_TOL",
    "ExponentialVerdict",
    "GridDensity",
    "HypoexpDistribution",
    "Lemma2Report",
    "RateVector",
    "ResidualReport",
    "ScaleVector",
    "Series",
    "StructuralCoefficients",
    "TestReport",
    "WeightVector",
    "binomial_weights",
    "c_coefficients",
    "complete_homogeneous",
    "composition_count",
    "convolve_numeric",
    "d_coefficients",
    "enumerate_compositions",
    "errors",
    "exponentiality_test",
    "forward_solve_theorem1",
    "forward_solve_theorem2",
    "is_exponential_series",
    "ks_critical",
    "ks_distance",
    "lagrange_weights",
    "lemma2_check",
    "leibniz_coefficient",
    "mc_weighted_sum",
    "product_of_scaled",
    "residual_h",
    "residual_q",
    "validate_rates",
    "validate_scales",
    "weights_from_scales",
]
