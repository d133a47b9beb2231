"""Approximate two-sample Kolmogorov-Smirnov tests from quantile sketches."""

from ._core import (
    ApproxCdf,
    CdfPlan,
    IoError,
    KsOutcome,
    ParseError,
    QuantileSketch,
    StateError,
    approx_two_sample_ks,
    build_cdf,
    d_crit,
    derive_seed,
    eps45,
    error_bound,
    exact_ks_distance,
    lall_ks,
    num_probs,
    p_value,
    phi_for_test,
    plan_from_knots,
    plan_from_phi,
    qks,
    run_test,
    sample,
)

__all__ = [
    "ApproxCdf",
    "CdfPlan",
    "IoError",
    "KsOutcome",
    "ParseError",
    "QuantileSketch",
    "StateError",
    "approx_two_sample_ks",
    "build_cdf",
    "d_crit",
    "derive_seed",
    "eps45",
    "error_bound",
    "exact_ks_distance",
    "lall_ks",
    "num_probs",
    "p_value",
    "phi_for_test",
    "plan_from_knots",
    "plan_from_phi",
    "qks",
    "run_test",
    "sample",
]
