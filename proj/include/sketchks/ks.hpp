#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "sketchks/approx_cdf.hpp"
#include "sketchks/gk_sketch.hpp"

namespace sketchks {

/// Result of a two-sample KS test.
struct KsOutcome {
  double d = 0.0;              // KS distance (exact or estimated)
  double d_error_bound = 0.0;  // 0 for the exact test
  double p_value = 1.0;
  std::int64_t n = 0;
  std::int64_t m = 0;
  double alpha = 0.05;
  bool reject = false;  // p_value <= alpha
};

/// How precisely the KS distance must be known for a test at level alpha.
struct TestPrecision {
  double alpha = 0.05;
  double beta = 0.0;  // p-value precision; 0 when phi was given directly
  double phi = 0.0;   // required precision in D_KS

  /// phi derived from (alpha, beta) for sample sizes n and m.
  static TestPrecision from_alpha_beta(double alpha, double beta, std::int64_t n, std::int64_t m);
  static TestPrecision from_phi(double alpha, double phi);
};

/// Exact two-sample KS distance between right-continuous empirical CDFs.
double exact_ks_distance(std::span<const double> x, std::span<const double> y);

/// Exact distance for samples that are already sorted ascending.
double exact_ks_distance_sorted(std::span<const double> x, std::span<const double> y);

/// Largest |F1 - F2| over the union of both CDFs' knots, taking each CDF's own
/// knot probability at its knots. Within delta1 + delta2 of the exact distance.
double approx_two_sample_ks(const ApproxCdf& cdf1, const ApproxCdf& cdf2);

/// Kolmogorov survival function 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
double qks(double lambda);

/// Asymptotic significance of distance d between samples of sizes n and m.
double p_value(double d, std::int64_t n, std::int64_t m);

/// Distance whose p_value equals alpha.
double d_crit(double alpha, std::int64_t n, std::int64_t m);

/// Precision in D_KS that keeps the test's p-value within beta around alpha.
double phi_for_test(double alpha, double beta, std::int64_t n, std::int64_t m);

/// KS distance read directly off two sealed GK sketches: at every stored value
/// of either sketch the midpoint of each sketch's rank bounds estimates its CDF.
double lall_ks(const QuantileSketch& sketch1, const QuantileSketch& sketch2);

/// Builds the outcome for distance d: p-value and decision at alpha.
KsOutcome make_outcome(double d, double error_bound, std::int64_t n, std::int64_t m, double alpha);

/// Full approximate test together with the two CDFs it was computed from.
struct ApproxKsRun {
  KsOutcome outcome;
  ApproxCdf cdf_x;
  ApproxCdf cdf_y;
};

ApproxKsRun run_test_detailed(std::span<const double> x, std::span<const double> y,
                              const TestPrecision& precision);

/// Approximate two-sample KS test at the given precision.
KsOutcome run_test(std::span<const double> x, std::span<const double> y,
                   const TestPrecision& precision);

/// JSON object with keys d_ks, d_error_bound, p_value, n, m, alpha, reject.
std::string to_json(const KsOutcome& outcome);

}  // namespace sketchks
