#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace sketchks {

/// Parameters of an approximate CDF over a sample of size n.
///
/// knots equi-spaced probabilities are queried with rank error epsilon; the
/// resulting interpolant is within delta of the empirical CDF, where
/// delta >= 1 / (knots - 1) + epsilon.
struct CdfPlan {
  std::int64_t n = 0;
  double delta = 0.0;
  double epsilon = 0.0;
  std::int64_t knots = 0;

  friend bool operator==(const CdfPlan&, const CdfPlan&) = default;
};

/// Unit-slope point of the (knots, epsilon) trade-off: max(0, delta - sqrt(delta / n)).
double eps45(double delta, std::int64_t n);

/// min(ceil(1 / (delta - epsilon) + 1), n).
std::int64_t num_probs(std::int64_t n, double delta, double epsilon);

/// delta = phi / 2, epsilon = eps45(delta, n), knots = num_probs(n, delta, epsilon).
CdfPlan plan_from_phi(double phi, std::int64_t n);

/// Plan with an explicit knot count and epsilon; delta is set to the error bound.
CdfPlan plan_from_knots(std::int64_t n, std::int64_t knots, double epsilon);

/// Throws DomainError unless 3 <= knots <= n, 0 <= epsilon < delta < 1 and
/// 1 / (knots - 1) + epsilon <= delta (to 1e-12).
void validate(const CdfPlan& plan);

/// 1 / (knots - 1) + epsilon.
double error_bound(const CdfPlan& plan);

/// knots probabilities from 1/n to 1 inclusive: 1/n + i (1 - 1/n) / (knots - 1).
std::vector<double> knot_probabilities(std::int64_t n, std::int64_t knots);

/// Piecewise-linear CDF through (quantile_i, prob_i) knots.
class ApproxCdf {
 public:
  ApproxCdf(CdfPlan plan, std::vector<double> probs, std::vector<double> quantiles);

  /// Interpolated probability at x. Below the first knot returns probs[0],
  /// at or above the last returns 1. At a value shared by several knots the
  /// largest of their probabilities is returned.
  double evaluate(double x) const;
  double operator()(double x) const { return evaluate(x); }

  const CdfPlan& plan() const noexcept { return plan_; }
  std::span<const double> probs() const noexcept { return probs_; }
  std::span<const double> quantiles() const noexcept { return quantiles_; }
  std::size_t size() const noexcept { return probs_.size(); }

 private:
  CdfPlan plan_;
  std::vector<double> probs_;
  std::vector<double> quantiles_;
};

/// Builds the approximate CDF of data under plan. epsilon > 0 routes through a
/// QuantileSketch; epsilon == 0 uses exact order statistics at rank ceil(p n).
ApproxCdf build_cdf(std::span<const double> data, const CdfPlan& plan);

/// Empirical CDF (count of values <= x) / n of an ascending-sorted sample.
double empirical_cdf(std::span<const double> sorted, double x);

}  // namespace sketchks
