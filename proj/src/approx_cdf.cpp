#include "sketchks/approx_cdf.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "sketchks/errors.hpp"
#include "sketchks/gk_sketch.hpp"

namespace sketchks {

double eps45(double delta, std::int64_t n) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw DomainError(fmt::format("delta must lie in (0, 1), got {}", delta));
  }
  if (n < 1) throw DomainError("sample size must be positive");
  return std::max(0.0, delta - std::sqrt(delta / static_cast<double>(n)));
}

std::int64_t num_probs(std::int64_t n, double delta, double epsilon) {
  if (n < 1) throw DomainError("sample size must be positive");
  if (!(epsilon < delta)) {
    throw DomainError(fmt::format("epsilon {} must be below delta {}", epsilon, delta));
  }
  const double a = 1.0 / (delta - epsilon) + 1.0;
  if (a >= static_cast<double>(n)) return n;
  return static_cast<std::int64_t>(std::ceil(a));
}

CdfPlan plan_from_phi(double phi, std::int64_t n) {
  if (!(phi > 0.0 && phi < 2.0)) {
    throw DomainError(fmt::format("KS precision phi must lie in (0, 2), got {}", phi));
  }
  CdfPlan plan;
  plan.n = n;
  plan.delta = phi / 2.0;
  plan.epsilon = eps45(plan.delta, n);
  plan.knots = num_probs(n, plan.delta, plan.epsilon);
  // Samples too small for the requested precision clamp the knot count to n.
  // Use exact quantiles there and report the bound actually achieved.
  if (error_bound(plan) > plan.delta + 1e-12) {
    plan.epsilon = 0.0;
    plan.delta = std::max(plan.delta, error_bound(plan));
  }
  validate(plan);
  return plan;
}

CdfPlan plan_from_knots(std::int64_t n, std::int64_t knots, double epsilon) {
  CdfPlan plan;
  plan.n = n;
  plan.knots = knots;
  plan.epsilon = epsilon;
  if (knots < 2) throw DomainError("a CDF plan needs at least 3 knots");
  plan.delta = error_bound(plan);
  validate(plan);
  return plan;
}

void validate(const CdfPlan& plan) {
  if (plan.n < 3) throw DomainError("a CDF plan needs a sample of at least 3 points");
  if (plan.knots < 3 || plan.knots > plan.n) {
    throw DomainError(fmt::format("knot count {} outside [3, {}]", plan.knots, plan.n));
  }
  if (!(plan.delta > 0.0 && plan.delta < 1.0)) {
    throw DomainError(fmt::format("delta must lie in (0, 1), got {}", plan.delta));
  }
  if (!(plan.epsilon >= 0.0 && plan.epsilon < plan.delta)) {
    throw DomainError(fmt::format("epsilon {} outside [0, delta)", plan.epsilon));
  }
  if (error_bound(plan) > plan.delta + 1e-12) {
    throw DomainError(fmt::format("plan error bound {} exceeds delta {}", error_bound(plan), plan.delta));
  }
}

double error_bound(const CdfPlan& plan) {
  return 1.0 / static_cast<double>(plan.knots - 1) + plan.epsilon;
}

std::vector<double> knot_probabilities(std::int64_t n, std::int64_t knots) {
  const double first = 1.0 / static_cast<double>(n);
  const double step = (1.0 - first) / static_cast<double>(knots - 1);
  std::vector<double> probs(static_cast<std::size_t>(knots));
  for (std::int64_t i = 0; i < knots; ++i) {
    probs[static_cast<std::size_t>(i)] = first + static_cast<double>(i) * step;
  }
  probs.back() = 1.0;
  return probs;
}

ApproxCdf::ApproxCdf(CdfPlan plan, std::vector<double> probs, std::vector<double> quantiles)
    : plan_(plan), probs_(std::move(probs)), quantiles_(std::move(quantiles)) {
  if (probs_.size() != quantiles_.size() || probs_.empty()) {
    throw StateError("approximate CDF needs equally sized, non-empty knot vectors");
  }
  for (std::size_t i = 1; i < probs_.size(); ++i) {
    if (!(probs_[i] > probs_[i - 1])) throw StateError("knot probabilities must be strictly increasing");
    if (quantiles_[i] < quantiles_[i - 1]) throw StateError("knot quantiles must be non-decreasing");
  }
}

double ApproxCdf::evaluate(double x) const {
  const auto upper = std::upper_bound(quantiles_.begin(), quantiles_.end(), x);
  if (upper == quantiles_.begin()) return probs_.front();
  if (upper == quantiles_.end()) return 1.0;

  const auto hi = static_cast<std::size_t>(upper - quantiles_.begin());
  const std::size_t lo = hi - 1;
  // lo is the last knot <= x, i.e. the highest of any tied knots.
  if (quantiles_[lo] == x) return probs_[lo];
  const double t = (x - quantiles_[lo]) / (quantiles_[hi] - quantiles_[lo]);
  return probs_[lo] + t * (probs_[hi] - probs_[lo]);
}

ApproxCdf build_cdf(std::span<const double> data, const CdfPlan& plan) {
  validate(plan);
  if (static_cast<std::int64_t>(data.size()) != plan.n) {
    throw StateError(fmt::format("plan expects {} observations, data has {}", plan.n, data.size()));
  }
  for (double v : data) {
    if (!std::isfinite(v)) throw InputError("CDF input must be finite");
  }

  std::vector<double> probs = knot_probabilities(plan.n, plan.knots);
  std::vector<double> quantiles;
  if (plan.epsilon == 0.0) {
    std::vector<double> sorted(data.begin(), data.end());
    std::sort(sorted.begin(), sorted.end());
    quantiles.reserve(probs.size());
    for (double p : probs) {
      quantiles.push_back(sorted[static_cast<std::size_t>(target_rank(p, plan.n) - 1)]);
    }
  } else {
    QuantileSketch sketch(plan.epsilon);
    sketch.insert(data);
    sketch.seal();
    quantiles = sketch.query_quantiles(probs);
  }
  return ApproxCdf(plan, std::move(probs), std::move(quantiles));
}

double empirical_cdf(std::span<const double> sorted, double x) {
  const auto count = std::upper_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
  return static_cast<double>(count) / static_cast<double>(sorted.size());
}

}  // namespace sketchks
