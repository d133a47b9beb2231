#include "sketchks/ks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "sketchks/errors.hpp"
#include "sketchks/format.hpp"

namespace sketchks {

namespace {

double effective_size(std::int64_t n, std::int64_t m) {
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  return nd * md / (nd + md);
}

void require_sizes(std::int64_t n, std::int64_t m) {
  if (n < 1 || m < 1) throw DomainError(fmt::format("sample sizes must be positive, got {} and {}", n, m));
}

}  // namespace

TestPrecision TestPrecision::from_alpha_beta(double alpha, double beta, std::int64_t n, std::int64_t m) {
  return TestPrecision{alpha, beta, phi_for_test(alpha, beta, n, m)};
}

TestPrecision TestPrecision::from_phi(double alpha, double phi) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(fmt::format("alpha must lie in (0, 1), got {}", alpha));
  if (!(phi > 0.0 && phi < 2.0)) throw DomainError(fmt::format("phi must lie in (0, 2), got {}", phi));
  return TestPrecision{alpha, 0.0, phi};
}

double exact_ks_distance_sorted(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw DomainError("KS distance needs two non-empty samples");
  const double n = static_cast<double>(x.size());
  const double m = static_cast<double>(y.size());

  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    // Advance whole tie groups on both sides so F1(t) and F2(t) are both right limits.
    while (i < x.size() && x[i] <= t) ++i;
    while (j < y.size() && y[j] <= t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double exact_ks_distance(std::span<const double> x, std::span<const double> y) {
  if (x.empty() || y.empty()) throw DomainError("KS distance needs two non-empty samples");
  std::vector<double> xs(x.begin(), x.end());
  std::vector<double> ys(y.begin(), y.end());
  for (double v : xs) {
    if (!std::isfinite(v)) throw InputError("KS input must be finite");
  }
  for (double v : ys) {
    if (!std::isfinite(v)) throw InputError("KS input must be finite");
  }
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());
  return exact_ks_distance_sorted(xs, ys);
}

double approx_two_sample_ks(const ApproxCdf& cdf1, const ApproxCdf& cdf2) {
  double d = 0.0;
  const auto p1 = cdf1.probs();
  const auto q1 = cdf1.quantiles();
  for (std::size_t i = 0; i < p1.size(); ++i) {
    d = std::max(d, std::abs(p1[i] - cdf2.evaluate(q1[i])));
  }
  const auto p2 = cdf2.probs();
  const auto q2 = cdf2.quantiles();
  for (std::size_t j = 0; j < p2.size(); ++j) {
    d = std::max(d, std::abs(cdf1.evaluate(q2[j]) - p2[j]));
  }
  return d;
}

double qks(double lambda) {
  if (!(lambda >= 0.0)) throw DomainError(fmt::format("qks argument must be non-negative, got {}", lambda));
  if (lambda < 1e-3) return 1.0;

  const double a2 = -2.0 * lambda * lambda;
  double sign = 2.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(a2 * k * k);
    sum += term;
    if (std::abs(term) <= 1e-12 * std::abs(sum)) return std::clamp(sum, 0.0, 1.0);
    sign = -sign;
  }
  return 1.0;
}

double p_value(double d, std::int64_t n, std::int64_t m) {
  if (!(d >= 0.0 && d <= 1.0)) throw DomainError(fmt::format("KS distance must lie in [0, 1], got {}", d));
  require_sizes(n, m);
  return qks(std::sqrt(effective_size(n, m)) * d);
}

double d_crit(double alpha, std::int64_t n, std::int64_t m) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError(fmt::format("alpha must lie in (0, 1), got {}", alpha));
  require_sizes(n, m);

  // qks is decreasing: 1 at the low end of the bracket, ~0 at the top.
  double lo = 1e-6;
  double hi = 10.0;
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double q = qks(mid);
    if (std::abs(q - alpha) <= 1e-10) break;
    if (q > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid / std::sqrt(effective_size(n, m));
}

double phi_for_test(double alpha, double beta, std::int64_t n, std::int64_t m) {
  const double lower = alpha - beta;
  const double upper = alpha + beta;
  if (!(beta > 0.0 && lower > 0.0 && upper < 1.0)) {
    throw DomainError(fmt::format("alpha +- beta must lie in (0, 1), got alpha={} beta={}", alpha, beta));
  }
  // Critical distances are located where the Kolmogorov CDF (1 - qks) equals
  // the level, which places the precision window in the body of the
  // distribution rather than its upper tail.
  const double center = d_crit(1.0 - alpha, n, m);
  return std::min(std::abs(d_crit(1.0 - upper, n, m) - center),
                  std::abs(d_crit(1.0 - lower, n, m) - center));
}

double lall_ks(const QuantileSketch& sketch1, const QuantileSketch& sketch2) {
  if (!sketch1.sealed() || !sketch2.sealed()) throw StateError("lall_ks needs sealed sketches");
  if (sketch1.empty() || sketch2.empty()) throw StateError("lall_ks needs non-empty sketches");

  const double n = static_cast<double>(sketch1.count());
  const double m = static_cast<double>(sketch2.count());
  auto cdf_estimate = [](const QuantileSketch& s, double v, double size) {
    const RankBounds b = s.rank_bounds(v);
    return 0.5 * static_cast<double>(b.min + b.max) / size;
  };

  double d = 0.0;
  for (const auto* s : {&sketch1, &sketch2}) {
    for (const SketchTuple& t : s->tuples()) {
      d = std::max(d, std::abs(cdf_estimate(sketch1, t.value, n) - cdf_estimate(sketch2, t.value, m)));
    }
  }
  return d;
}

KsOutcome make_outcome(double d, double error_bound, std::int64_t n, std::int64_t m, double alpha) {
  KsOutcome out;
  out.d = std::clamp(d, 0.0, 1.0);
  out.d_error_bound = error_bound;
  out.p_value = p_value(out.d, n, m);
  out.n = n;
  out.m = m;
  out.alpha = alpha;
  out.reject = out.p_value <= alpha;
  return out;
}

ApproxKsRun run_test_detailed(std::span<const double> x, std::span<const double> y,
                              const TestPrecision& precision) {
  if (x.empty() || y.empty()) throw DomainError("KS test needs two non-empty samples");
  const auto n = static_cast<std::int64_t>(x.size());
  const auto m = static_cast<std::int64_t>(y.size());

  ApproxCdf cdf_x = build_cdf(x, plan_from_phi(precision.phi, n));
  ApproxCdf cdf_y = build_cdf(y, plan_from_phi(precision.phi, m));
  const double d = approx_two_sample_ks(cdf_x, cdf_y);
  KsOutcome outcome = make_outcome(d, cdf_x.plan().delta + cdf_y.plan().delta, n, m, precision.alpha);
  return ApproxKsRun{outcome, std::move(cdf_x), std::move(cdf_y)};
}

KsOutcome run_test(std::span<const double> x, std::span<const double> y, const TestPrecision& precision) {
  return run_test_detailed(x, y, precision).outcome;
}

std::string to_json(const KsOutcome& o) {
  return fmt::format(
      R"({{"d_ks": {}, "d_error_bound": {}, "p_value": {}, "n": {}, "m": {}, "alpha": {}, "reject": {}}})",
      format_real(o.d), format_real(o.d_error_bound), format_real(o.p_value), o.n, o.m, format_real(o.alpha),
      o.reject ? "true" : "false");
}

}  // namespace sketchks
