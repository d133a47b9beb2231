#include "sketchks/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <fmt/format.h>

#include "sketchks/errors.hpp"
#include "sketchks/format.hpp"
#include "sketchks/gk_sketch.hpp"
#include "sketchks/ks.hpp"

namespace sketchks {

namespace {

const DistributionSpec kStdNormal = DistributionSpec::normal(0.0, 1.0);
const DistributionSpec kShiftedNormal = DistributionSpec::normal(1.0, 1.0);
// Variance 2, i.e. sd = sqrt(2).
const DistributionSpec kWideNormal = DistributionSpec::normal(0.0, std::sqrt(2.0));
const DistributionSpec kGamma = DistributionSpec::gamma(0.5, 1.0);
const DistributionSpec kUniform = DistributionSpec::uniform(0.0, 1.0);

std::string optional_real(const std::optional<double>& v) { return v ? format_real(*v) : std::string(); }

}  // namespace

ExperimentSpec experiment_spec(int id) {
  ExperimentSpec s;
  s.id = id;
  switch (id) {
    case 1: s.dist_x = kStdNormal, s.dist_y = kShiftedNormal; break;
    case 2: s.dist_x = kStdNormal, s.dist_y = kWideNormal; break;
    case 3: s.dist_x = kStdNormal, s.dist_y = kStdNormal; break;
    case 4: s.dist_x = kGamma, s.dist_y = kUniform; break;
    case 5: s.dist_x = kGamma, s.dist_y = kGamma; break;
    case 6: s.dist_x = kStdNormal, s.dist_y = kShiftedNormal; break;
    case 7: s.dist_x = kStdNormal, s.dist_y = kWideNormal; break;
    case 8: s.dist_x = kStdNormal, s.dist_y = kStdNormal; break;
    case 9: s.dist_x = kGamma, s.dist_y = kUniform; break;
    case 10: s.dist_x = kGamma, s.dist_y = kGamma; break;
    default: throw DomainError(fmt::format("experiment id must be in [1, 10], got {}", id));
  }

  if (id <= 3) {
    s.n = s.m = 10'000;
    s.alpha = 0.05;
    s.beta = 0.025;
  } else if (id <= 5) {
    s.n = 84'000;
    s.m = 7'000;
    s.alpha = 0.20;
    s.beta = 0.1;
  } else {
    constexpr std::int64_t sizes[] = {10'000, 10'000, 100'000, 84'000, 84'000};
    constexpr double precisions[] = {0.05, 0.01, 0.001, 0.05, 0.002};
    s.n = s.m = sizes[id - 6];
    s.precision = precisions[id - 6];
    s.alpha = id <= 8 ? 0.05 : 0.20;
  }
  return s;
}

double ReplicationRecord::abs_error() const noexcept { return std::abs(d_approx - d_exact); }

ExperimentAggregate ExperimentResult::aggregate() const {
  ExperimentAggregate a;
  if (records.empty()) return a;

  auto min_max = [this](auto field, double& lo, double& hi) {
    lo = hi = field(records.front());
    for (const auto& r : records) {
      lo = std::min(lo, field(r));
      hi = std::max(hi, field(r));
    }
  };
  min_max([](const ReplicationRecord& r) { return r.d_exact; }, a.d_exact_min, a.d_exact_max);
  min_max([](const ReplicationRecord& r) { return r.d_approx; }, a.d_approx_min, a.d_approx_max);
  min_max([](const ReplicationRecord& r) { return r.p_exact; }, a.p_exact_min, a.p_exact_max);
  min_max([](const ReplicationRecord& r) { return r.p_approx; }, a.p_approx_min, a.p_approx_max);

  for (const auto& r : records) {
    a.max_abs_error = std::max(a.max_abs_error, r.abs_error());
    a.reject_exact += r.reject_exact ? 1 : 0;
    a.reject_approx += r.reject_approx ? 1 : 0;
    a.agreements += r.reject_exact == r.reject_approx ? 1 : 0;
    a.sketch_tuples_max = std::max({a.sketch_tuples_max, r.sketch_tuples_x, r.sketch_tuples_y});
    if (r.d_sketch) {
      const double err = std::abs(*r.d_sketch - r.d_exact);
      a.d_sketch_min = a.d_sketch_min ? std::min(*a.d_sketch_min, *r.d_sketch) : *r.d_sketch;
      a.d_sketch_max = a.d_sketch_max ? std::max(*a.d_sketch_max, *r.d_sketch) : *r.d_sketch;
      a.max_sketch_error = a.max_sketch_error ? std::max(*a.max_sketch_error, err) : err;
    }
  }
  return a;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  if (spec.replications < 1) throw DomainError("an experiment needs at least one replication");
  if (spec.n < 3 || spec.m < 3) throw DomainError("experiment samples need at least 3 points");

  ExperimentResult result;
  result.spec = spec;
  result.phi = spec.compares_sketch() ? spec.precision : phi_for_test(spec.alpha, spec.beta, spec.n, spec.m);
  result.plan_x = plan_from_phi(result.phi, spec.n);
  result.plan_y = plan_from_phi(result.phi, spec.m);
  result.sketch_epsilon = spec.compares_sketch() ? spec.precision / 6.0 : 0.0;
  const TestPrecision precision = TestPrecision::from_phi(spec.alpha, result.phi);

  result.records.reserve(static_cast<std::size_t>(spec.replications));
  for (int rep = 0; rep < spec.replications; ++rep) {
    ReplicationRecord r;
    r.index = rep;
    r.seed = spec.master_seed + static_cast<std::uint64_t>(rep);
    std::vector<double> x = sample(spec.dist_x, static_cast<std::size_t>(spec.n), derive_seed(r.seed, 0));
    std::vector<double> y = sample(spec.dist_y, static_cast<std::size_t>(spec.m), derive_seed(r.seed, 1));

    const KsOutcome approx = run_test(x, y, precision);
    r.d_approx = approx.d;
    r.p_approx = approx.p_value;
    r.reject_approx = approx.reject;

    if (spec.compares_sketch()) {
      QuantileSketch sx(result.sketch_epsilon);
      QuantileSketch sy(result.sketch_epsilon);
      sx.insert(x);
      sy.insert(y);
      sx.seal();
      sy.seal();
      r.d_sketch = lall_ks(sx, sy);
      r.sketch_tuples_x = sx.size();
      r.sketch_tuples_y = sy.size();
    }

    const KsOutcome exact = make_outcome(exact_ks_distance(x, y), 0.0, spec.n, spec.m, spec.alpha);
    r.d_exact = exact.d;
    r.p_exact = exact.p_value;
    r.reject_exact = exact.reject;
    result.records.push_back(r);
  }
  return result;
}

void write_experiment_csv(std::ostream& out, const ExperimentResult& result, bool header) {
  if (header) {
    out << "experiment,row,seed,dist_x,dist_y,n,m,alpha,phi,a_x,a_y,eps_x,eps_y,sketch_eps,"
           "d_exact,d_approx,abs_error,p_exact,p_approx,reject_exact,reject_approx,"
           "d_sketch,sketch_error,sketch_tuples_x,sketch_tuples_y\n";
  }
  const ExperimentSpec& s = result.spec;
  // Distribution labels contain commas, so they are quoted.
  const std::string params = fmt::format(
      "\"{}\",\"{}\",{},{},{},{},{},{},{},{},{}", s.dist_x.label(), s.dist_y.label(), s.n, s.m,
      format_real(s.alpha), format_real(result.phi), result.plan_x.knots, result.plan_y.knots,
      format_real(result.plan_x.epsilon), format_real(result.plan_y.epsilon), format_real(result.sketch_epsilon));
  auto row_prefix = [&](const std::string& row, const std::string& seed) {
    return fmt::format("{},{},{},{}", s.id, row, seed, params);
  };

  for (const auto& r : result.records) {
    std::string sketch_err;
    if (r.d_sketch) sketch_err = format_real(std::abs(*r.d_sketch - r.d_exact));
    out << row_prefix(std::to_string(r.index), std::to_string(r.seed)) << ','
        << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", format_real(r.d_exact), format_real(r.d_approx),
                       format_real(r.abs_error()), format_probability(r.p_exact), format_probability(r.p_approx),
                       r.reject_exact ? 1 : 0, r.reject_approx ? 1 : 0, optional_real(r.d_sketch), sketch_err,
                       r.d_sketch ? std::to_string(r.sketch_tuples_x) : "",
                       r.d_sketch ? std::to_string(r.sketch_tuples_y) : "");
  }

  if (result.records.empty()) return;
  const ExperimentAggregate a = result.aggregate();
  std::size_t tuples_min_x = result.records.front().sketch_tuples_x;
  std::size_t tuples_min_y = result.records.front().sketch_tuples_y;
  std::size_t tuples_max_x = tuples_min_x;
  std::size_t tuples_max_y = tuples_min_y;
  for (const auto& r : result.records) {
    tuples_min_x = std::min(tuples_min_x, r.sketch_tuples_x);
    tuples_min_y = std::min(tuples_min_y, r.sketch_tuples_y);
    tuples_max_x = std::max(tuples_max_x, r.sketch_tuples_x);
    tuples_max_y = std::max(tuples_max_y, r.sketch_tuples_y);
  }
  const bool sketch = a.d_sketch_min.has_value();
  auto tuples = [sketch](std::size_t v) { return sketch ? std::to_string(v) : std::string(); };

  double min_abs_error = result.records.front().abs_error();
  std::optional<double> min_sketch_error;
  for (const auto& r : result.records) {
    min_abs_error = std::min(min_abs_error, r.abs_error());
    if (r.d_sketch) {
      const double err = std::abs(*r.d_sketch - r.d_exact);
      min_sketch_error = min_sketch_error ? std::min(*min_sketch_error, err) : err;
    }
  }

  out << row_prefix("min", "") << ','
      << fmt::format("{},{},{},{},{},,,{},{},{},{}\n", format_real(a.d_exact_min), format_real(a.d_approx_min),
                     format_real(min_abs_error), format_probability(a.p_exact_min),
                     format_probability(a.p_approx_min), optional_real(a.d_sketch_min),
                     optional_real(min_sketch_error), tuples(tuples_min_x), tuples(tuples_min_y));
  out << row_prefix("max", "") << ','
      << fmt::format("{},{},{},{},{},,,{},{},{},{}\n", format_real(a.d_exact_max), format_real(a.d_approx_max),
                     format_real(a.max_abs_error), format_probability(a.p_exact_max),
                     format_probability(a.p_approx_max), optional_real(a.d_sketch_max),
                     optional_real(a.max_sketch_error), tuples(tuples_max_x), tuples(tuples_max_y));
  out << row_prefix("count", "") << ',' << fmt::format(",,,,,{},{},,,,\n", a.reject_exact, a.reject_approx);
}

double max_cdf_error(const ApproxCdf& cdf, std::span<const double> sorted) {
  const double n = static_cast<double>(sorted.size());
  double worst = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    std::size_t end = i;
    while (end < sorted.size() && sorted[end] == sorted[i]) ++end;
    const double exact = static_cast<double>(end) / n;
    worst = std::max(worst, std::abs(cdf.evaluate(sorted[i]) - exact));
    i = end;
  }
  return worst;
}

std::vector<ConvergenceConfig> convergence_configs() {
  return {{11, 0.1},   {21, 0.1},   {51, 0.1},   {11, 0.01},  {21, 0.01},
          {51, 0.01},  {101, 0.001}, {201, 0.001}, {501, 0.001}};
}

std::vector<ConvergenceRow> run_convergence(int replications, std::int64_t n, std::uint64_t seed,
                                            bool include_exact_row) {
  if (replications < 1) throw DomainError("convergence study needs at least one replication");
  std::vector<ConvergenceConfig> configs = convergence_configs();
  if (include_exact_row) configs.push_back({n, 0.0});

  std::vector<ConvergenceRow> rows;
  for (const auto& c : configs) {
    const CdfPlan plan = plan_from_knots(n, c.knots, c.epsilon);
    rows.push_back(ConvergenceRow{c.knots, c.epsilon, plan.delta, 0.0});
  }

  for (int rep = 0; rep < replications; ++rep) {
    std::vector<double> data = sample(kStdNormal, static_cast<std::size_t>(n), seed + static_cast<std::uint64_t>(rep));
    std::vector<double> sorted = data;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k < configs.size(); ++k) {
      const ApproxCdf cdf = build_cdf(data, plan_from_knots(n, configs[k].knots, configs[k].epsilon));
      rows[k].max_error = std::max(rows[k].max_error, max_cdf_error(cdf, sorted));
    }
  }
  return rows;
}

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows) {
  out << "a,epsilon,delta,max_error,within_bound\n";
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{}\n", r.knots, format_real(r.epsilon), format_real(r.delta),
                       format_real(r.max_error), r.within_bound() ? 1 : 0);
  }
}

void write_cdf_csv(std::ostream& out, const ApproxCdf& cdf) {
  out << "prob,quantile\n";
  for (std::size_t i = 0; i < cdf.size(); ++i) {
    out << format_real(cdf.probs()[i]) << ',' << format_real(cdf.quantiles()[i]) << '\n';
  }
}

void write_exact_cdf_csv(std::ostream& out, std::span<const double> data) {
  std::vector<double> sorted(data.begin(), data.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  out << "value,prob\n";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out << format_real(sorted[i]) << ',' << format_real(static_cast<double>(i + 1) / n) << '\n';
  }
}

}  // namespace sketchks
