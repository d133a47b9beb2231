#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "sketchks/approx_cdf.hpp"
#include "sketchks/synth.hpp"

namespace sketchks {

inline constexpr std::uint64_t kDefaultSeed = 20230701;

/// One synthetic KS experiment.
///
/// Ids 1-5 are hypothesis-test configurations whose precision phi is derived
/// from (alpha, beta). Ids 6-10 fix a target precision in D_KS directly,
/// use delta = precision / 2 for the CDFs, and additionally run the
/// sketch-direct KS estimate with sketch epsilon = precision / 6.
struct ExperimentSpec {
  int id = 1;
  DistributionSpec dist_x;
  DistributionSpec dist_y;
  std::int64_t n = 0;
  std::int64_t m = 0;
  double alpha = 0.05;
  double beta = 0.0;
  double precision = 0.0;  // > 0 only for ids 6-10
  int replications = 20;
  std::uint64_t master_seed = kDefaultSeed;

  bool compares_sketch() const noexcept { return precision > 0.0; }
};

/// Built-in configuration for id in [1, 10].
ExperimentSpec experiment_spec(int id);

struct ReplicationRecord {
  int index = 0;
  std::uint64_t seed = 0;  // master_seed + index; sample streams derive from it
  double d_exact = 0.0;
  double d_approx = 0.0;
  double p_exact = 1.0;
  double p_approx = 1.0;
  bool reject_exact = false;
  bool reject_approx = false;
  std::optional<double> d_sketch;
  std::size_t sketch_tuples_x = 0;
  std::size_t sketch_tuples_y = 0;

  double abs_error() const noexcept;
};

struct ExperimentAggregate {
  double d_exact_min = 0.0, d_exact_max = 0.0;
  double d_approx_min = 0.0, d_approx_max = 0.0;
  double max_abs_error = 0.0;
  double p_exact_min = 0.0, p_exact_max = 0.0;
  double p_approx_min = 0.0, p_approx_max = 0.0;
  int reject_exact = 0;
  int reject_approx = 0;
  int agreements = 0;
  std::optional<double> d_sketch_min, d_sketch_max, max_sketch_error;
  std::size_t sketch_tuples_max = 0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  double phi = 0.0;
  CdfPlan plan_x;
  CdfPlan plan_y;
  double sketch_epsilon = 0.0;
  std::vector<ReplicationRecord> records;

  ExperimentAggregate aggregate() const;
};

ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Per-replication rows followed by `min`, `max` and `count` aggregate rows.
void write_experiment_csv(std::ostream& out, const ExperimentResult& result, bool header = true);

/// Maximum of |F_hat(x) - F_N(x)| over the points of an ascending-sorted sample.
double max_cdf_error(const ApproxCdf& cdf, std::span<const double> sorted);

struct ConvergenceRow {
  std::int64_t knots = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  double max_error = 0.0;

  bool within_bound() const noexcept { return max_error <= delta; }
};

struct ConvergenceConfig {
  std::int64_t knots;
  double epsilon;
};

/// The nine (knots, epsilon) settings of the convergence study.
std::vector<ConvergenceConfig> convergence_configs();

/// For each config (plus an exact knots = n, epsilon = 0 row when requested),
/// the worst CDF error over `replications` standard-normal samples of size n.
std::vector<ConvergenceRow> run_convergence(int replications, std::int64_t n, std::uint64_t seed,
                                            bool include_exact_row = true);

void write_convergence_csv(std::ostream& out, std::span<const ConvergenceRow> rows);

/// `prob,quantile` knot table.
void write_cdf_csv(std::ostream& out, const ApproxCdf& cdf);

/// `value,prob` table of the full empirical CDF, one row per observation.
void write_exact_cdf_csv(std::ostream& out, std::span<const double> data);

}  // namespace sketchks
