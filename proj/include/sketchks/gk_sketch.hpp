#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace sketchks {

/// One entry of a Greenwald-Khanna summary.
struct SketchTuple {
  double value;
  std::int64_t g;      // rank gap to the previous tuple's minimum rank
  std::int64_t delta;  // rank uncertainty of this tuple

  friend bool operator==(const SketchTuple&, const SketchTuple&) = default;
};

/// Inclusive bounds on the number of stream items that are <= a probe value.
struct RankBounds {
  std::int64_t min;
  std::int64_t max;

  friend bool operator==(const RankBounds&, const RankBounds&) = default;
};

/// 1-based target rank ceil(p * n), tolerant of the rounding noise that
/// linspace-generated probabilities carry (p = k/n must map to rank k).
std::int64_t target_rank(double p, std::int64_t n);

/// Greenwald-Khanna epsilon-approximate quantile summary.
///
/// Every answer of query_quantile(p) is a stream element whose exact rank r
/// (1-based, ties ordered by insertion) satisfies
///   floor((p - eps) * n) <= r <= ceil((p + eps) * n).
///
/// The summary is single-writer while open. seal() performs a final compress
/// and freezes it; queries are only answered on a sealed summary, which may
/// then be read concurrently.
class QuantileSketch {
 public:
  struct Options {
    // Compress every floor(1 / (2 eps)) insertions. Disabled only by tests
    // that need to observe an uncompressed summary.
    bool auto_compress = true;
  };

  explicit QuantileSketch(double epsilon);
  QuantileSketch(double epsilon, Options options);

  void insert(double value);
  void insert(std::span<const double> values);

  /// Merges adjacent tuples while g_i + g_{i+1} + delta_{i+1} <= floor(2 eps n).
  /// Minimum and maximum tuples are never merged away.
  void compress();

  void seal();

  double query_quantile(double p) const;
  std::vector<double> query_quantiles(std::span<const double> probs) const;
  RankBounds rank_bounds(double value) const;

  double epsilon() const noexcept { return epsilon_; }
  std::int64_t count() const noexcept { return count_; }
  std::size_t size() const noexcept { return tuples_.size(); }
  bool sealed() const noexcept { return sealed_; }
  bool empty() const noexcept { return count_ == 0; }
  std::span<const SketchTuple> tuples() const noexcept { return tuples_; }

  /// floor(2 eps n): the largest g + delta any tuple may carry.
  std::int64_t merge_threshold() const noexcept;

  /// Space bound (11 / (2 eps)) log2(2 eps n) + 4 of the GK analysis, or 0
  /// when 2 eps n <= 1 and the bound is not meaningful.
  double space_bound() const noexcept;

 private:
  void require_queryable() const;
  std::size_t first_qualifying(std::int64_t rank, double tolerance) const;

  double epsilon_;
  Options options_;
  std::int64_t count_ = 0;
  std::int64_t compress_period_;
  std::int64_t since_compress_ = 0;
  bool sealed_ = false;
  std::vector<SketchTuple> tuples_;
  // Cumulative g per tuple (minimum rank), built at seal().
  std::vector<std::int64_t> min_ranks_;
};

}  // namespace sketchks
