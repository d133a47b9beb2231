#include "sketchks/gk_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "sketchks/errors.hpp"

namespace sketchks {

std::int64_t target_rank(double p, std::int64_t n) {
  const double scaled = p * static_cast<double>(n);
  const auto rank = static_cast<std::int64_t>(std::ceil(scaled - 1e-12 * scaled));
  return std::clamp<std::int64_t>(rank, 1, n);
}

QuantileSketch::QuantileSketch(double epsilon) : QuantileSketch(epsilon, Options{}) {}

QuantileSketch::QuantileSketch(double epsilon, Options options)
    : epsilon_(epsilon), options_(options) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw DomainError(fmt::format("sketch epsilon must lie in (0, 1), got {}", epsilon));
  }
  compress_period_ = std::max<std::int64_t>(1, static_cast<std::int64_t>(1.0 / (2.0 * epsilon)));
}

std::int64_t QuantileSketch::merge_threshold() const noexcept {
  return static_cast<std::int64_t>(std::floor(2.0 * epsilon_ * static_cast<double>(count_)));
}

double QuantileSketch::space_bound() const noexcept {
  const double scaled = 2.0 * epsilon_ * static_cast<double>(count_);
  if (scaled <= 1.0) return 0.0;
  return 11.0 / (2.0 * epsilon_) * std::log2(scaled) + 4.0;
}

void QuantileSketch::insert(double value) {
  if (sealed_) throw StateError("cannot insert into a sealed sketch");
  if (!std::isfinite(value)) throw InputError("sketch input must be finite");

  // Equal values go after existing ones: ties are ranked by insertion order.
  const auto pos = std::upper_bound(
      tuples_.begin(), tuples_.end(), value,
      [](double v, const SketchTuple& t) { return v < t.value; });

  // The new item's rank lies between its predecessor's minimum rank + 1 and
  // its successor's maximum rank - 1, so delta = g_succ + delta_succ - 1 is
  // exact; it never exceeds floor(2 eps n) while the summary is maintained.
  std::int64_t delta = 0;
  if (pos != tuples_.begin() && pos != tuples_.end()) {
    delta = pos->g + pos->delta - 1;
  }
  tuples_.insert(pos, SketchTuple{value, 1, delta});
  ++count_;

  if (options_.auto_compress && ++since_compress_ >= compress_period_) {
    compress();
  }
}

void QuantileSketch::insert(std::span<const double> values) {
  for (double v : values) insert(v);
}

void QuantileSketch::compress() {
  since_compress_ = 0;
  if (tuples_.size() <= 2) return;

  const std::int64_t threshold = merge_threshold();
  std::vector<SketchTuple> merged;
  merged.reserve(tuples_.size());

  // Right to left: tuple i folds into its successor, which keeps its value
  // and delta. Index 0 (the minimum) is never folded.
  SketchTuple head = tuples_.back();
  for (std::size_t i = tuples_.size() - 2; i >= 1; --i) {
    const SketchTuple& t = tuples_[i];
    if (t.g + head.g + head.delta <= threshold) {
      head.g += t.g;
    } else {
      merged.push_back(head);
      head = t;
    }
  }
  merged.push_back(head);
  merged.push_back(tuples_.front());
  std::reverse(merged.begin(), merged.end());
  tuples_ = std::move(merged);
}

void QuantileSketch::seal() {
  if (sealed_) return;
  compress();
  min_ranks_.resize(tuples_.size());
  std::int64_t rank = 0;
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    rank += tuples_[i].g;
    min_ranks_[i] = rank;
  }
  sealed_ = true;
}

void QuantileSketch::require_queryable() const {
  if (count_ == 0) throw StateError("quantile query on an empty sketch");
  if (!sealed_) throw StateError("sketch must be sealed before it is queried");
}

std::size_t QuantileSketch::first_qualifying(std::int64_t rank, double tolerance) const {
  const double lo = static_cast<double>(rank) - tolerance;
  const double hi = static_cast<double>(rank) + tolerance;

  // Minimum ranks are increasing, so the lower condition is a prefix cut.
  auto it = std::lower_bound(min_ranks_.begin(), min_ranks_.end(), lo,
                             [](std::int64_t r, double bound) { return static_cast<double>(r) < bound; });
  for (auto i = static_cast<std::size_t>(it - min_ranks_.begin()); i < tuples_.size(); ++i) {
    if (static_cast<double>(min_ranks_[i] + tuples_[i].delta) <= hi) return i;
  }

  // Unreachable while g + delta <= max(1, 2 eps n); keep the closest tuple.
  std::size_t best = 0;
  double best_err = INFINITY;
  for (std::size_t i = 0; i < tuples_.size(); ++i) {
    const double err = std::max(static_cast<double>(rank - min_ranks_[i]),
                                static_cast<double>(min_ranks_[i] + tuples_[i].delta - rank));
    if (err < best_err) {
      best_err = err;
      best = i;
    }
  }
  return best;
}

double QuantileSketch::query_quantile(double p) const {
  require_queryable();
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError(fmt::format("quantile probability must lie in (0, 1], got {}", p));
  }
  if (p == 1.0) return tuples_.back().value;

  const double n = static_cast<double>(count_);
  const double clamped = std::max(p, 1.0 / n);
  const std::int64_t rank = target_rank(clamped, count_);
  return tuples_[first_qualifying(rank, epsilon_ * n)].value;
}

std::vector<double> QuantileSketch::query_quantiles(std::span<const double> probs) const {
  require_queryable();
  if (probs.empty()) throw DomainError("query_quantiles needs at least one probability");
  for (std::size_t i = 1; i < probs.size(); ++i) {
    if (probs[i] < probs[i - 1]) throw DomainError("query probabilities must be non-decreasing");
  }

  std::vector<double> out;
  out.reserve(probs.size());
  for (double p : probs) {
    double v = query_quantile(p);
    if (!out.empty()) v = std::max(v, out.back());
    out.push_back(v);
  }
  return out;
}

RankBounds QuantileSketch::rank_bounds(double value) const {
  if (count_ == 0) throw StateError("rank query on an empty sketch");
  if (!sealed_) throw StateError("sketch must be sealed before it is queried");

  // First tuple strictly greater than value.
  const auto upper = std::upper_bound(
      tuples_.begin(), tuples_.end(), value,
      [](double v, const SketchTuple& t) { return v < t.value; });
  if (upper == tuples_.begin()) return {0, 0};
  if (upper == tuples_.end()) return {count_, count_};

  const auto next = static_cast<std::size_t>(upper - tuples_.begin());
  const std::int64_t lo = min_ranks_[next - 1];
  const std::int64_t hi = min_ranks_[next] + tuples_[next].delta - 1;
  return {lo, std::max(lo, hi)};
}

}  // namespace sketchks
