#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace sketchks {

/// SplitMix64: a counter-based 64-bit generator. The state advances by a fixed
/// odd increment and every output is a bijective mix of the counter, so a
/// seed fully determines the stream on every platform.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

 private:
  std::uint64_t state_;
};

enum class Family { normal, gamma, uniform };

/// normal(mean, sd), gamma(shape, scale) or uniform(lower, upper).
struct DistributionSpec {
  Family family = Family::normal;
  double param1 = 0.0;
  double param2 = 1.0;

  static DistributionSpec normal(double mean, double sd) { return {Family::normal, mean, sd}; }
  static DistributionSpec gamma(double shape, double scale) { return {Family::gamma, shape, scale}; }
  static DistributionSpec uniform(double lower, double upper) { return {Family::uniform, lower, upper}; }

  void validate() const;
  std::string label() const;

  friend bool operator==(const DistributionSpec&, const DistributionSpec&) = default;
};

/// Parses "normal(0,1)", "gamma(0.5,1)" or "uniform(0,1)".
DistributionSpec parse_distribution(const std::string& text);

/// n independent draws; identical (spec, n, seed) always gives identical output.
std::vector<double> sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed);

/// Independent stream seed for (base, stream) pairs, e.g. the two samples of a replication.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept;

}  // namespace sketchks
