#include "sketchks/synth.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "sketchks/errors.hpp"

namespace sketchks {

namespace {

// Box-Muller pairs; the second deviate of each pair is served next.
class NormalSource {
 public:
  explicit NormalSource(SplitMix64& rng) : rng_(rng) {}

  double operator()() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - rng_.uniform();  // (0, 1]
    const double u2 = rng_.uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  SplitMix64& rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Marsaglia-Tsang squeeze for shape >= 1.
double gamma_unit_scale(double shape, SplitMix64& rng, NormalSource& normal) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

double gamma_draw(double shape, SplitMix64& rng, NormalSource& normal) {
  if (shape >= 1.0) return gamma_unit_scale(shape, rng, normal);
  // Boost: Gamma(shape) = Gamma(shape + 1) * U^(1 / shape).
  const double g = gamma_unit_scale(shape + 1.0, rng, normal);
  const double u = 1.0 - rng.uniform();
  return g * std::pow(u, 1.0 / shape);
}

}  // namespace

void DistributionSpec::validate() const {
  switch (family) {
    case Family::normal:
      if (!(param2 > 0.0) || !std::isfinite(param1)) throw DomainError("normal needs a finite mean and sd > 0");
      break;
    case Family::gamma:
      if (!(param1 > 0.0) || !(param2 > 0.0)) throw DomainError("gamma needs shape > 0 and scale > 0");
      break;
    case Family::uniform:
      if (!(param2 > param1)) throw DomainError("uniform needs upper > lower");
      break;
  }
  if (!std::isfinite(param1) || !std::isfinite(param2)) throw DomainError("distribution parameters must be finite");
}

std::string DistributionSpec::label() const {
  const char* name = family == Family::normal ? "normal" : family == Family::gamma ? "gamma" : "uniform";
  return fmt::format("{}({},{})", name, param1, param2);
}

DistributionSpec parse_distribution(const std::string& text) {
  const auto open = text.find('(');
  const auto comma = text.find(',', open);
  const auto close = text.find(')', comma);
  if (open == std::string::npos || comma == std::string::npos || close == std::string::npos) {
    throw DomainError(fmt::format("cannot parse distribution '{}'", text));
  }
  const std::string name = text.substr(0, open);
  DistributionSpec spec;
  try {
    spec.param1 = std::stod(text.substr(open + 1, comma - open - 1));
    spec.param2 = std::stod(text.substr(comma + 1, close - comma - 1));
  } catch (const std::exception&) {
    throw DomainError(fmt::format("cannot parse distribution parameters in '{}'", text));
  }
  if (name == "normal") {
    spec.family = Family::normal;
  } else if (name == "gamma") {
    spec.family = Family::gamma;
  } else if (name == "uniform") {
    spec.family = Family::uniform;
  } else {
    throw DomainError(fmt::format("unknown distribution family '{}'", name));
  }
  spec.validate();
  return spec;
}

std::vector<double> sample(const DistributionSpec& spec, std::size_t n, std::uint64_t seed) {
  spec.validate();
  if (n == 0) throw DomainError("sample size must be positive");

  SplitMix64 rng(seed);
  NormalSource normal(rng);
  std::vector<double> out(n);
  switch (spec.family) {
    case Family::normal:
      for (double& v : out) v = spec.param1 + spec.param2 * normal();
      break;
    case Family::gamma:
      for (double& v : out) v = spec.param2 * gamma_draw(spec.param1, rng, normal);
      break;
    case Family::uniform:
      for (double& v : out) v = spec.param1 + (spec.param2 - spec.param1) * rng.uniform();
      break;
  }
  return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) noexcept {
  SplitMix64 mix(base ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
  return mix();
}

}  // namespace sketchks
