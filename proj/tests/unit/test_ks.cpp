#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "sketchks/errors.hpp"
#include "sketchks/ks.hpp"
#include "sketchks/synth.hpp"
#include "support/oracles.hpp"

namespace sketchks {
namespace {

// mpmath, 40 digits: 2 * sum_{k<200} (-1)^{k-1} exp(-2 k^2).
constexpr double kQksAtOne = 0.26999967167735452;
// mpmath root of Q_KS(lambda) = 0.05.
constexpr double kLambda05 = 1.3580986393225506;

TEST(ExactKs, Basics) {
  const std::vector<double> a{3, 1, 2, 2};
  EXPECT_EQ(exact_ks_distance(a, a), 0.0);
  EXPECT_EQ(exact_ks_distance(std::vector<double>{1, 2, 3, 4}, std::vector<double>{5, 6, 7, 8}), 1.0);
  EXPECT_DOUBLE_EQ(exact_ks_distance(std::vector<double>{1, 2}, std::vector<double>{1, 3}), 0.5);
  EXPECT_THROW(exact_ks_distance(std::vector<double>{}, a), DomainError);
  EXPECT_THROW(exact_ks_distance(a, std::vector<double>{NAN}), InputError);
}

TEST(ExactKs, MatchesBruteForce) {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> size(1, 200);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = size(rng);
    const int m = size(rng);
    std::vector<double> x = oracle::normal_data(n, 2 * trial);
    std::vector<double> y = oracle::normal_data(m, 2 * trial + 1, 0.3 * (trial % 3), 1.0 + 0.2 * (trial % 2));
    if (trial % 4 == 0) {  // ties within and across samples
      for (double& v : x) v = std::round(v * 3.0);
      for (double& v : y) v = std::round(v * 3.0);
    }
    const double d = exact_ks_distance(x, y);
    ASSERT_NEAR(d, oracle::brute_force_ks(x, y), 1e-15) << "trial " << trial;
    ASSERT_DOUBLE_EQ(d, exact_ks_distance(y, x));
    std::shuffle(x.begin(), x.end(), rng);
    ASSERT_DOUBLE_EQ(d, exact_ks_distance(x, y));
  }
}

TEST(Qks, Conventions) {
  EXPECT_LE(qks(5.0), 1e-20);
  EXPECT_EQ(qks(1e-6), 1.0);
  EXPECT_EQ(qks(0.0), 1.0);
  EXPECT_THROW(qks(-0.1), DomainError);
}

TEST(Qks, AgreesWithSeriesOracle) {
  EXPECT_NEAR(qks(1.0), kQksAtOne, 1e-9);
  EXPECT_NEAR(static_cast<double>(oracle::series_qks(1.0L)), kQksAtOne, 1e-15);
  for (double l = 0.2; l < 4.0; l += 0.01) {
    ASSERT_NEAR(qks(l), static_cast<double>(oracle::series_qks(l)), 1e-10) << l;
  }
}

// Near Q = 1 the truncated alternating series carries ~1e-14 of rounding noise.
constexpr double kSeriesNoise = 1e-12;

TEST(Qks, NonIncreasing) {
  double prev = qks(0.0);
  for (double l = 0.0; l < 6.0; l += 1e-3) {
    const double q = qks(l);
    ASSERT_LE(q, prev + kSeriesNoise) << l;
    ASSERT_GE(q, 0.0);
    ASSERT_LE(q, 1.0);
    prev = q;
  }
}

TEST(PValue, Values) {
  EXPECT_EQ(p_value(0.0, 100, 100), 1.0);
  EXPECT_LT(p_value(0.3684, 10'000, 10'000), 1e-100);
  // Larger distance, smaller p: the 0.0837 .. 0.0976 distance range maps to
  // p-values of order 1e-31 .. 1e-42.
  const double p_hi_d = p_value(0.0976, 10'000, 10'000);
  const double p_lo_d = p_value(0.0837, 10'000, 10'000);
  EXPECT_NEAR(std::log10(p_hi_d), std::log10(8.5345e-42), 0.01);
  EXPECT_NEAR(std::log10(p_lo_d), std::log10(7.5111e-31), 0.01);
  EXPECT_THROW(p_value(-0.1, 10, 10), DomainError);
  EXPECT_THROW(p_value(0.1, 0, 10), DomainError);
}

TEST(PValue, NonIncreasingInDistance) {
  double prev = 1.0;
  for (double d = 0.0; d <= 1.0; d += 1e-4) {
    const double p = p_value(d, 300, 700);
    ASSERT_LE(p, prev + kSeriesNoise);
    prev = p;
  }
}

TEST(DCrit, RoundTrip) {
  for (double alpha : {0.01, 0.05, 0.1, 0.2, 0.5}) {
    for (auto [n, m] : {std::pair{10'000L, 10'000L}, std::pair{84'000L, 7'000L}, std::pair{50L, 80L}}) {
      EXPECT_NEAR(p_value(d_crit(alpha, n, m), n, m), alpha, 1e-8);
    }
  }
}

TEST(DCrit, Monotone) {
  EXPECT_GT(d_crit(0.01, 1000, 1000), d_crit(0.05, 1000, 1000));
  EXPECT_GT(d_crit(0.05, 1000, 1000), d_crit(0.20, 1000, 1000));
  EXPECT_THROW(d_crit(0.0, 10, 10), DomainError);
  EXPECT_THROW(d_crit(1.0, 10, 10), DomainError);
}

TEST(DCrit, AgreesWithTabulation) {
  const double lambda = oracle::tabulated_inverse_qks(0.05);
  EXPECT_NEAR(lambda, kLambda05, 1e-6);
  EXPECT_NEAR(d_crit(0.05, 10'000, 10'000), kLambda05 / std::sqrt(5000.0), 1e-10);
}

TEST(PhiForTest, ReferenceValues) {
  EXPECT_NEAR(phi_for_test(0.05, 0.025, 10'000, 10'000), 0.000399, 5e-6);
  EXPECT_NEAR(phi_for_test(0.20, 0.1, 84'000, 7'000) / 2.0, 0.000385, 5e-6);
  EXPECT_LT(phi_for_test(0.05, 1e-6, 10'000, 10'000), 1e-4);
  EXPECT_THROW(phi_for_test(0.05, 0.05, 100, 100), DomainError);
  EXPECT_THROW(phi_for_test(0.95, 0.06, 100, 100), DomainError);
}

TEST(ApproxKs, SelfDistance) {
  // Exact quantiles: distinct knots, so every knot evaluates to its own probability.
  const std::vector<double> x = oracle::normal_data(3000, 1);
  const ApproxCdf exact = build_cdf(x, CdfPlan{3000, 0.01, 0.0, 101});
  EXPECT_EQ(approx_two_sample_ks(exact, exact), 0.0);
  // With epsilon > 0 knots up to 2 eps N ranks apart can share one element, so
  // the self-distance is only bounded like any other pair: by delta_x + delta_y.
  const CdfPlan plan = plan_from_phi(0.01, 3000);
  ASSERT_GT(plan.epsilon, 0.0);
  const ApproxCdf cdf = build_cdf(x, plan);
  EXPECT_GT(approx_two_sample_ks(cdf, cdf), 0.0);
  EXPECT_LE(approx_two_sample_ks(cdf, cdf), 2.0 * plan.delta);
}

TEST(ApproxKs, SameSampleDifferentPlans) {
  const std::vector<double> x = oracle::normal_data(5000, 2);
  const CdfPlan p1 = plan_from_phi(0.02, 5000);
  const CdfPlan p2 = plan_from_knots(5000, 21, 0.01);
  const double d = approx_two_sample_ks(build_cdf(x, p1), build_cdf(x, p2));
  EXPECT_LE(d, p1.delta + p2.delta);
}

TEST(ApproxKs, ErrorBoundProperty) {
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<int> size(50, 4000);
  std::uniform_real_distribution<double> phi_dist(0.002, 0.2);
  for (int trial = 0; trial < 120; ++trial) {
    const int n = size(rng);
    const int m = size(rng);
    const std::vector<double> x = oracle::normal_data(n, 3 * trial);
    const std::vector<double> y = oracle::normal_data(m, 3 * trial + 1, 0.1 * (trial % 5), 1.0 + 0.1 * (trial % 3));
    const double phi = phi_dist(rng);
    const CdfPlan px = plan_from_phi(phi, n);
    const CdfPlan py = plan_from_phi(phi, m);
    const double approx = approx_two_sample_ks(build_cdf(x, px), build_cdf(y, py));
    ASSERT_LE(std::abs(approx - oracle::brute_force_ks(x, y)), px.delta + py.delta + 1e-12)
        << "trial " << trial << " n=" << n << " m=" << m << " phi=" << phi;
  }
}

TEST(ApproxKs, ShiftedNormalsAtTestPrecision) {
  const std::vector<double> x = sample(DistributionSpec::normal(0, 1), 10'000, 1);
  const std::vector<double> y = sample(DistributionSpec::normal(1, 1), 10'000, 2);
  const double phi = 0.000399;
  const double d = approx_two_sample_ks(build_cdf(x, plan_from_phi(phi, 10'000)), build_cdf(y, plan_from_phi(phi, 10'000)));
  EXPECT_GE(d, 0.3684 - 0.02);
  EXPECT_LE(d, 0.4007 + 0.02);
  EXPECT_LE(std::abs(d - exact_ks_distance(x, y)), phi);
}

TEST(LallKs, SelfComparison) {
  const std::vector<double> x = oracle::normal_data(5000, 4);
  QuantileSketch a(0.01), b(0.01);
  a.insert(x);
  b.insert(x);
  a.seal();
  b.seal();
  EXPECT_LE(lall_ks(a, b), 2 * 0.01 + 2.0 / 5000);
}

TEST(LallKs, Errors) {
  QuantileSketch open(0.01), empty(0.01), ok(0.01);
  open.insert(1.0);
  ok.insert(1.0);
  ok.seal();
  empty.seal();
  EXPECT_THROW(lall_ks(open, ok), StateError);
  EXPECT_THROW(lall_ks(ok, empty), StateError);
}

TEST(LallKs, WithinPrecisionOfExact) {
  struct Case {
    DistributionSpec x, y;
    std::size_t n;
    double precision;
  };
  const Case cases[] = {
      {DistributionSpec::normal(0, 1), DistributionSpec::normal(1, 1), 10'000, 0.05},
      {DistributionSpec::gamma(0.5, 1), DistributionSpec::uniform(0, 1), 84'000, 0.05},
  };
  for (const auto& c : cases) {
    const std::vector<double> x = sample(c.x, c.n, 10);
    const std::vector<double> y = sample(c.y, c.n, 11);
    QuantileSketch sx(c.precision / 6), sy(c.precision / 6);
    sx.insert(x);
    sy.insert(y);
    sx.seal();
    sy.seal();
    EXPECT_LE(std::abs(lall_ks(sx, sy) - exact_ks_distance(x, y)), c.precision);
  }
}

TEST(RunTest, IdenticalSamples) {
  const std::vector<double> x = oracle::normal_data(4000, 8);
  const KsOutcome o = run_test(x, x, TestPrecision::from_alpha_beta(0.05, 0.025, 4000, 4000));
  EXPECT_LE(o.d, o.d_error_bound);
  EXPECT_GT(o.p_value, 0.99);
  EXPECT_FALSE(o.reject);
  EXPECT_EQ(o.n, 4000);
  EXPECT_EQ(o.m, 4000);
}

TEST(RunTest, DetectsVarianceShift) {
  int rejections = 0;
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    const std::vector<double> x = sample(DistributionSpec::normal(0, 1), 10'000, derive_seed(rep, 0));
    const std::vector<double> y = sample(DistributionSpec::normal(0, std::sqrt(2.0)), 10'000, derive_seed(rep, 1));
    const KsOutcome o = run_test(x, y, TestPrecision::from_alpha_beta(0.05, 0.025, 10'000, 10'000));
    rejections += o.reject ? 1 : 0;
    EXPECT_NEAR(o.d_error_bound, 0.000399, 5e-6);
  }
  EXPECT_EQ(rejections, 20);
}

TEST(RunTest, OutcomeInvariants) {
  const KsOutcome o = make_outcome(0.2, 0.01, 100, 100, 0.05);
  EXPECT_EQ(o.reject, o.p_value <= o.alpha);
  EXPECT_GE(o.p_value, 0.0);
  EXPECT_LE(o.p_value, 1.0);
  EXPECT_THROW(run_test(std::vector<double>{}, std::vector<double>{1.0}, TestPrecision::from_phi(0.05, 0.1)),
               DomainError);
}

TEST(KsOutcomeJson, KeysAndPrecision) {
  KsOutcome o;
  o.d = 0.1;
  o.d_error_bound = 0.000399;
  o.p_value = 0.5;
  o.n = 10;
  o.m = 20;
  o.alpha = 0.05;
  o.reject = false;
  const std::string json = to_json(o);
  EXPECT_EQ(json,
            R"({"d_ks": 0.10000000000000001, "d_error_bound": 0.00039899999999999999, "p_value": 0.5, )"
            R"("n": 10, "m": 20, "alpha": 0.050000000000000003, "reject": false})");
}

}  // namespace
}  // namespace sketchks
