#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "rqmc/estimators.hpp"
#include "rqmc/experiment.hpp"
#include "rqmc/random.hpp"
#include "rqmc/stats.hpp"

using namespace rqmc;

namespace {

// Test-side normal quantile by bisection on 0.5 * erfc(-x / sqrt 2).
double normal_quantile(double p) {
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (0.5 * std::erfc(-mid / std::numbers::sqrt2) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(Stats, NormalFunctions) {
  EXPECT_NEAR(normal_pdf(0.0), 0.3989422804014327, 1e-16);
  EXPECT_NEAR(normal_cdf(1.959963984540054), 0.975, 1e-12);
  EXPECT_NEAR(normal_cdf(-8.0), 6.22096057427178e-16, 1e-28);
  EXPECT_NEAR(normal_cdf(2.0, 2.0), normal_cdf(1.0), 1e-16);
  EXPECT_NEAR(log_normal_cdf(-30.0), -454.32124395634320, 1e-9);
}

TEST(Stats, RescaleSingle) {
  const double I = 0.4, sigma = 0.3;
  const std::size_t N = 16;
  const std::vector<double> q = {I, I + sigma / std::pow(16.0, 1.5)};
  const RescaledSample s = rescale_single(q, I, sigma, N);
  EXPECT_EQ(s.values[0], 0.0);
  EXPECT_NEAR(s.values[1], 1.0, 1e-12);
  EXPECT_EQ(s.scaling, Scaling::Single);
  EXPECT_EQ(s.repetitions, 2u);
  EXPECT_THROW(rescale_single(q, I, 0.0, N), std::invalid_argument);
}

TEST(Stats, RescaleMedian) {
  const double I = 0.6, sigma = 0.2;
  const std::size_t N = 64, r = 15;
  const std::vector<double> m = {I, I + sigma * std::sqrt(std::numbers::pi / (2.0 * r)) / std::pow(64.0, 1.5)};
  const RescaledSample s = rescale_median(m, I, sigma, N, r);
  EXPECT_EQ(s.values[0], 0.0);
  EXPECT_NEAR(s.values[1], 1.0, 1e-12);
  EXPECT_EQ(s.r, r);
  EXPECT_THROW(rescale_median(m, I, 0.0, N, r), std::invalid_argument);
}

// Exact finite-N variance means the rescaled variance is 1 without asymptotics.
TEST(Stats, RescaledVarianceLinearJittered) {
  const IntegrandSpec f = builtin("linear");
  const NetPoints net = van_der_corput_net(2, 6);
  const auto q = single_estimates(f, {ScramblerKind::Jittered, 2, 0, true}, net, 10000, 3, 1);
  const double v = sample_variance(rescale_single(q, f.exact_integral, f.sigma(), 64).values);
  EXPECT_GE(v, 0.97);
  EXPECT_LE(v, 1.03);
}

// Jittered is the nested law in 1-D; it stands in for nested here to keep the unit test fast.
TEST(Stats, RescaledMedianVarianceMatchesOrderStatistics) {
  const IntegrandSpec f = builtin("f2");
  const NetPoints net = van_der_corput_net(2, 6);
  const std::size_t r = 15;
  const auto med = median_estimates(f, {ScramblerKind::Jittered, 2, 0, true}, net, r, 10000, 4, 1);
  const double v = sample_variance(rescale_median(med, f.exact_integral, f.sigma(), 64, r).values);
  const double oracle = 2.0 * r / std::numbers::pi * median_variance(r, 1.0);
  EXPECT_NEAR(v / oracle, 1.0, 0.10);
}

TEST(Stats, KsNormalExamples) {
  const std::size_t n = 1000;
  std::vector<double> quantiles(n);
  for (std::size_t i = 0; i < n; ++i) quantiles[i] = normal_quantile((static_cast<double>(i) + 0.5) / n);
  EXPECT_LE(ks_statistic_normal(quantiles), 0.001);
  EXPECT_NEAR(ks_statistic_normal(quantiles), 0.0005, 1e-9);
  EXPECT_EQ(ks_statistic_normal(std::vector<double>(500, 0.0)), 0.5);
  EXPECT_THROW(ks_statistic_normal(std::vector<double>(99, 0.0)), std::invalid_argument);
}

TEST(Stats, KsNormalOnGeneratedNormals) {
  const std::size_t n = 10000;
  const double critical = ks_critical_value_5pct(n);
  EXPECT_NEAR(critical, 0.01358, 1e-12);
  int below = 0;
  for (int trial = 0; trial < 100; ++trial) {
    RandomStream rs(8, static_cast<std::uint64_t>(trial));
    std::vector<double> z(n);
    for (auto& x : z) x = rs.normal();
    RescaledSample s{z, Scaling::Single, 1, 1, n};
    below += ks_statistic_normal(s) < 0.0136;
  }
  EXPECT_GE(below, 88);  // Binomial(100, 0.95); 88 is three sd below the mean
}

TEST(Stats, KsUniformExact) {
  EXPECT_DOUBLE_EQ(ks_statistic_uniform(std::vector<double>{0.5}), 0.5);
  EXPECT_DOUBLE_EQ(ks_statistic_uniform(std::vector<double>{0.25, 0.75}), 0.25);
}

TEST(Stats, MedianDensityExamples) {
  for (double x : {-3.0, -0.5, 0.0, 1.2}) {
    EXPECT_DOUBLE_EQ(median_density(x, MedianLawSpec(1, 1.0)), normal_pdf(x));
    EXPECT_DOUBLE_EQ(median_density(x, MedianLawSpec(1, 2.0)), normal_pdf(x, 2.0));
  }
  EXPECT_NEAR(median_density(0.0, MedianLawSpec(3, 1.0)), 1.5 * 0.3989422804014327, 1e-14);
  EXPECT_NEAR(median_density(0.0, MedianLawSpec(3, 1.0)), 0.5984, 1e-4);
  // 6 Phi (1 - Phi) phi away from zero.
  const double x = 0.7;
  EXPECT_NEAR(median_density(x, MedianLawSpec(3, 1.0)), 6.0 * normal_cdf(x) * normal_cdf(-x) * normal_pdf(x), 1e-14);
  EXPECT_THROW(MedianLawSpec(4, 1.0), std::invalid_argument);
  EXPECT_THROW(MedianLawSpec(3, 0.0), std::invalid_argument);
}

TEST(Stats, MedianDensityNormalizedAndSymmetric) {
  for (std::size_t r : {1u, 3u, 15u, 101u}) {
    for (double sigma : {0.5, 1.0, 2.0}) {
      const MedianLawSpec law(r, sigma);
      const auto density = [&law](double x) { return median_density(x, law); };
      EXPECT_NEAR(integrate_adaptive_simpson(density, -10 * sigma, 10 * sigma, 1e-12), 1.0, 1e-8) << r << ' ' << sigma;
      for (double x : {0.1, 0.5, 1.0, 2.5}) EXPECT_NEAR(density(x * sigma), density(-x * sigma), 1e-15 * density(0.0));
    }
  }
}

// Reference second moments from independent 30-digit quadrature of the same density.
TEST(Stats, MedianVarianceMatchesReference) {
  EXPECT_EQ(median_variance(1, 1.0), 1.0);
  EXPECT_EQ(median_variance(1, 3.0), 9.0);
  EXPECT_NEAR(median_variance(3, 1.0), 0.44867110457820795, 1e-9);
  EXPECT_NEAR(median_variance(15, 1.0), 0.10169465208236844, 1e-9);
  EXPECT_NEAR(median_variance(101, 1.0), 0.015486231919001366, 1e-10);
  EXPECT_NEAR(median_variance(1001, 1.0), 0.0015685541315822678, 1e-11);
  EXPECT_NEAR(median_variance(15, 2.0), 4.0 * 0.10169465208236844, 4e-9);
  EXPECT_THROW(median_variance(2, 1.0), std::invalid_argument);
}

TEST(Stats, MedianVarianceApproachesHalfPi) {
  double previous_gap = 1.0;
  for (std::size_t r : {3u, 15u, 101u, 1001u}) {
    const double scaled = static_cast<double>(r) * median_variance(r, 1.0);
    const double gap = std::numbers::pi / 2.0 - scaled;
    EXPECT_GT(gap, 0.0) << r;
    EXPECT_LT(gap, previous_gap) << r;
    previous_gap = gap;
  }
  EXPECT_NEAR(1001.0 * median_variance(1001, 1.0) / (std::numbers::pi / 2.0), 1.0, 0.005);
}

TEST(Stats, MedianVarianceMatchesSimulation) {
  RandomStream rs(123, 0);
  const std::size_t n = 200000;
  std::vector<double> medians(n);
  for (auto& m : medians) {
    const double a = rs.normal(), b = rs.normal(), c = rs.normal();
    m = std::max(std::min(a, b), std::min(std::max(a, b), c));
  }
  EXPECT_NEAR(sample_variance(medians) / median_variance(3, 1.0), 1.0, 0.02);
}

TEST(Stats, AdaptiveSimpson) {
  EXPECT_NEAR(integrate_adaptive_simpson([](double x) { return std::sin(x); }, 0.0, std::numbers::pi, 1e-12), 2.0, 1e-11);
  // A narrow peak that a single coarse Simpson panel would miss entirely.
  const auto spike = [](double x) { return normal_pdf(x - 0.3, 1e-3); };
  EXPECT_NEAR(integrate_adaptive_simpson(spike, -10.0, 10.0, 1e-10, 256), 1.0, 1e-8);
  EXPECT_THROW(integrate_adaptive_simpson(spike, 1.0, 1.0, 1e-10), std::invalid_argument);
}

TEST(Stats, HistogramExamples) {
  const Histogram one = histogram(std::vector<double>{0.3}, 1, 0.0, 1.0);
  EXPECT_DOUBLE_EQ(one.densities[0], 1.0 / one.bin_width);
  const Histogram narrow = histogram(std::vector<double>{0.3}, 1, 0.25, 0.5);
  EXPECT_DOUBLE_EQ(narrow.densities[0], 4.0);

  const Histogram empty = histogram(std::vector<double>{7.0, -9.0, 5.5}, 60, -5.0, 5.0);
  EXPECT_EQ(empty.out_of_range, 3u);
  for (double d : empty.densities) EXPECT_EQ(d, 0.0);

  RandomStream rs(1, 1);
  std::vector<double> u(200000);
  for (auto& x : u) x = -2.0 + 5.0 * rs.uniform();
  const Histogram flat = histogram(u, 20, -2.0, 3.0);
  for (double d : flat.densities) EXPECT_NEAR(d * 5.0, 1.0, 0.05);
  EXPECT_EQ(flat.out_of_range, 0u);

  const Histogram edges = histogram(std::vector<double>{-5.0, 5.0}, 60, -5.0, 5.0);
  EXPECT_EQ(edges.counts.front(), 1u);
  EXPECT_EQ(edges.counts.back(), 1u);
  EXPECT_NEAR(edges.centers[0], -5.0 + 1.0 / 12.0, 1e-15);

  EXPECT_THROW(histogram(u, 0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(histogram(u, 5, 1.0, 1.0), std::invalid_argument);
}

TEST(Stats, HistogramIntegratesToInRangeMass) {
  RandomStream rs(2, 2);
  std::vector<double> z(50000);
  for (auto& x : z) x = rs.normal() * 2.5;
  const Histogram h = histogram(z, 60, -5.0, 5.0);
  double mass = 0.0;
  for (double d : h.densities) mass += d * h.bin_width;
  EXPECT_NEAR(mass, 1.0 - static_cast<double>(h.out_of_range) / static_cast<double>(z.size()), 1e-12);
  EXPECT_GT(h.out_of_range, 0u);
}

TEST(Stats, FitSlopeExamples) {
  std::vector<std::pair<double, double>> exact, flat, perturbed;
  for (int m = 4; m <= 12; ++m) {
    const double N = std::ldexp(1.0, m);
    exact.emplace_back(N, 3.0 * std::pow(N, -1.5));
    flat.emplace_back(N, 0.02);
    perturbed.emplace_back(N, std::pow(N, -2.0) * (1.0 + 0.01 * (m % 2 ? -1.0 : 1.0)));
  }
  const SlopeFit e = fit_slope(exact);
  EXPECT_NEAR(e.slope, -1.5, 1e-12);
  EXPECT_NEAR(e.intercept, std::log10(3.0), 1e-12);
  EXPECT_NEAR(fit_slope(flat).slope, 0.0, 1e-12);
  const double p = fit_slope(perturbed).slope;
  EXPECT_GE(p, -2.02);
  EXPECT_LE(p, -1.98);
}

TEST(Stats, FitSlopeScaleInvariance) {
  std::vector<std::pair<double, double>> base, scaled;
  RandomStream rs(4, 4);
  for (int m = 3; m <= 10; ++m) {
    const double N = std::ldexp(1.0, m);
    const double err = std::pow(N, -1.2) * (1.0 + 0.3 * rs.uniform());
    base.emplace_back(N, err);
    scaled.emplace_back(N, 7.5 * err);
  }
  const SlopeFit a = fit_slope(base), b = fit_slope(scaled);
  EXPECT_NEAR(a.slope, b.slope, 1e-12);
  EXPECT_NEAR(b.intercept - a.intercept, std::log10(7.5), 1e-12);
}

TEST(Stats, FitSlopeRejects) {
  const std::vector<std::pair<double, double>> zero = {{16, 1e-3}, {32, 0.0}, {64, 1e-4}};
  EXPECT_THROW(fit_slope(zero), std::invalid_argument);
  const std::vector<std::pair<double, double>> two = {{16, 1e-3}, {32, 1e-4}};
  EXPECT_THROW(fit_slope(two), std::invalid_argument);
}

TEST(Stats, MomentHelpers) {
  EXPECT_DOUBLE_EQ(sample_variance(std::vector<double>{1.0, 2.0, 3.0, 4.0}), 5.0 / 3.0);
  EXPECT_DOUBLE_EQ(sample_correlation(std::vector<double>{1, 2, 3}, std::vector<double>{2, 4, 6}), 1.0);
  EXPECT_THROW(sample_variance(std::vector<double>{1.0}), std::invalid_argument);
}
