#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

namespace rqmc {

// ---------------------------------------------------------------------------
// Normal distribution

double normal_pdf(double x, double sigma = 1.0);
double normal_cdf(double x, double sigma = 1.0);
/// log Phi_sigma(x), accurate far into the lower tail.
double log_normal_cdf(double x, double sigma = 1.0);

// ---------------------------------------------------------------------------
// Rescaled errors

enum class Scaling {
  Single,  // N^{3/2} (Q - I) / sigma
  Median,  // sqrt(2r/pi) N^{3/2} (M - I) / sigma
};

struct RescaledSample {
  std::vector<double> values;
  Scaling scaling = Scaling::Single;
  std::size_t N = 0;
  std::size_t r = 1;
  std::size_t repetitions = 0;
};

RescaledSample rescale_single(std::span<const double> estimates, double exact, double sigma, std::size_t N);
RescaledSample rescale_median(std::span<const double> medians, double exact, double sigma, std::size_t N,
                              std::size_t r);

// ---------------------------------------------------------------------------
// Moments

/// Unbiased sample variance (n - 1 denominator), two-pass with compensated sums.
double sample_variance(std::span<const double> values);

/// Pearson correlation of two equally sized samples.
double sample_correlation(std::span<const double> x, std::span<const double> y);

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov

/// sup |F_n - F| evaluated on both sides of every sorted sample point.
double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf);

/// KS distance to N(0,1). Requires at least 100 values.
double ks_statistic_normal(const RescaledSample& sample);
double ks_statistic_normal(std::span<const double> values);

/// KS distance to Uniform[0,1).
double ks_statistic_uniform(std::span<const double> values);

/// Asymptotic 5% critical value 1.358 / sqrt(n).
double ks_critical_value_5pct(std::size_t n);

// ---------------------------------------------------------------------------
// Sample median of r = 2k+1 iid N(0, sigma^2)

class MedianLawSpec {
 public:
  /// Throws std::invalid_argument unless r is odd and sigma > 0.
  MedianLawSpec(std::size_t r, double sigma);

  std::size_t r() const { return r_; }
  std::size_t k() const { return (r_ - 1) / 2; }
  double sigma() const { return sigma_; }

 private:
  std::size_t r_;
  double sigma_;
};

/// r!/(k!k!) Phi_sigma(x)^k (1 - Phi_sigma(x))^k phi_sigma(x).
double median_density(double x, const MedianLawSpec& law);

/// Second moment of median_density over [-10 sigma, 10 sigma].
double median_variance(std::size_t r, double sigma);

/// Adaptive Simpson over [a, b], started from `panels` equal sub-intervals so
/// that narrow peaks are not missed. abs_tol bounds the total error estimate.
double integrate_adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double abs_tol,
                                  std::size_t panels = 256);

// ---------------------------------------------------------------------------
// Histogram

struct Histogram {
  double lo = 0.0;
  double hi = 0.0;
  double bin_width = 0.0;
  std::vector<double> centers;
  std::vector<double> densities;
  std::vector<std::size_t> counts;
  std::size_t out_of_range = 0;
  std::size_t total = 0;
};

/// Bins values in [lo, hi] (hi belongs to the last bin); density = count / (total * bin_width).
Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi);

// ---------------------------------------------------------------------------
// Convergence slope

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least squares on (log10 N, log10 error). Needs >= 3 points, all errors > 0.
SlopeFit fit_slope(std::span<const std::pair<double, double>> points);

}  // namespace rqmc
