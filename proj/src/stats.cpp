#include "rqmc/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "rqmc/estimators.hpp"

namespace rqmc {

double normal_pdf(double x, double sigma) {
  const double z = x / sigma;
  return std::exp(-0.5 * z * z) / (sigma * std::sqrt(2.0 * std::numbers::pi));
}

double normal_cdf(double x, double sigma) { return 0.5 * std::erfc(-x / (sigma * std::numbers::sqrt2)); }

double log_normal_cdf(double x, double sigma) { return std::log(normal_cdf(x, sigma)); }

namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw std::invalid_argument("rescaling needs sigma > 0 (constant integrands have sigma = 0)");
}

}  // namespace

RescaledSample rescale_single(std::span<const double> estimates, double exact, double sigma, std::size_t N) {
  check_sigma(sigma);
  const double scale = std::pow(static_cast<double>(N), 1.5) / sigma;
  RescaledSample out{{}, Scaling::Single, N, 1, estimates.size()};
  out.values.reserve(estimates.size());
  for (double q : estimates) out.values.push_back(scale * (q - exact));
  return out;
}

RescaledSample rescale_median(std::span<const double> medians, double exact, double sigma, std::size_t N,
                              std::size_t r) {
  check_sigma(sigma);
  if (r == 0) throw std::invalid_argument("rescale_median: r must be >= 1");
  const double scale =
      std::sqrt(2.0 * static_cast<double>(r) / std::numbers::pi) * std::pow(static_cast<double>(N), 1.5) / sigma;
  RescaledSample out{{}, Scaling::Median, N, r, medians.size()};
  out.values.reserve(medians.size());
  for (double m : medians) out.values.push_back(scale * (m - exact));
  return out;
}

double sample_variance(std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("sample variance needs at least 2 values");
  const double mean = mean_of(values);
  CompensatedSum squares;
  for (double v : values) squares.add((v - mean) * (v - mean));
  return squares.value() / static_cast<double>(values.size() - 1);
}

double sample_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("correlation needs two equal samples of size >= 2");
  const double mx = mean_of(x);
  const double my = mean_of(y);
  CompensatedSum sxy, sxx, syy;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy.add(dx * dy);
    sxx.add(dx * dx);
    syy.add(dy * dy);
  }
  return sxy.value() / std::sqrt(sxx.value() * syy.value());
}

double ks_statistic(std::span<const double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw std::invalid_argument("KS statistic of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    d = std::max({d, (static_cast<double>(i) + 1.0) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_statistic_normal(std::span<const double> values) {
  if (values.size() < 100)
    throw std::invalid_argument("normality KS statistic needs at least 100 values, got " + std::to_string(values.size()));
  return ks_statistic(values, [](double x) { return normal_cdf(x); });
}

double ks_statistic_normal(const RescaledSample& sample) { return ks_statistic_normal(sample.values); }

double ks_statistic_uniform(std::span<const double> values) {
  return ks_statistic(values, [](double x) { return std::clamp(x, 0.0, 1.0); });
}

double ks_critical_value_5pct(std::size_t n) { return 1.358 / std::sqrt(static_cast<double>(n)); }

MedianLawSpec::MedianLawSpec(std::size_t r, double sigma) : r_(r), sigma_(sigma) {
  if (r % 2 == 0) throw std::invalid_argument("median law needs odd r, got " + std::to_string(r));
  if (!(sigma > 0.0)) throw std::invalid_argument("median law needs sigma > 0");
}

double median_density(double x, const MedianLawSpec& law) {
  const double k = static_cast<double>(law.k());
  const double phi = normal_pdf(x, law.sigma());
  if (law.k() == 0) return phi;
  const double log_constant = std::lgamma(static_cast<double>(law.r()) + 1.0) - 2.0 * std::lgamma(k + 1.0);
  // Phi(x) and 1 - Phi(x) = Phi(-x) are each taken from erfc, so both tails stay accurate.
  const double log_lower = log_normal_cdf(x, law.sigma());
  const double log_upper = log_normal_cdf(-x, law.sigma());
  if (phi == 0.0) return 0.0;
  return std::exp(log_constant + k * (log_lower + log_upper) + std::log(phi));
}

namespace {

struct SimpsonPanel {
  double a, b, fa, fm, fb, whole;
};

double simpson(double a, double b, double fa, double fm, double fb) { return (b - a) / 6.0 * (fa + 4.0 * fm + fb); }

double refine(const std::function<double(double)>& fn, const SimpsonPanel& p, double tol, int depth) {
  const double m = 0.5 * (p.a + p.b);
  const double lm = 0.5 * (p.a + m);
  const double rm = 0.5 * (m + p.b);
  const double flm = fn(lm);
  const double frm = fn(rm);
  const double left = simpson(p.a, m, p.fa, flm, p.fm);
  const double right = simpson(m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return refine(fn, {p.a, m, p.fa, flm, p.fm, left}, 0.5 * tol, depth - 1) +
         refine(fn, {m, p.b, p.fm, frm, p.fb, right}, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive_simpson(const std::function<double(double)>& fn, double a, double b, double abs_tol,
                                  std::size_t panels) {
  if (!(b > a)) throw std::invalid_argument("integration interval must have b > a");
  if (panels == 0) panels = 1;
  const double width = (b - a) / static_cast<double>(panels);
  const double panel_tol = abs_tol / static_cast<double>(panels);
  CompensatedSum total;
  double fa = fn(a);
  for (std::size_t i = 0; i < panels; ++i) {
    const double lo = a + width * static_cast<double>(i);
    const double hi = i + 1 == panels ? b : a + width * static_cast<double>(i + 1);
    const double fm = fn(0.5 * (lo + hi));
    const double fb = fn(hi);
    total.add(refine(fn, {lo, hi, fa, fm, fb, simpson(lo, hi, fa, fm, fb)}, panel_tol, 40));
    fa = fb;
  }
  return total.value();
}

double median_variance(std::size_t r, double sigma) {
  const MedianLawSpec law(r, sigma);
  if (r == 1) return sigma * sigma;
  const auto second_moment = [&law](double x) { return x * x * median_density(x, law); };
  const double lo = -10.0 * sigma;
  const double hi = 10.0 * sigma;
  // Rough pass fixes the scale for a relative tolerance well under 1e-6.
  const double rough = integrate_adaptive_simpson(second_moment, lo, hi, 1e-6 * sigma * sigma);
  return integrate_adaptive_simpson(second_moment, lo, hi, 1e-10 * std::abs(rough));
}

Histogram histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  if (!(lo < hi)) throw std::invalid_argument("histogram range needs lo < hi");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  h.bin_width = (hi - lo) / static_cast<double>(bins);
  h.counts.assign(bins, 0);
  h.total = values.size();
  for (double v : values) {
    if (!(v >= lo && v <= hi)) {
      ++h.out_of_range;
      continue;
    }
    auto bin = static_cast<std::size_t>((v - lo) / h.bin_width);
    if (bin >= bins) bin = bins - 1;
    ++h.counts[bin];
  }
  h.centers.resize(bins);
  h.densities.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    h.centers[i] = lo + (static_cast<double>(i) + 0.5) * h.bin_width;
    h.densities[i] =
        h.total == 0 ? 0.0 : static_cast<double>(h.counts[i]) / (static_cast<double>(h.total) * h.bin_width);
  }
  return h;
}

SlopeFit fit_slope(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3) throw std::invalid_argument("fit_slope needs at least 3 points");
  std::vector<double> xs, ys;
  for (const auto& [n, err] : points) {
    if (!(err > 0.0)) throw std::invalid_argument("fit_slope: nonpositive error value at N = " + std::to_string(n));
    if (!(n > 0.0)) throw std::invalid_argument("fit_slope: nonpositive N");
    xs.push_back(std::log10(n));
    ys.push_back(std::log10(err));
  }
  const double mx = mean_of(xs);
  const double my = mean_of(ys);
  CompensatedSum sxy, sxx;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy.add((xs[i] - mx) * (ys[i] - my));
    sxx.add((xs[i] - mx) * (xs[i] - mx));
  }
  if (sxx.value() == 0.0) throw std::invalid_argument("fit_slope: all N values are equal");
  const double slope = sxy.value() / sxx.value();
  return {slope, my - slope * mx};
}

}  // namespace rqmc
