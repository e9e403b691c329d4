#include "rqmc/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rqmc/parallel.hpp"

namespace rqmc {

void CompensatedSum::add(double x) {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    correction_ += (sum_ - t) + x;
  } else {
    correction_ += (x - t) + sum_;
  }
  sum_ = t;
}

double q_estimate(const IntegrandSpec& f, const NetPoints& pts) {
  if (pts.points.empty()) throw std::invalid_argument("q_estimate: empty point set");
  CompensatedSum sum;
  for (double x : pts.points) sum.add(f.eval(x));
  return sum.value() / static_cast<double>(pts.points.size());
}

ReplicateBatch replicate_batch(const IntegrandSpec& f, const ScramblerSpec& spec, const NetPoints& net, std::size_t r,
                               std::uint64_t master_seed, unsigned threads) {
  if (r == 0) throw std::invalid_argument("replicate_batch: r must be >= 1");
  spec.validate();
  if (net.base != spec.base) throw std::invalid_argument("replicate_batch: net base differs from scrambler base");
  ReplicateBatch batch{std::vector<double>(r), net.size(), r, spec, f.name, master_seed};
  parallel_for(r, threads, [&](std::size_t j) {
    RandomStream rs(master_seed, j + 1);
    batch.estimates[j] = q_estimate(f, scramble(net, spec, rs));
  });
  return batch;
}

ReplicateBatch replicate_batch(const IntegrandSpec& f, const ScramblerSpec& spec, std::size_t m, std::size_t r,
                               std::uint64_t master_seed, unsigned threads) {
  spec.validate();
  return replicate_batch(f, spec, van_der_corput_net(spec.base, m), r, master_seed, threads);
}

double mean_of(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty sample");
  CompensatedSum sum;
  for (double v : values) sum.add(v);
  return sum.value() / static_cast<double>(values.size());
}

double median_of(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double average_estimator(const ReplicateBatch& batch) { return mean_of(batch.estimates); }

double median_estimator(const ReplicateBatch& batch) { return median_of(batch.estimates); }

}  // namespace rqmc
