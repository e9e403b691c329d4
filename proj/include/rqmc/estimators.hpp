#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rqmc/integrands.hpp"
#include "rqmc/nets.hpp"
#include "rqmc/scramble.hpp"

namespace rqmc {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + correction_; }

 private:
  double sum_ = 0.0;
  double correction_ = 0.0;
};

/// r independent single-net estimates; estimates[j-1] came from stream_id j.
struct ReplicateBatch {
  std::vector<double> estimates;
  std::size_t N = 0;
  std::size_t r = 0;
  ScramblerSpec scrambler;
  std::string integrand;
  std::uint64_t master_seed = 0;
};

/// (1/N) * sum of f over the points.
double q_estimate(const IntegrandSpec& f, const NetPoints& pts);

ReplicateBatch replicate_batch(const IntegrandSpec& f, const ScramblerSpec& spec, std::size_t m, std::size_t r,
                               std::uint64_t master_seed, unsigned threads = 1);

/// Same as replicate_batch on a caller-built base net (avoids rebuilding it per batch).
ReplicateBatch replicate_batch(const IntegrandSpec& f, const ScramblerSpec& spec, const NetPoints& net, std::size_t r,
                               std::uint64_t master_seed, unsigned threads = 1);

double average_estimator(const ReplicateBatch& batch);
double median_estimator(const ReplicateBatch& batch);

/// Sample median; midpoint of the two central order statistics for even sizes.
double median_of(std::span<const double> values);

/// Compensated arithmetic mean.
double mean_of(std::span<const double> values);

}  // namespace rqmc
