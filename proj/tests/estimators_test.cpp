#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "rqmc/estimators.hpp"
#include "rqmc/stats.hpp"

using namespace rqmc;

namespace {

ReplicateBatch batch_of(std::vector<double> estimates) {
  ReplicateBatch b;
  b.r = estimates.size();
  b.estimates = std::move(estimates);
  return b;
}

const ScramblerKind kAllKinds[] = {ScramblerKind::Nested, ScramblerKind::Jittered, ScramblerKind::MatousekLinear,
                                   ScramblerKind::TezukaIBinomial, ScramblerKind::OwenStriped};

}  // namespace

TEST(Estimators, QEstimateExamples) {
  EXPECT_EQ(q_estimate(builtin("constant"), van_der_corput_net(2, 5)), 1.0);
  EXPECT_EQ(q_estimate(builtin("linear"), {2, 2, {0.125, 0.375, 0.625, 0.875}}), 0.5);
  const double expected = (0.0 + std::pow(0.5, 1.5) + std::pow(0.25, 1.5) + std::pow(0.75, 1.5)) / 4.0;
  EXPECT_NEAR(q_estimate(builtin("f1"), van_der_corput_net(2, 2)), expected, 1e-15);
  EXPECT_NEAR(expected, 0.2820, 1e-4);
  EXPECT_THROW(q_estimate(builtin("f1"), NetPoints{2, 0, {}}), std::invalid_argument);
}

TEST(Estimators, CompensatedSumKeepsSmallTerms) {
  CompensatedSum s;
  s.add(1.0);
  for (int i = 0; i < 1 << 20; ++i) s.add(1e-17);
  // A naive sum stays at exactly 1.0; each term is below half an ulp.
  EXPECT_DOUBLE_EQ(s.value(), 1.0 + (1 << 20) * 1e-17);
  EXPECT_GT(s.value(), 1.0);
}

TEST(Estimators, Combiners) {
  EXPECT_DOUBLE_EQ(average_estimator(batch_of({0.4, 0.6})), 0.5);
  EXPECT_EQ(average_estimator(batch_of({0.7})), 0.7);
  EXPECT_EQ(average_estimator(batch_of({0.3, 0.3, 0.3})), 0.3);
  EXPECT_EQ(median_estimator(batch_of({0.4, 0.5, 0.6})), 0.5);
  EXPECT_EQ(median_estimator(batch_of({0.6, 0.4, 0.5})), 0.5);
  EXPECT_EQ(median_estimator(batch_of({0.4, 0.6})), 0.5);
  EXPECT_EQ(median_estimator(batch_of({0.7})), 0.7);
  EXPECT_EQ(median_estimator(batch_of({0.3, 0.3, 0.3, 0.3})), 0.3);
  EXPECT_THROW(median_estimator(batch_of({})), std::invalid_argument);
}

TEST(Estimators, CombinersArePermutationInvariant) {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> v(1 + trial % 9);
    for (auto& x : v) x = normal(gen);
    // Reference median by full sort.
    auto sorted = v;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double ref = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    const double avg = average_estimator(batch_of(v));
    for (int p = 0; p < 5; ++p) {
      std::shuffle(v.begin(), v.end(), gen);
      EXPECT_EQ(median_estimator(batch_of(v)), ref);
      EXPECT_NEAR(average_estimator(batch_of(v)), avg, 1e-15);
    }
  }
}

TEST(Estimators, ReplicateBatchContract) {
  const IntegrandSpec f = builtin("f1");
  const ScramblerSpec spec{ScramblerKind::MatousekLinear, 2, 0, true};
  const ReplicateBatch one = replicate_batch(f, spec, 4, 1, 77);
  RandomStream rs(77, 1);
  EXPECT_EQ(one.estimates, (std::vector<double>{q_estimate(f, scramble(van_der_corput_net(2, 4), spec, rs))}));
  EXPECT_EQ(average_estimator(one), median_estimator(one));

  const ReplicateBatch a = replicate_batch(f, spec, 4, 9, 5);
  const ReplicateBatch b = replicate_batch(f, spec, 4, 9, 5, 3);
  EXPECT_EQ(a.estimates, b.estimates);
  EXPECT_EQ(a.N, 16u);
  EXPECT_EQ(a.r, 9u);
  EXPECT_EQ(a.integrand, "f1");
  // Replicate j reproducible in isolation.
  RandomStream rs7(5, 7);
  EXPECT_EQ(a.estimates[6], q_estimate(f, scramble(van_der_corput_net(2, 4), spec, rs7)));

  for (auto kind : kAllKinds) {
    const ReplicateBatch c = replicate_batch(builtin("constant"), {kind, 2, 0, true}, 3, 5, 1);
    for (double e : c.estimates) EXPECT_EQ(e, 1.0);
    EXPECT_EQ(median_estimator(c), average_estimator(c));
  }
  EXPECT_THROW(replicate_batch(f, spec, 4, 0, 5), std::invalid_argument);
  EXPECT_THROW(replicate_batch(f, {ScramblerKind::TezukaIBinomial, 6, 0, true}, 2, 3, 5), std::invalid_argument);
}

TEST(Estimators, Unbiased) {
  const std::size_t m = 4, N = 16, reps = 10000;
  for (const std::string name : {"f1", "f2"}) {
    const IntegrandSpec f = builtin(name);
    for (auto kind : kAllKinds) {
      const ReplicateBatch batch = replicate_batch(f, {kind, 2, 0, true}, m, reps, 2024);
      const double bound = 4.0 * f.sigma() / (std::pow(static_cast<double>(N), 1.5) * 100.0);
      EXPECT_LE(std::abs(average_estimator(batch) - f.exact_integral), bound) << name << ' ' << scrambler_name(kind);
    }
  }
}

// Var(Q_N) = 1/(12 N^3) exactly for f(x) = x under jittered (hence nested) sampling.
TEST(Estimators, ExactVarianceForLinearIntegrand) {
  const std::size_t m = 6, reps = 100000;
  const double N = 64.0;
  const double exact = 1.0 / (12.0 * N * N * N);
  for (auto kind : {ScramblerKind::Jittered, ScramblerKind::Nested}) {
    const ReplicateBatch batch = replicate_batch(builtin("linear"), {kind, 2, 0, true}, m, reps, 11);
    const auto& q = batch.estimates;
    const double mean = mean_of(q);
    const double var = sample_variance(q);
    double m4 = 0.0;
    for (double x : q) m4 += std::pow(x - mean, 4);
    m4 /= static_cast<double>(reps);
    const double n = static_cast<double>(reps);
    const double se = std::sqrt((m4 - var * var * (n - 3.0) / (n - 1.0)) / n);
    EXPECT_LE(std::abs(var - exact), 3.0 * se) << scrambler_name(kind) << " var/exact=" << var / exact;
  }
}
