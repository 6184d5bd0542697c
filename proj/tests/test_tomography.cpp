// Copyright 2026 The dtomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>

#include <gtest/gtest.h>

#include "dtomo/channels.hpp"
#include "dtomo/diamond.hpp"
#include "dtomo/tomography.hpp"
#include "test_util.hpp"

namespace dtomo {
namespace {

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Re-evaluation of the bound from its defining expressions.
struct RefBound {
  double s;
  double total_per_eps;
};

RefBound reference_bound(int d_out, int d_in, int k, double delta) {
  const double d_tot = static_cast<double>(d_out) * d_in * k;
  const double e_ov = 1.0 - std::pow(delta / 4.0, 1.0 / (d_tot - 1.0));
  const double c_ov = std::sqrt(e_ov / (1.0 - e_ov));
  const double s = 1.0 / (1.0 - e_ov) - 1.0 + 4.0 * c_ov + c_ov * c_ov +
                   2.0 * (1.0 + c_ov) * (1.0 / std::sqrt(1.0 - e_ov) - 1.0);
  const double c = 2.0 + std::sqrt(std::log(4.0 / delta) / (k * d_out));
  return {s, c * (4.0 + s)};
}

double reference_total(int d_out, int d_in, int k, double delta, std::int64_t n) {
  const double d_tot = static_cast<double>(d_out) * d_in * k;
  const double eps_pure = std::sqrt(4.0 * (d_tot + std::log(2.0 / delta)) / static_cast<double>(n));
  return reference_bound(d_out, d_in, k, delta).total_per_eps * eps_pure;
}

TomographyConfig config(DimPair dims, int k, std::int64_t n, double delta, std::uint64_t seed) {
  TomographyConfig c;
  c.dims = dims;
  c.k = k;
  c.n = n;
  c.delta = delta;
  c.seed = seed;
  return c;
}

TEST(Purify, ReducedStateMatchesChoi) {
  std::mt19937_64 g(1);
  RngStream rng(1, 0);
  for (int t = 0; t < 100; ++t) {
    const std::vector<ComplexMatrix> ops = oracle::random_kraus(2, 2, 2, g);
    const ChoiOperator j(DimPair{2, 2}, oracle::choi(ops));
    const PureState phi = purify_choi(j, 2, rng);
    const ComplexMatrix reduced = oracle::trace_second(phi.projector(), 4, 2);
    EXPECT_LT(max_abs(reduced - j.matrix()), 1e-8);
  }
}

TEST(Purify, MaximallyMixedAndRankErrors) {
  RngStream rng(2, 0);
  const ChoiOperator mixed(DimPair{2, 2}, ComplexMatrix::Identity(4, 4) / 4.0);
  const PureState phi = purify_choi(mixed, 4, rng);
  EXPECT_LT(max_abs(oracle::trace_second(phi.projector(), 4, 4) - mixed.matrix()), 1e-10);
  EXPECT_THROW(purify_choi(mixed, 3, rng), InvariantError);
}

TEST(Purify, IsometricChannelIsAlreadyPure) {
  std::mt19937_64 g(3);
  RngStream rng(3, 0);
  const ComplexMatrix u = oracle::random_unitary(2, g);
  const ChoiOperator j(DimPair{2, 2}, oracle::choi({u}));
  const PureState phi = purify_choi(j, 1, rng);
  EXPECT_LT(max_abs(phi.projector() - j.matrix()), 1e-10);
  EXPECT_LT(max_abs(trace_out_env(phi.amplitudes(), phi.amplitudes(), DimPair{2, 2, 1}) - j.matrix()),
            1e-10);
}

TEST(PureTomography, OverlapIsExactlyTheBetaDraw) {
  std::mt19937_64 g(4);
  RngStream rng(4, 0);
  const PureState psi(oracle::random_unitary(6, g).col(0));
  for (int t = 0; t < 200; ++t) {
    const PureEstimate e = simulate_covariant_pure_tomography(psi, 30, rng);
    const double x = std::norm(psi.amplitudes().dot(e.estimate.amplitudes()));
    EXPECT_NEAR(x, e.true_overlap_sq, 1e-12);
    EXPECT_NEAR(e.epsilon_pure_realized * e.epsilon_pure_realized, 1.0 - e.true_overlap_sq, 1e-12);
  }
}

TEST(PureTomography, LargeNConcentrates) {
  RngStream rng(5, 0);
  const PureState psi(ComplexVector::Unit(4, 2));
  int close = 0;
  for (int t = 0; t < 1000; ++t) {
    close += 1.0 - simulate_covariant_pure_tomography(psi, 1000000, rng).true_overlap_sq < 1e-4;
  }
  EXPECT_GE(close, 990);
}

TEST(PureTomography, MeanOverlap) {
  RngStream rng(6, 0);
  const PureState psi(ComplexVector::Unit(8, 0));
  const int n = 10000;
  double sum = 0.0;
  for (int t = 0; t < n; ++t) sum += simulate_covariant_pure_tomography(psi, 100, rng).true_overlap_sq;
  const double a = 101.0, b = 7.0;
  const double sigma = std::sqrt(a * b / ((a + b) * (a + b) * (a + b + 1.0)) / n);
  EXPECT_NEAR(sum / n, a / (a + b), 3.0 * sigma);
}

TEST(PureTomography, OneDimensionalIsExact) {
  RngStream rng(7, 0);
  const PureEstimate e = simulate_covariant_pure_tomography(PureState(ComplexVector::Ones(1)), 5, rng);
  EXPECT_TRUE(e.degenerate);
  EXPECT_EQ(e.true_overlap_sq, 1.0);
}

TEST(PureTomography, GuaranteeAtRecommendedSampleSize) {
  const int d = 8;
  const double eta = 0.2, delta = 0.1;
  const std::int64_t n = hayashi_sample_size(d, eta, delta);
  RngStream rng(8, 0);
  const PureState psi(ComplexVector::Unit(d, 3));
  int good = 0;
  for (int t = 0; t < 1000; ++t) {
    good += simulate_covariant_pure_tomography(psi, n, rng).true_overlap_sq >= 1.0 - eta;
  }
  EXPECT_GE(good, 900);
}

TEST(HayashiSampleSize, FormulaValues) {
  EXPECT_EQ(hayashi_sample_size(4, 0.04, 0.1), 631);
  EXPECT_EQ(hayashi_sample_size(4, 0.04, 0.1),
            static_cast<std::int64_t>(std::ceil(4.0 * (4.0 + std::log(10.0)) / 0.04)));
  EXPECT_EQ(hayashi_sample_size(5, 0.1, 1.0), 200);
  const std::int64_t a = hayashi_sample_size(7, 0.2, 0.05);
  const std::int64_t b = hayashi_sample_size(7, 0.1, 0.05);
  EXPECT_LE(std::llabs(b - 2 * a), 1);
}

TEST(TheoreticalBound, ComponentsMatchDefinitions) {
  const BoundComponents b = theoretical_bound(DimPair{2, 2}, 4, 0.5, 0.01);
  EXPECT_EQ(b.d_tot, 16);
  EXPECT_NEAR(b.eps_ov, 1.0 - std::pow(0.125, 1.0 / 15.0), 1e-15);
  EXPECT_NEAR(b.c_ov, std::sqrt(b.eps_ov / (1.0 - b.eps_ov)), 1e-15);
  EXPECT_NEAR(b.s_delta, reference_bound(2, 2, 4, 0.5).s, 1e-12);
  EXPECT_NEAR(b.s_delta, 2.039, 1e-3);
  EXPECT_NEAR(b.c_delta, 2.0 + std::sqrt(std::log(8.0) / 8.0), 1e-15);
  EXPECT_NEAR(b.total, b.c_delta * (4.0 + b.s_delta) * 0.01, 1e-15);
  EXPECT_TRUE(b.in_regime);
}

TEST(TheoreticalBound, LimitsAndEdges) {
  const BoundComponents big = theoretical_bound(DimPair{64, 64}, 64, 0.1, 1.0);
  EXPECT_LT(big.s_delta, 0.02);
  EXPECT_NEAR(big.total, 4.0 * big.c_delta, 0.05);
  const BoundComponents one = theoretical_bound(DimPair{1, 1}, 1, 0.1, 0.3);
  EXPECT_TRUE(one.degenerate);
  EXPECT_EQ(one.total, 0.0);
  const BoundComponents edge = theoretical_bound(DimPair{2, 1}, 1, 4.0 * std::exp(-2.0), 0.1);
  EXPECT_FALSE(edge.in_regime);
  EXPECT_TRUE(std::isfinite(edge.total));
}

TEST(SampleComplexity, LeadingTermAndScaling) {
  const SampleComplexity s = sample_complexity(DimPair{2, 2}, 4, 1.0, 0.5);
  EXPECT_EQ(s.leading, 4096);
  const SampleComplexity half = sample_complexity(DimPair{2, 2}, 4, 0.5, 0.5);
  EXPECT_EQ(half.leading, 4 * 4096);
}

TEST(SampleComplexity, ExactIsSmallestSufficientN) {
  struct Case {
    int d_out, d_in, k;
    double eps, delta;
  };
  for (const Case c : {Case{2, 2, 1, 0.6, 0.2}, Case{2, 2, 4, 0.6, 0.2}, Case{4, 1, 2, 0.6, 0.2},
                       Case{2, 2, 4, 1.0, 0.5}, Case{3, 2, 2, 0.3, 0.05}}) {
    const SampleComplexity s = sample_complexity(DimPair{c.d_out, c.d_in}, c.k, c.eps, c.delta);
    EXPECT_LE(reference_total(c.d_out, c.d_in, c.k, c.delta, s.exact), c.eps);
    EXPECT_GT(reference_total(c.d_out, c.d_in, c.k, c.delta, s.exact - 1), c.eps);
    EXPECT_GE(s.exact, s.leading);
    EXPECT_LE(s.bound.total, c.eps);
  }
}

TEST(SampleComplexity, OutOfRegimeIsAnError) {
  // d_tot = 2: needs delta > 4 e^{-2} ~ 0.54.
  EXPECT_THROW(sample_complexity(DimPair{2, 1}, 1, 0.5, 0.3), std::domain_error);
  EXPECT_THROW(sample_complexity(DimPair{2, 2}, 9, 0.5, 0.3), std::invalid_argument);
}

TEST(Pipeline, IdentityQubitChannel) {
  const KrausChannel id(DimPair{2, 2}, {ComplexMatrix::Identity(2, 2)});
  int good = 0;
  for (int t = 0; t < 100; ++t) {
    const TrialRecord r = run_algorithm1(id, config(DimPair{2, 2}, 1, 10000, 0.1, 100 + t));
    good += r.diamond_error_final <= 0.1;
    EXPECT_LE(r.diamond_error_final, 2.0 * r.diamond_error_est + 2e-6);
  }
  EXPECT_GE(good, 95);
}

TEST(Pipeline, RawEstimateIsADensityOperator) {
  RngStream rng(9, 0);
  const KrausChannel c = random_channel(DimPair{3, 2}, 3, rng);
  const TrialRecord r = run_algorithm1(c, config(DimPair{3, 2}, 3, 500, 0.1, 9));
  EXPECT_NEAR(r.choi_raw.trace().real(), 1.0, 1e-10);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(r.choi_raw)};
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-10);
  EXPECT_TRUE(r.choi_final.is_cp(1e-8));
  EXPECT_TRUE(r.choi_final.is_tp(1e-8));
  EXPECT_GT(r.bound.total, 0.0);
  EXPECT_GE(r.times.project_ms, 0.0);
}

TEST(Pipeline, StatePreparationErrorIsTraceDistance) {
  RngStream rng(10, 0);
  for (int t = 0; t < 10; ++t) {
    const KrausChannel prep = random_channel(DimPair{4, 1}, 2, rng);
    const TrialRecord r = run_algorithm1(prep, config(DimPair{4, 1}, 2, 300, 0.1, 10 + t));
    const ComplexMatrix rho = oracle::choi(prep.kraus_ops());
    EXPECT_NEAR(r.diamond_error_final, oracle::trace_norm(r.choi_final.matrix() - rho), 1e-6);
  }
}

TEST(Pipeline, DeterministicGivenSeed) {
  RngStream rng(11, 0);
  const KrausChannel c = random_channel(DimPair{2, 2}, 2, rng);
  const TomographyConfig cfg = config(DimPair{2, 2}, 2, 1000, 0.1, 77);
  const TrialRecord a = run_algorithm1(c, cfg);
  const TrialRecord b = run_algorithm1(c, cfg);
  EXPECT_EQ(a.diamond_error_final, b.diamond_error_final);
  EXPECT_EQ(a.choi_raw, b.choi_raw);
}

TEST(Pipeline, ErrorsCarryStage) {
  const KrausChannel id(DimPair{2, 2}, {ComplexMatrix::Identity(2, 2)});
  try {
    run_algorithm1(id, config(DimPair{3, 2}, 1, 10, 0.1, 1));
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "config");
    EXPECT_FALSE(e.numerical());
  }
  RngStream rng(12, 0);
  const KrausChannel full = random_channel(DimPair{2, 2}, 4, rng);
  try {
    run_algorithm1(full, config(DimPair{2, 2}, 2, 10, 0.1, 1));
    FAIL() << "expected PipelineError";
  } catch (const PipelineError& e) {
    EXPECT_EQ(e.stage(), "purify");
  }
}

}  // namespace
}  // namespace dtomo
