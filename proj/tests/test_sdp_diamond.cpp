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

#include <gtest/gtest.h>

#include "dtomo/channels.hpp"
#include "dtomo/diamond.hpp"
#include "dtomo/sdp.hpp"
#include "test_util.hpp"

namespace dtomo {
namespace {

using CSdp = SdpProblem<Complex>;

ComplexMatrix choi_of(const std::vector<ComplexMatrix>& kraus) { return oracle::choi(kraus); }

ComplexMatrix random_cptp_choi(int d_out, int d_in, std::mt19937_64& g) {
  const int lo = (d_in + d_out - 1) / d_out;
  const int k = lo + static_cast<int>(g() % static_cast<std::uint64_t>(d_in * d_out - lo + 1));
  return choi_of(oracle::random_kraus(d_out, d_in, k, g));
}

ComplexMatrix pauli_z() {
  ComplexMatrix z = ComplexMatrix::Zero(2, 2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

// Hermitian H on out (x) in with tr_out H = 0.
ComplexMatrix traceless_marginal(int d_out, int d_in, std::mt19937_64& g) {
  const ComplexMatrix x = oracle::random_hermitian(d_out * d_in, g);
  const ComplexMatrix m = oracle::trace_first(x, d_out, d_in);
  return x - oracle::kron(ComplexMatrix::Identity(d_out, d_out), m) / static_cast<double>(d_out);
}

TEST(Sdp, TraceBelowIdentity) {
  // maximize tr X subject to X + S = I, X, S >= 0.
  SdpProblem<double> p;
  const int x = p.add_block(2), s = p.add_block(2);
  p.objective[x] = Eigen::MatrixXd::Identity(2, 2);
  for (int r = 0; r < 2; ++r) {
    for (int c = r; c < 2; ++c) {
      SdpConstraint<double> con;
      con.entries = {{x, r, c, 1.0}, {s, r, c, 1.0}};
      con.rhs = r == c ? 1.0 : 0.0;
      p.constraints.push_back(con);
    }
  }
  const SdpSolution<double> sol = solve_sdp(p);
  ASSERT_EQ(sol.status, SdpStatus::kOptimal);
  EXPECT_NEAR(sol.primal_value, 2.0, 1e-6);
  EXPECT_NEAR(sol.dual_value, 2.0, 1e-6);
}

TEST(Sdp, LargestEigenvalueOverDensityMatrices) {
  std::mt19937_64 g(1);
  for (int t = 0; t < 10; ++t) {
    const int d = 2 + t % 4;
    const ComplexMatrix c = oracle::random_hermitian(d, g);
    CSdp p;
    const int x = p.add_block(d);
    p.objective[x] = c;
    SdpConstraint<Complex> tr;
    for (int i = 0; i < d; ++i) tr.entries.push_back({x, i, i, 1.0});
    tr.rhs = 1.0;
    p.constraints.push_back(tr);
    const SdpSolution<Complex> sol = solve_sdp(p);
    ASSERT_EQ(sol.status, SdpStatus::kOptimal);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(c);
    EXPECT_NEAR(sol.primal_value, es.eigenvalues().maxCoeff(), 1e-6);
    EXPECT_LE(std::abs(sol.primal_value - sol.dual_value), 1e-6 * (1.0 + std::abs(sol.primal_value)));
    EXPECT_LE(std::abs(sol.complementarity), 1e-6);
    // Real embedding reaches the same optimum.
    const SdpSolution<double> re = solve_sdp(real_embedding(p));
    EXPECT_NEAR(re.primal_value, sol.primal_value, 1e-6);
  }
}

TEST(Sdp, DetectsInfeasibility) {
  SdpProblem<double> p;
  const int x = p.add_block(2);
  p.objective[x] = Eigen::MatrixXd::Identity(2, 2);
  SdpConstraint<double> tr;
  tr.entries = {{x, 0, 0, 1.0}, {x, 1, 1, 1.0}};
  tr.rhs = -1.0;
  p.constraints.push_back(tr);
  EXPECT_EQ(solve_sdp(p).status, SdpStatus::kInfeasible);
}

TEST(Sdp, ValidatesProblems) {
  SdpProblem<double> p;
  const int x = p.add_block(2);
  SdpConstraint<double> bad;
  bad.entries = {{x, 2, 0, 1.0}};
  p.constraints.push_back(bad);
  EXPECT_THROW(solve_sdp(p), std::invalid_argument);

  SdpProblem<double> big;
  big.add_block(300);
  SdpOptions opt;
  EXPECT_THROW(solve_sdp(big, opt), std::invalid_argument);
}

TEST(Diamond, CptpChannelsHaveNormOne) {
  std::mt19937_64 g(2);
  for (int t = 0; t < 20; ++t) {
    const int d_out = 1 + t % 3, d_in = 1 + (t / 3) % 3;
    const DiamondValue v = diamond_norm(random_cptp_choi(d_out, d_in, g), d_in);
    EXPECT_NEAR(v.value, 1.0, 1e-5) << d_out << "x" << d_in;
  }
}

TEST(Diamond, OrthogonalStatePreparations) {
  ComplexMatrix j = ComplexMatrix::Zero(2, 2);
  j(0, 0) = 1.0;
  j(1, 1) = -1.0;
  const DiamondValue v = diamond_norm(j, 1);
  EXPECT_NEAR(v.value, 2.0, 1e-12);
  EXPECT_EQ(v.method, DiamondMethod::kTraceNorm);
  EXPECT_NEAR(diamond_norm_sdp(j, 1).value, 2.0, 1e-6);
}

TEST(Diamond, IdentityVersusPauliZ) {
  const ComplexMatrix diff =
      choi_of({ComplexMatrix::Identity(2, 2)}) - choi_of({pauli_z()});
  const DiamondValue v = diamond_norm(diff, 2);
  EXPECT_EQ(v.method, DiamondMethod::kSdp);
  ASSERT_TRUE(v.certificate.has_value());
  EXPECT_NEAR(v.value, 2.0, 1e-4);
  RngStream rng(3, 0);
  const double lb = diamond_lower_bound(diff, 2, 1000, rng);
  EXPECT_GE(lb, 2.0 - 1e-3);
  EXPECT_LE(lb, v.value + 1e-6);
}

TEST(Diamond, PositiveClosedForm) {
  EXPECT_NEAR(diamond_norm_positive(choi_of({ComplexMatrix::Identity(3, 3)}), 3).value, 1.0, 1e-12);
  EXPECT_NEAR(diamond_norm_positive(ComplexMatrix::Identity(6, 6) / 6.0, 2).value, 1.0, 1e-12);
  std::mt19937_64 g(4);
  for (int t = 0; t < 20; ++t) {
    const int d_out = 1 + t % 3, d_in = 1 + (t / 3) % 3;
    const ComplexMatrix j = oracle::random_density(d_out * d_in, 1 + t % (d_out * d_in), g);
    const double closed = d_in * oracle::op_norm(oracle::trace_first(j, d_out, d_in));
    const DiamondValue pos = diamond_norm_positive(j, d_in);
    EXPECT_EQ(pos.method, DiamondMethod::kPositiveClosedForm);
    EXPECT_NEAR(pos.value, closed, 1e-12);
    EXPECT_NEAR(diamond_norm_sdp(j, d_in).value, closed, 1e-6);
  }
  ComplexMatrix indefinite = ComplexMatrix::Identity(4, 4) * 0.25;
  indefinite(0, 0) = -0.1;
  EXPECT_THROW(diamond_norm_positive(indefinite, 2), InvariantError);
}

TEST(Diamond, LowerBoundSandwich) {
  std::mt19937_64 g(5);
  RngStream rng(5, 0);
  for (int t = 0; t < 10; ++t) {
    const int d_out = 1 + t % 2, d_in = 1 + (t / 2) % 2;
    const ComplexMatrix j = random_cptp_choi(d_out, d_in, g) - random_cptp_choi(d_out, d_in, g);
    const double lb = diamond_lower_bound(j, d_in, 20, rng);
    const double v = diamond_norm(j, d_in).value;
    EXPECT_LE(lb, v + 1e-6);
    EXPECT_GE(lb, 0.5 * v);  // loose: ascent should get close
  }
  EXPECT_EQ(diamond_lower_bound(ComplexMatrix::Zero(4, 4), 2, 5, rng), 0.0);
  const ComplexMatrix cptp = random_cptp_choi(2, 2, g);
  const double lb = diamond_lower_bound(cptp, 2, 5, rng);
  EXPECT_LE(lb, 1.0 + 1e-9);
  EXPECT_GT(lb, 1.0 - 1e-6);
}

TEST(Diamond, NormAxioms) {
  std::mt19937_64 g(6);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = oracle::random_hermitian(6, g);
    const ComplexMatrix b = oracle::random_hermitian(6, g);
    const double na = diamond_norm(a, 2).value;
    const double nb = diamond_norm(b, 2).value;
    EXPECT_NEAR(diamond_norm(ComplexMatrix(a * -2.5), 2).value, 2.5 * na, 1e-6 * (1 + na));
    EXPECT_LE(diamond_norm(ComplexMatrix(a + b), 2).value, na + nb + 1e-6);
    EXPECT_GE(na, 0.0);
  }
}

TEST(Diamond, DualMatchesPrimal) {
  std::mt19937_64 g(7);
  for (int t = 0; t < 50; ++t) {
    const int d_out = 1 + t % 3, d_in = 2 + (t / 3) % 2;
    const ComplexMatrix h = oracle::random_hermitian(d_out * d_in, g);
    const ComplexMatrix j = h / oracle::trace_norm(h);
    const DiamondValue primal = diamond_norm_sdp(j, d_in);
    const DiamondValue dual = diamond_norm_dual(j, d_in);
    EXPECT_NEAR(primal.value, dual.value, 1e-6) << "instance " << t;
  }
}

TEST(Diamond, RealEmbeddingMatchesComplex) {
  std::mt19937_64 g(8);
  for (int t = 0; t < 20; ++t) {
    const ComplexMatrix j = random_cptp_choi(2, 2, g) - random_cptp_choi(2, 2, g);
    EXPECT_NEAR(diamond_norm_sdp(j, 2).value, diamond_norm_real_embedding(j, 2).value, 1e-6);
  }
}

TEST(Projection, CptpInputIsFixed) {
  std::mt19937_64 g(9);
  const ComplexMatrix j = random_cptp_choi(2, 2, g);
  const ProjectionResult r = cptp_project(j, DimPair{2, 2});
  EXPECT_NEAR(r.distance, 0.0, 1e-6);
  EXPECT_LT((r.choi.matrix() - j).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Projection, PerturbedInputsObeyFactorTwoLaw) {
  std::mt19937_64 g(10);
  for (int t = 0; t < 20; ++t) {
    // d_out = 1 leaves no traceless-marginal direction.
    const int d_out = 2 + t % 2, d_in = 1 + (t / 2) % 3;
    const DimPair dims{d_out, d_in};
    const ComplexMatrix j = random_cptp_choi(d_out, d_in, g);
    ComplexMatrix h = traceless_marginal(d_out, d_in, g);
    h *= 0.05 / oracle::op_norm(h);
    const ComplexMatrix est = j + h;
    const double eta = diamond_norm(h, d_in).value;
    const ProjectionResult r = cptp_project(est, dims);
    EXPECT_TRUE(r.choi.is_cp(1e-8));
    EXPECT_TRUE(r.choi.is_tp(1e-8));
    EXPECT_LE(r.distance, eta + 1e-6);
    const double recomputed = diamond_norm(ComplexMatrix(r.choi.matrix() - est), d_in).value;
    EXPECT_NEAR(r.distance, recomputed, 1e-5);
    EXPECT_LE(diamond_norm(ComplexMatrix(r.choi.matrix() - j), d_in).value, 2.0 * eta + 2e-6);
  }
}

TEST(CauchySchwarz, EqualityAndOrthogonalSupports) {
  std::mt19937_64 g(11);
  const DimPair dims{2, 2, 2};
  const PureState a(oracle::random_unitary(8, g).col(0));
  const CauchySchwarzCheck same = diamond_cs_check(a, a, dims);
  EXPECT_NEAR(same.lhs, same.rhs, 1e-6);

  // Environment |0> versus |1>: tr_E |phi1><phi2| vanishes.
  const ComplexVector u = oracle::random_unitary(4, g).col(0);
  ComplexVector p1 = ComplexVector::Zero(8), p2 = ComplexVector::Zero(8);
  for (int x = 0; x < 4; ++x) {
    p1(x * 2) = u(x);
    p2(x * 2 + 1) = u(x);
  }
  const CauchySchwarzCheck orth = diamond_cs_check(PureState(p1), PureState(p2), dims);
  EXPECT_NEAR(orth.lhs, 0.0, 1e-7);
  EXPECT_GT(orth.rhs, 0.5);
}

TEST(CauchySchwarz, RandomPairsSatisfyInequality) {
  std::mt19937_64 g(12);
  const DimPair dims{2, 2, 2};
  for (int t = 0; t < 100; ++t) {
    const PureState a(oracle::random_unitary(8, g).col(0));
    const PureState b(oracle::random_unitary(8, g).col(0));
    const CauchySchwarzCheck c = diamond_cs_check(a, b, dims);
    EXPECT_LE(c.lhs, c.rhs + 1e-6);
  }
  EXPECT_THROW(diamond_cs_check(PureState(ComplexVector::Unit(4, 0)), PureState(ComplexVector::Unit(4, 0)),
                                dims),
               DimensionError);
}

TEST(TraceOutEnv, MatchesOracle) {
  std::mt19937_64 g(13);
  const ComplexVector a = oracle::gaussian(12, 1, g).col(0);
  const ComplexVector b = oracle::gaussian(12, 1, g).col(0);
  const ComplexMatrix expected = oracle::trace_second(ComplexMatrix(a * b.adjoint()), 6, 2);
  EXPECT_LT((trace_out_env(a, b, DimPair{3, 2, 2}) - expected).cwiseAbs().maxCoeff(), 1e-13);
}

}  // namespace
}  // namespace dtomo
