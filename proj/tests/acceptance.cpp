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

// Acceptance run. Prints one PASS/FAIL line per criterion; exits non-zero if
// any criterion fails or overruns its time budget.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "dtomo/applications.hpp"
#include "dtomo/diamond.hpp"
#include "dtomo/haar.hpp"
#include "dtomo/tomography.hpp"
#include "test_util.hpp"

namespace {

using namespace dtomo;

struct Verdict {
  bool passed;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Verdict()> run;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

int uniform_int(std::mt19937_64& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

ComplexMatrix random_channel_choi(int d_out, int d_in, std::mt19937_64& g) {
  const int k = uniform_int(g, (d_in + d_out - 1) / d_out, d_in * d_out);
  return oracle::choi(oracle::random_kraus(d_out, d_in, k, g));
}

dtomo::ComplexVector random_vector(int d, std::mt19937_64& g) {
  const ComplexMatrix v = oracle::gaussian(d, 1, g);
  return v.col(0) / v.norm();
}

// d_in ||(I (x) B) J (I (x) B^dagger)||_1 for tr(B^dagger B) = 1 is the output
// trace norm on one entangled input, hence a lower bound on the diamond norm.
double input_lower_bound(const ComplexMatrix& j, int d_out, int d_in, const ComplexMatrix& b) {
  const ComplexMatrix w = oracle::kron(ComplexMatrix::Identity(d_out, d_out), b);
  return d_in * oracle::trace_norm(w * j * w.adjoint());
}

double oracle_lower_bound(const ComplexMatrix& j, int d_out, int d_in, int draws,
                          std::mt19937_64& g) {
  double best = input_lower_bound(j, d_out, d_in,
                                  ComplexMatrix::Identity(d_in, d_in) / std::sqrt(double(d_in)));
  for (int t = 0; t < draws; ++t) {
    const ComplexMatrix b = oracle::gaussian(d_in, d_in, g);
    best = std::max(best, input_lower_bound(j, d_out, d_in, b / b.norm()));
  }
  return best;
}

ComplexMatrix unitary_choi(const ComplexMatrix& u) { return oracle::choi({u}); }

// Kolmogorov-Smirnov statistic against a continuous CDF.
double ks_statistic(std::vector<double> x, const std::function<double(double)>& cdf) {
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  return d;
}

// Stephens' finite-n form of the 1% Kolmogorov critical value.
double ks_critical_1pct(std::size_t n) {
  const double s = std::sqrt(static_cast<double>(n));
  return 1.62762 / (s + 0.12 + 0.11 / s);
}

// Three attempts with distinct seeds; passes if any attempt passes.
Verdict ks_law(const std::string& label, const std::function<double(RngStream&)>& draw,
               const std::function<double(double)>& cdf, std::uint64_t seed) {
  const int n = 10000;
  double stat = 0.0;
  for (int attempt = 0; attempt < 3; ++attempt) {
    RngStream rng(seed, static_cast<std::uint64_t>(attempt));
    std::vector<double> x(n);
    for (double& v : x) v = draw(rng);
    stat = ks_statistic(x, cdf);
    if (stat <= ks_critical_1pct(n)) {
      return {true, label + " D=" + fmt(stat) + " (attempt " + std::to_string(attempt + 1) + ")"};
    }
  }
  return {false, label + " D=" + fmt(stat) + " after 3 attempts"};
}

// I_x(a, b) for integer a, b as a binomial upper tail.
double integer_beta_cdf(double x, int a, int b) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return 1.0 - oracle::binomial_cdf(a - 1, a + b - 1, x);
}

double overlap_sq(const dtomo::ComplexVector& a, const dtomo::ComplexVector& b) {
  Complex s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += std::conj(a(i)) * b(i);
  return std::norm(s);
}

// Input marginal of a pure state on out (x) in (x) env.
ComplexMatrix input_marginal(const dtomo::ComplexVector& psi, int d_out, int d_in, int k) {
  ComplexMatrix m = ComplexMatrix::Zero(d_in, d_in);
  for (int o = 0; o < d_out; ++o)
    for (int i = 0; i < d_in; ++i)
      for (int i2 = 0; i2 < d_in; ++i2)
        for (int e = 0; e < k; ++e) {
          m(i, i2) += psi((o * d_in + i) * k + e) * std::conj(psi((o * d_in + i2) * k + e));
        }
  return m;
}

ComplexMatrix oracle_psd_sqrt(const ComplexMatrix& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(a)};
  Eigen::VectorXd r = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix random_effect(int d, std::mt19937_64& g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const ComplexMatrix v = oracle::random_unitary(d, g);
  ComplexMatrix diag = ComplexMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i) diag(i, i) = u(g);
  return v * diag * v.adjoint();
}

double tp_deviation(const ComplexMatrix& j, int d_out, int d_in) {
  return (oracle::trace_first(j, d_out, d_in) - ComplexMatrix::Identity(d_in, d_in) / double(d_in))
      .cwiseAbs()
      .maxCoeff();
}

double min_eig(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es{Eigen::MatrixXcd(m)};
  return es.eigenvalues().minCoeff();
}

Verdict criterion1() {
  std::mt19937_64 g(1001);
  double worst_cptp = 0.0, worst_psd = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int d_out = uniform_int(g, 1, 4), d_in = uniform_int(g, 1, 4);
    const ComplexMatrix j = random_channel_choi(d_out, d_in, g);
    worst_cptp = std::max(worst_cptp, std::abs(diamond_norm_sdp(j, d_in).value - 1.0));
  }
  for (int t = 0; t < 50; ++t) {
    const int d_out = uniform_int(g, 1, 4), d_in = uniform_int(g, 1, 4);
    const int n = d_out * d_in;
    const ComplexMatrix j = oracle::random_density(n, uniform_int(g, 1, n), g) *
                            std::uniform_real_distribution<double>(0.5, 3.0)(g);
    const double expected = d_in * oracle::op_norm(oracle::trace_first(j, d_out, d_in));
    worst_psd = std::max(worst_psd, std::abs(diamond_norm_sdp(j, d_in).value - expected));
  }
  return {worst_cptp <= 1e-5 && worst_psd <= 1e-6,
          "channels max|v-1|=" + fmt(worst_cptp) + ", PSD max|v-closed form|=" + fmt(worst_psd)};
}

Verdict criterion2() {
  std::mt19937_64 g(1002);
  RngStream rng(1002, 0);
  double worst = -1.0;
  for (int t = 0; t < 20; ++t) {
    const int d_out = uniform_int(g, 1, 3), d_in = uniform_int(g, 1, 3);
    const ComplexMatrix j = random_channel_choi(d_out, d_in, g) - random_channel_choi(d_out, d_in, g);
    const double sdp = diamond_norm_sdp(j, d_in).value;
    const double lb = std::max(oracle_lower_bound(j, d_out, d_in, 200, g),
                               diamond_lower_bound(j, d_in, 200, rng));
    worst = std::max(worst, lb - sdp);
  }
  ComplexMatrix z = ComplexMatrix::Identity(2, 2);
  z(1, 1) = -1.0;
  const ComplexMatrix diff = unitary_choi(ComplexMatrix::Identity(2, 2)) - unitary_choi(z);
  const double sdp = diamond_norm_sdp(diff, 2).value;
  const double lb = std::max(oracle_lower_bound(diff, 2, 2, 0, g), diamond_lower_bound(diff, 2, 1000, rng));
  const bool ok = worst <= 1e-6 && std::abs(sdp - 2.0) <= 1e-3 && std::abs(lb - 2.0) <= 1e-3;
  return {ok, "max(lower - sdp)=" + fmt(worst) + ", I vs Z sdp=" + fmt(sdp) + " lower=" + fmt(lb)};
}

Verdict criterion3() {
  std::string detail;
  bool ok = true;
  for (int d : {4, 8}) {
    std::mt19937_64 g(1003 + d);
    const dtomo::ComplexVector v = random_vector(d, g);
    const Verdict r = ks_law(
        "Haar d=" + std::to_string(d),
        [&](RngStream& rng) { return overlap_sq(v, sample_haar_state(d, rng).amplitudes()); },
        [d](double x) { return 1.0 - std::pow(1.0 - std::clamp(x, 0.0, 1.0), d - 1); }, 1003 + d);
    ok = ok && r.passed;
    detail += r.detail + "; ";
  }
  std::mt19937_64 g(1013);
  const PureState psi(random_vector(8, g));
  const Verdict r = ks_law(
      "tomography (50, 8)",
      [&](RngStream& rng) {
        return overlap_sq(psi.amplitudes(),
                          simulate_covariant_pure_tomography(psi, 50, rng).estimate.amplitudes());
      },
      [](double x) { return integer_beta_cdf(x, 51, 7); }, 1013);
  return {ok && r.passed, detail + r.detail};
}

Verdict criterion4() {
  const int d = 8;
  const double eta = 0.2, delta = 0.1;
  const auto n = static_cast<std::int64_t>(std::ceil(4.0 * (d + std::log(1.0 / delta)) / eta));
  if (hayashi_sample_size(d, eta, delta) != n) {
    return {false, "sample size " + std::to_string(hayashi_sample_size(d, eta, delta)) + " != " +
                       std::to_string(n)};
  }
  std::mt19937_64 g(1004);
  RngStream rng(1004, 0);
  int good = 0;
  const int trials = 1000;
  for (int t = 0; t < trials; ++t) {
    const PureState psi(random_vector(d, g));
    const PureEstimate e = simulate_covariant_pure_tomography(psi, n, rng);
    good += overlap_sq(psi.amplitudes(), e.estimate.amplitudes()) >= 1.0 - eta;
  }
  const double f = static_cast<double>(good) / trials;
  return {f >= 1.0 - delta, "N=" + std::to_string(n) + ", Pr[X >= 1-eta]=" + fmt(f)};
}

Verdict criterion5() {
  std::mt19937_64 g(1005);
  // Cauchy-Schwarz on 2 (x) 2 (x) 2.
  double cs_worst = -1.0;
  for (int t = 0; t < 100; ++t) {
    const dtomo::ComplexVector a = random_vector(8, g), b = random_vector(8, g);
    const ComplexMatrix j12 = oracle::trace_second(a * b.adjoint(), 4, 2);
    const ComplexMatrix j11 = oracle::trace_second(a * a.adjoint(), 4, 2);
    const ComplexMatrix j22 = oracle::trace_second(b * b.adjoint(), 4, 2);
    const double lhs = diamond_norm_sdp(ComplexMatrix(j12 + j12.adjoint()), 2).value;
    const double n11 = 2.0 * oracle::op_norm(oracle::trace_first(j11, 2, 2));
    const double n22 = 2.0 * oracle::op_norm(oracle::trace_first(j22, 2, 2));
    cs_worst = std::max(cs_worst, lhs - 2.0 * std::sqrt(n11 * n22));
  }
  // Interval contraction.
  double residual = 0.0, norm = 0.0;
  for (int t = 0; t < 200; ++t) {
    const int n = uniform_int(g, 2, 6);
    const ComplexMatrix a = oracle::random_density(n, uniform_int(g, 1, n), g);
    const ComplexMatrix h = oracle::random_hermitian(n, g);
    const ComplexMatrix root = oracle_psd_sqrt(a);
    const ComplexMatrix y = root * (h / oracle::op_norm(h)) * root;
    const ComplexMatrix k =
        interval_contraction(HermitianOperator(a), HermitianOperator(ComplexMatrix((y + y.adjoint()) / 2.0)))
            .matrix();
    residual = std::max(residual, oracle::op_norm(root * k * root - y));
    norm = std::max(norm, oracle::op_norm(k));
  }
  // Input-marginal tail bound.
  const double bound = choi_marginal_bound(DimPair{2, 2}, 2, 0.25);
  int violations = 0;
  const int draws = 10000;
  for (int t = 0; t < draws; ++t) {
    violations += oracle::op_norm(input_marginal(random_vector(8, g), 2, 2, 2)) > bound;
  }
  const double f = static_cast<double>(violations) / draws;
  const bool ok = cs_worst <= 1e-6 && residual <= 1e-8 && norm <= 1.0 + 1e-8 && f <= 0.25;
  return {ok, "CS max(lhs-rhs)=" + fmt(cs_worst) + ", contraction residual=" + fmt(residual) +
                  " ||K||=" + fmt(norm) + ", marginal violation freq=" + fmt(f)};
}

Verdict criterion6() {
  struct Case {
    int d_in, d_out, k;
  };
  const double eps = 0.6, delta = 0.2, gap_tol = 1e-7;
  const int trials = 300;
  bool ok = true;
  std::string detail;
  std::uint64_t seed = 1006;
  for (const Case c : {Case{2, 2, 1}, Case{2, 2, 4}, Case{1, 4, 2}}) {
    const DimPair dims{c.d_out, c.d_in};
    RngStream inst(seed++, 0);
    const KrausChannel channel = random_channel(dims, c.k, inst);
    const ComplexMatrix truth = oracle::choi(channel.kraus_ops());
    const std::int64_t n = sample_complexity(dims, c.k, eps, delta).exact;
    int successes = 0, factor2 = 0, invalid = 0;
    for (int t = 0; t < trials; ++t) {
      TomographyConfig cfg;
      cfg.dims = dims;
      cfg.k = c.k;
      cfg.n = n;
      cfg.delta = delta;
      cfg.gap_tol = gap_tol;
      cfg.seed = seed * 1000003u + static_cast<std::uint64_t>(t);
      const TrialRecord r = run_algorithm1(channel, cfg);
      const ComplexMatrix& jf = r.choi_final.matrix();
      invalid += min_eig(jf) < -1e-8 || tp_deviation(jf, c.d_out, c.d_in) > 1e-8;
      if (c.d_in == 1) {
        invalid += std::abs(r.diamond_error_final - oracle::trace_norm(jf - truth)) > 1e-6;
      }
      successes += 0.5 * r.diamond_error_final <= eps;
      factor2 += r.diamond_error_final > 2.0 * r.diamond_error_est + 2.0 * gap_tol;
    }
    const double freq = static_cast<double>(successes) / trials;
    const double p = oracle::binomial_cdf(successes, trials, 1.0 - delta);
    ok = ok && freq >= 1.0 - delta && factor2 == 0 && invalid == 0;
    detail += "(" + std::to_string(c.d_in) + "," + std::to_string(c.d_out) + "," +
              std::to_string(c.k) + ") N=" + std::to_string(n) + " success=" + fmt(freq) +
              " p=" + fmt(p) + " factor2 violations=" + std::to_string(factor2) +
              " invalid=" + std::to_string(invalid) + "; ";
  }
  return {ok, detail};
}

Verdict criterion7() {
  const DimPair dims{2, 2};
  const int k = 4;
  RngStream inst(1007, 0);
  const KrausChannel channel = random_channel(dims, k, inst);
  std::vector<double> lx, ly;
  for (int e = 7; e <= 14; ++e) {
    const std::int64_t n = std::int64_t{1} << e;
    std::vector<double> err;
    for (int t = 0; t < 100; ++t) {
      TomographyConfig cfg;
      cfg.dims = dims;
      cfg.k = k;
      cfg.n = n;
      cfg.delta = 0.1;
      cfg.seed = 1007000u + static_cast<std::uint64_t>(e * 1000 + t);
      err.push_back(0.5 * run_algorithm1(channel, cfg).diamond_error_final);
    }
    std::nth_element(err.begin(), err.begin() + 50, err.end());
    const double upper = err[50];
    const double lower = *std::max_element(err.begin(), err.begin() + 50);
    lx.push_back(std::log(static_cast<double>(n)));
    ly.push_back(std::log(0.5 * (lower + upper)));
  }
  const double m = static_cast<double>(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return {std::abs(slope + 0.5) <= 0.1, "slope=" + fmt(slope)};
}

Verdict criterion8() {
  std::mt19937_64 g(1008);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int d = 2 + t % 2;
    const ComplexMatrix e = random_effect(d, g), f = random_effect(d, g);
    const PovmIdentity id = povm_diamond_identity(BinaryPovm(e), BinaryPovm(f));
    worst = std::max(worst, std::abs(id.lhs - 2.0 * oracle::op_norm(e - f)));
  }
  RngStream rng(1008, 0);
  const ComplexMatrix e = random_effect(2, g);
  int within = 0;
  for (int t = 0; t < 100; ++t) {
    const BinaryPovmLearning r = learn_binary_povm(BinaryPovm(e), 100000, 0.1, rng);
    within += oracle::op_norm(r.estimate.effect() - e) <= 0.1;
  }
  const double eps = 0.6, delta = 0.3;
  const MultiPovm m = random_povm(2, 3, rng);
  const std::int64_t n = sample_complexity(DimPair{2, 2}, 4, eps, delta / 3.0).exact;
  int failures = 0, broken = 0;
  for (int t = 0; t < 300; ++t) {
    const MultiPovmLearning r = learn_multi_povm(m, n, delta, rng);
    double err = 0.0;
    ComplexMatrix sum = ComplexMatrix::Zero(2, 2);
    for (int j = 0; j < 3; ++j) {
      err = std::max(err, oracle::op_norm(r.estimate.effect(j) - m.effect(j)));
      sum += r.estimate.effect(j);
      broken += min_eig(r.estimate.effect(j)) < -1e-8;
    }
    broken += (sum - ComplexMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() > 1e-8;
    failures += err > eps;
  }
  const double fail_freq = failures / 300.0;
  const bool ok = worst <= 1e-6 && within >= 95 && fail_freq <= delta && broken == 0;
  return {ok, "identity max|lhs-rhs|=" + fmt(worst) + ", binary within 0.1: " +
                  std::to_string(within) + "/100, multi failure freq=" + fmt(fail_freq) +
                  " invalid=" + std::to_string(broken)};
}

Verdict criterion9() {
  std::mt19937_64 g(1009);
  double dual_worst = 0.0, real_worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int d_out = uniform_int(g, 1, 3), d_in = uniform_int(g, 1, 3);
    const ComplexMatrix h = oracle::random_hermitian(d_out * d_in, g);
    const ComplexMatrix j = h / oracle::trace_norm(h);
    dual_worst = std::max(dual_worst, std::abs(diamond_norm_dual(j, d_in).value -
                                                 diamond_norm_sdp(j, d_in).value));
    if (t < 20) {
      real_worst = std::max(real_worst, std::abs(diamond_norm_real_embedding(j, d_in).value -
                                                   diamond_norm_sdp(j, d_in).value));
    }
  }
  return {dual_worst <= 1e-6 && real_worst <= 1e-6,
          "max|dual-primal|=" + fmt(dual_worst) + ", max|real-complex|=" + fmt(real_worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "diamond norm of channels and PSD closed form", 120, criterion1},
      {2, "lower-bound sandwich and I vs Z", 120, criterion2},
      {3, "overlap distribution laws", 60, criterion3},
      {4, "pure-state tomography guarantee", 60, criterion4},
      {5, "lemma suite", 180, criterion5},
      {6, "end-to-end success at the sample complexity", 1200, criterion6},
      {7, "1/sqrt(N) error scaling", 1800, criterion7},
      {8, "measurement identity and learning", 900, criterion8},
      {9, "solver self-consistency", 180, criterion9},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v{false, ""};
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s <= c.budget_s;
    const bool pass = v.passed && in_time;
    failed += !pass;
    std::printf("criterion %d: %s  %s  [%s; %.1fs of %.0fs%s]\n", c.id, pass ? "PASS" : "FAIL",
                c.name.c_str(), v.detail.c_str(), s, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
