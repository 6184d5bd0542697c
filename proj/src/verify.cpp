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

#include "dtomo/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "dtomo/applications.hpp"
#include "dtomo/bench.hpp"
#include "dtomo/diamond.hpp"
#include "dtomo/haar.hpp"
#include "dtomo/stats.hpp"
#include "dtomo/tomography.hpp"

namespace dtomo {
namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

struct Property {
  const char* suite;
  const char* name;
  std::function<Outcome()> run;
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

DimPair random_dims(RngStream& rng, int max_d) {
  const int d_in = 1 + static_cast<int>(rng.uniform() * max_d);
  const int d_out = 1 + static_cast<int>(rng.uniform() * max_d);
  return DimPair{d_out, d_in};
}

int random_rank(const DimPair& dims, RngStream& rng) {
  const int lo = (dims.d_in + dims.d_out - 1) / dims.d_out;
  const int hi = dims.d_in * dims.d_out;
  return lo + static_cast<int>(rng.uniform() * (hi - lo + 1));
}

ComplexMatrix random_psd(int n, RngStream& rng) {
  ComplexMatrix g(n, n);
  for (int c = 0; c < n; ++c) g.col(c) = sample_complex_gaussian(n, rng);
  const ComplexMatrix p = g * g.adjoint();
  return hermitian_part(ComplexMatrix(p / p.trace().real()));
}

ComplexMatrix channel_difference(const DimPair& dims, RngStream& rng) {
  const ComplexMatrix a = kraus_to_choi(random_channel(dims, random_rank(dims, rng), rng)).matrix();
  const ComplexMatrix b = kraus_to_choi(random_channel(dims, random_rank(dims, rng), rng)).matrix();
  return a - b;
}

ComplexMatrix unitary_choi(const ComplexMatrix& u) {
  const int d = static_cast<int>(u.rows());
  return kraus_to_choi(KrausChannel(DimPair{d, d}, {u})).matrix();
}

double marginal_opnorm(const PureState& psi, const DimPair& dims, int k) {
  const std::array<int, 3> shape{dims.d_out, dims.d_in, k};
  const std::array<int, 1> keep{1};
  return schatten_norm(partial_trace(psi.projector(), shape, keep), SchattenP::kInf);
}

std::vector<Property> properties() {
  std::vector<Property> p;

  // sdp
  p.push_back({"sdp", "channel diamond norm equals 1", [] {
                 RngStream rng(101, 0);
                 double worst = 0.0;
                 for (int i = 0; i < 50; ++i) {
                   const DimPair dims = random_dims(rng, 4);
                   const ComplexMatrix j =
                       kraus_to_choi(random_channel(dims, random_rank(dims, rng), rng)).matrix();
                   worst = std::max(worst, std::abs(diamond_norm_sdp(j, dims.d_in).value - 1.0));
                 }
                 return Outcome{worst <= 1e-5, "max |value - 1| = " + num(worst)};
               }});
  p.push_back({"sdp", "PSD closed form agrees with SDP", [] {
                 RngStream rng(102, 0);
                 double worst = 0.0;
                 for (int i = 0; i < 50; ++i) {
                   const DimPair dims = random_dims(rng, 4);
                   const ComplexMatrix j = random_psd(dims.choi_dim(), rng);
                   worst = std::max(worst, std::abs(diamond_norm_sdp(j, dims.d_in).value -
                                                    diamond_norm_positive(j, dims.d_in).value));
                 }
                 return Outcome{worst <= 1e-6, "max deviation = " + num(worst)};
               }});
  p.push_back({"sdp", "dual program matches primal", [] {
                 RngStream rng(103, 0);
                 double worst = 0.0;
                 for (int i = 0; i < 50; ++i) {
                   const DimPair dims = random_dims(rng, 3);
                   const ComplexMatrix j = channel_difference(dims, rng);
                   if (dims.d_in == 1) continue;
                   worst = std::max(worst, std::abs(diamond_norm_sdp(j, dims.d_in).value -
                                                    diamond_norm_dual(j, dims.d_in).value));
                 }
                 return Outcome{worst <= 1e-6, "max |primal - dual| = " + num(worst)};
               }});
  p.push_back({"sdp", "real embedding matches complex path", [] {
                 RngStream rng(104, 0);
                 double worst = 0.0;
                 for (int i = 0; i < 20; ++i) {
                   const DimPair dims{2, 2};
                   const ComplexMatrix j = channel_difference(dims, rng);
                   worst = std::max(worst, std::abs(diamond_norm_sdp(j, 2).value -
                                                    diamond_norm_real_embedding(j, 2).value));
                 }
                 return Outcome{worst <= 1e-6, "max deviation = " + num(worst)};
               }});
  p.push_back({"sdp", "brute-force lower bound below SDP", [] {
                 RngStream rng(105, 0);
                 double worst = -1e300;
                 for (int i = 0; i < 20; ++i) {
                   const DimPair dims = random_dims(rng, 2);
                   const ComplexMatrix j = channel_difference(dims, rng);
                   worst = std::max(worst, diamond_lower_bound(j, dims.d_in, 8, rng) -
                                               diamond_norm_sdp(j, dims.d_in).value);
                 }
                 ComplexMatrix z = ComplexMatrix::Zero(2, 2);
                 z(0, 0) = 1.0;
                 z(1, 1) = -1.0;
                 const ComplexMatrix diff = unitary_choi(identity(2)) - unitary_choi(z);
                 const double sdp = diamond_norm_sdp(diff, 2).value;
                 const double lb = diamond_lower_bound(diff, 2, 8, rng);
                 const bool ok = worst <= 1e-6 && std::abs(sdp - 2.0) <= 1e-3 &&
                                 std::abs(lb - 2.0) <= 1e-3;
                 return Outcome{ok, "max(lower - sdp) = " + num(worst) + ", I vs Z: sdp " +
                                        num(sdp) + ", lower " + num(lb)};
               }});

  // distributions
  for (int d : {4, 8}) {
    p.push_back({"distributions", d == 4 ? "Haar overlap ~ Beta(1, 3)" : "Haar overlap ~ Beta(1, 7)",
                 [d] {
                   const RetriedKs r = ks_with_retries(
                       [d](std::uint64_t seed) {
                         RngStream rng(seed, 0);
                         std::vector<double> xs;
                         for (int i = 0; i < 10000; ++i) {
                           xs.push_back(std::norm(sample_haar_state(d, rng).amplitudes()(0)));
                         }
                         return ks_test(xs, [d](double x) { return beta_cdf(x, 1.0, d - 1.0); });
                       },
                       200 + d);
                   return Outcome{r.passed, "p = " + num(r.last.p_value) + " after " +
                                                std::to_string(r.attempts) + " attempt(s)"};
                 }});
  }
  p.push_back({"distributions", "tomography overlap ~ Beta(N+1, d-1) at N=50, d=8", [] {
                 const RetriedKs r = ks_with_retries(
                     [](std::uint64_t seed) {
                       RngStream rng(seed, 0);
                       const PureState psi = sample_haar_state(8, rng);
                       std::vector<double> xs;
                       for (int i = 0; i < 10000; ++i) {
                         const PureEstimate e = simulate_covariant_pure_tomography(psi, 50, rng);
                         xs.push_back(std::norm(psi.amplitudes().dot(e.estimate.amplitudes())));
                       }
                       return ks_test(xs, [](double x) { return beta_cdf(x, 51.0, 7.0); });
                     },
                     300);
                 return Outcome{r.passed, "p = " + num(r.last.p_value) + " after " +
                                              std::to_string(r.attempts) + " attempt(s)"};
               }});
  p.push_back({"distributions", "pure-state rate guarantee at d=8, eta=0.2, delta=0.1", [] {
                 const int d = 8;
                 const double eta = 0.2, delta = 0.1;
                 const std::int64_t n = hayashi_sample_size(d, eta, delta);
                 RngStream rng(301, 0);
                 const PureState psi = sample_haar_state(d, rng);
                 int good = 0;
                 for (int i = 0; i < 1000; ++i) {
                   const PureEstimate e = simulate_covariant_pure_tomography(psi, n, rng);
                   good += std::norm(psi.amplitudes().dot(e.estimate.amplitudes())) >= 1.0 - eta;
                 }
                 return Outcome{good >= 900, "N = " + std::to_string(n) + ", frequency " +
                                                 num(good / 1000.0)};
               }});

  // lemmas
  p.push_back({"lemmas", "positive-map diamond norm closed form", [] {
                 RngStream rng(401, 0);
                 double worst = 0.0;
                 for (int i = 0; i < 10; ++i) {
                   const DimPair dims = random_dims(rng, 3);
                   const ComplexMatrix j = random_psd(dims.choi_dim(), rng);
                   worst = std::max(worst, std::abs(diamond_norm_sdp(j, dims.d_in).value -
                                                    diamond_norm_positive(j, dims.d_in).value));
                 }
                 return Outcome{worst <= 1e-6, "max deviation = " + num(worst)};
               }});
  p.push_back({"lemmas", "diamond Cauchy-Schwarz on 2x2x2 purifications", [] {
                 RngStream rng(402, 0);
                 const DimPair dims{2, 2, 2};
                 double worst = -1e300;
                 for (int i = 0; i < 100; ++i) {
                   const PureState a = sample_haar_state(8, rng);
                   const PureState b = sample_haar_state(8, rng);
                   const CauchySchwarzCheck c = diamond_cs_check(a, b, dims);
                   worst = std::max(worst, c.lhs - c.rhs);
                 }
                 return Outcome{worst <= 1e-6, "max(lhs - rhs) = " + num(worst)};
               }});
  p.push_back({"lemmas", "interval-contraction reconstruction", [] {
                 RngStream rng(403, 0);
                 double worst = 0.0;
                 double worst_norm = 0.0;
                 for (int i = 0; i < 200; ++i) {
                   const int n = 2 + static_cast<int>(rng.uniform() * 5);
                   const ComplexMatrix a = random_psd(n, rng);
                   const ComplexMatrix h = random_psd(n, rng) - random_psd(n, rng);
                   const ComplexMatrix k = h / schatten_norm(h, SchattenP::kInf);
                   const ComplexMatrix root = psd_sqrt(a);
                   const ComplexMatrix y = hermitian_part(ComplexMatrix(root * k * root));
                   const HermitianOperator kk =
                       interval_contraction(HermitianOperator(a), HermitianOperator(y));
                   worst = std::max(worst, schatten_norm(ComplexMatrix(root * kk.matrix() * root - y),
                                                         SchattenP::kInf));
                   worst_norm = std::max(worst_norm, schatten_norm(kk.matrix(), SchattenP::kInf));
                 }
                 return Outcome{worst <= 1e-8 && worst_norm <= 1.0 + 1e-8,
                                "max residual = " + num(worst) + ", max ||K|| = " + num(worst_norm)};
               }});
  p.push_back({"lemmas", "Choi input-marginal tail bound at delta = 0.25", [] {
                 RngStream rng(404, 0);
                 const DimPair dims{2, 2};
                 const int k = 2;
                 const double bound = choi_marginal_bound(dims, k, 0.25);
                 int violations = 0;
                 const int draws = 10000;
                 for (int i = 0; i < draws; ++i) {
                   violations += marginal_opnorm(sample_haar_state(8, rng), dims, k) > bound;
                 }
                 const double f = static_cast<double>(violations) / draws;
                 return Outcome{f <= 0.25, "violation frequency " + num(f)};
               }});

  // pipeline
  p.push_back({"pipeline", "qubit channel meets its target at the sample complexity", [] {
                 const DimPair dims{2, 2};
                 const int k = 2;
                 const double eps = 0.6, delta = 0.2;
                 RngStream rng(501, 0);
                 const KrausChannel c = random_channel(dims, k, rng);
                 const std::int64_t n = sample_complexity(dims, k, eps, delta).exact;
                 int ok = 0, factor2 = 0;
                 const int trials = 100;
                 for (int t = 0; t < trials; ++t) {
                   TomographyConfig cfg;
                   cfg.dims = dims;
                   cfg.k = k;
                   cfg.n = n;
                   cfg.delta = delta;
                   cfg.seed = 5010 + t;
                   const TrialRecord r = run_algorithm1(c, cfg);
                   ok += 0.5 * r.diamond_error_final <= eps;
                   factor2 += r.diamond_error_final > 2.0 * r.diamond_error_est + 2.0 * cfg.gap_tol;
                 }
                 const double p_value = binomial_lower_tail(ok, trials, 1.0 - delta);
                 return Outcome{p_value > 0.01 && factor2 == 0,
                                "successes " + std::to_string(ok) + "/" + std::to_string(trials) +
                                    ", factor-2 violations " + std::to_string(factor2)};
               }});
  p.push_back({"pipeline", "state preparation error equals trace distance", [] {
                 RngStream rng(502, 0);
                 const DimPair dims{3, 1};
                 const KrausChannel c = random_channel(dims, 2, rng);
                 TomographyConfig cfg;
                 cfg.dims = dims;
                 cfg.k = 2;
                 cfg.n = 2000;
                 cfg.delta = 0.1;
                 cfg.seed = 5020;
                 const TrialRecord r = run_algorithm1(c, cfg);
                 const ComplexMatrix rho = kraus_to_choi(c).matrix();
                 const ComplexMatrix diff = r.choi_final.matrix() - rho;
                 const double dev = std::abs(schatten_norm(diff, SchattenP::kOne) -
                                             diamond_norm_sdp(diff, 1).value);
                 return Outcome{dev <= 1e-6, "|diamond - trace norm| = " + num(dev)};
               }});
  p.push_back({"pipeline", "simulation is independent of the worker count", [] {
                 ExperimentConfig cfg;
                 cfg.scenario = Scenario::kChannel;
                 cfg.d_in = 2;
                 cfg.d_out = 2;
                 cfg.k = 2;
                 cfg.n_grid = {500, 2000};
                 cfg.trials = 4;
                 cfg.seed = 503;
                 const SimulationResult a = simulate(cfg, 1);
                 const SimulationResult b = simulate(cfg, 3);
                 bool same = a.rows.size() == b.rows.size();
                 for (std::size_t i = 0; same && i < a.rows.size(); ++i) {
                   same = to_csv(a.rows[i]) == to_csv(b.rows[i]);
                 }
                 return Outcome{same, same ? "identical rows" : "rows differ"};
               }});

  // povm
  p.push_back({"povm", "binary measurement diamond identity", [] {
                 RngStream rng(601, 0);
                 double worst = 0.0;
                 for (int i = 0; i < 50; ++i) {
                   const int d = 2 + (i % 2);
                   const BinaryPovm e(random_povm(d, 2, rng).effect(0));
                   const BinaryPovm f(random_povm(d, 2, rng).effect(0));
                   const PovmIdentity id = povm_diamond_identity(e, f);
                   worst = std::max(worst, std::abs(id.lhs - id.rhs));
                 }
                 return Outcome{worst <= 1e-6, "max |lhs - rhs| = " + num(worst)};
               }});
  p.push_back({"povm", "binary measurement learning at d=2, N=1e5", [] {
                 RngStream rng(602, 0);
                 const BinaryPovm e(random_povm(2, 2, rng).effect(0));
                 int ok = 0;
                 const int trials = 100;
                 for (int t = 0; t < trials; ++t) {
                   ok += learn_binary_povm(e, 100000, 0.05, rng).opnorm_error <= 0.1;
                 }
                 const double p_value = binomial_lower_tail(ok, trials, 0.95);
                 return Outcome{p_value > 0.01, "within 0.1: " + std::to_string(ok) + "/" +
                                                    std::to_string(trials)};
               }});
  p.push_back({"povm", "three-outcome learning failure rate below delta", [] {
                 RngStream rng(603, 0);
                 const MultiPovm m = random_povm(2, 3, rng);
                 const double eps = 0.6, delta = 0.3;
                 const std::int64_t n = sample_complexity(DimPair{2, 2}, 4, eps, delta / 3).exact;
                 int fail = 0;
                 const int trials = 300;
                 for (int t = 0; t < trials; ++t) {
                   fail += learn_multi_povm(m, n, delta, rng).max_opnorm_error > eps;
                 }
                 const double p_value = binomial_lower_tail(trials - fail, trials, 1.0 - delta);
                 return Outcome{p_value > 0.01, "failures " + std::to_string(fail) + "/" +
                                                    std::to_string(trials)};
               }});
  return p;
}

}  // namespace

const std::vector<std::string>& verify_suites() {
  static const std::vector<std::string> s{"sdp", "distributions", "lemmas", "pipeline", "povm"};
  return s;
}

std::vector<PropertyResult> run_verify(const std::string& suite,
                                       void (*on_result)(const PropertyResult&)) {
  const auto& names = verify_suites();
  if (suite != "all" && std::find(names.begin(), names.end(), suite) == names.end()) {
    throw std::invalid_argument("unknown suite '" + suite +
                                "' (expected sdp, distributions, lemmas, pipeline, povm or all)");
  }
  std::vector<PropertyResult> out;
  for (const Property& prop : properties()) {
    if (suite != "all" && suite != prop.suite) continue;
    PropertyResult r{prop.suite, prop.name, false, "", 0.0};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Outcome o = prop.run();
      r.passed = o.passed;
      r.detail = o.detail;
    } catch (const std::exception& e) {
      r.detail = std::string("exception: ") + e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (on_result) on_result(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace dtomo
