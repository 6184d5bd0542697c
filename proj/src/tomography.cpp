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

#include "dtomo/tomography.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace dtomo {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

std::int64_t ceil_count(double v) {
  // Guard against values such as 400.00000000000006 that are integers up to
  // rounding.
  const double c = std::ceil(v * (1.0 - 1e-12));
  if (!(c < 9.0e18)) throw std::overflow_error("sample count exceeds 64-bit range");
  return static_cast<std::int64_t>(std::max(1.0, c));
}

template <typename F>
auto run_stage(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const PipelineError&) {
    throw;
  } catch (const SdpSolveError& e) {
    throw PipelineError(stage, e.what(), true);
  } catch (const std::exception& e) {
    throw PipelineError(stage, e.what(), false);
  }
}

}  // namespace

void TomographyConfig::validate() const {
  dims.validate();
  if (!validate_rank_bounds(dims, k)) {
    throw std::invalid_argument("Kraus rank k = " + std::to_string(k) +
                                " outside [ceil(d_in/d_out), d_in d_out]");
  }
  if (n < 1) throw std::invalid_argument("N must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(gap_tol > 0.0)) throw std::invalid_argument("gap_tol must be positive");
}

PureState purify_choi(const ChoiOperator& j, int k, RngStream& rng) {
  if (k < 1) throw std::invalid_argument("purify_choi: k must be at least 1");
  const int rank = numerical_rank(j.matrix());
  if (rank > k) {
    throw InvariantError("purify_choi: Choi rank " + std::to_string(rank) +
                         " exceeds environment dimension " + std::to_string(k));
  }
  const EigenDecomposition eig = hermitian_eig(HermitianOperator(j.matrix()));
  const Index n = eig.values.size();
  ComplexVector phi = ComplexVector::Zero(n * k);
  for (Index i = 0; i < std::min<Index>(n, k); ++i) {
    const double w = std::sqrt(std::max(eig.values(i), 0.0));
    for (Index x = 0; x < n; ++x) phi(x * k + i) = w * eig.vectors(x, i);
  }
  const double norm = phi.norm();
  if (norm == 0.0) throw InvariantError("purify_choi: zero Choi operator");
  phi /= norm;
  const ComplexMatrix u = sample_haar_unitary(k, rng);
  ComplexMatrix m = Eigen::Map<ComplexMatrix>(phi.data(), n, k);
  m = m * u.transpose();
  return PureState(Eigen::Map<const ComplexVector>(m.data(), n * k));
}

PureEstimate simulate_covariant_pure_tomography(const PureState& psi, std::int64_t n,
                                                RngStream& rng) {
  if (n < 1) throw std::invalid_argument("simulate_covariant_pure_tomography: N must be >= 1");
  PureEstimate out;
  const Index d = psi.dim();
  if (d == 1) {
    out.estimate = psi;
    out.degenerate = true;
    return out;
  }
  const BetaDraw x = sample_beta_pair(static_cast<double>(n) + 1.0, static_cast<double>(d - 1), rng);
  const PureState err = haar_orthogonal_error(psi, rng);
  const ComplexVector v =
      std::sqrt(x.x) * psi.amplitudes() + std::sqrt(x.complement) * err.amplitudes();
  out.estimate = PureState(v / v.norm());
  out.true_overlap_sq = x.x;
  out.epsilon_pure_realized = std::sqrt(x.complement);
  return out;
}

std::int64_t hayashi_sample_size(int d, double eta, double delta) {
  if (d < 1) throw std::invalid_argument("hayashi_sample_size: d must be >= 1");
  if (!(eta > 0.0 && eta < 1.0)) throw std::invalid_argument("hayashi_sample_size: eta in (0,1)");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::invalid_argument("hayashi_sample_size: delta in (0,1]");
  }
  return ceil_count(4.0 * (d + std::log(1.0 / delta)) / eta);
}

double hayashi_epsilon(int d, std::int64_t n, double delta) {
  return std::sqrt(4.0 * (d + std::log(2.0 / delta)) / static_cast<double>(n));
}

BoundComponents theoretical_bound(const DimPair& dims, int k, double delta, double eps_pure) {
  dims.validate();
  if (k < 1) throw std::invalid_argument("theoretical_bound: k must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("theoretical_bound: delta in (0,1)");
  BoundComponents b;
  b.d_tot = dims.d_out * dims.d_in * k;
  b.eps_pure = eps_pure;
  b.in_regime = delta > 4.0 * std::exp(-static_cast<double>(b.d_tot));
  if (b.d_tot == 1) {
    b.degenerate = true;
    return b;
  }
  b.c_delta = 2.0 + std::sqrt(std::log(4.0 / delta) / (k * dims.d_out));
  b.eps_ov = 1.0 - std::pow(delta / 4.0, 1.0 / (b.d_tot - 1));
  const double keep = 1.0 - b.eps_ov;
  b.c_ov = std::sqrt(b.eps_ov / keep);
  b.s_delta = (1.0 / keep - 1.0) + 4.0 * b.c_ov + b.c_ov * b.c_ov +
              2.0 * (1.0 + b.c_ov) * (1.0 / std::sqrt(keep) - 1.0);
  b.total = b.c_delta * (4.0 + b.s_delta) * eps_pure;
  return b;
}

SampleComplexity sample_complexity(const DimPair& dims, int k, double eps, double delta) {
  dims.validate();
  if (!validate_rank_bounds(dims, k)) {
    throw std::invalid_argument("sample_complexity: Kraus rank outside [ceil(d_in/d_out), d_in d_out]");
  }
  if (!(eps > 0.0 && eps <= 1.0)) throw std::invalid_argument("sample_complexity: eps in (0,1]");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("sample_complexity: delta in (0,1)");
  const int d_tot = dims.d_out * dims.d_in * k;
  if (!(delta > 4.0 * std::exp(-static_cast<double>(d_tot)))) {
    throw std::domain_error(
        "sample_complexity: delta must exceed 4 exp(-d_tot) = " +
        std::to_string(4.0 * std::exp(-static_cast<double>(d_tot))) +
        "; run at a larger delta and boost confidence by repetition, or use a "
        "high-confidence pure-state estimator");
  }
  SampleComplexity out;
  out.leading = ceil_count(256.0 * dims.d_in * dims.d_out * k / (eps * eps));
  const BoundComponents unit = theoretical_bound(dims, k, delta, 1.0);
  auto total_at = [&](std::int64_t n) { return unit.total * hayashi_epsilon(d_tot, n, delta); };
  std::int64_t n =
      ceil_count(4.0 * (d_tot + std::log(2.0 / delta)) * unit.total * unit.total / (eps * eps));
  while (n > 1 && total_at(n - 1) <= eps) --n;
  while (total_at(n) > eps) ++n;
  out.exact = n;
  out.bound = theoretical_bound(dims, k, delta, hayashi_epsilon(d_tot, n, delta));
  return out;
}

TrialRecord run_algorithm1(const KrausChannel& channel, const TomographyConfig& cfg) {
  run_stage("config", [&] {
    cfg.validate();
    if (channel.dims().d_in != cfg.dims.d_in || channel.dims().d_out != cfg.dims.d_out) {
      throw DimensionError("channel dimensions do not match the configuration");
    }
    return 0;
  });
  const DimPair dims{cfg.dims.d_out, cfg.dims.d_in};
  SdpOptions opt;
  opt.gap_tol = cfg.gap_tol;

  TrialRecord rec;
  rec.config = cfg;
  RngStream root(cfg.seed, cfg.stream_id);
  RngStream purify_rng = root.substream(1);
  RngStream tomo_rng = root.substream(2);

  auto t0 = Clock::now();
  const ChoiOperator choi = run_stage("choi", [&] { return kraus_to_choi(channel); });
  const PureState phi = run_stage("purify", [&] {
    if (channel.size() == 1) {
      // Isometric channel: the Choi state is already pure.
      const double angle = 2.0 * std::numbers::pi * purify_rng.uniform();
      const ComplexVector v = vec(channel.kraus_ops()[0]) *
                              (std::polar(1.0, angle) / std::sqrt(static_cast<double>(dims.d_in)));
      ComplexVector padded = ComplexVector::Zero(v.size() * cfg.k);
      for (Index x = 0; x < v.size(); ++x) padded(x * cfg.k) = v(x);
      return PureState(padded / padded.norm());
    }
    return purify_choi(choi, cfg.k, purify_rng);
  });
  rec.times.purify_ms = elapsed_ms(t0);

  t0 = Clock::now();
  const PureEstimate est =
      run_stage("tomography", [&] { return simulate_covariant_pure_tomography(phi, cfg.n, tomo_rng); });
  rec.true_overlap_sq = est.true_overlap_sq;
  rec.epsilon_pure_realized = est.epsilon_pure_realized;
  rec.times.tomography_ms = elapsed_ms(t0);

  t0 = Clock::now();
  rec.choi_raw = run_stage("reconstruct", [&] {
    const ComplexVector& v = est.estimate.amplitudes();
    return hermitian_part(trace_out_env(v, v, DimPair{dims.d_out, dims.d_in, cfg.k}));
  });
  rec.times.reconstruct_ms = elapsed_ms(t0);

  t0 = Clock::now();
  const ProjectionResult proj = run_stage("project", [&] { return cptp_project(rec.choi_raw, dims, opt); });
  rec.choi_final = proj.choi;
  rec.projection_distance = proj.distance;
  rec.times.project_ms = elapsed_ms(t0);

  t0 = Clock::now();
  run_stage("evaluate", [&] {
    rec.diamond_error_est =
        diamond_norm(ComplexMatrix(rec.choi_raw - choi.matrix()), dims.d_in, opt).value;
    rec.diamond_error_final =
        diamond_norm(ComplexMatrix(rec.choi_final.matrix() - choi.matrix()), dims.d_in, opt).value;
    return 0;
  });
  rec.bound = theoretical_bound(dims, cfg.k, cfg.delta, rec.epsilon_pure_realized);
  rec.hayashi_event = rec.epsilon_pure_realized <=
                      hayashi_epsilon(rec.bound.d_tot, cfg.n, cfg.delta);
  rec.times.evaluate_ms = elapsed_ms(t0);
  return rec;
}

}  // namespace dtomo
