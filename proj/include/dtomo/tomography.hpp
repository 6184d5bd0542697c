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

// Simulation of diamond-distance channel tomography: purify the Choi state,
// learn the purification with a covariant pure-state estimator, trace out
// the environment and project back onto channels.
//
// The N channel uses are not simulated one by one. The covariant estimator's
// output law is known exactly (overlap X ~ Beta(N + 1, d - 1) with the truth,
// error direction Haar on the orthogonal complement) and is sampled directly,
// so a trial costs the same for every N.

#ifndef DTOMO_TOMOGRAPHY_HPP_
#define DTOMO_TOMOGRAPHY_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

#include "dtomo/channels.hpp"
#include "dtomo/diamond.hpp"
#include "dtomo/haar.hpp"
#include "dtomo/linalg.hpp"

namespace dtomo {

struct TomographyConfig {
  DimPair dims;
  int k = 1;
  std::int64_t n = 1;  // channel uses
  double delta = 0.1;
  double gap_tol = 1e-7;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// Throws std::invalid_argument listing the first violated requirement.
  void validate() const;
};

struct PureEstimate {
  PureState estimate;
  double true_overlap_sq = 1.0;        // X = |<estimate|psi>|^2
  double epsilon_pure_realized = 0.0;  // sqrt(1 - X)
  bool degenerate = false;             // d = 1, returned exactly
};

struct BoundComponents {
  int d_tot = 1;
  double c_delta = 0.0;
  double eps_ov = 0.0;
  double c_ov = 0.0;
  double s_delta = 0.0;
  double eps_pure = 0.0;
  double total = 0.0;      // C(delta) (4 + S_delta) eps_pure
  bool in_regime = false;  // delta > 4 exp(-d_tot)
  bool degenerate = false;  // d_tot = 1
};

struct StageTimes {
  double purify_ms = 0.0;
  double tomography_ms = 0.0;
  double reconstruct_ms = 0.0;
  double project_ms = 0.0;
  double evaluate_ms = 0.0;
};

struct TrialRecord {
  TomographyConfig config;
  double true_overlap_sq = 1.0;
  double epsilon_pure_realized = 0.0;
  double diamond_error_est = 0.0;    // ||Lambda_est - Lambda||_<>, before projection
  double diamond_error_final = 0.0;  // ||Lambda_hat - Lambda||_<>, after projection
  double projection_distance = 0.0;  // certified ||Lambda_hat - Lambda_est||_<>
  BoundComponents bound;             // evaluated at epsilon_pure_realized
  bool hayashi_event = false;        // epsilon_pure_realized within the Hayashi rate
  StageTimes times;
  ComplexMatrix choi_raw;  // tr_env |v><v|
  ChoiOperator choi_final;
};

/// A pipeline stage failed. `stage` names it; `numerical` is set when the
/// cause was solver non-convergence rather than invalid input.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& what, bool numerical)
      : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), numerical_(numerical) {}
  const std::string& stage() const { return stage_; }
  bool numerical() const { return numerical_; }

 private:
  std::string stage_;
  bool numerical_;
};

/// Spectral purification sum_i sqrt(lambda_i) |v_i>|i> on out (x) in (x) env
/// (env dimension k) followed by a Haar unitary on the environment.
/// Throws InvariantError if rank(J) > k.
PureState purify_choi(const ChoiOperator& j, int k, RngStream& rng);

/// One draw of the covariant estimator after n copies of psi.
PureEstimate simulate_covariant_pure_tomography(const PureState& psi, std::int64_t n,
                                                RngStream& rng);

/// ceil(4 (d + ln(1/delta)) / eta).
std::int64_t hayashi_sample_size(int d, double eta, double delta);

/// Trace-distance accuracy sqrt(4 (d + ln(2/delta)) / n) that the estimator
/// reaches with probability 1 - delta/2.
double hayashi_epsilon(int d, std::int64_t n, double delta);

TrialRecord run_algorithm1(const KrausChannel& channel, const TomographyConfig& cfg);

BoundComponents theoretical_bound(const DimPair& dims, int k, double delta, double eps_pure);

struct SampleComplexity {
  std::int64_t exact = 0;    // smallest N whose bound is at most eps
  std::int64_t leading = 0;  // ceil(256 d_in d_out k / eps^2)
  BoundComponents bound;     // evaluated at N = exact
};

/// Throws std::domain_error outside the regime delta > 4 exp(-d_tot).
SampleComplexity sample_complexity(const DimPair& dims, int k, double eps, double delta);

}  // namespace dtomo

#endif  // DTOMO_TOMOGRAPHY_HPP_
