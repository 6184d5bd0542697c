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

// Haar-random states and unitaries, Beta/Gamma samplers and the closed-form
// concentration bounds for reduced Haar states.

#ifndef DTOMO_HAAR_HPP_
#define DTOMO_HAAR_HPP_

#include <cstdint>
#include <random>

#include "dtomo/linalg.hpp"

namespace dtomo {

/// Deterministic random stream identified by (seed, stream id). Two streams
/// with the same pair produce identical draws; there is no global state.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  /// Independent child stream; deterministic in (seed, stream id, tag).
  RngStream substream(std::uint64_t tag) const;

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Components X + iY with X, Y ~ N(0, 1/2) independent.
ComplexVector sample_complex_gaussian(int d, RngStream& rng);

PureState sample_haar_state(int d, RngStream& rng);

/// QR of a Ginibre matrix with the diagonal phases of R divided out.
ComplexMatrix sample_haar_unitary(int d, RngStream& rng);

/// Haar isometry C^{cols} -> C^{rows} (first `cols` columns of a Haar unitary).
ComplexMatrix sample_haar_isometry(int rows, int cols, RngStream& rng);

/// Pr[|<v|psi>|^2 >= epsilon] = (1 - epsilon)^{d-1} for Haar psi.
double overlap_tail(double epsilon, int d);
/// The exp(-(d-1) epsilon) relaxation of overlap_tail.
double overlap_tail_relaxed(double epsilon, int d);

/// Gamma(shape, 1): Marsaglia-Tsang squeeze for shape >= 1, boosted with
/// U^{1/shape} below 1.
double sample_gamma(double shape, RngStream& rng);

struct BetaDraw {
  double x;           // the Beta variate
  double complement;  // 1 - x, computed without cancellation
};

BetaDraw sample_beta_pair(double alpha, double beta, RngStream& rng);
double sample_beta(double alpha, double beta, RngStream& rng);

struct TailBoundReport {
  int n = 0;
  int s = 0;
  double delta = 0.0;
  double bound = 0.0;
};

/// (1/sqrt(n) + (1 + sqrt(ln(1/delta)/n))/sqrt(s))^2: with probability at
/// least 1 - delta, the reduced state of a Haar state on C^n (x) C^s has
/// operator norm below this value.
TailBoundReport reduced_opnorm_bound(int n, int s, double delta);

/// (1/d_in) (2 + sqrt(ln(1/delta)/(k d_out)))^2, the simplified bound on
/// ||tr_{out,E} |Psi><Psi|||_inf for Haar Psi on out (x) in (x) C^k.
double choi_marginal_bound(const DimPair& dims, int k, double delta_haar);

/// Haar-random unit vector on the orthogonal complement of psi.
PureState haar_orthogonal_error(const PureState& psi, RngStream& rng);

}  // namespace dtomo

#endif  // DTOMO_HAAR_HPP_
