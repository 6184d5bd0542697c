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

// The tomography pipeline specialised to state preparation (d_in = 1),
// isometries (k = 1) and measurements.

#ifndef DTOMO_APPLICATIONS_HPP_
#define DTOMO_APPLICATIONS_HPP_

#include <cstdint>
#include <vector>

#include "dtomo/channels.hpp"
#include "dtomo/tomography.hpp"

namespace dtomo {

inline constexpr double kPovmTol = 1e-8;

/// Two-outcome measurement {E, I - E} with 0 <= E <= I.
class BinaryPovm {
 public:
  explicit BinaryPovm(const ComplexMatrix& effect);

  int dim() const { return static_cast<int>(e_.dim()); }
  const ComplexMatrix& effect() const { return e_.matrix(); }

 private:
  HermitianOperator e_;
};

/// Effects E_j >= 0 with sum_j E_j = I.
class MultiPovm {
 public:
  explicit MultiPovm(const std::vector<ComplexMatrix>& effects);

  int dim() const { return dim_; }
  int outcomes() const { return static_cast<int>(effects_.size()); }
  const ComplexMatrix& effect(int j) const { return effects_[j].matrix(); }

 private:
  int dim_ = 0;
  std::vector<HermitianOperator> effects_;
};

/// Random measurement with `outcomes` effects, E_j = S^{-1/2} W_j S^{-1/2} for
/// independent complex Wishart W_j and S = sum_j W_j.
MultiPovm random_povm(int dim, int outcomes, RngStream& rng);

struct StateLearning {
  DensityOperator estimate;
  double trace_distance = 0.0;  // (1/2) ||estimate - rho||_1
  TrialRecord record;
};

/// Learns rho through its preparation channel with Kraus rank r.
StateLearning learn_state(const DensityOperator& rho, int r, std::int64_t n, double delta,
                          RngStream& rng);

struct IsometryLearning {
  KrausChannel estimate;
  double diamond_error = 0.0;  // half diamond distance to the true channel
  TrialRecord record;
};

IsometryLearning learn_isometry(const Isometry& v, std::int64_t n, double delta, RngStream& rng);

/// rho -> tr(E rho) |0><0| + tr((I - E) rho) |1><1|, with Kraus operators
/// |b><i| sqrt(M_b).
KrausChannel povm_to_channel(const BinaryPovm& m);

/// d (J_00)^T: the effect of outcome 0 read off the Choi operator of a
/// channel with d_out = 2, eigenvalues clipped to [0, 1].
ComplexMatrix extract_effect(const ChoiOperator& j);

struct PovmIdentity {
  double lhs = 0.0;  // ||Lambda_E - Lambda_F||_<>
  double rhs = 0.0;  // 2 ||E - F||_inf
};

PovmIdentity povm_diamond_identity(const BinaryPovm& e, const BinaryPovm& f,
                                   const SdpOptions& opt = {});

struct BinaryPovmLearning {
  BinaryPovm estimate;
  double opnorm_error = 0.0;  // ||estimate - E||_inf
  TrialRecord record;
};

/// Throws std::domain_error unless delta > 4 exp(-4 d^2).
BinaryPovmLearning learn_binary_povm(const BinaryPovm& e, std::int64_t n, double delta,
                                     RngStream& rng);

struct MultiPovmLearning {
  MultiPovm estimate;
  double max_opnorm_error = 0.0;  // after renormalisation
  std::vector<double> element_errors;  // per element, before renormalisation
  bool congruence_fallback = false;  // additive renormalisation broke positivity
  std::vector<TrialRecord> records;  // one per element
};

/// Learns each coarse-graining {E_j, I - E_j} with failure budget delta / L
/// and restores sum_j E_j = I.
MultiPovmLearning learn_multi_povm(const MultiPovm& m, std::int64_t n_per_element, double delta,
                                   RngStream& rng);

}  // namespace dtomo

#endif  // DTOMO_APPLICATIONS_HPP_
