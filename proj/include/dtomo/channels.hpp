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

// Kraus and Choi representations of channels.
//
// The Choi operator is normalised, J = (Phi (x) id)(Omega) with
// Omega = |Omega><Omega|, |Omega> = d_in^{-1/2} sum_j |j>|j>, and lives on
// H_out (x) H_in in that order. A channel therefore has tr J = 1 and
// tr_out J = I / d_in.

#ifndef DTOMO_CHANNELS_HPP_
#define DTOMO_CHANNELS_HPP_

#include <vector>

#include "dtomo/haar.hpp"
#include "dtomo/linalg.hpp"

namespace dtomo {

inline constexpr double kTracePreservationTol = 1e-8;
/// Eigenvalues at or below this fraction of lambda_max do not count toward
/// the Kraus rank.
inline constexpr double kKrausRankCutoff = 1e-8;

/// Raised by choi_to_kraus when J has an eigenvalue below -1e-7.
class NotCompletelyPositiveError : public InvariantError {
 public:
  using InvariantError::InvariantError;
};

/// CPTP map given by Kraus operators, each d_out x d_in, with
/// sum_a K_a^dag K_a = I within kTracePreservationTol.
class KrausChannel {
 public:
  KrausChannel(DimPair dims, std::vector<ComplexMatrix> kraus_ops);

  const DimPair& dims() const { return dims_; }
  const std::vector<ComplexMatrix>& kraus_ops() const { return ops_; }
  int size() const { return static_cast<int>(ops_.size()); }

 private:
  DimPair dims_;
  std::vector<ComplexMatrix> ops_;
};

/// Normalised Choi operator with dimension metadata. Always Hermitian; it is
/// not required to be CP or TP, so that differences of channels and raw
/// estimates share the type.
class ChoiOperator {
 public:
  ChoiOperator() = default;
  ChoiOperator(DimPair dims, const ComplexMatrix& j);

  /// Accepts a Choi matrix in either normalisation. A matrix whose trace is
  /// d_in (the unnormalised convention sum_ij |i><j| (x) ...) is divided by
  /// d_in and `rescaled()` is set.
  static ChoiOperator ingest(DimPair dims, const ComplexMatrix& j);

  const DimPair& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return j_.matrix(); }
  bool rescaled() const { return rescaled_; }

  bool is_cp(double tol = 1e-8) const;
  bool is_tp(double tol = kTracePreservationTol) const;

 private:
  DimPair dims_;
  HermitianOperator j_;
  bool rescaled_ = false;
};

/// Linear map with V^dag V = I_{d_in}.
class Isometry {
 public:
  Isometry(DimPair dims, const ComplexMatrix& v);

  const DimPair& dims() const { return dims_; }
  const ComplexMatrix& matrix() const { return v_; }

 private:
  DimPair dims_;
  ComplexMatrix v_;
};

ChoiOperator kraus_to_choi(const KrausChannel& c);

/// K_a = sqrt(d_in lambda_a) vec^{-1}(v_a) over the eigenpairs of J above the
/// rank cutoff.
KrausChannel choi_to_kraus(const ChoiOperator& j);

DensityOperator apply_channel(const KrausChannel& c, const DensityOperator& rho);

/// ceil(d_in / d_out) <= k <= d_in d_out.
bool validate_rank_bounds(const DimPair& dims, int k);

/// Stinespring construction: Haar isometry V: C^{d_in} -> C^{d_out k},
/// K_a = (I (x) <a|) V.
KrausChannel random_channel(const DimPair& dims, int k, RngStream& rng);

/// tr_out J.
DensityOperator choi_input_marginal(const ChoiOperator& j);

/// Number of eigenvalues above cutoff * lambda_max.
int numerical_rank(const ComplexMatrix& hermitian, double cutoff = kKrausRankCutoff);

/// tr_out of a matrix on out (x) in.
ComplexMatrix trace_out_output(const ComplexMatrix& j, const DimPair& dims);

}  // namespace dtomo

#endif  // DTOMO_CHANNELS_HPP_
