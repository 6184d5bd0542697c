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

// Diamond norm of Hermiticity-preserving maps given by their normalised Choi
// operator J on out (x) in.
//
// The primal program is
//
//   ||Phi||_<> = d_in max tr(J Y)
//                s.t. -I (x) sigma <= Y <= I (x) sigma,  sigma >= 0, tr sigma = 1,
//
// written with P = I (x) sigma - Y and Q = I (x) sigma + Y as PSD blocks.
// Its Lagrange dual, used for minimisation problems, is
//
//   ||Phi||_<> = min t
//                s.t. M+ - M- = d_in J,  t I >= tr_out(M+ + M-),  M+, M- >= 0.

#ifndef DTOMO_DIAMOND_HPP_
#define DTOMO_DIAMOND_HPP_

#include <optional>
#include <stdexcept>
#include <string>

#include "dtomo/channels.hpp"
#include "dtomo/haar.hpp"
#include "dtomo/linalg.hpp"
#include "dtomo/sdp.hpp"

namespace dtomo {

using ComplexSdpSolution = SdpSolution<Complex>;

enum class DiamondMethod { kSdp, kPositiveClosedForm, kTraceNorm, kBruteforceLower };

std::string to_string(DiamondMethod m);

struct DiamondValue {
  double value = 0.0;
  DiamondMethod method = DiamondMethod::kSdp;
  double gap = 0.0;  // duality gap of the certificate, 0 for closed forms
  std::optional<ComplexSdpSolution> certificate;
};

/// The solver stopped without meeting its tolerances. `lower` and `upper`
/// bracket the optimum as far as the last iterate certifies.
class SdpSolveError : public std::runtime_error {
 public:
  SdpSolveError(const std::string& what, double lower, double upper)
      : std::runtime_error(what), lower_(lower), upper_(upper) {}
  double lower() const { return lower_; }
  double upper() const { return upper_; }

 private:
  double lower_;
  double upper_;
};

/// Diamond norm of the map with Choi operator `j` (Hermitian, side
/// d_out * d_in). For d_in = 1 the norm is the trace norm and is returned in
/// closed form; otherwise the primal SDP is solved.
DiamondValue diamond_norm(const ComplexMatrix& j, int d_in, const SdpOptions& opt = {});

/// Always solves the primal SDP, even when d_in = 1.
DiamondValue diamond_norm_sdp(const ComplexMatrix& j, int d_in, const SdpOptions& opt = {});

/// Solves the dual (minimisation) program.
DiamondValue diamond_norm_dual(const ComplexMatrix& j, int d_in, const SdpOptions& opt = {});

/// Primal SDP solved through the real symmetric embedding.
DiamondValue diamond_norm_real_embedding(const ComplexMatrix& j, int d_in,
                                         const SdpOptions& opt = {});

/// d_in ||tr_out J||_inf, valid for PSD J. Throws InvariantError if J has an
/// eigenvalue below -1e-7; use diamond_norm for indefinite inputs.
DiamondValue diamond_norm_positive(const ComplexMatrix& j, int d_in);

/// Best ||(Phi (x) id)(psi)||_1 found over `budget` random pure inputs on
/// in (x) in, each improved by alternating between the sign of the output and
/// the top eigenvector of the adjoint image.
double diamond_lower_bound(const ComplexMatrix& j, int d_in, int budget, RngStream& rng,
                           int steps = 50);

struct ProjectionResult {
  ChoiOperator choi;  // CPTP
  double distance = 0.0;  // certified ||choi - j_est||_<>
  std::optional<ComplexSdpSolution> certificate;
};

/// The projection program did not converge. Carries the last CPTP iterate and
/// its recomputed distance to the input.
class ProjectionError : public SdpSolveError {
 public:
  ProjectionError(const std::string& what, ChoiOperator best, double distance)
      : SdpSolveError(what, 0.0, distance), best_(std::move(best)), distance_(distance) {}
  const ChoiOperator& best() const { return best_; }
  double distance() const { return distance_; }

 private:
  ChoiOperator best_;
  double distance_;
};

/// Diamond-norm nearest CPTP map to the Hermitian estimate `j_est`.
ProjectionResult cptp_project(const ComplexMatrix& j_est, const DimPair& dims,
                              const SdpOptions& opt = {});

struct CauchySchwarzCheck {
  double lhs = 0.0;  // ||J12 + J21||_<>
  double rhs = 0.0;  // 2 sqrt(||J11||_<> ||J22||_<>)
};

/// With J_ab = tr_env |phi_a><phi_b| for states on out (x) in (x) env.
CauchySchwarzCheck diamond_cs_check(const PureState& phi1, const PureState& phi2,
                                    const DimPair& dims, const SdpOptions& opt = {});

/// tr_env |a><b| for vectors on out (x) in (x) env.
ComplexMatrix trace_out_env(const ComplexVector& a, const ComplexVector& b, const DimPair& dims);

}  // namespace dtomo

#endif  // DTOMO_DIAMOND_HPP_
