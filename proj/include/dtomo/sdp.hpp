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

// Dense primal-dual interior-point solver for block semidefinite programs
// over real symmetric or complex Hermitian blocks.
//
// Primal:  maximize   sum_b <C_b, X_b>
//          subject to sum_b <A_ib, X_b> = b_i,  X_b >= 0
// Dual:    minimize   b^T y
//          subject to Z_b = sum_i y_i A_ib - C_b >= 0
//
// with <A, X> = Re tr(A X). Constraint matrices are sparse Hermitian: an
// entry (block, row, col, v) contributes v at (row, col) and conj(v) at
// (col, row) when row != col. The search direction is the HKM direction with
// a Mehrotra predictor-corrector step.

#ifndef DTOMO_SDP_HPP_
#define DTOMO_SDP_HPP_

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dtomo {

template <typename Scalar>
struct SdpEntry {
  int block = 0;
  int row = 0;
  int col = 0;
  Scalar value{};
};

template <typename Scalar>
struct SdpConstraint {
  std::vector<SdpEntry<Scalar>> entries;
  double rhs = 0.0;
};

template <typename Scalar>
struct SdpProblem {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  std::vector<int> block_dims;
  std::vector<Matrix> objective;
  std::vector<SdpConstraint<Scalar>> constraints;

  /// Appends a PSD block with zero objective; returns its index.
  int add_block(int dim);
  int total_dim() const;
  void validate() const;
};

enum class SdpStatus { kOptimal, kMaxIter, kInfeasible };

std::string to_string(SdpStatus s);

template <typename Scalar>
struct SdpSolution {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;              // |primal - dual|
  double relative_gap = 0.0;     // max(gap, |<X, Z>|) / (1 + max(|primal|, |dual|))
  double primal_residual = 0.0;  // ||b - A(X)|| / (1 + ||b||)
  double dual_residual = 0.0;    // ||A^T y - C - Z|| / (1 + ||C||)
  double complementarity = 0.0;  // <X, Z>
  std::vector<Matrix> x;
  std::vector<Matrix> z;
  Eigen::VectorXd y;
  int iterations = 0;
  SdpStatus status = SdpStatus::kMaxIter;
};

struct SdpOptions {
  double gap_tol = 1e-7;
  double feas_tol = 1e-8;
  int max_iter = 200;
  int max_total_dim = 256;
};

template <typename Scalar>
SdpSolution<Scalar> solve_sdp(const SdpProblem<Scalar>& problem,
                              const SdpOptions& options = {});

/// Maps every Hermitian block H = A + iB to the real symmetric block
/// [[A, -B], [B, A]], with the data halved so that objective and constraint
/// values carry over unchanged. The embedded program has the same optimal
/// value as the original.
SdpProblem<double> real_embedding(const SdpProblem<std::complex<double>>& problem);

extern template struct SdpProblem<double>;
extern template struct SdpProblem<std::complex<double>>;
extern template SdpSolution<double> solve_sdp(const SdpProblem<double>&, const SdpOptions&);
extern template SdpSolution<std::complex<double>> solve_sdp(
    const SdpProblem<std::complex<double>>&, const SdpOptions&);

}  // namespace dtomo

#endif  // DTOMO_SDP_HPP_
