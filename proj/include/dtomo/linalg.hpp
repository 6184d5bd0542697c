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

// Dense complex operator algebra shared by every other module.
//
// Conventions: matrices are stored row-major; tensor products are ordered
// left-to-right (the first factor is the most significant index); the
// vectorisation map sends |i><j| to |i>|j>, i.e. it is the row-major reshape.

#ifndef DTOMO_LINALG_HPP_
#define DTOMO_LINALG_HPP_

#include <complex>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dtomo {

using Complex = std::complex<double>;
using ComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermiticityTol = 1e-10;  // relative
inline constexpr double kPsdFloor = -1e-9;
inline constexpr double kTraceTol = 1e-9;
inline constexpr double kUnitNormTol = 1e-10;

/// Raised when operand shapes are incompatible with an operation.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a value violates a domain invariant (Hermiticity, positivity,
/// normalisation, ...).
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Square matrix equal to its adjoint up to kHermiticityTol (relative to its
/// operator norm). The stored matrix is exactly Hermitian: the tiny
/// anti-Hermitian part is dropped on construction.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

/// Positive semidefinite, unit-trace Hermitian operator.
class DensityOperator {
 public:
  DensityOperator() = default;
  explicit DensityOperator(const ComplexMatrix& m);

  const ComplexMatrix& matrix() const { return h_.matrix(); }
  const HermitianOperator& hermitian() const { return h_; }
  Index dim() const { return h_.dim(); }

 private:
  HermitianOperator h_;
};

/// Unit vector; also used for purifications and tomography estimates.
class PureState {
 public:
  PureState() = default;
  explicit PureState(const ComplexVector& amplitudes);

  const ComplexVector& amplitudes() const { return psi_; }
  Index dim() const { return psi_.size(); }
  ComplexMatrix projector() const;

 private:
  ComplexVector psi_;
};

/// Output/input dimensions of a map, optionally with an environment factor
/// for tripartite objects on out (x) in (x) env.
struct DimPair {
  int d_out = 1;
  int d_in = 1;
  int d_env = 1;

  void validate() const;
  int choi_dim() const { return d_out * d_in; }
};

ComplexMatrix identity(Index d);
bool is_hermitian(const ComplexMatrix& m, double rel_tol = kHermiticityTol);
ComplexMatrix hermitian_part(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// Traces out every tensor factor of `x` whose index is not listed in `keep`.
/// The kept factors appear in their original order.
ComplexMatrix partial_trace(const ComplexMatrix& x, std::span<const int> dims,
                            std::span<const int> keep);

ComplexVector vec(const ComplexMatrix& k);
ComplexMatrix unvec(const ComplexVector& v, int d_out, int d_in);

enum class SchattenP { kOne, kTwo, kInf };

/// l_p norm of the singular values.
double schatten_norm(const ComplexMatrix& x, SchattenP p);

struct EigenDecomposition {
  RealVector values;     // descending
  ComplexMatrix vectors;  // column i belongs to values(i)
};

EigenDecomposition hermitian_eig(const HermitianOperator& h);
RealVector hermitian_eigenvalues(const ComplexMatrix& h);

/// Smallest / largest eigenvalue of a Hermitian matrix (no validation).
double lambda_min(const ComplexMatrix& h);
double lambda_max(const ComplexMatrix& h);

/// f applied to the spectrum of a Hermitian matrix.
template <typename F>
ComplexMatrix spectral_map(const ComplexMatrix& h, F&& f) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd mapped(es.eigenvalues().size());
  for (Index i = 0; i < mapped.size(); ++i) mapped(i) = f(es.eigenvalues()(i));
  return es.eigenvectors() * mapped.asDiagonal() * es.eigenvectors().adjoint();
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a);

/// Given A >= 0 and -A <= Y <= A, returns Hermitian K with ||K||_inf <= 1 and
/// A^{1/2} K A^{1/2} = Y. K is built on supp(A) from the pseudo-inverse
/// square root of A (eigenvalue cutoff 1e-10 * lambda_max).
HermitianOperator interval_contraction(const HermitianOperator& a,
                                       const HermitianOperator& y);

}  // namespace dtomo

#endif  // DTOMO_LINALG_HPP_
