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

#include "dtomo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace dtomo {
namespace {

bool all_finite(const ComplexMatrix& m) {
  for (Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

double hermitian_opnorm(const ComplexMatrix& h) {
  if (h.size() == 0) return 0.0;
  const RealVector ev = hermitian_eigenvalues(h);
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

}  // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("HermitianOperator: matrix is " +
                         std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
  if (!all_finite(m)) throw InvariantError("HermitianOperator: non-finite entry");
  if (!is_hermitian(m)) throw InvariantError("HermitianOperator: not Hermitian");
  m_ = hermitian_part(m);
}

DensityOperator::DensityOperator(const ComplexMatrix& m) : h_(m) {
  const double tr = h_.matrix().trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw InvariantError("DensityOperator: trace " + std::to_string(tr));
  }
  if (h_.dim() > 0 && lambda_min(h_.matrix()) < kPsdFloor) {
    throw InvariantError("DensityOperator: not positive semidefinite");
  }
}

PureState::PureState(const ComplexVector& amplitudes) : psi_(amplitudes) {
  if (psi_.size() == 0) throw DimensionError("PureState: empty vector");
  if (std::abs(psi_.norm() - 1.0) > kUnitNormTol) {
    throw InvariantError("PureState: norm " + std::to_string(psi_.norm()));
  }
}

ComplexMatrix PureState::projector() const { return psi_ * psi_.adjoint(); }

void DimPair::validate() const {
  if (d_out < 1 || d_in < 1 || d_env < 1) {
    throw DimensionError("DimPair: dimensions must be >= 1");
  }
}

ComplexMatrix identity(Index d) { return ComplexMatrix::Identity(d, d); }

bool is_hermitian(const ComplexMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const ComplexMatrix skew = m - m.adjoint();
  const double scale = std::max(1.0, m.norm());
  // Frobenius bounds the operator norm from above, so this is a cheap accept.
  if (skew.norm() <= rel_tol * scale) return true;
  const ComplexMatrix as_herm = Complex(0.0, 1.0) * skew;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const double op_scale = std::max(1.0, svd.singularValues()(0));
  return hermitian_opnorm(as_herm) <= rel_tol * op_scale;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
  return 0.5 * (m + m.adjoint());
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  ComplexVector out(a.size() * b.size());
  for (Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& x, std::span<const int> dims,
                            std::span<const int> keep) {
  const int n = static_cast<int>(dims.size());
  Index total = 1;
  for (int d : dims) {
    if (d < 1) throw DimensionError("partial_trace: factor dimension < 1");
    total *= d;
  }
  if (x.rows() != x.cols() || x.rows() != total) {
    throw DimensionError("partial_trace: matrix side " + std::to_string(x.rows()) +
                         " does not match product of dims " + std::to_string(total));
  }
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    if (k < 0 || k >= n) throw DimensionError("partial_trace: keep index out of range");
    kept[k] = true;
  }
  // stride of each factor in the full index (row-major tensor order)
  std::vector<Index> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];

  // Enumerate offsets contributed by the kept and the traced factors.
  auto offsets = [&](bool want_kept) {
    std::vector<Index> offs{0};
    for (int f = 0; f < n; ++f) {
      if (kept[f] != want_kept) continue;
      std::vector<Index> next;
      next.reserve(offs.size() * dims[f]);
      for (Index o : offs) {
        for (int v = 0; v < dims[f]; ++v) next.push_back(o + v * stride[f]);
      }
      offs = std::move(next);
    }
    return offs;
  };
  const std::vector<Index> kept_off = offsets(true);
  const std::vector<Index> traced_off = offsets(false);

  const Index m = static_cast<Index>(kept_off.size());
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  for (Index r = 0; r < m; ++r) {
    for (Index c = 0; c < m; ++c) {
      Complex acc = 0.0;
      for (Index t : traced_off) acc += x(kept_off[r] + t, kept_off[c] + t);
      out(r, c) = acc;
    }
  }
  return out;
}

ComplexVector vec(const ComplexMatrix& k) {
  ComplexVector v(k.size());
  for (Index i = 0; i < k.rows(); ++i) {
    for (Index j = 0; j < k.cols(); ++j) v(i * k.cols() + j) = k(i, j);
  }
  return v;
}

ComplexMatrix unvec(const ComplexVector& v, int d_out, int d_in) {
  if (d_out < 1 || d_in < 1 || v.size() != Index{d_out} * d_in) {
    throw DimensionError("unvec: vector length " + std::to_string(v.size()) +
                         " != " + std::to_string(d_out) + "*" + std::to_string(d_in));
  }
  ComplexMatrix k(d_out, d_in);
  for (int i = 0; i < d_out; ++i) {
    for (int j = 0; j < d_in; ++j) k(i, j) = v(i * d_in + j);
  }
  return k;
}

double schatten_norm(const ComplexMatrix& x, SchattenP p) {
  if (x.size() == 0) return 0.0;
  if (p == SchattenP::kTwo) return x.norm();
  RealVector sv;
  if (x.rows() == x.cols() && is_hermitian(x, 1e-14)) {
    sv = hermitian_eigenvalues(hermitian_part(x)).cwiseAbs();
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(x);
    sv = svd.singularValues();
  }
  return p == SchattenP::kOne ? sv.sum() : sv.maxCoeff();
}

RealVector hermitian_eigenvalues(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().reverse();
}

double lambda_min(const ComplexMatrix& h) {
  return hermitian_eigenvalues(h).minCoeff();
}

double lambda_max(const ComplexMatrix& h) {
  return hermitian_eigenvalues(h).maxCoeff();
}

EigenDecomposition hermitian_eig(const HermitianOperator& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h.matrix());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eig: eigensolver did not converge");
  }
  EigenDecomposition out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  return out;
}

ComplexMatrix psd_sqrt(const ComplexMatrix& a) {
  return spectral_map(a, [](double l) { return std::sqrt(std::max(l, 0.0)); });
}

HermitianOperator interval_contraction(const HermitianOperator& a,
                                       const HermitianOperator& y) {
  if (a.dim() != y.dim()) throw DimensionError("interval_contraction: dim mismatch");
  const Index n = a.dim();
  const EigenDecomposition eig = hermitian_eig(a);
  const double lmax = n > 0 ? eig.values(0) : 0.0;
  const double scale = std::max({1.0, std::abs(lmax), schatten_norm(y.matrix(), SchattenP::kInf)});
  const double tol = 1e-9 * scale;
  if (n > 0 && eig.values(n - 1) < -tol) {
    throw InvariantError("interval_contraction: A is not positive semidefinite");
  }
  if (n == 0) return HermitianOperator(ComplexMatrix(0, 0));
  if (lambda_min(a.matrix() - y.matrix()) < -tol ||
      lambda_min(a.matrix() + y.matrix()) < -tol) {
    throw InvariantError("interval_contraction: -A <= Y <= A violated");
  }

  // pseudo-inverse square root restricted to supp(A)
  const double cutoff = 1e-10 * std::max(lmax, 0.0);
  RealVector inv_sqrt = RealVector::Zero(n);
  Index rank = 0;
  for (Index i = 0; i < n; ++i) {
    if (eig.values(i) > cutoff && eig.values(i) > 0.0) {
      inv_sqrt(i) = 1.0 / std::sqrt(eig.values(i));
      ++rank;
    }
  }
  if (rank == 0) {
    if (schatten_norm(y.matrix(), SchattenP::kInf) > tol) {
      throw InvariantError("interval_contraction: A = 0 but Y != 0");
    }
    return HermitianOperator(ComplexMatrix::Zero(n, n));
  }
  const ComplexMatrix& v = eig.vectors;
  const ComplexMatrix a_pinv_sqrt = v * inv_sqrt.cast<Complex>().asDiagonal() * v.adjoint();
  ComplexMatrix k = hermitian_part(a_pinv_sqrt * y.matrix() * a_pinv_sqrt);

  // Rounding (and the tolerance admitted by the precondition) can push the
  // spectrum marginally outside [-1, 1].
  const RealVector kev = hermitian_eigenvalues(k);
  if (kev(0) > 1.0 || kev(kev.size() - 1) < -1.0) {
    k = spectral_map(k, [](double l) { return std::clamp(l, -1.0, 1.0); });
  }
  return HermitianOperator(hermitian_part(k));
}

}  // namespace dtomo
