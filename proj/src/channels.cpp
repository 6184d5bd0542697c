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

#include "dtomo/channels.hpp"

#include <array>
#include <cmath>
#include <string>

namespace dtomo {

KrausChannel::KrausChannel(DimPair dims, std::vector<ComplexMatrix> kraus_ops)
    : dims_(dims), ops_(std::move(kraus_ops)) {
  dims_.validate();
  if (ops_.empty()) throw InvariantError("KrausChannel: empty Kraus family");
  ComplexMatrix sum = ComplexMatrix::Zero(dims_.d_in, dims_.d_in);
  for (const ComplexMatrix& k : ops_) {
    if (k.rows() != dims_.d_out || k.cols() != dims_.d_in) {
      throw DimensionError("KrausChannel: Kraus operator is " + std::to_string(k.rows()) +
                           "x" + std::to_string(k.cols()) + ", expected " +
                           std::to_string(dims_.d_out) + "x" + std::to_string(dims_.d_in));
    }
    sum += k.adjoint() * k;
  }
  const double dev = schatten_norm(sum - identity(dims_.d_in), SchattenP::kInf);
  if (dev > kTracePreservationTol) {
    throw InvariantError("KrausChannel: sum K^dag K deviates from I by " +
                         std::to_string(dev));
  }
}

ChoiOperator::ChoiOperator(DimPair dims, const ComplexMatrix& j) : dims_(dims), j_(j) {
  dims_.validate();
  if (j_.dim() != dims_.choi_dim()) {
    throw DimensionError("ChoiOperator: side " + std::to_string(j_.dim()) +
                         " != d_out*d_in = " + std::to_string(dims_.choi_dim()));
  }
}

ChoiOperator ChoiOperator::ingest(DimPair dims, const ComplexMatrix& j) {
  ChoiOperator out(dims, j);
  const double tr = j.trace().real();
  if (dims.d_in > 1 && std::abs(tr - 1.0) > kTracePreservationTol &&
      std::abs(tr - dims.d_in) <= kTracePreservationTol * dims.d_in) {
    out = ChoiOperator(dims, j / static_cast<double>(dims.d_in));
    out.rescaled_ = true;
  }
  return out;
}

bool ChoiOperator::is_cp(double tol) const { return lambda_min(matrix()) >= -tol; }

bool ChoiOperator::is_tp(double tol) const {
  const ComplexMatrix marginal = trace_out_output(matrix(), dims_);
  const ComplexMatrix target = identity(dims_.d_in) / static_cast<double>(dims_.d_in);
  return schatten_norm(marginal - target, SchattenP::kInf) <= tol;
}

Isometry::Isometry(DimPair dims, const ComplexMatrix& v) : dims_(dims), v_(v) {
  dims_.validate();
  if (dims_.d_in > dims_.d_out) throw DimensionError("Isometry: d_in > d_out");
  if (v.rows() != dims_.d_out || v.cols() != dims_.d_in) {
    throw DimensionError("Isometry: matrix shape does not match dims");
  }
  if (schatten_norm(v.adjoint() * v - identity(dims_.d_in), SchattenP::kInf) > 1e-9) {
    throw InvariantError("Isometry: V^dag V != I");
  }
}

ComplexMatrix trace_out_output(const ComplexMatrix& j, const DimPair& dims) {
  const std::array<int, 2> d{dims.d_out, dims.d_in};
  const std::array<int, 1> keep{1};
  return partial_trace(j, d, keep);
}

ChoiOperator kraus_to_choi(const KrausChannel& c) {
  const DimPair& dims = c.dims();
  const Index n = dims.choi_dim();
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  for (const ComplexMatrix& k : c.kraus_ops()) {
    const ComplexVector v = vec(k);
    j += v * v.adjoint();
  }
  j /= static_cast<double>(dims.d_in);
  return ChoiOperator(DimPair{dims.d_out, dims.d_in}, hermitian_part(j));
}

int numerical_rank(const ComplexMatrix& hermitian, double cutoff) {
  const RealVector ev = hermitian_eigenvalues(hermitian);
  if (ev.size() == 0 || ev(0) <= 0.0) return 0;
  int r = 0;
  for (Index i = 0; i < ev.size(); ++i) {
    if (ev(i) > cutoff * ev(0)) ++r;
  }
  return r;
}

KrausChannel choi_to_kraus(const ChoiOperator& j) {
  const DimPair& dims = j.dims();
  const EigenDecomposition eig = hermitian_eig(HermitianOperator(j.matrix()));
  const Index n = eig.values.size();
  if (eig.values(n - 1) < -1e-7) {
    throw NotCompletelyPositiveError("choi_to_kraus: eigenvalue " +
                                     std::to_string(eig.values(n - 1)) + " < -1e-7");
  }
  if (!j.is_tp()) throw InvariantError("choi_to_kraus: Choi operator is not trace preserving");
  const double lmax = eig.values(0);
  std::vector<ComplexMatrix> ops;
  for (Index a = 0; a < n; ++a) {
    const double l = eig.values(a);
    if (l <= kKrausRankCutoff * lmax) break;
    ops.push_back(std::sqrt(dims.d_in * l) *
                  unvec(eig.vectors.col(a), dims.d_out, dims.d_in));
  }
  // Discarded eigenvalues leave sum K^dag K short of I by O(cutoff); restore
  // exact trace preservation with a symmetric correction.
  ComplexMatrix s = ComplexMatrix::Zero(dims.d_in, dims.d_in);
  for (const auto& k : ops) s += k.adjoint() * k;
  const ComplexMatrix s_inv_sqrt =
      spectral_map(hermitian_part(s), [](double l) { return 1.0 / std::sqrt(l); });
  for (auto& k : ops) k = k * s_inv_sqrt;
  return KrausChannel(DimPair{dims.d_out, dims.d_in}, std::move(ops));
}

DensityOperator apply_channel(const KrausChannel& c, const DensityOperator& rho) {
  if (rho.dim() != c.dims().d_in) {
    throw DimensionError("apply_channel: state dim " + std::to_string(rho.dim()) +
                         " != d_in " + std::to_string(c.dims().d_in));
  }
  ComplexMatrix out = ComplexMatrix::Zero(c.dims().d_out, c.dims().d_out);
  for (const ComplexMatrix& k : c.kraus_ops()) out += k * rho.matrix() * k.adjoint();
  return DensityOperator(hermitian_part(out));
}

bool validate_rank_bounds(const DimPair& dims, int k) {
  if (dims.d_out < 1 || dims.d_in < 1) return false;
  const int lower = (dims.d_in + dims.d_out - 1) / dims.d_out;
  return k >= lower && k <= dims.d_in * dims.d_out;
}

KrausChannel random_channel(const DimPair& dims, int k, RngStream& rng) {
  if (!validate_rank_bounds(dims, k)) {
    throw std::invalid_argument("random_channel: Kraus rank " + std::to_string(k) +
                                " outside [ceil(d_in/d_out), d_in d_out]");
  }
  const ComplexMatrix v = sample_haar_isometry(dims.d_out * k, dims.d_in, rng);
  // Row index of V is (out, env) with env least significant.
  std::vector<ComplexMatrix> ops(k, ComplexMatrix(dims.d_out, dims.d_in));
  for (int o = 0; o < dims.d_out; ++o) {
    for (int a = 0; a < k; ++a) ops[a].row(o) = v.row(o * k + a);
  }
  return KrausChannel(DimPair{dims.d_out, dims.d_in}, std::move(ops));
}

DensityOperator choi_input_marginal(const ChoiOperator& j) {
  return DensityOperator(hermitian_part(trace_out_output(j.matrix(), j.dims())));
}

}  // namespace dtomo
