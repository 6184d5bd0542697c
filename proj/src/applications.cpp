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

#include "dtomo/applications.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dtomo {
namespace {

void check_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
}

TomographyConfig make_config(const DimPair& dims, int k, std::int64_t n, double delta,
                             RngStream& rng) {
  TomographyConfig cfg;
  cfg.dims = DimPair{dims.d_out, dims.d_in};
  cfg.k = k;
  cfg.n = n;
  cfg.delta = delta;
  cfg.seed = rng.engine()();
  cfg.stream_id = rng.stream_id();
  return cfg;
}

}  // namespace

BinaryPovm::BinaryPovm(const ComplexMatrix& effect) : e_(effect) {
  const RealVector ev = hermitian_eigenvalues(e_.matrix());
  if (ev(ev.size() - 1) < -kPovmTol || ev(0) > 1.0 + kPovmTol) {
    throw InvariantError("BinaryPovm: effect spectrum [" + std::to_string(ev(ev.size() - 1)) +
                         ", " + std::to_string(ev(0)) + "] not inside [0, 1]");
  }
}

MultiPovm::MultiPovm(const std::vector<ComplexMatrix>& effects) {
  if (effects.empty()) throw InvariantError("MultiPovm: no effects");
  dim_ = static_cast<int>(effects.front().rows());
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (const ComplexMatrix& e : effects) {
    if (e.rows() != dim_ || e.cols() != dim_) throw DimensionError("MultiPovm: effect shapes differ");
    effects_.emplace_back(e);
    if (lambda_min(effects_.back().matrix()) < -kPovmTol) {
      throw InvariantError("MultiPovm: effect is not positive semidefinite");
    }
    sum += effects_.back().matrix();
  }
  const double dev = schatten_norm(sum - identity(dim_), SchattenP::kInf);
  if (dev > kPovmTol) {
    throw InvariantError("MultiPovm: effects sum to I only within " + std::to_string(dev));
  }
}

MultiPovm random_povm(int dim, int outcomes, RngStream& rng) {
  if (dim < 1 || outcomes < 1) throw std::invalid_argument("random_povm: dim and outcomes >= 1");
  std::vector<ComplexMatrix> w;
  ComplexMatrix s = ComplexMatrix::Zero(dim, dim);
  for (int j = 0; j < outcomes; ++j) {
    ComplexMatrix g(dim, dim);
    for (int c = 0; c < dim; ++c) g.col(c) = sample_complex_gaussian(dim, rng);
    w.push_back(g * g.adjoint());
    s += w.back();
  }
  const ComplexMatrix s_inv_sqrt =
      spectral_map(hermitian_part(s), [](double l) { return 1.0 / std::sqrt(l); });
  std::vector<ComplexMatrix> effects;
  for (const ComplexMatrix& wj : w) {
    effects.push_back(hermitian_part(ComplexMatrix(s_inv_sqrt * wj * s_inv_sqrt)));
  }
  return MultiPovm(effects);
}

StateLearning learn_state(const DensityOperator& rho, int r, std::int64_t n, double delta,
                          RngStream& rng) {
  check_delta(delta);
  const int d = static_cast<int>(rho.dim());
  const int rank = numerical_rank(rho.matrix());
  if (rank > r) {
    throw InvariantError("learn_state: state rank " + std::to_string(rank) + " exceeds r = " +
                         std::to_string(r));
  }
  const EigenDecomposition eig = hermitian_eig(rho.hermitian());
  std::vector<ComplexMatrix> ops;
  double kept = 0.0;
  for (int a = 0; a < rank; ++a) kept += eig.values(a);
  for (int a = 0; a < rank; ++a) {
    ops.push_back(ComplexMatrix(eig.vectors.col(a) * std::sqrt(eig.values(a) / kept)));
  }
  const DimPair dims{d, 1};
  const KrausChannel prep(dims, std::move(ops));
  StateLearning out{DensityOperator(identity(d) / static_cast<double>(d)), 0.0, {}};
  out.record = run_algorithm1(prep, make_config(dims, r, n, delta, rng));
  out.estimate = DensityOperator(out.record.choi_final.matrix());
  out.trace_distance =
      0.5 * schatten_norm(ComplexMatrix(out.estimate.matrix() - rho.matrix()), SchattenP::kOne);
  return out;
}

IsometryLearning learn_isometry(const Isometry& v, std::int64_t n, double delta, RngStream& rng) {
  check_delta(delta);
  const DimPair dims{v.dims().d_out, v.dims().d_in};
  const KrausChannel channel(dims, {v.matrix()});
  TrialRecord rec = run_algorithm1(channel, make_config(dims, 1, n, delta, rng));
  KrausChannel est = choi_to_kraus(rec.choi_final);
  const double err = 0.5 * rec.diamond_error_final;
  return IsometryLearning{std::move(est), err, std::move(rec)};
}

KrausChannel povm_to_channel(const BinaryPovm& m) {
  const int d = m.dim();
  const ComplexMatrix e = m.effect();
  const std::array<ComplexMatrix, 2> roots{psd_sqrt(e), psd_sqrt(ComplexMatrix(identity(d) - e))};
  std::vector<ComplexMatrix> ops;
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < d; ++i) {
      ComplexMatrix k = ComplexMatrix::Zero(2, d);
      k.row(b) = roots[b].row(i);
      ops.push_back(std::move(k));
    }
  }
  return KrausChannel(DimPair{2, d}, std::move(ops));
}

ComplexMatrix extract_effect(const ChoiOperator& j) {
  if (j.dims().d_out != 2) throw DimensionError("extract_effect: channel must have d_out = 2");
  const int d = j.dims().d_in;
  const ComplexMatrix block = j.matrix().topLeftCorner(d, d).transpose() * static_cast<double>(d);
  return spectral_map(hermitian_part(block), [](double l) { return std::clamp(l, 0.0, 1.0); });
}

PovmIdentity povm_diamond_identity(const BinaryPovm& e, const BinaryPovm& f,
                                   const SdpOptions& opt) {
  if (e.dim() != f.dim()) throw DimensionError("povm_diamond_identity: dimensions differ");
  const ComplexMatrix je = kraus_to_choi(povm_to_channel(e)).matrix();
  const ComplexMatrix jf = kraus_to_choi(povm_to_channel(f)).matrix();
  PovmIdentity out;
  out.lhs = diamond_norm_sdp(ComplexMatrix(je - jf), e.dim(), opt).value;
  out.rhs = 2.0 * schatten_norm(ComplexMatrix(e.effect() - f.effect()), SchattenP::kInf);
  return out;
}

BinaryPovmLearning learn_binary_povm(const BinaryPovm& e, std::int64_t n, double delta,
                                     RngStream& rng) {
  check_delta(delta);
  const int d = e.dim();
  const double floor = 4.0 * std::exp(-4.0 * d * d);
  if (!(delta > floor)) {
    throw std::domain_error("learn_binary_povm: delta must exceed 4 exp(-4 d^2) = " +
                            std::to_string(floor));
  }
  const DimPair dims{2, d};
  TrialRecord rec = run_algorithm1(povm_to_channel(e), make_config(dims, 2 * d, n, delta, rng));
  BinaryPovm est(extract_effect(rec.choi_final));
  const double err = schatten_norm(ComplexMatrix(est.effect() - e.effect()), SchattenP::kInf);
  return BinaryPovmLearning{std::move(est), err, std::move(rec)};
}

MultiPovmLearning learn_multi_povm(const MultiPovm& m, std::int64_t n_per_element, double delta,
                                   RngStream& rng) {
  check_delta(delta);
  const int l = m.outcomes();
  const int d = m.dim();
  std::vector<ComplexMatrix> est;
  std::vector<double> errors;
  std::vector<TrialRecord> records;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < l; ++j) {
    RngStream sub(rng.engine()(), static_cast<std::uint64_t>(j));
    BinaryPovmLearning r =
        learn_binary_povm(BinaryPovm(m.effect(j)), n_per_element, delta / l, sub);
    est.push_back(r.estimate.effect());
    errors.push_back(r.opnorm_error);
    records.push_back(std::move(r.record));
    sum += est.back();
  }
  const ComplexMatrix residual = identity(d) - sum;
  std::vector<ComplexMatrix> shifted;
  bool positive = true;
  for (const ComplexMatrix& e : est) {
    shifted.push_back(hermitian_part(ComplexMatrix(e + residual / static_cast<double>(l))));
    positive = positive && lambda_min(shifted.back()) >= -1e-12;
  }
  MultiPovmLearning out{m, 0.0, errors, !positive, std::move(records)};
  if (!positive) {
    const ComplexMatrix s_inv_sqrt =
        spectral_map(hermitian_part(sum), [](double x) { return 1.0 / std::sqrt(x); });
    for (int j = 0; j < l; ++j) {
      shifted[j] = hermitian_part(ComplexMatrix(s_inv_sqrt * est[j] * s_inv_sqrt));
    }
  }
  out.estimate = MultiPovm(shifted);
  for (int j = 0; j < l; ++j) {
    out.max_opnorm_error =
        std::max(out.max_opnorm_error,
                 schatten_norm(ComplexMatrix(out.estimate.effect(j) - m.effect(j)), SchattenP::kInf));
  }
  return out;
}

}  // namespace dtomo
