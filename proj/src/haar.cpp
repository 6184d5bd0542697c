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

#include "dtomo/haar.hpp"

#include <cmath>
#include <stdexcept>

namespace dtomo {
namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream_id) {
  return std::seed_seq{static_cast<std::uint32_t>(seed),
                       static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(stream_id),
                       static_cast<std::uint32_t>(stream_id >> 32),
                       0x9e3779b9u};
}

// splitmix64 finaliser
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void require_dim(int d, const char* who) {
  if (d < 1) throw DimensionError(std::string(who) + ": dimension must be >= 1");
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id) {
  auto seq = make_seed_seq(seed, stream_id);
  engine_.seed(seq);
}

RngStream RngStream::substream(std::uint64_t tag) const {
  return RngStream(seed_, mix(stream_id_ ^ mix(tag + 0x632be59bd9b4e019ULL)));
}

double RngStream::uniform() {
  return std::generate_canonical<double, 53>(engine_);
}

double RngStream::normal() { return normal_(engine_); }

ComplexVector sample_complex_gaussian(int d, RngStream& rng) {
  require_dim(d, "sample_complex_gaussian");
  const double s = std::sqrt(0.5);
  ComplexVector g(d);
  for (int i = 0; i < d; ++i) {
    const double re = rng.normal();
    const double im = rng.normal();
    g(i) = Complex(s * re, s * im);
  }
  return g;
}

PureState sample_haar_state(int d, RngStream& rng) {
  ComplexVector g = sample_complex_gaussian(d, rng);
  double n = g.norm();
  while (n == 0.0) {
    g = sample_complex_gaussian(d, rng);
    n = g.norm();
  }
  return PureState(g / n);
}

ComplexMatrix sample_haar_unitary(int d, RngStream& rng) {
  require_dim(d, "sample_haar_unitary");
  Eigen::MatrixXcd ginibre(d, d);
  for (int j = 0; j < d; ++j) ginibre.col(j) = sample_complex_gaussian(d, rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(ginibre);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  for (int j = 0; j < d; ++j) {
    const Complex rjj = r(j, j);
    const double a = std::abs(rjj);
    q.col(j) *= (a > 0.0 ? rjj / a : Complex(1.0));
  }
  return q;
}

ComplexMatrix sample_haar_isometry(int rows, int cols, RngStream& rng) {
  if (cols > rows) throw DimensionError("sample_haar_isometry: cols > rows");
  return sample_haar_unitary(rows, rng).leftCols(cols);
}

double overlap_tail(double epsilon, int d) {
  require_dim(d, "overlap_tail");
  if (epsilon < 0.0 || epsilon > 1.0) {
    throw std::invalid_argument("overlap_tail: epsilon outside [0, 1]");
  }
  if (d == 1) return epsilon <= 1.0 ? 1.0 : 0.0;
  return std::pow(1.0 - epsilon, d - 1);
}

double overlap_tail_relaxed(double epsilon, int d) {
  require_dim(d, "overlap_tail_relaxed");
  return std::exp(-(d - 1) * epsilon);
}

double sample_gamma(double shape, RngStream& rng) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw std::invalid_argument("sample_gamma: shape must be positive");
  }
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, rng);
    double u = rng.uniform();
    while (u == 0.0) u = rng.uniform();
    return g * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v;  // squeeze
    if (u > 0.0 && std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v;
  }
}

BetaDraw sample_beta_pair(double alpha, double beta, RngStream& rng) {
  if (!(alpha > 0.0) || !(beta > 0.0)) {
    throw std::invalid_argument("sample_beta: parameters must be positive");
  }
  const double ga = sample_gamma(alpha, rng);
  const double gb = sample_gamma(beta, rng);
  const double s = ga + gb;
  if (s == 0.0) return {0.5, 0.5};
  return {ga / s, gb / s};
}

double sample_beta(double alpha, double beta, RngStream& rng) {
  return sample_beta_pair(alpha, beta, rng).x;
}

TailBoundReport reduced_opnorm_bound(int n, int s, double delta) {
  if (n < 1 || s < 1) throw DimensionError("reduced_opnorm_bound: n, s must be >= 1");
  if (n > s) throw std::invalid_argument("reduced_opnorm_bound: requires n <= s");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("reduced_opnorm_bound: delta must lie in (0, 1)");
  }
  const double root =
      1.0 / std::sqrt(n) + (1.0 + std::sqrt(std::log(1.0 / delta) / n)) / std::sqrt(s);
  return {n, s, delta, root * root};
}

double choi_marginal_bound(const DimPair& dims, int k, double delta_haar) {
  dims.validate();
  if (k < 1) throw std::invalid_argument("choi_marginal_bound: k must be >= 1");
  if (dims.d_in > k * dims.d_out) {
    throw std::invalid_argument("choi_marginal_bound: requires d_in <= k d_out");
  }
  if (!(delta_haar > 0.0 && delta_haar <= 1.0)) {
    throw std::invalid_argument("choi_marginal_bound: delta must lie in (0, 1]");
  }
  const double c = 2.0 + std::sqrt(std::log(1.0 / delta_haar) / (k * dims.d_out));
  return c * c / dims.d_in;
}

PureState haar_orthogonal_error(const PureState& psi, RngStream& rng) {
  const int d = static_cast<int>(psi.dim());
  if (d < 2) throw DimensionError("haar_orthogonal_error: no orthogonal complement in dim 1");
  const ComplexVector& p = psi.amplitudes();
  for (;;) {
    ComplexVector h = sample_haar_state(d, rng).amplitudes();
    h -= p * p.dot(h);
    h -= p * p.dot(h);  // second pass removes rounding residue
    const double n = h.norm();
    if (n > 1e-8) return PureState(h / n);
  }
}

}  // namespace dtomo
