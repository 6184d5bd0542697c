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

#include "dtomo/diamond.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace dtomo {
namespace {

using SdpMatrix = SdpProblem<Complex>::Matrix;

// Coefficient of one block entry inside an entry of a linear matrix map.
struct Term {
  int block;
  int row;
  int col;
  double coef;
};

// Adds the constraints L(X)(r, c) = rhs(r, c) for a Hermitian-valued linear
// map L, one real constraint per real degree of freedom of a dim x dim
// Hermitian matrix. `terms(r, c)` lists the contributions to L(X)(r, c).
template <typename F>
void add_hermitian_equality(SdpProblem<Complex>& p, int dim, F&& terms, const ComplexMatrix& rhs) {
  for (int r = 0; r < dim; ++r) {
    for (int c = r; c < dim; ++c) {
      const std::vector<Term> ts = terms(r, c);
      SdpConstraint<Complex> re;
      re.rhs = rhs(r, c).real();
      for (const Term& t : ts) {
        const double v = t.row == t.col ? t.coef : 0.5 * t.coef;
        re.entries.push_back({t.block, t.row, t.col, Complex(v, 0.0)});
      }
      p.constraints.push_back(std::move(re));
      if (r == c) continue;
      SdpConstraint<Complex> im;
      im.rhs = rhs(r, c).imag();
      for (const Term& t : ts) {
        if (t.row == t.col) continue;
        im.entries.push_back({t.block, t.row, t.col, Complex(0.0, 0.5 * t.coef)});
      }
      p.constraints.push_back(std::move(im));
    }
  }
}

void check_input(const ComplexMatrix& j, int d_in) {
  if (d_in < 1 || j.rows() != j.cols() || j.rows() % d_in != 0 || j.rows() == 0) {
    throw DimensionError("diamond: Choi side " + std::to_string(j.rows()) +
                         " is not a multiple of d_in " + std::to_string(d_in));
  }
  if (!is_hermitian(j)) throw InvariantError("diamond: Choi operator is not Hermitian");
}

SdpProblem<Complex> primal_problem(const ComplexMatrix& j, int d_in) {
  const int n = static_cast<int>(j.rows());
  const int d = d_in;
  SdpProblem<Complex> p;
  const int bp = p.add_block(n);
  const int bq = p.add_block(n);
  const int bs = p.add_block(d);
  const SdpMatrix c = hermitian_part(j) * (0.5 * d);
  p.objective[bp] = -c;
  p.objective[bq] = c;
  add_hermitian_equality(
      p, n,
      [&](int r, int cc) {
        std::vector<Term> ts{{bp, r, cc, 1.0}, {bq, r, cc, 1.0}};
        if (r / d == cc / d) ts.push_back({bs, r % d, cc % d, -2.0});
        return ts;
      },
      ComplexMatrix::Zero(n, n));
  SdpConstraint<Complex> tr;
  tr.rhs = 1.0;
  for (int i = 0; i < d; ++i) tr.entries.push_back({bs, i, i, Complex(1.0, 0.0)});
  p.constraints.push_back(std::move(tr));
  return p;
}

// Terms of tr_out(X_a + X_b)(r, c) on an out (x) in block of side n.
std::vector<Term> marginal_terms(int ba, int bb, int n, int d, int r, int c) {
  std::vector<Term> ts;
  for (int o = 0; o < n / d; ++o) {
    ts.push_back({ba, o * d + r, o * d + c, 1.0});
    if (bb >= 0) ts.push_back({bb, o * d + r, o * d + c, 1.0});
  }
  return ts;
}

DiamondValue from_solution(ComplexSdpSolution sol, double value, const std::string& what) {
  if (sol.status != SdpStatus::kOptimal) {
    const double lo = std::min(sol.primal_value, sol.dual_value);
    const double hi = std::max(sol.primal_value, sol.dual_value);
    throw SdpSolveError(what + ": solver stopped with status " + to_string(sol.status) +
                            " after " + std::to_string(sol.iterations) + " iterations",
                        lo, hi);
  }
  DiamondValue out;
  out.value = std::max(0.0, value);
  out.method = DiamondMethod::kSdp;
  out.gap = sol.gap;
  out.certificate = std::move(sol);
  return out;
}

// (Phi (x) id)(|psi><psi|) for psi on in (x) ref.
ComplexMatrix output_state(const ComplexMatrix& j, int d_in, const ComplexVector& psi) {
  const int d = d_in;
  const int dout = static_cast<int>(j.rows()) / d;
  ComplexMatrix out = ComplexMatrix::Zero(dout * d, dout * d);
  for (int o = 0; o < dout; ++o) {
    for (int op = 0; op < dout; ++op) {
      for (int i = 0; i < d; ++i) {
        for (int ip = 0; ip < d; ++ip) {
          const Complex jv = j(o * d + i, op * d + ip) * static_cast<double>(d);
          if (jv == Complex(0.0, 0.0)) continue;
          for (int r = 0; r < d; ++r) {
            const Complex a = jv * psi(i * d + r);
            for (int rp = 0; rp < d; ++rp) {
              out(o * d + r, op * d + rp) += a * std::conj(psi(ip * d + rp));
            }
          }
        }
      }
    }
  }
  return out;
}

// (Phi^dag (x) id)(h) for h on out (x) ref.
ComplexMatrix adjoint_image(const ComplexMatrix& j, int d_in, const ComplexMatrix& h) {
  const int d = d_in;
  const int dout = static_cast<int>(j.rows()) / d;
  ComplexMatrix t = ComplexMatrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int ip = 0; ip < d; ++ip) {
      for (int o = 0; o < dout; ++o) {
        for (int op = 0; op < dout; ++op) {
          const Complex jv = j(op * d + ip, o * d + i) * static_cast<double>(d);
          if (jv == Complex(0.0, 0.0)) continue;
          for (int r = 0; r < d; ++r) {
            for (int rp = 0; rp < d; ++rp) {
              t(i * d + r, ip * d + rp) += jv * h(o * d + r, op * d + rp);
            }
          }
        }
      }
    }
  }
  return t;
}

}  // namespace

std::string to_string(DiamondMethod m) {
  switch (m) {
    case DiamondMethod::kSdp:
      return "sdp";
    case DiamondMethod::kPositiveClosedForm:
      return "positive-closed-form";
    case DiamondMethod::kTraceNorm:
      return "trace-norm";
    case DiamondMethod::kBruteforceLower:
      return "bruteforce-lower";
  }
  return "unknown";
}

DiamondValue diamond_norm(const ComplexMatrix& j, int d_in, const SdpOptions& opt) {
  check_input(j, d_in);
  if (d_in == 1) {
    DiamondValue out;
    out.value = schatten_norm(hermitian_part(j), SchattenP::kOne);
    out.method = DiamondMethod::kTraceNorm;
    return out;
  }
  return diamond_norm_sdp(j, d_in, opt);
}

DiamondValue diamond_norm_sdp(const ComplexMatrix& j, int d_in, const SdpOptions& opt) {
  check_input(j, d_in);
  ComplexSdpSolution sol = solve_sdp(primal_problem(j, d_in), opt);
  const double v = sol.primal_value;
  return from_solution(std::move(sol), v, "diamond_norm");
}

DiamondValue diamond_norm_dual(const ComplexMatrix& j, int d_in, const SdpOptions& opt) {
  check_input(j, d_in);
  const int n = static_cast<int>(j.rows());
  const int d = d_in;
  SdpProblem<Complex> p;
  const int bplus = p.add_block(n);
  const int bminus = p.add_block(n);
  const int bs = p.add_block(d);
  const int bt = p.add_block(1);
  p.objective[bt](0, 0) = -1.0;
  add_hermitian_equality(
      p, n, [&](int r, int c) { return std::vector<Term>{{bplus, r, c, 1.0}, {bminus, r, c, -1.0}}; },
      ComplexMatrix(hermitian_part(j) * static_cast<double>(d)));
  add_hermitian_equality(
      p, d,
      [&](int r, int c) {
        std::vector<Term> ts = marginal_terms(bplus, bminus, n, d, r, c);
        ts.push_back({bs, r, c, 1.0});
        if (r == c) ts.push_back({bt, 0, 0, -1.0});
        return ts;
      },
      ComplexMatrix::Zero(d, d));
  ComplexSdpSolution sol = solve_sdp(p, opt);
  const double v = -sol.primal_value;
  return from_solution(std::move(sol), v, "diamond_norm_dual");
}

DiamondValue diamond_norm_real_embedding(const ComplexMatrix& j, int d_in, const SdpOptions& opt) {
  check_input(j, d_in);
  SdpOptions o = opt;
  o.max_total_dim = std::max(o.max_total_dim, 2 * (2 * static_cast<int>(j.rows()) + d_in));
  const SdpSolution<double> real = solve_sdp(real_embedding(primal_problem(j, d_in)), o);
  if (real.status != SdpStatus::kOptimal) {
    throw SdpSolveError("diamond_norm_real_embedding: solver stopped with status " +
                            to_string(real.status),
                        std::min(real.primal_value, real.dual_value),
                        std::max(real.primal_value, real.dual_value));
  }
  DiamondValue out;
  out.value = std::max(0.0, real.primal_value);
  out.gap = real.gap;
  return out;
}

DiamondValue diamond_norm_positive(const ComplexMatrix& j, int d_in) {
  check_input(j, d_in);
  const double lmin = lambda_min(hermitian_part(j));
  if (lmin < -1e-7) {
    throw InvariantError("diamond_norm_positive: Choi operator has eigenvalue " +
                         std::to_string(lmin) + "; use diamond_norm for indefinite input");
  }
  const int d_out = static_cast<int>(j.rows()) / d_in;
  const std::array<int, 2> dims{d_out, d_in};
  const std::array<int, 1> keep{1};
  DiamondValue out;
  out.value = d_in * lambda_max(hermitian_part(partial_trace(j, dims, keep)));
  out.value = std::max(0.0, out.value);
  out.method = DiamondMethod::kPositiveClosedForm;
  return out;
}

double diamond_lower_bound(const ComplexMatrix& j, int d_in, int budget, RngStream& rng,
                           int steps) {
  check_input(j, d_in);
  const ComplexMatrix jh = hermitian_part(j);
  double best = 0.0;
  for (int b = 0; b < budget; ++b) {
    ComplexVector psi = sample_haar_state(d_in * d_in, rng).amplitudes();
    for (int s = 0; s <= steps; ++s) {
      const ComplexMatrix out = hermitian_part(output_state(jh, d_in, psi));
      const EigenDecomposition eig = hermitian_eig(HermitianOperator(out));
      best = std::max(best, eig.values.cwiseAbs().sum());
      if (s == steps) break;
      const RealVector sign =
          eig.values.unaryExpr([](double l) { return l >= 0.0 ? 1.0 : -1.0; });
      const ComplexMatrix h = eig.vectors * sign.asDiagonal() * eig.vectors.adjoint();
      const ComplexMatrix t = hermitian_part(adjoint_image(jh, d_in, h));
      psi = hermitian_eig(HermitianOperator(t)).vectors.col(0);
    }
  }
  return best;
}

ProjectionResult cptp_project(const ComplexMatrix& j_est, const DimPair& dims,
                              const SdpOptions& opt) {
  dims.validate();
  const int n = dims.choi_dim();
  const int d = dims.d_in;
  if (j_est.rows() != n || j_est.cols() != n) {
    throw DimensionError("cptp_project: estimate side does not match d_out*d_in");
  }
  if (!is_hermitian(j_est)) throw InvariantError("cptp_project: estimate is not Hermitian");
  const ComplexMatrix jh = hermitian_part(j_est);
  const ComplexMatrix target = identity(d) / static_cast<double>(d);

  // Already a channel: the projection is the identity.
  if (lambda_min(jh) >= -1e-12 &&
      schatten_norm(trace_out_output(jh, DimPair{dims.d_out, d}) - target, SchattenP::kInf) <=
          1e-12) {
    ProjectionResult r{ChoiOperator(DimPair{dims.d_out, d}, jh), 0.0, std::nullopt};
    return r;
  }

  SdpProblem<Complex> p;
  const int bplus = p.add_block(n);
  const int bminus = p.add_block(n);
  const int bphi = p.add_block(n);
  const int bs = p.add_block(d);
  const int bt = p.add_block(1);
  p.objective[bt](0, 0) = -1.0;
  add_hermitian_equality(
      p, n,
      [&](int r, int c) {
        return std::vector<Term>{{bplus, r, c, 1.0}, {bminus, r, c, -1.0},
                                 {bphi, r, c, -static_cast<double>(d)}};
      },
      ComplexMatrix(-static_cast<double>(d) * jh));
  add_hermitian_equality(
      p, d,
      [&](int r, int c) {
        std::vector<Term> ts = marginal_terms(bplus, bminus, n, d, r, c);
        ts.push_back({bs, r, c, 1.0});
        if (r == c) ts.push_back({bt, 0, 0, -1.0});
        return ts;
      },
      ComplexMatrix::Zero(d, d));
  add_hermitian_equality(
      p, d, [&](int r, int c) { return marginal_terms(bphi, -1, n, d, r, c); }, target);

  ComplexSdpSolution sol = solve_sdp(p, opt);

  // Remove the solver's residual infeasibility: clip to PSD, then restore
  // tr_out = I/d_in exactly by a congruence on the input factor.
  ComplexMatrix phi = hermitian_part(ComplexMatrix(sol.x[bphi]));
  phi = spectral_map(phi, [](double l) { return std::max(l, 0.0); });
  const ComplexMatrix marginal = hermitian_part(trace_out_output(phi, DimPair{dims.d_out, d}));
  const ComplexMatrix fix = kron(identity(dims.d_out),
                                 spectral_map(marginal, [](double l) { return 1.0 / std::sqrt(l); }));
  phi = hermitian_part(ComplexMatrix(fix * phi * fix / static_cast<double>(d)));
  ChoiOperator choi(DimPair{dims.d_out, d}, phi);

  if (sol.status != SdpStatus::kOptimal) {
    double dist = std::numeric_limits<double>::quiet_NaN();
    try {
      dist = diamond_norm(ComplexMatrix(phi - jh), d, opt).value;
    } catch (const SdpSolveError&) {
    }
    throw ProjectionError("cptp_project: solver stopped with status " + to_string(sol.status),
                          choi, dist);
  }
  const double distance = std::max(0.0, -sol.primal_value);
  return ProjectionResult{std::move(choi), distance, std::move(sol)};
}

ComplexMatrix trace_out_env(const ComplexVector& a, const ComplexVector& b, const DimPair& dims) {
  const int n = dims.choi_dim();
  const int e = dims.d_env;
  if (a.size() != n * e || b.size() != n * e) {
    throw DimensionError("trace_out_env: vector length does not match d_out*d_in*d_env");
  }
  const ComplexMatrix am = Eigen::Map<const ComplexMatrix>(a.data(), n, e);
  const ComplexMatrix bm = Eigen::Map<const ComplexMatrix>(b.data(), n, e);
  return am * bm.adjoint();
}

CauchySchwarzCheck diamond_cs_check(const PureState& phi1, const PureState& phi2,
                                    const DimPair& dims, const SdpOptions& opt) {
  dims.validate();
  const ComplexVector& a = phi1.amplitudes();
  const ComplexVector& b = phi2.amplitudes();
  const ComplexMatrix j11 = trace_out_env(a, a, dims);
  const ComplexMatrix j22 = trace_out_env(b, b, dims);
  const ComplexMatrix j12 = trace_out_env(a, b, dims);
  const ComplexMatrix cross = hermitian_part(ComplexMatrix(j12 + j12.adjoint()));
  CauchySchwarzCheck out;
  out.lhs = diamond_norm(cross, dims.d_in, opt).value;
  out.rhs = 2.0 * std::sqrt(diamond_norm(hermitian_part(j11), dims.d_in, opt).value *
                            diamond_norm(hermitian_part(j22), dims.d_in, opt).value);
  return out;
}

}  // namespace dtomo
