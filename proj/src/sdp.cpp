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

#include "dtomo/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dtomo {
namespace {

inline double real_part(double v) { return v; }
inline double real_part(const std::complex<double>& v) { return v.real(); }
inline double imag_part(double) { return 0.0; }
inline double imag_part(const std::complex<double>& v) { return v.imag(); }
inline double conj_of(double v) { return v; }
inline std::complex<double> conj_of(const std::complex<double>& v) { return std::conj(v); }

template <typename Matrix>
Matrix herm(const Matrix& m) {
  return (m + m.adjoint()) * 0.5;
}

template <typename Matrix>
double trace_inner(const Matrix& a, const Matrix& b) {
  // Re tr(a b)
  return real_part(a.cwiseProduct(b.transpose()).sum());
}

template <typename Scalar>
class HkmSolver {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Blocks = std::vector<Matrix>;

  HkmSolver(const SdpProblem<Scalar>& p, const SdpOptions& o)
      : p_(p), opt_(o), m_(static_cast<int>(p.constraints.size())),
        nb_(static_cast<int>(p.block_dims.size())) {
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) b_(i) = p_.constraints[i].rhs;
    n_total_ = p_.total_dim();
    touched_.assign(m_, std::vector<int>{});
    for (int i = 0; i < m_; ++i) {
      std::vector<bool> seen(nb_, false);
      for (const auto& e : p_.constraints[i].entries) {
        if (!seen[e.block]) {
          seen[e.block] = true;
          touched_[i].push_back(e.block);
        }
      }
    }
  }

  SdpSolution<Scalar> run();

 private:
  // Re tr(A_i K) for every constraint i; K need not be Hermitian.
  Eigen::VectorXd apply_a(const Blocks& k) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(m_);
    for (int i = 0; i < m_; ++i) out(i) = constraint_inner(i, k);
    return out;
  }

  double constraint_inner(int i, const Blocks& k) const {
    double acc = 0.0;
    for (const auto& e : p_.constraints[i].entries) {
      const Matrix& kb = k[e.block];
      if (e.row == e.col) {
        acc += real_part(e.value * kb(e.row, e.row));
      } else {
        acc += real_part(e.value * kb(e.col, e.row) + conj_of(e.value) * kb(e.row, e.col));
      }
    }
    return acc;
  }

  Blocks apply_at(const Eigen::VectorXd& y) const {
    Blocks out(nb_);
    for (int b = 0; b < nb_; ++b) out[b] = Matrix::Zero(p_.block_dims[b], p_.block_dims[b]);
    for (int i = 0; i < m_; ++i) {
      if (y(i) == 0.0) continue;
      for (const auto& e : p_.constraints[i].entries) {
        out[e.block](e.row, e.col) += y(i) * e.value;
        if (e.row != e.col) out[e.block](e.col, e.row) += y(i) * conj_of(e.value);
      }
    }
    return out;
  }

  double inner(const Blocks& a, const Blocks& b) const {
    double acc = 0.0;
    for (int k = 0; k < nb_; ++k) acc += trace_inner(a[k], b[k]);
    return acc;
  }

  static double frob(const Blocks& a) {
    double acc = 0.0;
    for (const auto& m : a) acc += m.squaredNorm();
    return std::sqrt(acc);
  }

  // Largest alpha with X + alpha dX >= 0 (infinity if unbounded).
  static double max_step(const Matrix& x, const Matrix& dx) {
    Eigen::LLT<Matrix> llt(x);
    if (llt.info() != Eigen::Success) return 0.0;
    const Matrix w = llt.matrixL().solve(dx);
    Matrix t = llt.matrixL().solve(Matrix(w.adjoint()));
    t = herm(t);
    Eigen::SelfAdjointEigenSolver<Matrix> es(t, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
  }

  double max_step(const Blocks& x, const Blocks& dx) const {
    double a = std::numeric_limits<double>::infinity();
    for (int b = 0; b < nb_; ++b) a = std::min(a, max_step(x[b], dx[b]));
    return a;
  }

  void build_schur(const Blocks& x, const Blocks& zinv, Eigen::MatrixXd& schur) const {
    schur.setZero(m_, m_);
    Blocks k(nb_);
    for (int b = 0; b < nb_; ++b) k[b] = Matrix::Zero(p_.block_dims[b], p_.block_dims[b]);
    std::vector<bool> active(nb_, false);
    for (int j = 0; j < m_; ++j) {
      for (int b : touched_[j]) {
        k[b].setZero();
        active[b] = true;
      }
      // K = X A_j Z^{-1}, assembled from rank-one pieces.
      for (const auto& f : p_.constraints[j].entries) {
        const Matrix& xb = x[f.block];
        const Matrix& zb = zinv[f.block];
        k[f.block].noalias() += (xb.col(f.row) * f.value) * zb.row(f.col);
        if (f.row != f.col) {
          k[f.block].noalias() += (xb.col(f.col) * conj_of(f.value)) * zb.row(f.row);
        }
      }
      for (int i = j; i < m_; ++i) {
        double acc = 0.0;
        for (const auto& e : p_.constraints[i].entries) {
          if (!active[e.block]) continue;
          const Matrix& kb = k[e.block];
          if (e.row == e.col) {
            acc += real_part(e.value * kb(e.row, e.row));
          } else {
            acc += real_part(e.value * kb(e.col, e.row) + conj_of(e.value) * kb(e.row, e.col));
          }
        }
        schur(i, j) = acc;
        schur(j, i) = acc;
      }
      for (int b : touched_[j]) active[b] = false;
    }
  }

  const SdpProblem<Scalar>& p_;
  SdpOptions opt_;
  int m_;
  int nb_;
  int n_total_ = 0;
  Eigen::VectorXd b_;
  std::vector<std::vector<int>> touched_;
};

template <typename Scalar>
SdpSolution<Scalar> HkmSolver<Scalar>::run() {
  SdpSolution<Scalar> sol;
  const double b_norm = b_.norm();
  const double c_norm = frob(p_.objective);

  // Infeasible starting point scaled to the data.
  Blocks x(nb_);
  Blocks z(nb_);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m_);
  {
    std::vector<double> a_norm(m_, 0.0);
    for (int i = 0; i < m_; ++i) {
      double s = 0.0;
      for (const auto& e : p_.constraints[i].entries) {
        s += std::norm(std::complex<double>(real_part(e.value), imag_part(e.value))) *
             (e.row == e.col ? 1.0 : 2.0);
      }
      a_norm[i] = std::sqrt(s);
    }
    for (int b = 0; b < nb_; ++b) {
      const double n = p_.block_dims[b];
      double xi = std::max(10.0, std::sqrt(n));
      double eta = std::max(10.0, std::sqrt(n));
      double a_max = p_.objective[b].norm();
      for (int i = 0; i < m_; ++i) {
        xi = std::max(xi, n * (1.0 + std::abs(b_(i))) / (1.0 + a_norm[i]));
        a_max = std::max(a_max, a_norm[i]);
      }
      eta = std::max(eta, (1.0 + a_max) / std::sqrt(n));
      x[b] = xi * Matrix::Identity(p_.block_dims[b], p_.block_dims[b]);
      z[b] = eta * Matrix::Identity(p_.block_dims[b], p_.block_dims[b]);
    }
  }

  Eigen::MatrixXd schur;
  auto record = [&](int iter, SdpStatus status, const Eigen::VectorXd& rp, const Blocks& rd) {
    sol.primal_value = inner(p_.objective, x);
    sol.dual_value = b_.dot(y);
    sol.gap = std::abs(sol.primal_value - sol.dual_value);
    sol.complementarity = inner(x, z);
    sol.relative_gap = std::max(sol.gap, std::abs(sol.complementarity)) /
                       (1.0 + std::max(std::abs(sol.primal_value), std::abs(sol.dual_value)));
    sol.primal_residual = rp.norm() / (1.0 + b_norm);
    sol.dual_residual = frob(rd) / (1.0 + c_norm);
    sol.x = x;
    sol.z = z;
    sol.y = y;
    sol.iterations = iter;
    sol.status = status;
  };

  // Near the optimum the Schur system loses accuracy and later iterates can
  // drift away from feasibility, so the best iterate seen is kept.
  auto merit = [&](const SdpSolution<Scalar>& s) {
    return std::max({s.relative_gap / opt_.gap_tol, s.primal_residual / opt_.feas_tol,
                     s.dual_residual / opt_.feas_tol});
  };
  SdpSolution<Scalar> best;
  double best_merit = std::numeric_limits<double>::infinity();
  int best_iter = 0;
  int stalls = 0;
  for (int iter = 0;; ++iter) {
    const Eigen::VectorXd rp = b_ - apply_a(x);
    Blocks rd = apply_at(y);
    for (int b = 0; b < nb_; ++b) rd[b] -= p_.objective[b] + z[b];

    record(iter, SdpStatus::kMaxIter, rp, rd);
    const double m = merit(sol);
    if (m <= 1.0) {
      sol.status = SdpStatus::kOptimal;
      return sol;
    }
    if (m < best_merit) {
      best_merit = m;
      best = sol;
      best_iter = iter;
    }
    if (frob(x) > 1e10 || y.lpNorm<Eigen::Infinity>() > 1e10) {
      sol.status = SdpStatus::kInfeasible;
      return sol;
    }
    if (iter >= opt_.max_iter || stalls >= 5 || iter - best_iter > 15) {
      best.iterations = iter;
      return best;
    }

    const double mu = inner(x, z) / n_total_;
    Blocks zinv(nb_);
    for (int b = 0; b < nb_; ++b) {
      Eigen::LLT<Matrix> llt(z[b]);
      if (llt.info() != Eigen::Success) { best.iterations = iter; return best; }
      zinv[b] = llt.solve(Matrix::Identity(p_.block_dims[b], p_.block_dims[b]));
      zinv[b] = herm(zinv[b]);
    }

    build_schur(x, zinv, schur);
    Eigen::LLT<Eigen::MatrixXd> chol(schur);
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    bool use_ldlt = chol.info() != Eigen::Success;
    if (use_ldlt) ldlt.compute(schur);
    auto solve_schur = [&](const Eigen::VectorXd& rhs) -> Eigen::VectorXd {
      return use_ldlt ? Eigen::VectorXd(ldlt.solve(rhs)) : Eigen::VectorXd(chol.solve(rhs));
    };

    // X Rd Z^{-1}, shared by predictor and corrector.
    Blocks x_rd_zinv(nb_);
    for (int b = 0; b < nb_; ++b) x_rd_zinv[b] = x[b] * rd[b] * zinv[b];

    // rc_zinv is Rc Z^{-1} where Rc is the complementarity target.
    auto direction = [&](const Blocks& rc_zinv, Blocks& dx, Eigen::VectorXd& dy, Blocks& dz) {
      Blocks g(nb_);
      for (int b = 0; b < nb_; ++b) g[b] = rc_zinv[b] - x_rd_zinv[b];
      dy = solve_schur(apply_a(g) - rp);
      dz = apply_at(dy);
      for (int b = 0; b < nb_; ++b) {
        dz[b] += rd[b];
        dz[b] = herm(dz[b]);
        dx[b] = herm(Matrix(rc_zinv[b] - x[b] * dz[b] * zinv[b]));
      }
    };

    // Predictor (affine scaling).
    Blocks rc_zinv(nb_);
    for (int b = 0; b < nb_; ++b) rc_zinv[b] = -x[b];
    Blocks dx_a(nb_);
    Blocks dz_a(nb_);
    Eigen::VectorXd dy_a;
    direction(rc_zinv, dx_a, dy_a, dz_a);
    const double ap_a = std::min(1.0, max_step(x, dx_a));
    const double ad_a = std::min(1.0, max_step(z, dz_a));
    double mu_aff = 0.0;
    for (int b = 0; b < nb_; ++b) {
      mu_aff += trace_inner(Matrix(x[b] + ap_a * dx_a[b]), Matrix(z[b] + ad_a * dz_a[b]));
    }
    mu_aff /= n_total_;
    const double ratio = std::max(0.0, mu_aff / mu);
    const double expo = std::max(1.0, 3.0 * std::min(ap_a, ad_a) * std::min(ap_a, ad_a));
    const double sigma = std::min(1.0, std::pow(ratio, expo));

    // Corrector.
    for (int b = 0; b < nb_; ++b) {
      rc_zinv[b] = sigma * mu * zinv[b] - x[b] - dx_a[b] * dz_a[b] * zinv[b];
    }
    Blocks dx(nb_);
    Blocks dz(nb_);
    Eigen::VectorXd dy;
    direction(rc_zinv, dx, dy, dz);

    const double tau = 0.98;
    const double ap = std::min(1.0, tau * max_step(x, dx));
    const double ad = std::min(1.0, tau * max_step(z, dz));
    if (ap < 1e-10 && ad < 1e-10) {
      ++stalls;
    } else {
      stalls = 0;
    }
    for (int b = 0; b < nb_; ++b) {
      x[b] = herm(Matrix(x[b] + ap * dx[b]));
      z[b] = herm(Matrix(z[b] + ad * dz[b]));
    }
    y += ad * dy;
  }
}

}  // namespace

std::string to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal:
      return "optimal";
    case SdpStatus::kMaxIter:
      return "max-iter";
    case SdpStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

template <typename Scalar>
int SdpProblem<Scalar>::add_block(int dim) {
  block_dims.push_back(dim);
  objective.push_back(Matrix::Zero(dim, dim));
  return static_cast<int>(block_dims.size()) - 1;
}

template <typename Scalar>
int SdpProblem<Scalar>::total_dim() const {
  int n = 0;
  for (int d : block_dims) n += d;
  return n;
}

template <typename Scalar>
void SdpProblem<Scalar>::validate() const {
  if (block_dims.empty()) throw std::invalid_argument("SdpProblem: no blocks");
  if (objective.size() != block_dims.size()) {
    throw std::invalid_argument("SdpProblem: objective/block count mismatch");
  }
  for (std::size_t b = 0; b < block_dims.size(); ++b) {
    const int n = block_dims[b];
    if (n < 1) throw std::invalid_argument("SdpProblem: block dimension < 1");
    if (objective[b].rows() != n || objective[b].cols() != n) {
      throw std::invalid_argument("SdpProblem: objective block has wrong shape");
    }
    if ((objective[b] - objective[b].adjoint()).norm() > 1e-10 * (1.0 + objective[b].norm())) {
      throw std::invalid_argument("SdpProblem: objective block is not Hermitian");
    }
  }
  for (const auto& c : constraints) {
    for (const auto& e : c.entries) {
      if (e.block < 0 || e.block >= static_cast<int>(block_dims.size())) {
        throw std::invalid_argument("SdpProblem: entry references missing block");
      }
      const int n = block_dims[e.block];
      if (e.row < 0 || e.row >= n || e.col < 0 || e.col >= n) {
        throw std::invalid_argument("SdpProblem: entry index out of range");
      }
      if (e.row == e.col && imag_part(e.value) != 0.0) {
        throw std::invalid_argument("SdpProblem: diagonal entry must be real");
      }
    }
  }
}

template <typename Scalar>
SdpSolution<Scalar> solve_sdp(const SdpProblem<Scalar>& problem, const SdpOptions& options) {
  problem.validate();
  if (problem.total_dim() > options.max_total_dim) {
    throw std::invalid_argument("solve_sdp: total block dimension " +
                                std::to_string(problem.total_dim()) + " exceeds limit " +
                                std::to_string(options.max_total_dim));
  }
  HkmSolver<Scalar> solver(problem, options);
  return solver.run();
}

SdpProblem<double> real_embedding(const SdpProblem<std::complex<double>>& problem) {
  SdpProblem<double> out;
  for (std::size_t b = 0; b < problem.block_dims.size(); ++b) {
    const int n = problem.block_dims[b];
    out.add_block(2 * n);
    const auto& c = problem.objective[b];
    Eigen::MatrixXd& e = out.objective[b];
    e.topLeftCorner(n, n) = 0.5 * c.real();
    e.bottomRightCorner(n, n) = 0.5 * c.real();
    e.topRightCorner(n, n) = -0.5 * c.imag();
    e.bottomLeftCorner(n, n) = 0.5 * c.imag();
  }
  for (const auto& con : problem.constraints) {
    SdpConstraint<double> rc;
    rc.rhs = con.rhs;
    for (const auto& en : con.entries) {
      const int n = problem.block_dims[en.block];
      const double a = 0.5 * en.value.real();
      const double bi = 0.5 * en.value.imag();
      rc.entries.push_back({en.block, en.row, en.col, a});
      rc.entries.push_back({en.block, en.row + n, en.col + n, a});
      if (en.row != en.col) {
        rc.entries.push_back({en.block, en.row, en.col + n, -bi});
        rc.entries.push_back({en.block, en.col, en.row + n, bi});
      }
    }
    out.constraints.push_back(std::move(rc));
  }
  return out;
}

template struct SdpProblem<double>;
template struct SdpProblem<std::complex<double>>;
template SdpSolution<double> solve_sdp(const SdpProblem<double>&, const SdpOptions&);
template SdpSolution<std::complex<double>> solve_sdp(const SdpProblem<std::complex<double>>&,
                                                     const SdpOptions&);

}  // namespace dtomo
