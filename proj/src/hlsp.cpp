// Copyright 2026 The hltoc Authors
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

#include "hltoc/hlsp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/QR>

#include "hltoc/errors.hpp"
#include "hltoc/lsi.hpp"

namespace hltoc {
namespace {

Matrix select_rows(const Matrix& m, const std::vector<int>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), m.cols());
  for (size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = m.row(rows[k]);
  return out;
}

Vector select_entries(const Vector& v, const std::vector<int>& rows) {
  Vector out(static_cast<Eigen::Index>(rows.size()));
  for (size_t k = 0; k < rows.size(); ++k) out[static_cast<Eigen::Index>(k)] = v[rows[k]];
  return out;
}

Matrix stack(const Matrix& top, const Matrix& bottom) {
  Matrix out(top.rows() + bottom.rows(), std::max(top.cols(), bottom.cols()));
  if (top.rows() > 0) out.topRows(top.rows()) = top;
  if (bottom.rows() > 0) out.bottomRows(bottom.rows()) = bottom;
  return out;
}

Vector stack(const Vector& top, const Vector& bottom) {
  Vector out(top.size() + bottom.size());
  out << top, bottom;
  return out;
}

// min |A y + b|^2 + damping |y|^2; minimum-norm when undamped.
Vector damped_least_squares(const Matrix& a, const Vector& b, double damping, double rank_tol) {
  const Eigen::Index n = a.cols();
  if (damping > 0.0) {
    Matrix stacked(a.rows() + n, n);
    stacked.topRows(a.rows()) = a;
    stacked.bottomRows(n) = std::sqrt(damping) * Matrix::Identity(n, n);
    Vector rhs = Vector::Zero(a.rows() + n);
    rhs.head(a.rows()) = -b;
    return stacked.householderQr().solve(rhs);
  }
  if (a.rows() == 0) return Vector::Zero(n);
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  cod.setThreshold(rank_tol);
  cod.compute(a);
  return cod.solve(-b);
}

// Orthonormal basis of null(m), via a pivoted QR of m^T.
Matrix null_space(const Matrix& m, double rank_tol) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0 || n == 0) return Matrix::Identity(n, n);
  Eigen::ColPivHouseholderQR<Matrix> qr;
  qr.setThreshold(rank_tol);
  qr.compute(m.transpose());
  const Eigen::Index rank = qr.rank();
  const Matrix q = qr.householderQ();
  return q.rightCols(n - rank);
}

bool satisfies(const Matrix& c, const Vector& d, const Vector& y) {
  if (c.rows() == 0) return true;
  const Vector slack = d - c * y;
  for (Eigen::Index i = 0; i < slack.size(); ++i) {
    if (slack[i] < -1e-12 * (1.0 + std::abs(d[i]))) return false;
  }
  return true;
}

}  // namespace

bool LinearizedLevel::is_active(int row) const {
  return std::binary_search(active_rows.begin(), active_rows.end(), row);
}

LinearizedHierarchy linearize(const HierarchicalProblem& problem, const Vector& z,
                              double damping, const HlspOptions& options, int max_levels) {
  if (!z.allFinite()) throw DomainError("linearize: non-finite variable vector");
  if (damping < 0.0) throw DomainError("linearize: damping must be >= 0");
  LinearizedHierarchy lin;
  lin.num_variables = problem.num_variables();
  lin.damping = damping;
  const int count = max_levels < 0 ? problem.num_levels()
                                   : std::min(max_levels, problem.num_levels());
  for (int l = 0; l < count; ++l) {
    LevelEvaluation ev = problem.evaluate(l, z, true);
    LinearizedLevel level;
    level.kinds = problem.level(l).kinds;
    for (int r = 0; r < static_cast<int>(level.kinds.size()); ++r) {
      if (level.kinds[static_cast<size_t>(r)] == RowKind::kEquality ||
          ev.residual[r] > -options.activation_margin) {
        level.active_rows.push_back(r);
      }
    }
    level.residual = std::move(ev.residual);
    level.jacobian = std::move(ev.jacobian);
    lin.levels.push_back(std::move(level));
  }
  return lin;
}

HlspSolution solve_cascade(const LinearizedHierarchy& lin, const HlspOptions& options) {
  if (lin.levels.empty()) throw StructuralError("solve_cascade: no levels");
  const int n = lin.num_variables;
  for (const LinearizedLevel& level : lin.levels) {
    const auto rows = static_cast<Eigen::Index>(level.kinds.size());
    if (level.jacobian.rows() != rows || level.residual.size() != rows ||
        (rows > 0 && level.jacobian.cols() != n)) {
      throw StructuralError("solve_cascade: level dimensions are inconsistent");
    }
  }

  Vector dz = Vector::Zero(n);
  Matrix basis = Matrix::Identity(n, n);
  // Linearized inequality rows of higher levels: hard_c dz <= hard_d.
  Matrix hard_c(0, n);
  Vector hard_d(0);
  HlspSolution solution;

  for (const LinearizedLevel& level : lin.levels) {
    std::vector<int> eq_rows;
    std::vector<int> slack_rows;  // inequality rows carrying a slack variable
    std::vector<int> kept_rows;   // inequality rows kept satisfied
    for (int r = 0; r < static_cast<int>(level.kinds.size()); ++r) {
      if (level.kinds[static_cast<size_t>(r)] == RowKind::kEquality) {
        eq_rows.push_back(r);
        continue;
      }
      const double g = level.residual[r] + level.jacobian.row(r).dot(dz);
      if (level.is_active(r) || g > -options.activation_margin) {
        slack_rows.push_back(r);
      } else {
        kept_rows.push_back(r);
      }
    }

    const Matrix j_eq = select_rows(level.jacobian, eq_rows);
    const Vector r_eq = select_entries(level.residual, eq_rows);
    const Matrix j_slack = select_rows(level.jacobian, slack_rows);
    const Vector g_slack = select_entries(level.residual, slack_rows) + j_slack * dz;
    const Matrix j_kept = select_rows(level.jacobian, kept_rows);
    const Vector g_kept = select_entries(level.residual, kept_rows) + j_kept * dz;

    const Eigen::Index dim = basis.cols();
    if (dim > 0) {
      const Matrix a = j_eq * basis;
      const Vector b = j_eq * dz + r_eq;
      const Matrix c = stack(Matrix(hard_c * basis), Matrix(j_kept * basis));
      const Vector d = stack(Vector(hard_d - hard_c * dz), Vector(-g_kept));
      const double qp_damping = std::max(lin.damping, options.qp_min_damping);
      Vector y;
      bool solved = false;
      if (slack_rows.empty()) {
        y = damped_least_squares(a, b, lin.damping, options.rank_tol);
        solved = satisfies(c, d, y);
      }
      if (!solved) {
        const auto ns = static_cast<Eigen::Index>(slack_rows.size());
        const Eigen::Index nv = dim + ns;
        Matrix a_ext = Matrix::Zero(a.rows() + dim + ns, nv);
        a_ext.topLeftCorner(a.rows(), dim) = a;
        a_ext.block(a.rows(), 0, dim, dim) = std::sqrt(qp_damping) * Matrix::Identity(dim, dim);
        a_ext.bottomRightCorner(ns, ns) = Matrix::Identity(ns, ns);
        Vector b_ext = Vector::Zero(a_ext.rows());
        b_ext.head(a.rows()) = b;
        Matrix c_ext = Matrix::Zero(c.rows() + ns, nv);
        c_ext.topLeftCorner(c.rows(), dim) = c;
        c_ext.bottomLeftCorner(ns, dim) = j_slack * basis;
        c_ext.bottomRightCorner(ns, ns) = -Matrix::Identity(ns, ns);
        const Vector d_ext = stack(d, Vector(-g_slack));
        Vector start = Vector::Zero(nv);
        start.tail(ns) = g_slack.cwiseMax(0.0);
        const LsiResult qp = solve_lsi(a_ext, b_ext, c_ext, d_ext, start);
        y = qp.y.head(dim);
      }
      dz += basis * y;
    }

    // Freeze this level for the ones below.
    if (!eq_rows.empty() && basis.cols() > 0) {
      basis = basis * null_space(j_eq * basis, options.rank_tol);
    }
    std::vector<int> ineq_rows = slack_rows;
    ineq_rows.insert(ineq_rows.end(), kept_rows.begin(), kept_rows.end());
    if (!ineq_rows.empty()) {
      const Matrix j_in = select_rows(level.jacobian, ineq_rows);
      const Vector g_in = select_entries(level.residual, ineq_rows);
      const Vector optimal = (j_in * dz + g_in).cwiseMax(0.0);
      hard_c = stack(hard_c, j_in);
      hard_d = stack(hard_d, Vector(optimal - g_in));
    }
    solution.nullspace_dims.push_back(static_cast<int>(basis.cols()));
    solution.partial_steps.push_back(dz);
  }

  solution.step = dz;
  for (const LinearizedLevel& level : lin.levels) {
    Vector v = level.jacobian * dz + level.residual;
    for (int r = 0; r < static_cast<int>(level.kinds.size()); ++r) {
      if (level.kinds[static_cast<size_t>(r)] == RowKind::kUpperInequality) {
        v[r] = level.is_active(r) ? std::max(0.0, v[r]) : 0.0;
      }
    }
    solution.slacks.push_back(std::move(v));
  }
  return solution;
}

Vector slack_norms(const HlspSolution& solution) {
  Vector norms(static_cast<Eigen::Index>(solution.slacks.size()));
  for (size_t l = 0; l < solution.slacks.size(); ++l) {
    norms[static_cast<Eigen::Index>(l)] = solution.slacks[l].norm();
  }
  return norms;
}

}  // namespace hltoc
