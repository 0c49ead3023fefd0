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

#include "hltoc/lsi.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/QR>

#include "hltoc/errors.hpp"

namespace hltoc {
namespace {

// Orthonormal basis of the span of the working-set normals, kept by
// Gram-Schmidt with one reorthogonalization pass.
class WorkingSet {
 public:
  explicit WorkingSet(int n) : n_(n) {}

  int size() const { return static_cast<int>(rows_.size()); }
  const std::vector<int>& rows() const { return rows_; }

  // Residual of `normal` after projecting out the current span.
  Vector project_out(const Vector& normal) const {
    Vector v = normal;
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < size(); ++j) v -= q_.col(j).dot(v) * q_.col(j);
    }
    return v;
  }

  bool add(int row, const Vector& normal) {
    if (size() >= n_) return false;
    const double norm = normal.norm();
    if (norm == 0.0) return false;
    Vector v = normal;
    Vector coeff = Vector::Zero(size() + 1);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < size(); ++j) {
        const double h = q_.col(j).dot(v);
        coeff[j] += h;
        v -= h * q_.col(j);
      }
    }
    const double rest = v.norm();
    if (rest <= 1e-10 * norm) return false;
    coeff[size()] = rest;
    const int m = size();
    q_.conservativeResize(n_, m + 1);
    q_.col(m) = v / rest;
    Matrix r = Matrix::Zero(m + 1, m + 1);
    r.topLeftCorner(m, m) = r_;
    r.col(m) = coeff;
    r_ = std::move(r);
    rows_.push_back(row);
    return true;
  }

  void rebuild(const Matrix& g, std::vector<int> rows) {
    q_.resize(n_, 0);
    r_.resize(0, 0);
    rows_.clear();
    for (int row : rows) add(row, g.row(row).transpose());
  }

  Vector project_null(const Vector& v) const { return project_out(v); }

  // Multipliers mu with v + G_W^T mu = 0 in the least-squares sense.
  Vector multipliers(const Vector& v) const {
    const Vector qt = q_.transpose() * v;
    return -r_.triangularView<Eigen::Upper>().solve(qt);
  }

 private:
  int n_;
  Matrix q_{Matrix(0, 0)};
  Matrix r_{Matrix(0, 0)};
  std::vector<int> rows_;
};

}  // namespace

LsiResult solve_lsi(const Matrix& a, const Vector& b, const Matrix& c, const Vector& d,
                    const Vector& y0, double feasibility_tol, int max_iterations) {
  const int n = static_cast<int>(a.cols());
  const int m = static_cast<int>(c.rows());
  if (a.rows() != b.size() || y0.size() != n || (m > 0 && c.cols() != n) || d.size() != m ||
      a.rows() < n) {
    throw StructuralError("solve_lsi: dimension mismatch");
  }
  if (max_iterations <= 0) max_iterations = 10 * (n + m) + 10;

  // With A = Q R and w = R y the objective becomes |w + Q^T b|^2 and the
  // constraints G w <= d with G = C R^-1.
  Eigen::HouseholderQR<Matrix> qr(a);
  const Matrix r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (int i = 0; i < n; ++i) {
    if (r(i, i) == 0.0) throw SingularityError("solve_lsi: A is rank deficient");
  }
  const Vector c_shift = (qr.householderQ().transpose() * b).head(n);
  const auto rt = r.triangularView<Eigen::Upper>();
  Matrix g(m, n);
  if (m > 0) g = rt.transpose().solve(c.transpose()).transpose();
  Vector w = r * y0;

  LsiResult out;
  out.multipliers = Vector::Zero(m);
  WorkingSet working(n);
  std::vector<char> in_working(static_cast<size_t>(m), 0);
  // Rows found dependent on the current working set; reset whenever it changes.
  std::vector<char> ignored(static_cast<size_t>(m), 0);

  auto try_add = [&](int row) {
    if (!working.add(row, g.row(row).transpose())) return false;
    in_working[static_cast<size_t>(row)] = 1;
    std::fill(ignored.begin(), ignored.end(), 0);
    return true;
  };

  // Start from the constraints that are tight at y0.
  if (m > 0) {
    const Vector slack = d - c * y0;
    for (int i = 0; i < m; ++i) {
      if (slack[i] <= feasibility_tol * (1.0 + std::abs(d[i]))) try_add(i);
    }
  }

  for (int it = 0; it < max_iterations; ++it) {
    out.iterations = it + 1;
    const Vector grad = w + c_shift;
    const Vector p = -working.project_null(grad);

    double alpha = 1.0;
    int blocking = -1;
    const double p_norm = p.norm();
    if (m > 0 && p_norm > 0.0) {
      const Vector gp = g * p;
      const Vector slack = d - g * w;
      for (int i = 0; i < m; ++i) {
        if (in_working[static_cast<size_t>(i)] || ignored[static_cast<size_t>(i)]) continue;
        const double scale = 1e-14 * (1.0 + g.row(i).norm() * p_norm);
        if (gp[i] <= scale) continue;
        const double step = std::max(0.0, slack[i]) / gp[i];
        if (step < alpha) {
          alpha = step;
          blocking = i;
        }
      }
    }

    w += alpha * p;
    if (blocking >= 0) {
      if (!try_add(blocking)) ignored[static_cast<size_t>(blocking)] = 1;
      continue;
    }

    // At the minimizer on the current face: check multiplier signs.
    if (working.size() == 0) {
      out.converged = true;
      break;
    }
    const Vector mu = working.multipliers(w + c_shift);
    int drop = -1;
    double most_negative = 0.0;
    const double tol = 1e-12 * (1.0 + mu.cwiseAbs().maxCoeff());
    for (Eigen::Index j = 0; j < mu.size(); ++j) {
      if (mu[j] < -tol && mu[j] < most_negative) {
        most_negative = mu[j];
        drop = static_cast<int>(j);
      }
    }
    if (drop < 0) {
      for (Eigen::Index j = 0; j < mu.size(); ++j) {
        out.multipliers[working.rows()[static_cast<size_t>(j)]] = mu[j];
      }
      out.converged = true;
      break;
    }
    std::vector<int> rows = working.rows();
    in_working[static_cast<size_t>(rows[static_cast<size_t>(drop)])] = 0;
    rows.erase(rows.begin() + drop);
    working.rebuild(g, rows);
    std::fill(ignored.begin(), ignored.end(), 0);
  }
  out.y = rt.solve(w);
  return out;
}

}  // namespace hltoc
