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


#include <cmath>
#include <random>

#include "doctest.h"
#include "hltoc/errors.hpp"
#include "hltoc/hlsp.hpp"
#include "hltoc/lsi.hpp"
#include "hltoc/oracle.hpp"
#include "random_hlsp.hpp"

using namespace hltoc;

namespace {

LinearizedLevel make_level(Matrix j, Vector r, std::vector<RowKind> kinds) {
  LinearizedLevel lv;
  lv.jacobian = std::move(j);
  lv.residual = std::move(r);
  lv.kinds = std::move(kinds);
  for (int i = 0; i < lv.residual.size(); ++i) lv.active_rows.push_back(i);
  return lv;
}

Matrix mat(int rows, int cols, std::initializer_list<double> v) {
  Matrix m(rows, cols);
  auto it = v.begin();
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = *it++;
  return m;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Brute-force active-set enumeration for min |A y + b| s.t. C y <= d.
double enumerate_lsi(const Matrix& a, const Vector& b, const Matrix& c, const Vector& d) {
  const int m = static_cast<int>(c.rows());
  double best = INFINITY;
  for (int mask = 0; mask < (1 << m); ++mask) {
    std::vector<int> rows;
    for (int i = 0; i < m; ++i)
      if (mask & (1 << i)) rows.push_back(i);
    std::vector<LinearLevel> levels;
    if (!rows.empty()) {
      LinearLevel eq{Matrix(rows.size(), c.cols()), Vector(rows.size())};
      for (size_t k = 0; k < rows.size(); ++k) {
        eq.a.row(static_cast<Eigen::Index>(k)) = c.row(rows[k]);
        eq.b[static_cast<Eigen::Index>(k)] = -d[rows[k]];
      }
      levels.push_back(eq);
    }
    levels.push_back({a, b});
    const LexicographicSolution s = lexicographic_oracle(levels);
    if (!rows.empty() && s.residual_norms[0] > 1e-10) continue;
    if (((c * s.z - d).array() > 1e-10).any()) continue;
    best = std::min(best, s.residual_norms[levels.size() - 1]);
  }
  return best;
}

}  // namespace

TEST_CASE("lsi unconstrained and bound examples") {
  const Matrix a = Matrix::Identity(2, 2);
  const Vector b = vec({-2, -3});
  const LsiResult free = solve_lsi(a, b, Matrix(0, 2), Vector(0), Vector::Zero(2));
  CHECK(free.converged);
  CHECK((free.y - vec({2, 3})).norm() < 1e-12);
  const LsiResult cut = solve_lsi(a, b, mat(1, 2, {1, 0}), vec({1}), Vector::Zero(2));
  CHECK(cut.converged);
  CHECK((cut.y - vec({1, 3})).norm() < 1e-12);
  CHECK(cut.multipliers[0] > 0.0);
}

TEST_CASE("lsi matches active-set enumeration") {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_int_distribution<int> m_dist(1, 4);
  double worst = 0.0;
  for (int s = 0; s < 200; ++s) {
    const int n = 3, m = m_dist(rng);
    Matrix a(n, n), c(m, n);
    Vector b(n), d(m);
    for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = g(rng);
    for (Eigen::Index i = 0; i < c.size(); ++i) c.data()[i] = g(rng);
    for (int i = 0; i < n; ++i) b[i] = g(rng);
    for (int i = 0; i < m; ++i) d[i] = std::abs(g(rng));  // y = 0 feasible
    const LsiResult r = solve_lsi(a, b, c, d, Vector::Zero(n));
    REQUIRE(r.converged);
    CHECK(((c * r.y - d).array() <= 1e-9).all());
    const double ref = enumerate_lsi(a, b, c, d);
    worst = std::max(worst, std::abs((a * r.y + b).norm() - ref) / std::max(1.0, ref));
  }
  CHECK(worst <= 1e-8);
}

TEST_CASE("cascade protects the higher priority") {
  LinearizedHierarchy lin;
  lin.num_variables = 1;
  lin.levels.push_back(make_level(mat(1, 1, {1}), vec({-1}), {RowKind::kEquality}));
  lin.levels.push_back(make_level(mat(1, 1, {1}), vec({-2}), {RowKind::kEquality}));
  const HlspSolution s = solve_cascade(lin);
  CHECK(s.step[0] == doctest::Approx(1.0).epsilon(1e-12));
  const Vector norms = slack_norms(s);
  CHECK(norms[0] < 1e-12);
  CHECK(norms[1] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.nullspace_dims[0] == 0);
}

TEST_CASE("cascade honours an upper inequality above an equality") {
  LinearizedHierarchy lin;
  lin.num_variables = 2;
  // x0 <= 0 first, then x0 = 1 and x1 = 1
  lin.levels.push_back(make_level(mat(1, 2, {1, 0}), vec({0}), {RowKind::kUpperInequality}));
  lin.levels.push_back(make_level(Matrix::Identity(2, 2), vec({-1, -1}),
                                  {RowKind::kEquality, RowKind::kEquality}));
  const HlspSolution s = solve_cascade(lin);
  CHECK(s.step[0] <= 1e-9);
  CHECK(s.step[0] >= -1e-6);
  CHECK(s.step[1] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(slack_norms(s)[0] <= 1e-9);
}

TEST_CASE("cascade matches the lexicographic oracle on random hierarchies") {
  std::mt19937_64 rng(37);
  double worst_norm = 0.0, worst_step = 0.0;
  for (int s = 0; s < 500; ++s) {
    const testing::RandomHierarchy h = testing::random_hierarchy(rng);
    const HlspSolution sol = solve_cascade(h.lin);
    const LexicographicSolution ref = lexicographic_oracle(h.levels);
    const Vector norms = slack_norms(sol);
    for (Eigen::Index l = 0; l < norms.size(); ++l) {
      worst_norm = std::max(worst_norm, std::abs(norms[l] - ref.residual_norms[l]) /
                                            std::max(1.0, ref.residual_norms[l]));
    }
    worst_step = std::max(worst_step, (sol.step - ref.z).norm() / std::max(1.0, ref.z.norm()));
  }
  CHECK(worst_norm <= 1e-8);
  CHECK(worst_step <= 1e-8);
}

TEST_CASE("damping shrinks the step monotonically") {
  std::mt19937_64 rng(41);
  for (int s = 0; s < 50; ++s) {
    testing::RandomHierarchy h = testing::random_hierarchy(rng);
    double previous = INFINITY;
    for (double damping : {1e-8, 1e-4, 1e-2, 1.0, 100.0}) {
      h.lin.damping = damping;
      const double norm = solve_cascade(h.lin).step.norm();
      CHECK(norm <= previous * (1.0 + 1e-9));
      previous = norm;
    }
  }
}

TEST_CASE("cascade is deterministic") {
  std::mt19937_64 rng(43);
  const testing::RandomHierarchy h = testing::random_hierarchy(rng);
  const Vector a = solve_cascade(h.lin).step;
  const Vector b = solve_cascade(h.lin).step;
  CHECK((a - b).norm() == 0.0);
}

TEST_CASE("cascade rejects malformed levels") {
  LinearizedHierarchy lin;
  lin.num_variables = 2;
  lin.levels.push_back(make_level(mat(1, 1, {1}), vec({0}), {RowKind::kEquality}));
  CHECK_THROWS_AS(solve_cascade(lin), StructuralError);
}
