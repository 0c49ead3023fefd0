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
#include <memory>
#include <random>

#include "doctest.h"
#include "fd.hpp"
#include "hltoc/adtoc.hpp"
#include "hltoc/errors.hpp"
#include "hltoc/shlsp.hpp"

using namespace hltoc;

namespace {

std::shared_ptr<const DynamicsModel> point_mass(double dt = 0.1) {
  return std::make_shared<PointMass>(dt);
}

std::shared_ptr<const TaskFunction> origin() {
  return std::make_shared<StateTask>(Vector::Zero(2));
}

WeightParams params(double k = 4.0) {
  WeightParams w;
  w.k = k;
  return w;
}

Vector residual_of(const TimeOptimalProblem& p, int level, const Vector& z) {
  return p.hierarchy().evaluate(level, z, false).residual;
}

double half_level2_sq(const TimeOptimalProblem& p, const Vector& z) {
  return 0.5 * residual_of(p, 1, z).squaredNorm();
}

Vector random_z(const TimeOptimalProblem& p, std::mt19937_64& rng, double n_star) {
  std::uniform_real_distribution<double> un(-1.0, 1.0);
  Vector z(p.layout().num_variables());
  for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = un(rng);
  z[p.layout().switch_index()] = n_star;
  return z;
}

}  // namespace

TEST_CASE("adtoc level structure") {
  const TimeOptimalProblem p = build_adtoc(point_mass(), origin(), 25, params());
  CHECK(p.hierarchy().num_levels() == 3);
  CHECK(p.hierarchy().level(1).rows() == 1 + 25 * 2);
  CHECK(p.layout().num_variables() == 25 * 3 + 1);
  Vector z = Vector::Zero(p.layout().num_variables());
  z[p.layout().switch_index()] = 5.0;
  const Vector r = residual_of(p, 1, z);
  CHECK(r[0] == doctest::Approx(0.5));
  CHECK(r.tail(r.size() - 1).norm() == 0.0);
}

TEST_CASE("adtoc rejects bad inputs") {
  CHECK_THROWS_AS(build_adtoc(point_mass(), origin(), 1, params()), DomainError);
  CHECK_THROWS_AS(build_adtoc(point_mass(), std::make_shared<StateTask>(Vector::Zero(3)), 10, params()),
                  StructuralError);
  const TimeOptimalProblem p = build_adtoc(point_mass(), origin(), 10, params());
  CHECK_THROWS_AS(p.hierarchy().evaluate(1, Vector::Zero(3), false), StructuralError);
}

TEST_CASE("level jacobians including the n* column match finite differences") {
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> ns(0.0, 25.0);
  for (bool arm : {false, true}) {
    std::shared_ptr<const DynamicsModel> model =
        arm ? std::shared_ptr<const DynamicsModel>(std::make_shared<TwoLinkArm>(0.1)) : point_mass();
    std::shared_ptr<const TaskFunction> task =
        arm ? std::shared_ptr<const TaskFunction>(std::make_shared<EndEffectorTask>(ArmParams{}, Vector::Ones(2)))
            : origin();
    const TimeOptimalProblem p = build_adtoc(model, task, 25, params());
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      const Vector z = random_z(p, rng, ns(rng));
      for (int l = 0; l < 3; ++l) {
        const Matrix j = p.hierarchy().evaluate(l, z, true).jacobian;
        const Matrix fd = testing::fd_jacobian([&](const Vector& v) { return residual_of(p, l, v); }, z);
        worst = std::max(worst, testing::max_rel_error(j, fd));
      }
    }
    CHECK(worst <= 1e-5);
  }
}

TEST_CASE("dtoc structure and range") {
  const TimeOptimalProblem fixed = build_dtoc_fixed(point_mass(), origin(), 25, 4, false);
  CHECK(fixed.hierarchy().level(1).rows() == 2);
  CHECK(fixed.layout().num_variables() == 25 * 3);
  const TimeOptimalProblem padded = build_dtoc_fixed(point_mass(), origin(), 25, 4, true);
  CHECK(padded.hierarchy().level(1).rows() == (25 - 1 - 4) * 2);
  CHECK_THROWS_AS(build_dtoc_fixed(point_mass(), origin(), 25, -1, false), DomainError);
  CHECK_THROWS_AS(build_dtoc_fixed(point_mass(), origin(), 25, 24, false), DomainError);
  CHECK_THROWS_AS(kkt_residuals(fixed, fixed.initial_guess()), StructuralError);
}

TEST_CASE("dtoc terminal errors at n* = 4 and 5") {
  for (int n : {4, 5}) {
    const TimeOptimalProblem p = build_dtoc_fixed(point_mass(), origin(), 25, n, false);
    const auto [z, report] = solve(p.hierarchy(), p.initial_guess());
    CHECK(report.status == SolveStatus::kConverged);
    const double err = p.terminal_residual(z, n + 1).norm();
    if (n == 4) {
      CHECK(err == doctest::Approx(0.1).epsilon(0.2));
    } else {
      CHECK(err <= 1e-8);
    }
  }
}

TEST_CASE("sigma and kkt examples") {
  const TimeOptimalProblem p = build_adtoc(point_mass(), origin(), 25, params());
  Vector z = Vector::Zero(p.layout().num_variables());
  KktResiduals k = kkt_residuals(p, z);
  CHECK(k.k_nstar == 0.0);
  CHECK(k.sigma == 0.0);
  z[p.layout().switch_index()] = 30.0;
  k = kkt_residuals(p, z);
  CHECK(k.k_nstar == doctest::Approx(30.0 * 0.01));
  CHECK(k.k_nstar > 0.0);
  CHECK(std::abs(k.k_nstar - (30.0 * 0.01 + k.sigma)) <= 1e-15);
}

TEST_CASE("kkt residuals match the gradient of the level-2 lagrangian") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> ns(0.0, 25.0);
  const TimeOptimalProblem p = build_adtoc(point_mass(), origin(), 25, params());
  const int nx = 25 * 2;
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    const Vector z = random_z(p, rng, ns(rng));
    const KktResiduals k = kkt_residuals(p, z);
    // L is quadratic in x for a linear task, so a very wide central difference is
    // exact there and avoids cancellation against the large weights
    auto partial = [&](int i, double h) {
      Vector zp = z, zm = z;
      zp[i] += h;
      zm[i] -= h;
      return (half_level2_sq(p, zp) - half_level2_sq(p, zm)) / (2 * h);
    };
    for (int i = 0; i < nx; ++i) worst = std::max(worst, testing::rel_error(k.k_x[i], partial(i, 50.0)));
    worst = std::max(worst, testing::rel_error(k.k_nstar, partial(p.layout().switch_index(), 1e-4)));
    CHECK(k.k_u.norm() == 0.0);
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("newton step on n* matches a scalar finite-difference newton step") {
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> ns(1.0, 20.0);
  const TimeOptimalProblem p = build_adtoc(point_mass(), origin(), 25, params());
  const int idx = p.layout().switch_index();
  double worst = 0.0;
  for (int s = 0; s < 100; ++s) {
    Vector z = random_z(p, rng, ns(rng));
    const double k0 = kkt_residuals(p, z).k_nstar;
    const double h = 1e-6;
    Vector zp = z, zm = z;
    zp[idx] += h;
    zm[idx] -= h;
    const double slope = (kkt_residuals(p, zp).k_nstar - kkt_residuals(p, zm).k_nstar) / (2 * h);
    worst = std::max(worst, testing::rel_error(newton_step_nstar(p, z), -k0 / slope));
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("newton step points back into the horizon") {
  const TimeOptimalProblem p = build_adtoc(point_mass(), origin(), 25, params(19.0));
  Vector z = p.initial_guess(30.0);
  z.head(25 * 2).setZero();
  CHECK(newton_step_nstar(p, z) < 0.0);
  z = p.initial_guess(-5.0);
  CHECK(newton_step_nstar(p, z) > 0.0);
}

TEST_CASE("report tstar examples") {
  CHECK(report_tstar(5.1, 0.1) == doctest::Approx(0.51));
  CHECK(report_tstar(6.2, 0.01) == doctest::Approx(0.062));
  CHECK(report_tstar(0.0, 0.1) == 0.0);
}

TEST_CASE("unpack and task errors") {
  const TimeOptimalProblem p = build_adtoc(point_mass(), origin(), 10, params());
  const Vector z = p.initial_guess(3.0);
  const Trajectory t = p.unpack(z);
  CHECK(t.states.cols() == 11);
  CHECK(t.controls.cols() == 10);
  CHECK(t.n_star == 3.0);
  const Vector e = p.task_errors(z);
  CHECK(e.size() == 11);
  CHECK(e[0] == doctest::Approx(1.0));
}
