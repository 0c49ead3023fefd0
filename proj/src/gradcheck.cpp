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


#include "hltoc/gradcheck.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <random>

#include "hltoc/adtoc.hpp"
#include "hltoc/errors.hpp"
#include "hltoc/models.hpp"
#include "hltoc/weights.hpp"

namespace hltoc {

bool GradientReport::all_passed() const {
  return std::all_of(blocks.begin(), blocks.end(), [](const BlockCheck& b) { return b.passed; });
}

const BlockCheck* GradientReport::find(const std::string& name) const {
  for (const BlockCheck& b : blocks) {
    if (b.name == name) return &b;
  }
  return nullptr;
}

double relative_error(double analytic, double numeric) {
  return std::abs(analytic - numeric) / std::max({std::abs(analytic), std::abs(numeric), 1.0});
}

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector uniform_vector(Rng& rng, Eigen::Index n, double lo, double hi) {
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = uniform(rng, lo, hi);
  return v;
}

class Checker {
 public:
  explicit Checker(const GradientCheckOptions& opt) : opt_(opt) {}

  // analytic is perturbed when the block is the corrupted one
  void scalar(const std::string& name, const std::function<double(Rng&, double&)>& sample) {
    BlockCheck b = start(name);
    for (int s = 0; s < opt_.samples; ++s) {
      double numeric = 0.0;
      const double analytic = sample(rng_, numeric) + offset(name);
      b.max_rel_error = std::max(b.max_rel_error, relative_error(analytic, numeric));
      ++b.samples;
    }
    finish(b);
  }

  // matrix blocks: every entry of every sample
  void matrix(const std::string& name, const std::function<void(Rng&, Matrix&, Matrix&)>& sample) {
    BlockCheck b = start(name);
    Matrix analytic;
    Matrix numeric;
    for (int s = 0; s < opt_.samples; ++s) {
      sample(rng_, analytic, numeric);
      if (analytic.rows() != numeric.rows() || analytic.cols() != numeric.cols()) {
        throw StructuralError("gradient check: " + name + " has inconsistent shapes");
      }
      analytic.array() += offset(name);
      for (Eigen::Index i = 0; i < analytic.size(); ++i) {
        b.max_rel_error =
            std::max(b.max_rel_error, relative_error(analytic.data()[i], numeric.data()[i]));
      }
      ++b.samples;
    }
    finish(b);
  }

  double step() const { return opt_.fd_step; }
  GradientReport take() { return std::move(report_); }

 private:
  BlockCheck start(const std::string& name) const {
    BlockCheck b;
    b.name = name;
    return b;
  }
  void finish(BlockCheck& b) {
    b.passed = b.max_rel_error <= opt_.tolerance;
    report_.blocks.push_back(b);
  }
  double offset(const std::string& name) const { return name == opt_.corrupt_block ? 1e-3 : 0.0; }

  const GradientCheckOptions& opt_;
  Rng rng_{opt_.seed};
  GradientReport report_;
};

// column j of the central-difference Jacobian of f at v
Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& v, double h) {
  const Vector f0 = f(v);
  Matrix j(f0.size(), v.size());
  Vector p = v;
  for (Eigen::Index c = 0; c < v.size(); ++c) {
    p[c] = v[c] + h;
    const Vector fp = f(p);
    p[c] = v[c] - h;
    const Vector fm = f(p);
    p[c] = v[c];
    j.col(c) = (fp - fm) / (2.0 * h);
  }
  return j;
}

void check_weights(Checker& ck, double horizon) {
  static constexpr int ks[] = {1, 4, 8};
  auto draw = [horizon](Rng& r, double& i, double& n, int& k) {
    i = uniform(r, -2.0, horizon + 2.0);
    n = uniform(r, 0.0, horizon);
    k = ks[std::uniform_int_distribution<int>(0, 2)(r)];
  };
  const double h = ck.step();
  using Fn = double (*)(double, double, int);
  auto block = [&](const std::string& name, Fn f, Fn df) {
    ck.scalar(name, [&, f, df](Rng& r, double& numeric) {
      double i, n;
      int k;
      draw(r, i, n, k);
      numeric = (f(i, n + h, k) - f(i, n - h, k)) / (2.0 * h);
      return df(i, n, k);
    });
  };
  block("heaviside_grad_nstar", heaviside, heaviside_grad_nstar);
  block("heaviside_second_grad_nstar", heaviside_grad_nstar, heaviside_second_grad_nstar);
  block("weight_grad_nstar", weight, weight_grad_nstar);
  block("weight_second_grad_nstar", weight_grad_nstar, weight_second_grad_nstar);
}

void check_dynamics(Checker& ck, const DynamicsModel& m, const std::string& label, double x_range,
                    double v_range) {
  const int nx = m.state_dim();
  const int nu = m.control_dim();
  auto state = [&](Rng& r) {
    Vector x(nx);
    for (int i = 0; i < nx; ++i) x[i] = uniform(r, i < nx / 2 ? -x_range : -v_range,
                                               i < nx / 2 ? x_range : v_range);
    return x;
  };
  auto control = [&](Rng& r) {
    Vector u(nu);
    for (int i = 0; i < nu; ++i) u[i] = uniform(r, m.u_min()[i], m.u_max()[i]);
    return u;
  };
  const double h = ck.step();
  const std::string base = label + ".";
  ck.matrix(base + "d_x", [&](Rng& r, Matrix& a, Matrix& n) {
    const Vector x = state(r), u = control(r), xn = state(r);
    a = m.jacobians(x, u, xn).d_x;
    n = fd_jacobian([&](const Vector& v) { return m.residual(v, u, xn); }, x, h);
  });
  ck.matrix(base + "d_x_next", [&](Rng& r, Matrix& a, Matrix& n) {
    const Vector x = state(r), u = control(r), xn = state(r);
    a = m.jacobians(x, u, xn).d_x_next;
    n = fd_jacobian([&](const Vector& v) { return m.residual(x, u, v); }, xn, h);
  });
  ck.matrix(base + "d_u", [&](Rng& r, Matrix& a, Matrix& n) {
    const Vector x = state(r), u = control(r), xn = state(r);
    a = m.jacobians(x, u, xn).d_u;
    n = fd_jacobian([&](const Vector& v) { return m.residual(x, v, xn); }, u, h);
  });
}

void check_task(Checker& ck, const TaskFunction& t, double range) {
  ck.matrix(t.name() + "_task.jacobian", [&](Rng& r, Matrix& a, Matrix& n) {
    const Vector x = uniform_vector(r, t.state_dim(), -range, range);
    a = t.jacobian(x);
    n = fd_jacobian([&](const Vector& v) { return t.value(v); }, x, ck.step());
  });
}

// Level Jacobians of the assembled hierarchy at random iterates. The n*
// column of the terminal level is checked as a block of its own as well.
void check_hierarchy(Checker& ck, const TimeOptimalProblem& p, const std::string& scenario,
                     double state_range) {
  const HierarchicalProblem& hp = p.hierarchy();
  const TrajectoryLayout& lay = p.layout();
  const DynamicsModel& m = p.model();
  auto random_z = [&](Rng& r) {
    Vector z = uniform_vector(r, hp.num_variables(), -state_range, state_range);
    for (int t = 0; t < lay.horizon; ++t) {
      for (int c = 0; c < lay.control_dim; ++c) {
        z[lay.control_offset(t) + c] = uniform(r, m.u_min()[c], m.u_max()[c]);
      }
    }
    z[lay.switch_index()] = uniform(r, 0.0, lay.horizon);
    return z;
  };
  const double h = ck.step();
  for (int l = 0; l < hp.num_levels(); ++l) {
    auto level_fn = [&hp, l](const Vector& v) { return hp.evaluate(l, v, false).residual; };
    ck.matrix("adtoc." + scenario + ".level" + std::to_string(l), [&](Rng& r, Matrix& a, Matrix& n) {
      const Vector z = random_z(r);
      a = hp.evaluate(l, z, true).jacobian;
      n = fd_jacobian(level_fn, z, h);
    });
  }
  auto terminal_fn = [&hp](const Vector& v) { return hp.evaluate(1, v, false).residual; };
  ck.matrix("adtoc." + scenario + ".level1.nstar_column", [&](Rng& r, Matrix& a, Matrix& n) {
    const Vector z = random_z(r);
    const int s = lay.switch_index();
    a = hp.evaluate(1, z, true).jacobian.col(s);
    Vector zp = z, zm = z;
    zp[s] += h;
    zm[s] -= h;
    n = (terminal_fn(zp) - terminal_fn(zm)) / (2.0 * h);
  });
}

}  // namespace

GradientReport check_gradients(const GradientCheckOptions& options) {
  if (options.samples < 1) throw ConfigError("gradient check needs at least one sample");
  if (!(options.fd_step > 0.0) || !(options.tolerance > 0.0)) {
    throw ConfigError("fd_step and tolerance must be positive");
  }
  Checker ck(options);
  check_weights(ck, options.horizon);

  auto pm = std::make_shared<PointMass>(options.dt);
  auto arm = std::make_shared<TwoLinkArm>(options.dt);
  check_dynamics(ck, *pm, "point_mass", 2.0, 5.0);
  check_dynamics(ck, *arm, "two_link", 3.14, 3.0);
  ArmParams gravity_arm;
  gravity_arm.gravity = true;
  check_dynamics(ck, TwoLinkArm(options.dt, gravity_arm), "two_link_gravity", 3.14, 3.0);

  auto pm_task = std::make_shared<StateTask>(Vector::Zero(2));
  Vector fd(2);
  fd << 1.0, 1.0;
  auto arm_task = std::make_shared<EndEffectorTask>(ArmParams{}, fd);
  check_task(ck, *pm_task, 2.0);
  check_task(ck, *arm_task, 3.14);

  WeightParams wp;
  wp.k = options.k;
  check_hierarchy(ck, build_adtoc(pm, pm_task, options.horizon, wp), "point_mass", 1.0);
  check_hierarchy(ck, build_adtoc(arm, arm_task, options.horizon, wp), "two_link", 1.0);

  GradientReport report = ck.take();
  report.tolerance = options.tolerance;
  return report;
}

}  // namespace hltoc
