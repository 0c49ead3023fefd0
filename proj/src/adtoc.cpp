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

#include "hltoc/adtoc.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "hltoc/errors.hpp"

namespace hltoc {
namespace {

Vector state_block(const Vector& z, const TrajectoryLayout& layout, int grid) {
  return z.segment(layout.state_offset(grid), layout.state_dim);
}

// x(t) for t = 0..N: x(0) is the model's initial state.
Vector physical_state(const Vector& z, const TrajectoryLayout& layout, const Vector& x0, int t) {
  return t == 0 ? x0 : state_block(z, layout, t - 1);
}

Level make_constraint_level(std::shared_ptr<const DynamicsModel> model, TrajectoryLayout layout) {
  const int n = layout.horizon;
  const int nx = layout.state_dim;
  const int nu = layout.control_dim;
  Level level;
  level.name = "bounds_and_dynamics";
  level.kinds.assign(static_cast<size_t>(2 * n * nu), RowKind::kUpperInequality);
  level.kinds.resize(static_cast<size_t>(2 * n * nu + n * nx), RowKind::kEquality);
  level.evaluate = [model, layout, n, nx, nu](const Vector& z, Vector& r, Matrix* jac) {
    const Vector& x0 = model->x0();
    for (int t = 0; t < n; ++t) {
      const int uo = layout.control_offset(t);
      const Vector u = z.segment(uo, nu);
      const int row = 2 * nu * t;
      r.segment(row, nu) = u - model->u_max();
      r.segment(row + nu, nu) = model->u_min() - u;
      if (jac) {
        jac->block(row, uo, nu, nu) = Matrix::Identity(nu, nu);
        jac->block(row + nu, uo, nu, nu) = -Matrix::Identity(nu, nu);
      }
    }
    const int dyn0 = 2 * n * nu;
    for (int t = 0; t < n; ++t) {
      const Vector x = physical_state(z, layout, x0, t);
      const Vector u = z.segment(layout.control_offset(t), nu);
      const Vector xn = state_block(z, layout, t);
      const int row = dyn0 + nx * t;
      r.segment(row, nx) = model->residual(x, u, xn);
      if (jac) {
        const DynamicsJacobians dj = model->jacobians(x, u, xn);
        if (t > 0) jac->block(row, layout.state_offset(t - 1), nx, nx) = dj.d_x;
        jac->block(row, layout.state_offset(t), nx, nx) = dj.d_x_next;
        jac->block(row, layout.control_offset(t), nx, nu) = dj.d_u;
      }
    }
  };
  return level;
}

Level make_regularization_level(TrajectoryLayout layout, Matrix reference, double rho) {
  const int n = layout.horizon;
  const int nx = layout.state_dim;
  const int nu = layout.control_dim;
  Level level;
  level.name = "regularization";
  level.kinds.assign(static_cast<size_t>(n * (nx + nu) + (layout.has_switch ? 1 : 0)),
                     RowKind::kEquality);
  level.evaluate = [layout, reference, rho, n, nx](const Vector& z, Vector& r, Matrix* jac) {
    // Rows follow the variable order: x deviations, u, n*.
    for (int i = 0; i < n; ++i) {
      r.segment(layout.state_offset(i), nx) =
          rho * (state_block(z, layout, i) - reference.col(i));
    }
    const int u0 = layout.control_offset(0);
    r.segment(u0, n * layout.control_dim) = rho * z.segment(u0, n * layout.control_dim);
    if (layout.has_switch) r[layout.switch_index()] = rho * z[layout.switch_index()];
    if (jac) jac->diagonal().setConstant(rho);
  };
  return level;
}

// Explicit Euler can run away (a falling arm); from the first state that is
// non-finite or far out the last bounded state is held.
Matrix zero_control_rollout(const DynamicsModel& model, int horizon) {
  Matrix states(model.state_dim(), horizon);
  Vector x = model.x0();
  const double bound = 1e3 * (1.0 + x.norm());
  const Vector u = Vector::Zero(model.control_dim());
  bool held = false;
  for (int t = 0; t < horizon; ++t) {
    if (!held) {
      const Vector next = model.step(x, u);
      if (next.allFinite() && next.norm() <= bound) {
        x = next;
      } else {
        held = true;
      }
    }
    states.col(t) = x;
  }
  return states;
}

void check_inputs(const std::shared_ptr<const DynamicsModel>& model,
                  const std::shared_ptr<const TaskFunction>& task, int horizon) {
  if (!model || !task) throw StructuralError("model and task are required");
  if (task->state_dim() != model->state_dim()) {
    throw StructuralError("task expects state dimension " + std::to_string(task->state_dim()) +
                          " but the model has " + std::to_string(model->state_dim()));
  }
  if (horizon < 2) throw DomainError("horizon N must be >= 2");
}

}  // namespace

TimeOptimalProblem::TimeOptimalProblem(Formulation f, std::shared_ptr<const DynamicsModel> model,
                                       std::shared_ptr<const TaskFunction> task, int horizon,
                                       double rho)
    : formulation_(f),
      model_(std::move(model)),
      task_(std::move(task)),
      layout_{horizon, model_->state_dim(), model_->control_dim(), f == Formulation::kAdtoc},
      regularization_(rho),
      reference_(zero_control_rollout(*model_, horizon)),
      hierarchy_(layout_.num_variables()) {}

Vector TimeOptimalProblem::initial_guess(double n_star0) const {
  Vector z = Vector::Zero(layout_.num_variables());
  for (int i = 0; i < horizon(); ++i) z.segment(layout_.state_offset(i), layout_.state_dim) = reference_.col(i);
  if (layout_.has_switch) z[layout_.switch_index()] = n_star0;
  return z;
}

Trajectory TimeOptimalProblem::unpack(const Vector& z) const {
  if (z.size() != layout_.num_variables()) throw StructuralError("unpack: wrong z size");
  Trajectory traj;
  traj.states.resize(layout_.state_dim, horizon() + 1);
  traj.states.col(0) = model_->x0();
  for (int i = 0; i < horizon(); ++i) traj.states.col(i + 1) = state_block(z, layout_, i);
  traj.controls.resize(layout_.control_dim, horizon());
  for (int t = 0; t < horizon(); ++t) {
    traj.controls.col(t) = z.segment(layout_.control_offset(t), layout_.control_dim);
  }
  traj.n_star = layout_.has_switch ? z[layout_.switch_index()]
                                   : static_cast<double>(n_star_fixed_);
  return traj;
}

Vector TimeOptimalProblem::terminal_residual(const Vector& z, int grid) const {
  return task_->residual(state_block(z, layout_, grid));
}

Vector TimeOptimalProblem::task_errors(const Vector& z) const {
  Vector errors(horizon() + 1);
  errors[0] = task_->residual(model_->x0()).norm();
  for (int i = 0; i < horizon(); ++i) errors[i + 1] = terminal_residual(z, i).norm();
  return errors;
}

TimeOptimalProblem build_adtoc(std::shared_ptr<const DynamicsModel> model,
                               std::shared_ptr<const TaskFunction> task, int horizon,
                               const WeightParams& weights, double regularization) {
  check_inputs(model, task, horizon);
  weights.validate();
  TimeOptimalProblem p(Formulation::kAdtoc, model, task, horizon, regularization);
  p.weights_ = weights;
  const TrajectoryLayout layout = p.layout_;
  p.hierarchy_.add_level(make_constraint_level(model, layout));

  const int nt = task->task_dim();
  Level terminal;
  terminal.name = "time_and_weighted_terminal";
  terminal.kinds.assign(static_cast<size_t>(1 + horizon * nt), RowKind::kEquality);
  const double dt = model->dt();
  terminal.evaluate = [task, layout, weights, dt, nt](const Vector& z, Vector& r, Matrix* jac) {
    const int ns = layout.switch_index();
    const double n_star = z[ns];
    r[0] = n_star * dt;
    if (jac) (*jac)(0, ns) = dt;
    for (int i = 0; i < layout.horizon; ++i) {
      const Vector x = state_block(z, layout, i);
      const Vector f = task->residual(x);
      const double w = sparsify(weight(i, n_star, weights.k), weights.sparsity_cutoff);
      const int row = 1 + i * nt;
      r.segment(row, nt) = w * f;
      if (jac && w != 0.0) {
        jac->block(row, layout.state_offset(i), nt, layout.state_dim) = w * task->jacobian(x);
        jac->block(row, ns, nt, 1) = weight_grad_nstar(i, n_star, weights.k) * f;
      }
    }
  };
  p.hierarchy_.add_level(std::move(terminal));
  p.hierarchy_.add_level(make_regularization_level(layout, p.reference_, regularization));
  return p;
}

TimeOptimalProblem build_dtoc_fixed(std::shared_ptr<const DynamicsModel> model,
                                    std::shared_ptr<const TaskFunction> task, int horizon,
                                    int n_star_fixed, bool padded, double regularization) {
  check_inputs(model, task, horizon);
  if (n_star_fixed < 0 || n_star_fixed > horizon - 2) {
    throw DomainError("fixed n* must lie in [0, N-2] = [0, " + std::to_string(horizon - 2) +
                      "], got " + std::to_string(n_star_fixed));
  }
  TimeOptimalProblem p(padded ? Formulation::kDtocPadded : Formulation::kDtocFixed, model, task,
                       horizon, regularization);
  p.n_star_fixed_ = n_star_fixed;
  const TrajectoryLayout layout = p.layout_;
  p.hierarchy_.add_level(make_constraint_level(model, layout));

  const int nt = task->task_dim();
  const int first = n_star_fixed + 1;
  const int last = padded ? horizon - 1 : first;
  Level terminal;
  terminal.name = padded ? "padded_terminal" : "terminal";
  terminal.kinds.assign(static_cast<size_t>((last - first + 1) * nt), RowKind::kEquality);
  terminal.evaluate = [task, layout, first, last, nt](const Vector& z, Vector& r, Matrix* jac) {
    for (int i = first; i <= last; ++i) {
      const Vector x = state_block(z, layout, i);
      const int row = (i - first) * nt;
      r.segment(row, nt) = task->residual(x);
      if (jac) jac->block(row, layout.state_offset(i), nt, layout.state_dim) = task->jacobian(x);
    }
  };
  p.hierarchy_.add_level(std::move(terminal));
  p.hierarchy_.add_level(make_regularization_level(layout, p.reference_, regularization));
  return p;
}

double sigma(const Vector& squared_errors, double n_star, const WeightParams& weights) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < squared_errors.size(); ++i) {
    const double gi = static_cast<double>(i);
    const double w = sparsify(weight(gi, n_star, weights.k), weights.sparsity_cutoff);
    if (w == 0.0) continue;
    sum += w * weight_grad_nstar(gi, n_star, weights.k) * squared_errors[i];
  }
  return sum;
}

Vector grid_squared_errors(const TimeOptimalProblem& problem, const Vector& z) {
  Vector sq(problem.horizon());
  for (int i = 0; i < problem.horizon(); ++i) sq[i] = problem.terminal_residual(z, i).squaredNorm();
  return sq;
}

namespace {

void require_adtoc(const TimeOptimalProblem& problem, const Vector& z) {
  if (problem.formulation() != Formulation::kAdtoc) {
    throw StructuralError("KKT diagnostics need the heaviside-weighted formulation");
  }
  if (z.size() != problem.layout().num_variables()) {
    throw StructuralError("variable vector does not match the problem layout");
  }
}

}  // namespace

KktResiduals kkt_residuals(const TimeOptimalProblem& problem, const Vector& z) {
  require_adtoc(problem, z);
  const TrajectoryLayout& layout = problem.layout();
  const WeightParams& wp = problem.weights();
  const double n_star = z[layout.switch_index()];
  const double dt = problem.model().dt();

  KktResiduals k;
  k.k_x = Vector::Zero(layout.horizon * layout.state_dim);
  // The task depends on states only, so the explicit control partial is zero.
  k.k_u = Vector::Zero(layout.horizon * layout.control_dim);
  for (int i = 0; i < layout.horizon; ++i) {
    const Vector x = state_block(z, layout, i);
    const double w = sparsify(weight(i, n_star, wp.k), wp.sparsity_cutoff);
    if (w == 0.0) continue;
    k.k_x.segment(layout.state_offset(i), layout.state_dim) =
        w * w * problem.task().jacobian(x).transpose() * problem.task().residual(x);
  }
  k.sigma = sigma(grid_squared_errors(problem, z), n_star, wp);
  k.k_nstar = n_star * dt * dt + k.sigma;
  return k;
}

double newton_step_nstar(const TimeOptimalProblem& problem, const Vector& z) {
  require_adtoc(problem, z);
  const TrajectoryLayout& layout = problem.layout();
  const WeightParams& wp = problem.weights();
  const double n_star = z[layout.switch_index()];
  const double dt = problem.model().dt();
  const Vector sq = grid_squared_errors(problem, z);

  double k_value = n_star * dt * dt;
  double curvature = dt * dt;
  for (int i = 0; i < layout.horizon; ++i) {
    const double w = sparsify(weight(i, n_star, wp.k), wp.sparsity_cutoff);
    if (w == 0.0) continue;
    const double dw = weight_grad_nstar(i, n_star, wp.k);
    const double ddw = weight_second_grad_nstar(i, n_star, wp.k);
    k_value += w * dw * sq[i];
    curvature += (dw * dw + w * ddw) * sq[i];
  }
  if (std::abs(curvature) < 1e-14) {
    throw SingularityError("n* Newton step: curvature " + std::to_string(curvature) +
                           " is numerically zero");
  }
  return -k_value / curvature;
}

double report_tstar(double n_star, double dt) { return n_star * dt; }

}  // namespace hltoc
