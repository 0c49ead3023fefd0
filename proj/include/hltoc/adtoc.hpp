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

#pragma once

#include <memory>

#include "hltoc/models.hpp"
#include "hltoc/problem.hpp"
#include "hltoc/weights.hpp"

namespace hltoc {

/// Position of every decision block inside z = [x(1..N), u(0..N-1), n*].
/// Terminal rows live on the grid i = 0..N-1 of stacked states: grid index i
/// is the state block x(i+1) reached after i+1 controls. The initial state
/// x(0) is a constant.
struct TrajectoryLayout {
  int horizon = 0;
  int state_dim = 0;
  int control_dim = 0;
  bool has_switch = true;

  int num_variables() const {
    return horizon * (state_dim + control_dim) + (has_switch ? 1 : 0);
  }
  int state_offset(int grid) const { return grid * state_dim; }
  int control_offset(int t) const { return horizon * state_dim + t * control_dim; }
  int switch_index() const { return horizon * (state_dim + control_dim); }
};

/// Physical trajectory x(0..N), u(0..N-1) unpacked from z.
struct Trajectory {
  Matrix states;    // n_x x (N+1), column j is x(j)
  Matrix controls;  // n_u x N
  double n_star = 0.0;
};

enum class Formulation {
  kAdtoc,       // heaviside-weighted terminal rows plus the time row
  kDtocFixed,   // single terminal row at grid n*+1
  kDtocPadded,  // terminal rows at grids n*+1 .. N-1
};

/// A three-level time-optimal control hierarchy together with the data
/// needed to interpret its variable vector.
///   level 0: control bounds (inequality) and dynamics (equality)
///   level 1: terminal task rows (and the time row n* dt for ADTOC)
///   level 2: regularization of x, u (and n*)
class TimeOptimalProblem {
 public:
  Formulation formulation() const { return formulation_; }
  const DynamicsModel& model() const { return *model_; }
  const TaskFunction& task() const { return *task_; }
  std::shared_ptr<const DynamicsModel> model_ptr() const { return model_; }
  std::shared_ptr<const TaskFunction> task_ptr() const { return task_; }
  const TrajectoryLayout& layout() const { return layout_; }
  const HierarchicalProblem& hierarchy() const { return hierarchy_; }
  const WeightParams& weights() const { return weights_; }
  int horizon() const { return layout_.horizon; }
  int n_star_fixed() const { return n_star_fixed_; }
  double regularization() const { return regularization_; }
  /// Zero-control rollout x(1..N) from x(0), n_x x N; a runaway rollout holds
  /// its last bounded state.
  const Matrix& reference_states() const { return reference_; }

  /// Zero-control rollout, u = 0, n* = n_star0 (ignored for fixed n*).
  Vector initial_guess(double n_star0) const;
  Vector initial_guess() const { return initial_guess(0.5 * horizon()); }

  Trajectory unpack(const Vector& z) const;
  /// |f_ter(x(j))| for the physical steps j = 0..N.
  Vector task_errors(const Vector& z) const;
  /// f_ter at grid i (state x(i+1)).
  Vector terminal_residual(const Vector& z, int grid) const;

 private:
  friend TimeOptimalProblem build_adtoc(std::shared_ptr<const DynamicsModel>,
                                        std::shared_ptr<const TaskFunction>, int,
                                        const WeightParams&, double);
  friend TimeOptimalProblem build_dtoc_fixed(std::shared_ptr<const DynamicsModel>,
                                             std::shared_ptr<const TaskFunction>, int, int,
                                             bool, double);
  TimeOptimalProblem(Formulation f, std::shared_ptr<const DynamicsModel> model,
                     std::shared_ptr<const TaskFunction> task, int horizon, double rho);

  Formulation formulation_;
  std::shared_ptr<const DynamicsModel> model_;
  std::shared_ptr<const TaskFunction> task_;
  TrajectoryLayout layout_;
  WeightParams weights_;
  double regularization_;
  int n_star_fixed_ = -1;
  Matrix reference_;
  HierarchicalProblem hierarchy_;
};

/// Heaviside-weighted hierarchy with z = [x, u, n*].
/// Throws StructuralError when the task and model state sizes differ and
/// DomainError for N < 2 or invalid weight parameters.
TimeOptimalProblem build_adtoc(std::shared_ptr<const DynamicsModel> model,
                               std::shared_ptr<const TaskFunction> task, int horizon,
                               const WeightParams& weights, double regularization = 1.0);

/// Fixed-switch baselines with z = [x, u]. Requires 0 <= n_star_fixed <= N-2
/// so that grid n_star_fixed+1 exists.
TimeOptimalProblem build_dtoc_fixed(std::shared_ptr<const DynamicsModel> model,
                                    std::shared_ptr<const TaskFunction> task, int horizon,
                                    int n_star_fixed, bool padded,
                                    double regularization = 1.0);

struct KktResiduals {
  Vector k_x;
  Vector k_u;
  double k_nstar = 0.0;
  double sigma = 0.0;
};

/// sum_i w(i,n*) dw/dn*(i,n*) |f_ter(i)|^2 over the grid, with w sparsified
/// the same way as in the assembled rows. `squared_errors[i]` is
/// |f_ter(grid i)|^2.
double sigma(const Vector& squared_errors, double n_star, const WeightParams& weights);

/// Squared terminal errors on the grid i = 0..N-1.
Vector grid_squared_errors(const TimeOptimalProblem& problem, const Vector& z);

/// Stationarity of 0.5 |level-1 rows|^2 in x, u and n* (ADTOC only).
KktResiduals kkt_residuals(const TimeOptimalProblem& problem, const Vector& z);

/// Newton step on K_n*(n*) with x, u frozen. Throws SingularityError when
/// the curvature is below 1e-14 in magnitude.
double newton_step_nstar(const TimeOptimalProblem& problem, const Vector& z);

/// T* = n* dt.
double report_tstar(double n_star, double dt);

}  // namespace hltoc
