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
#include <string>

#include <Eigen/Core>

namespace hltoc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Partial derivatives of one explicit-Euler dynamics residual
/// f(x_i, u_i, x_{i+1}) with respect to each argument.
struct DynamicsJacobians {
  Matrix d_x;       // n_x x n_x
  Matrix d_x_next;  // n_x x n_x
  Matrix d_u;       // n_x x n_u
};

/// A discrete system x_{i+1} = x_i + dt * xdot_i written in residual form.
/// Implementations are immutable once constructed.
class DynamicsModel {
 public:
  virtual ~DynamicsModel() = default;

  virtual std::string name() const = 0;

  int state_dim() const { return static_cast<int>(x0_.size()); }
  int control_dim() const { return static_cast<int>(u_min_.size()); }
  double dt() const { return dt_; }
  const Vector& u_min() const { return u_min_; }
  const Vector& u_max() const { return u_max_; }
  const Vector& x0() const { return x0_; }

  /// Zero iff (x, u, x_next) satisfies one explicit-Euler step.
  virtual Vector residual(const Vector& x, const Vector& u, const Vector& x_next) const = 0;
  virtual DynamicsJacobians jacobians(const Vector& x, const Vector& u,
                                      const Vector& x_next) const = 0;
  /// The x_next for which residual() vanishes.
  virtual Vector step(const Vector& x, const Vector& u) const = 0;

 protected:
  DynamicsModel(double dt, Vector u_min, Vector u_max, Vector x0);

  void check_dims(const Vector& x, const Vector& u, const Vector& x_next) const;

 private:
  double dt_;
  Vector u_min_;
  Vector u_max_;
  Vector x0_;
};

/// Unit point mass on a line, state [q, qdot], force input.
class PointMass final : public DynamicsModel {
 public:
  explicit PointMass(double dt, double mass = 1.0, double force_limit = 10.0,
                     Vector x0 = Vector());

  std::string name() const override { return "point_mass"; }
  double mass() const { return mass_; }

  Vector residual(const Vector& x, const Vector& u, const Vector& x_next) const override;
  DynamicsJacobians jacobians(const Vector& x, const Vector& u,
                              const Vector& x_next) const override;
  Vector step(const Vector& x, const Vector& u) const override;

 private:
  double mass_;
};

struct ArmParams {
  double l1 = 1.25;
  double l2 = 0.75;
  double m1 = 1.0;
  double m2 = 1.0;
  double torque_limit = 5.0;
  /// Gravity along -y of the motion plane. Off by default: the arm moves in a
  /// horizontal plane.
  bool gravity = false;
  double g = 9.81;
};

/// Planar two-link arm with uniform-rod links, state [q1, q2, q1dot, q2dot].
/// The residual is kept free of a mass-matrix inverse:
///   q_{i+1} - q_i - dt qdot_i
///   M(q_i)(qdot_{i+1} - qdot_i) - dt (tau_i - c(q_i, qdot_i) - g(q_i))
class TwoLinkArm final : public DynamicsModel {
 public:
  explicit TwoLinkArm(double dt, ArmParams params = {}, Vector x0 = Vector());

  std::string name() const override { return "two_link"; }
  const ArmParams& params() const { return params_; }

  Eigen::Matrix2d mass_matrix(const Eigen::Vector2d& q) const;
  /// Velocity-product (Coriolis/centrifugal) torques c(q, qdot).
  Eigen::Vector2d coriolis(const Eigen::Vector2d& q, const Eigen::Vector2d& qd) const;
  Eigen::Vector2d gravity_torque(const Eigen::Vector2d& q) const;

  Vector residual(const Vector& x, const Vector& u, const Vector& x_next) const override;
  DynamicsJacobians jacobians(const Vector& x, const Vector& u,
                              const Vector& x_next) const override;
  Vector step(const Vector& x, const Vector& u) const override;

 private:
  ArmParams params_;
};

Eigen::Vector2d forward_kinematics(const ArmParams& arm, const Eigen::Vector2d& q);
Eigen::Matrix2d forward_kinematics_jacobian(const ArmParams& arm, const Eigen::Vector2d& q);

/// Terminal task f_ter(x) = f_task(x) - f_d.
class TaskFunction {
 public:
  virtual ~TaskFunction() = default;
  virtual std::string name() const = 0;
  virtual int state_dim() const = 0;
  int task_dim() const { return static_cast<int>(desired_.size()); }
  const Vector& desired() const { return desired_; }

  virtual Vector value(const Vector& x) const = 0;
  virtual Matrix jacobian(const Vector& x) const = 0;
  Vector residual(const Vector& x) const { return value(x) - desired_; }

 protected:
  explicit TaskFunction(Vector desired) : desired_(std::move(desired)) {}

 private:
  Vector desired_;
};

/// f_task(x) = x.
class StateTask final : public TaskFunction {
 public:
  explicit StateTask(Vector desired);
  std::string name() const override { return "state"; }
  int state_dim() const override { return task_dim(); }
  Vector value(const Vector& x) const override;
  Matrix jacobian(const Vector& x) const override;
};

/// f_task(x) = end-effector position of the two-link arm.
class EndEffectorTask final : public TaskFunction {
 public:
  EndEffectorTask(ArmParams arm, Vector desired);
  std::string name() const override { return "end_effector"; }
  int state_dim() const override { return 4; }
  Vector value(const Vector& x) const override;
  Matrix jacobian(const Vector& x) const override;

 private:
  ArmParams arm_;
};

}  // namespace hltoc
