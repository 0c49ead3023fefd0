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

#include "hltoc/models.hpp"

#include <cmath>
#include <string>
#include <utility>

#include <Eigen/LU>

#include "hltoc/errors.hpp"

namespace hltoc {

DynamicsModel::DynamicsModel(double dt, Vector u_min, Vector u_max, Vector x0)
    : dt_(dt), u_min_(std::move(u_min)), u_max_(std::move(u_max)), x0_(std::move(x0)) {
  if (!(dt_ > 0.0)) throw DomainError("time step must be positive");
  if (u_min_.size() != u_max_.size() || u_min_.size() == 0) {
    throw StructuralError("control bound vectors must be non-empty and equally sized");
  }
  for (Eigen::Index j = 0; j < u_min_.size(); ++j) {
    if (!(u_min_[j] < u_max_[j])) {
      throw DomainError("u_min must be strictly below u_max in component " +
                        std::to_string(j));
    }
  }
}

void DynamicsModel::check_dims(const Vector& x, const Vector& u, const Vector& x_next) const {
  if (x.size() != state_dim() || x_next.size() != state_dim() || u.size() != control_dim()) {
    throw StructuralError(name() + ": state/control dimension mismatch");
  }
}

// --- point mass -------------------------------------------------------------

namespace {

Vector default_point_mass_x0(Vector x0) {
  if (x0.size() == 0) {
    x0 = Vector(2);
    x0 << 1.0, 0.0;
  }
  if (x0.size() != 2) throw StructuralError("point mass state is [q, qdot]");
  return x0;
}

}  // namespace

PointMass::PointMass(double dt, double mass, double force_limit, Vector x0)
    : DynamicsModel(dt, Vector::Constant(1, -force_limit), Vector::Constant(1, force_limit),
                    default_point_mass_x0(std::move(x0))),
      mass_(mass) {
  if (!(mass > 0.0)) throw DomainError("mass must be positive");
}

Vector PointMass::residual(const Vector& x, const Vector& u, const Vector& x_next) const {
  check_dims(x, u, x_next);
  Vector r(2);
  r[0] = x_next[0] - x[0] - dt() * x[1];
  r[1] = x_next[1] - x[1] - dt() / mass_ * u[0];
  return r;
}

DynamicsJacobians PointMass::jacobians(const Vector& x, const Vector& u,
                                       const Vector& x_next) const {
  check_dims(x, u, x_next);
  DynamicsJacobians j;
  j.d_x.resize(2, 2);
  j.d_x << -1.0, -dt(), 0.0, -1.0;
  j.d_x_next = Matrix::Identity(2, 2);
  j.d_u.resize(2, 1);
  j.d_u << 0.0, -dt() / mass_;
  return j;
}

Vector PointMass::step(const Vector& x, const Vector& u) const {
  check_dims(x, u, x);
  Vector next(2);
  next[0] = x[0] + dt() * x[1];
  next[1] = x[1] + dt() / mass_ * u[0];
  return next;
}

// --- two-link arm -----------------------------------------------------------

namespace {

Vector default_arm_x0(Vector x0) {
  if (x0.size() == 0) x0 = Vector::Zero(4);
  if (x0.size() != 4) throw StructuralError("two-link state is [q1, q2, q1dot, q2dot]");
  return x0;
}

// Inertial constants of two uniform rods.
struct ArmInertia {
  double a1;     // M11 without the cos(q2) term
  double a2;     // M12 without the cos(q2) term (== M22)
  double beta;   // m2 l1 lc2
  double grav1;  // (m1 lc1 + m2 l1) g
  double grav2;  // m2 lc2 g
};

ArmInertia inertia(const ArmParams& p) {
  const double lc1 = 0.5 * p.l1;
  const double lc2 = 0.5 * p.l2;
  const double i1 = p.m1 * p.l1 * p.l1 / 12.0;
  const double i2 = p.m2 * p.l2 * p.l2 / 12.0;
  const double g = p.gravity ? p.g : 0.0;
  ArmInertia c;
  c.a1 = p.m1 * lc1 * lc1 + i1 + p.m2 * (p.l1 * p.l1 + lc2 * lc2) + i2;
  c.a2 = p.m2 * lc2 * lc2 + i2;
  c.beta = p.m2 * p.l1 * lc2;
  c.grav1 = (p.m1 * lc1 + p.m2 * p.l1) * g;
  c.grav2 = p.m2 * lc2 * g;
  return c;
}

}  // namespace

TwoLinkArm::TwoLinkArm(double dt, ArmParams params, Vector x0)
    : DynamicsModel(dt, Vector::Constant(2, -params.torque_limit),
                    Vector::Constant(2, params.torque_limit), default_arm_x0(std::move(x0))),
      params_(params) {
  if (!(params_.l1 > 0.0 && params_.l2 > 0.0 && params_.m1 > 0.0 && params_.m2 > 0.0)) {
    throw DomainError("link lengths and masses must be positive");
  }
}

Eigen::Matrix2d TwoLinkArm::mass_matrix(const Eigen::Vector2d& q) const {
  const ArmInertia c = inertia(params_);
  const double c2 = std::cos(q[1]);
  Eigen::Matrix2d m;
  m(0, 0) = c.a1 + 2.0 * c.beta * c2;
  m(0, 1) = c.a2 + c.beta * c2;
  m(1, 0) = m(0, 1);
  m(1, 1) = c.a2;
  return m;
}

Eigen::Vector2d TwoLinkArm::coriolis(const Eigen::Vector2d& q, const Eigen::Vector2d& qd) const {
  const ArmInertia c = inertia(params_);
  const double s2 = std::sin(q[1]);
  return {-c.beta * s2 * (2.0 * qd[0] * qd[1] + qd[1] * qd[1]), c.beta * s2 * qd[0] * qd[0]};
}

Eigen::Vector2d TwoLinkArm::gravity_torque(const Eigen::Vector2d& q) const {
  const ArmInertia c = inertia(params_);
  const double c12 = std::cos(q[0] + q[1]);
  return {c.grav1 * std::cos(q[0]) + c.grav2 * c12, c.grav2 * c12};
}

Vector TwoLinkArm::residual(const Vector& x, const Vector& u, const Vector& x_next) const {
  check_dims(x, u, x_next);
  const Eigen::Vector2d q = x.head<2>();
  const Eigen::Vector2d qd = x.tail<2>();
  const Eigen::Vector2d tau = u.head<2>();
  Vector r(4);
  r.head<2>() = x_next.head<2>() - q - dt() * qd;
  r.tail<2>() = mass_matrix(q) * (x_next.tail<2>() - qd) -
                dt() * (tau - coriolis(q, qd) - gravity_torque(q));
  return r;
}

DynamicsJacobians TwoLinkArm::jacobians(const Vector& x, const Vector& u,
                                        const Vector& x_next) const {
  check_dims(x, u, x_next);
  const ArmInertia c = inertia(params_);
  const double h = dt();
  const Eigen::Vector2d q = x.head<2>();
  const Eigen::Vector2d qd = x.tail<2>();
  const Eigen::Vector2d dv = x_next.tail<2>() - qd;
  const double s1 = std::sin(q[0]);
  const double s2 = std::sin(q[1]);
  const double c2 = std::cos(q[1]);
  const double s12 = std::sin(q[0] + q[1]);
  const Eigen::Matrix2d m = mass_matrix(q);

  // dM/dq2 applied to dv.
  const Eigen::Vector2d dm_dv(-2.0 * c.beta * s2 * dv[0] - c.beta * s2 * dv[1],
                              -c.beta * s2 * dv[0]);

  Eigen::Matrix2d dc_dq = Eigen::Matrix2d::Zero();
  dc_dq(0, 1) = -c.beta * c2 * (2.0 * qd[0] * qd[1] + qd[1] * qd[1]);
  dc_dq(1, 1) = c.beta * c2 * qd[0] * qd[0];
  Eigen::Matrix2d dc_dqd;
  dc_dqd(0, 0) = -2.0 * c.beta * s2 * qd[1];
  dc_dqd(0, 1) = -2.0 * c.beta * s2 * (qd[0] + qd[1]);
  dc_dqd(1, 0) = 2.0 * c.beta * s2 * qd[0];
  dc_dqd(1, 1) = 0.0;

  Eigen::Matrix2d dg_dq;
  dg_dq(0, 0) = -c.grav1 * s1 - c.grav2 * s12;
  dg_dq(0, 1) = -c.grav2 * s12;
  dg_dq(1, 0) = -c.grav2 * s12;
  dg_dq(1, 1) = -c.grav2 * s12;

  DynamicsJacobians j;
  j.d_x = Matrix::Zero(4, 4);
  j.d_x.block<2, 2>(0, 0) = -Eigen::Matrix2d::Identity();
  j.d_x.block<2, 2>(0, 2) = -h * Eigen::Matrix2d::Identity();
  j.d_x.block<2, 2>(2, 0) = h * (dc_dq + dg_dq);
  j.d_x.block<2, 1>(2, 1) += dm_dv;
  j.d_x.block<2, 2>(2, 2) = -m + h * dc_dqd;

  j.d_x_next = Matrix::Zero(4, 4);
  j.d_x_next.block<2, 2>(0, 0) = Eigen::Matrix2d::Identity();
  j.d_x_next.block<2, 2>(2, 2) = m;

  j.d_u = Matrix::Zero(4, 2);
  j.d_u.block<2, 2>(2, 0) = -h * Eigen::Matrix2d::Identity();
  return j;
}

Vector TwoLinkArm::step(const Vector& x, const Vector& u) const {
  check_dims(x, u, x);
  const Eigen::Vector2d q = x.head<2>();
  const Eigen::Vector2d qd = x.tail<2>();
  const Eigen::Vector2d rhs = u.head<2>() - coriolis(q, qd) - gravity_torque(q);
  const Eigen::Vector2d qdd = mass_matrix(q).lu().solve(rhs);
  Vector next(4);
  next.head<2>() = q + dt() * qd;
  next.tail<2>() = qd + dt() * qdd;
  return next;
}

Eigen::Vector2d forward_kinematics(const ArmParams& arm, const Eigen::Vector2d& q) {
  const double q12 = q[0] + q[1];
  return {arm.l1 * std::cos(q[0]) + arm.l2 * std::cos(q12),
          arm.l1 * std::sin(q[0]) + arm.l2 * std::sin(q12)};
}

Eigen::Matrix2d forward_kinematics_jacobian(const ArmParams& arm, const Eigen::Vector2d& q) {
  const double q12 = q[0] + q[1];
  Eigen::Matrix2d j;
  j(0, 0) = -arm.l1 * std::sin(q[0]) - arm.l2 * std::sin(q12);
  j(0, 1) = -arm.l2 * std::sin(q12);
  j(1, 0) = arm.l1 * std::cos(q[0]) + arm.l2 * std::cos(q12);
  j(1, 1) = arm.l2 * std::cos(q12);
  return j;
}

// --- tasks ------------------------------------------------------------------

StateTask::StateTask(Vector desired) : TaskFunction(std::move(desired)) {
  if (task_dim() == 0) throw StructuralError("state task needs a non-empty target");
}

Vector StateTask::value(const Vector& x) const {
  if (x.size() != task_dim()) throw StructuralError("state task: dimension mismatch");
  return x;
}

Matrix StateTask::jacobian(const Vector& x) const {
  if (x.size() != task_dim()) throw StructuralError("state task: dimension mismatch");
  return Matrix::Identity(task_dim(), task_dim());
}

EndEffectorTask::EndEffectorTask(ArmParams arm, Vector desired)
    : TaskFunction(std::move(desired)), arm_(arm) {
  if (task_dim() != 2) throw StructuralError("end-effector target is a planar point");
}

Vector EndEffectorTask::value(const Vector& x) const {
  if (x.size() != 4) throw StructuralError("end-effector task: dimension mismatch");
  return forward_kinematics(arm_, x.head<2>());
}

Matrix EndEffectorTask::jacobian(const Vector& x) const {
  if (x.size() != 4) throw StructuralError("end-effector task: dimension mismatch");
  Matrix j = Matrix::Zero(2, 4);
  j.leftCols<2>() = forward_kinematics_jacobian(arm_, x.head<2>());
  return j;
}

}  // namespace hltoc
