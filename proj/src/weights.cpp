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

#include "hltoc/weights.hpp"

#include <cmath>
#include <string>

#include "hltoc/errors.hpp"

namespace hltoc {
namespace {

// Step value and its complement 1 - h, both without cancellation.
struct Step {
  double h;
  double one_minus_h;
  bool clamped;
};

Step step(double i, double n_star, int k) {
  double a = k * (i - n_star);
  bool clamped = false;
  // Left tail stays exact: a constant h there, times (i - n* + 1)^k, would
  // leave a sizeable w with a wrong-signed derivative.
  if (a > kTanhArgumentClamp) {
    a = kTanhArgumentClamp;
    clamped = true;
  }
  // 0.5 + 0.5 tanh(a) == 1 / (1 + exp(-2a))
  const double e = std::exp(-2.0 * std::abs(a));
  const double big = 1.0 / (1.0 + e);
  const double small = e / (1.0 + e);
  if (a >= 0.0) return {big, small, clamped};
  return {small, big, clamped};
}

double ipow(double base, int exp) {
  if (exp < 0) return 0.0;
  double result = 1.0;
  for (int n = 0; n < exp; ++n) result *= base;
  return result;
}

void require_k(int k) {
  if (k < 1) throw DomainError("steepness k must be >= 1, got " + std::to_string(k));
}

}  // namespace

void WeightParams::validate() const {
  require_k(k);
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw DomainError("epsilon must lie in (0, 0.5), got " + std::to_string(epsilon));
  }
  if (!(sparsity_cutoff >= 0.0)) {
    throw DomainError("sparsity cutoff must be >= 0");
  }
}

double heaviside(double i, double n_star, int k) {
  require_k(k);
  return step(i, n_star, k).h;
}

double heaviside_grad_nstar(double i, double n_star, int k) {
  require_k(k);
  const Step s = step(i, n_star, k);
  if (s.clamped) return 0.0;
  // -0.5 k (1 - tanh^2) == -2 k h (1 - h)
  return -2.0 * k * s.h * s.one_minus_h;
}

double heaviside_second_grad_nstar(double i, double n_star, int k) {
  require_k(k);
  const Step s = step(i, n_star, k);
  if (s.clamped) return 0.0;
  return 4.0 * k * k * s.h * s.one_minus_h * (s.one_minus_h - s.h);
}

double weight(double i, double n_star, int k) {
  require_k(k);
  return step(i, n_star, k).h * ipow(i - n_star + 1.0, k);
}

double weight_grad_nstar(double i, double n_star, int k) {
  const double d = i - n_star + 1.0;
  const double h = heaviside(i, n_star, k);
  const double dh = heaviside_grad_nstar(i, n_star, k);
  return dh * ipow(d, k) - h * k * ipow(d, k - 1);
}

double weight_second_grad_nstar(double i, double n_star, int k) {
  const double d = i - n_star + 1.0;
  const double h = heaviside(i, n_star, k);
  const double dh = heaviside_grad_nstar(i, n_star, k);
  const double ddh = heaviside_second_grad_nstar(i, n_star, k);
  const double p = ipow(d, k);
  const double dp = -k * ipow(d, k - 1);
  const double ddp = k * (k - 1) * ipow(d, k - 2);
  return ddh * p + 2.0 * dh * dp + h * ddp;
}

double k_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.5)) {
    throw DomainError("k_epsilon: epsilon must lie in (0, 0.5), got " +
                      std::to_string(epsilon));
  }
  return 2.0 * std::atanh((0.5 - epsilon) / 0.5);
}

double k_epsilon_unit_bracket(double epsilon) { return 0.5 * k_epsilon(epsilon); }

int integer_k_epsilon(double epsilon) {
  const double k = k_epsilon(epsilon);
  const int rounded = static_cast<int>(std::ceil(k - 1e-12));
  return rounded < 1 ? 1 : rounded;
}

double epsilon_for_unit_bracket(double k) {
  if (!(k > 0.0)) throw DomainError("steepness must be positive");
  return 0.5 * (1.0 - std::tanh(k));
}

double sparsify(double w, double cutoff) { return std::abs(w) < cutoff ? 0.0 : w; }

}  // namespace hltoc
