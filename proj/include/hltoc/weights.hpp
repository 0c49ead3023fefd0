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

// Smoothed heaviside step and the terminal-row weight built on it.
//
//   h(i, n*)  = 0.5 + 0.5 tanh(k (i - n*))
//   w(i, n*)  = h(i, n*) (i - n* + 1)^k
//
// All derivatives are taken with respect to the switch variable n*.

namespace hltoc {

struct WeightParams {
  int k = 4;
  double epsilon = 3.4e-4;
  double sparsity_cutoff = 1e-20;

  /// Throws DomainError unless k >= 1, 0 < epsilon < 0.5, cutoff >= 0.
  void validate() const;
};

/// k (i - n*) is clamped to this from above, where h is 1 in double precision.
/// The logistic form needs no clamp below: it underflows to 0 instead.
inline constexpr double kTanhArgumentClamp = 40.0;

double heaviside(double i, double n_star, int k);
double heaviside_grad_nstar(double i, double n_star, int k);
double heaviside_second_grad_nstar(double i, double n_star, int k);

double weight(double i, double n_star, int k);
double weight_grad_nstar(double i, double n_star, int k);
double weight_second_grad_nstar(double i, double n_star, int k);

/// Steepness for which the step goes from epsilon to 1 - epsilon across a
/// half-cell on either side: h(i-1, i-0.5) = epsilon. k = 2 artanh(1 - 2 eps).
double k_epsilon(double epsilon);

/// Steepness for which h(n*-1, n*) = epsilon (bracket of unit width):
/// k = artanh(1 - 2 eps). This is the pairing k = 4 <-> eps = 3.4e-4.
double k_epsilon_unit_bracket(double epsilon);

/// Smallest integer steepness satisfying the half-cell bracket,
/// ceil(k_epsilon(eps)). The weight polynomial requires an integer power.
int integer_k_epsilon(double epsilon);

/// Inverse of k_epsilon_unit_bracket: eps = 0.5 (1 - tanh(k)).
double epsilon_for_unit_bracket(double k);

/// w -> 0 when |w| < cutoff, otherwise unchanged. Values near one are kept.
double sparsify(double w, double cutoff);

}  // namespace hltoc
