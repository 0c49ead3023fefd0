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

#include <vector>

#include "hltoc/problem.hpp"

namespace hltoc {

struct HlspOptions {
  /// Inequality row g is active when g(z) > -activation_margin.
  double activation_margin = 1e-8;
  /// Relative pivot threshold of the rank-revealing factorizations.
  double rank_tol = 1e-10;
  /// Damping floor used whenever a level is solved as an inequality QP.
  double qp_min_damping = 1e-12;
};

struct LinearizedLevel {
  Vector residual;
  Matrix jacobian;
  std::vector<RowKind> kinds;
  /// Equality rows plus inequality rows within the activation margin. The
  /// remaining inequality rows are kept satisfied by the step. Sorted.
  std::vector<int> active_rows;

  bool is_active(int row) const;
};

struct LinearizedHierarchy {
  int num_variables = 0;
  double damping = 0.0;
  std::vector<LinearizedLevel> levels;
};

struct HlspSolution {
  Vector step;
  /// Per level: linearized slack J dz + r for equality rows,
  /// max(0, J dz + g) for active inequality rows, 0 for inactive rows.
  std::vector<Vector> slacks;
  /// Step accumulated after each level; the last one equals `step`.
  std::vector<Vector> partial_steps;
  /// Dimension of the accumulated null space after each level.
  std::vector<int> nullspace_dims;
};

/// Linearizes the first `max_levels` levels (all when negative) at z.
/// Throws EvaluationError carrying the level and row for non-finite entries.
LinearizedHierarchy linearize(const HierarchicalProblem& problem, const Vector& z,
                              double damping, const HlspOptions& options = {},
                              int max_levels = -1);

/// Lexicographic cascade. For each level in turn the damped least-squares
/// problem min |J Z y + r|^2 + damping |y|^2 is solved in the null space Z of
/// all higher-priority equality rows, subject to the linearized inequality
/// rows of higher levels relaxed by their optimal slack. Ties are broken by
/// the minimum-norm increment. Dense algebra, O(n^3) per level.
HlspSolution solve_cascade(const LinearizedHierarchy& lin, const HlspOptions& options = {});

/// |v_l| for every level of a cascade solution.
Vector slack_norms(const HlspSolution& solution);

}  // namespace hltoc
