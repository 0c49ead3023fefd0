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

#include <functional>
#include <string>
#include <vector>

#include "hltoc/models.hpp"

namespace hltoc {

/// Row semantics inside a priority level. Inequality rows read g(z) <= 0.
enum class RowKind { kEquality, kUpperInequality };

struct LevelEvaluation {
  Vector residual;
  Matrix jacobian;  // empty when not requested
};

/// One priority level: a residual function with its Jacobian provider.
struct Level {
  using Evaluator = std::function<void(const Vector& z, Vector& residual, Matrix* jacobian)>;

  std::string name;
  std::vector<RowKind> kinds;
  Evaluator evaluate;

  int rows() const { return static_cast<int>(kinds.size()); }
};

/// Norm of the nonlinear slack of a level: equality rows count fully,
/// inequality rows only by their violation max(0, g).
double level_norm(const std::vector<RowKind>& kinds, const Vector& residual);

/// Ordered stack of levels, level 0 has the highest priority.
class HierarchicalProblem {
 public:
  explicit HierarchicalProblem(int num_variables);

  void add_level(Level level);

  int num_variables() const { return num_variables_; }
  int num_levels() const { return static_cast<int>(levels_.size()); }
  const Level& level(int l) const { return levels_.at(static_cast<size_t>(l)); }

  /// Evaluates one level and validates dimensions and finiteness. Throws
  /// StructuralError on a size mismatch and EvaluationError on NaN/Inf.
  LevelEvaluation evaluate(int l, const Vector& z, bool with_jacobian) const;

  Vector level_norms(const Vector& z) const;

 private:
  int num_variables_;
  std::vector<Level> levels_;
};

}  // namespace hltoc
