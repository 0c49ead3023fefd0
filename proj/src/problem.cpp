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

#include "hltoc/problem.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "hltoc/errors.hpp"

namespace hltoc {

double level_norm(const std::vector<RowKind>& kinds, const Vector& residual) {
  double sum = 0.0;
  for (Eigen::Index r = 0; r < residual.size(); ++r) {
    double v = residual[r];
    if (kinds[static_cast<size_t>(r)] == RowKind::kUpperInequality) v = std::max(0.0, v);
    sum += v * v;
  }
  return std::sqrt(sum);
}

HierarchicalProblem::HierarchicalProblem(int num_variables) : num_variables_(num_variables) {
  if (num_variables <= 0) throw StructuralError("a problem needs at least one variable");
}

void HierarchicalProblem::add_level(Level level) {
  if (!level.evaluate) throw StructuralError("level '" + level.name + "' has no evaluator");
  levels_.push_back(std::move(level));
}

LevelEvaluation HierarchicalProblem::evaluate(int l, const Vector& z, bool with_jacobian) const {
  if (z.size() != num_variables_) {
    throw StructuralError("variable vector has size " + std::to_string(z.size()) +
                          ", expected " + std::to_string(num_variables_));
  }
  const Level& lvl = level(l);
  LevelEvaluation out;
  out.residual.resize(lvl.rows());
  if (with_jacobian) out.jacobian.setZero(lvl.rows(), num_variables_);
  lvl.evaluate(z, out.residual, with_jacobian ? &out.jacobian : nullptr);
  if (out.residual.size() != lvl.rows() ||
      (with_jacobian &&
       (out.jacobian.rows() != lvl.rows() || out.jacobian.cols() != num_variables_))) {
    throw StructuralError("level '" + lvl.name + "' evaluator returned wrong dimensions");
  }
  for (int r = 0; r < lvl.rows(); ++r) {
    if (!std::isfinite(out.residual[r])) {
      throw EvaluationError(l, r, "non-finite residual in level '" + lvl.name + "' row " +
                                      std::to_string(r));
    }
    if (with_jacobian && !out.jacobian.row(r).allFinite()) {
      throw EvaluationError(l, r, "non-finite Jacobian entry in level '" + lvl.name +
                                      "' row " + std::to_string(r));
    }
  }
  return out;
}

Vector HierarchicalProblem::level_norms(const Vector& z) const {
  Vector norms(num_levels());
  for (int l = 0; l < num_levels(); ++l) {
    norms[l] = level_norm(level(l).kinds, evaluate(l, z, false).residual);
  }
  return norms;
}

}  // namespace hltoc
