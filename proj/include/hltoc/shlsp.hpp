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
#include <utility>
#include <vector>

#include "hltoc/hlsp.hpp"

namespace hltoc {

/// Outer-loop settings. Globalization is an adaptive Levenberg damping shared
/// by all levels plus a lexicographic step filter.
struct SolverConfig {
  int max_iterations = 300;
  double step_tolerance = 1e-10;
  double kkt_tolerance = 1e-8;
  double initial_damping = 1e-4;
  double damping_increase = 10.0;
  double damping_decrease = 0.5;
  double min_damping = 1e-12;
  double max_damping = 1e12;
  /// Slack of the lexicographic filter comparison.
  double filter_slack = 1e-12;
  /// Gauss-Newton corrections on the leading levels tried before a rejected
  /// step is given up.
  int max_corrections = 5;
  /// Iterations looked back over by the trade-off test: stop once a level
  /// with a nonzero residual keeps rising by more than the filter slack while
  /// every level above it is flat.
  int trade_window = 25;
  HlspOptions hlsp;

  void validate() const;
};

enum class SolveStatus {
  kConverged,        // step, stationarity or trade-off test met
  kStalled,          // damping ceiling reached without an acceptable step
  kBudgetExhausted,  // max_iterations used up; best iterate returned
};

std::string to_string(SolveStatus status);

struct IterationRecord {
  int iteration = 0;
  Vector level_norms;  // nonlinear norms of the iterate after this iteration
  double damping = 0.0;  // damping used for this iteration's step
  double step_norm = 0.0;
  bool accepted = false;
  int corrections = 0;
  int levels_used = 0;  // levels whose increments the accepted step contains
};

/// One line of the iteration log:
/// "iter <k> lambda <l> accepted <0|1> step <s> corrections <c> levels <u> norms <n1> <n2> ..."
std::string format_iteration(const IterationRecord& record);

struct SolveReport {
  SolveStatus status = SolveStatus::kBudgetExhausted;
  std::string stop_reason = "budget";  // step | stationary | trade_off | stalled | budget
  int iterations = 0;
  Vector initial_norms;
  std::vector<IterationRecord> history;  // one entry per iteration
  Vector final_z;
  Vector final_norms;
  double wall_time_seconds = 0.0;

  bool budget_exhausted() const { return status == SolveStatus::kBudgetExhausted; }
};

using IterationObserver = std::function<void(const IterationRecord&)>;

/// Lexicographic descent with slack: true iff, at the first level where the
/// norms differ by more than `slack`, the new norm is the smaller one. Equal
/// vectors (within slack) are accepted.
bool accept_step(const Vector& old_norms, const Vector& new_norms, double slack);

/// Checks that accepted iterates never increase the norm vector
/// lexicographically (up to `slack` per comparison).
bool is_lexicographically_monotone(const SolveReport& report, double slack);

/// Sequential HLSP: linearize, solve the cascade, filter, adapt damping.
/// Evaluation errors propagate; an exhausted budget is reported in the
/// status, not thrown.
std::pair<Vector, SolveReport> solve(const HierarchicalProblem& problem, const Vector& z0,
                                     const SolverConfig& config = {},
                                     const IterationObserver& observer = {});

}  // namespace hltoc
