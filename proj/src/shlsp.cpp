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

#include "hltoc/shlsp.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hltoc/errors.hpp"

namespace hltoc {

void SolverConfig::validate() const {
  if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
  if (!(step_tolerance > 0.0) || !(kkt_tolerance > 0.0) || !(filter_slack > 0.0)) {
    throw ConfigError("solver tolerances must be positive");
  }
  if (!(initial_damping >= 0.0) || !(damping_increase > 1.0) ||
      !(damping_decrease > 0.0 && damping_decrease < 1.0)) {
    throw ConfigError("invalid damping schedule");
  }
  if (!(min_damping >= 0.0) || !(max_damping > min_damping)) {
    throw ConfigError("invalid damping bounds");
  }
  if (max_corrections < 0) throw ConfigError("max_corrections must be >= 0");
  if (trade_window < 2) throw ConfigError("trade_window must be >= 2");
}

std::string to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::kConverged:
      return "converged";
    case SolveStatus::kStalled:
      return "stalled";
    case SolveStatus::kBudgetExhausted:
      return "budget_exhausted";
  }
  return "unknown";
}

std::string format_iteration(const IterationRecord& record) {
  std::ostringstream out;
  char buf[64];
  out << "iter " << record.iteration;
  std::snprintf(buf, sizeof buf, "%.6e", record.damping);
  out << " lambda " << buf << " accepted " << (record.accepted ? 1 : 0);
  std::snprintf(buf, sizeof buf, "%.6e", record.step_norm);
  out << " step " << buf << " corrections " << record.corrections << " levels "
      << record.levels_used << " norms";
  for (Eigen::Index l = 0; l < record.level_norms.size(); ++l) {
    std::snprintf(buf, sizeof buf, " %.17g", record.level_norms[l]);
    out << buf;
  }
  return out.str();
}

bool accept_step(const Vector& old_norms, const Vector& new_norms, double slack) {
  if (old_norms.size() != new_norms.size()) {
    throw StructuralError("accept_step: norm vectors differ in length");
  }
  for (Eigen::Index l = 0; l < old_norms.size(); ++l) {
    const double diff = new_norms[l] - old_norms[l];
    if (std::abs(diff) > slack) return diff < 0.0;
  }
  return true;
}

bool is_lexicographically_monotone(const SolveReport& report, double slack) {
  Vector current = report.initial_norms;
  for (const IterationRecord& rec : report.history) {
    if (!rec.accepted) continue;
    if (!accept_step(current, rec.level_norms, slack)) return false;
    current = rec.level_norms;
  }
  return true;
}

namespace {

// Index of the first level the step made worse, -2 when the first level that
// changed improved, -1 when no level changed.
int first_worse_level(const Vector& old_norms, const Vector& new_norms, double slack) {
  for (Eigen::Index l = 0; l < old_norms.size(); ++l) {
    const double diff = new_norms[l] - old_norms[l];
    if (std::abs(diff) > slack) return diff > 0.0 ? static_cast<int>(l) : -2;
  }
  return -1;
}


// Gauss-Newton corrections of the leading levels a trial step made worse. The
// linearized residuals of the remaining levels are held where the step left
// them. Returns true once the trial passes the filter; a strict filter also
// demands that some level actually improved.
bool restore_leading_levels(const HierarchicalProblem& problem, const SolverConfig& config,
                            const Vector& norms, Vector& trial, Vector& trial_norms,
                            bool strict, int& corrections) {
  const int levels = problem.num_levels();
  for (int c = 0; c < config.max_corrections; ++c) {
    const int worse = first_worse_level(norms, trial_norms, config.filter_slack);
    if (worse < 0 || worse >= levels - 1) return false;
    LinearizedHierarchy lin = linearize(problem, trial, config.min_damping, config.hlsp);
    for (int l = worse + 1; l < levels; ++l) {
      LinearizedLevel& lv = lin.levels[static_cast<size_t>(l)];
      for (Eigen::Index r = 0; r < lv.residual.size(); ++r) {
        if (lv.kinds[static_cast<size_t>(r)] == RowKind::kEquality) lv.residual[r] = 0.0;
      }
    }
    const HlspSolution corr = solve_cascade(lin, config.hlsp);
    const Vector corrected = trial + corr.step;
    const Vector corrected_norms = problem.level_norms(corrected);
    ++corrections;
    if (!accept_step(trial_norms.head(worse + 1), corrected_norms.head(worse + 1), 0.0)) {
      return false;
    }
    trial = corrected;
    trial_norms = corrected_norms;
    const bool better = strict ? first_worse_level(norms, trial_norms, config.filter_slack) == -2
                               : accept_step(norms, trial_norms, config.filter_slack);
    if (better) return true;
  }
  return false;
}

// Small norms are judged relative to themselves, so a nearly feasible level
// keeps converging; below the filter slack no decrease would register.
bool predicts_no_decrease(const Vector& norms, const Vector& predicted, double tol,
                          double slack) {
  for (Eigen::Index l = 0; l < norms.size(); ++l) {
    const double allowed = std::max(tol * std::min(1.0, norms[l]), slack);
    if (norms[l] - predicted[l] > allowed) return false;
  }
  return true;
}

// Lower levels only move now by giving up a higher level: the first level
// that drifted by more than the slack over the window got worse, and it
// carries a real residual (on zero-residual levels that drift is noise).
bool trading_levels(const std::vector<IterationRecord>& history, const Vector& initial,
                    const SolverConfig& config) {
  const size_t w = static_cast<size_t>(config.trade_window);
  if (history.size() < w) return false;
  const Vector& then = history.size() == w ? initial : history[history.size() - w - 1].level_norms;
  const Vector& now = history.back().level_norms;
  for (Eigen::Index l = 0; l < now.size(); ++l) {
    const double drift = now[l] - then[l];
    if (now[l] <= config.kkt_tolerance) {
      if (std::abs(drift) > config.kkt_tolerance) return false;
      continue;
    }
    if (std::abs(drift) > config.filter_slack) return drift > 0.0;
  }
  return false;
}

}  // namespace

std::pair<Vector, SolveReport> solve(const HierarchicalProblem& problem, const Vector& z0,
                                     const SolverConfig& config,
                                     const IterationObserver& observer) {
  config.validate();
  if (z0.size() != problem.num_variables()) {
    throw StructuralError("initial guess has the wrong dimension");
  }
  if (!z0.allFinite()) throw DomainError("initial guess must be finite");

  const auto start = std::chrono::steady_clock::now();
  SolveReport report;
  Vector z = z0;
  Vector norms = problem.level_norms(z);
  report.initial_norms = norms;
  double damping = config.initial_damping;
  const int levels = problem.num_levels();

  for (int it = 1; it <= config.max_iterations; ++it) {
    IterationRecord rec;
    rec.iteration = it;
    rec.damping = damping;

    const LinearizedHierarchy lin = linearize(problem, z, damping, config.hlsp);
    const HlspSolution sol = solve_cascade(lin, config.hlsp);
    rec.step_norm = sol.step.norm();

    const bool tiny_step = rec.step_norm <= config.step_tolerance * (1.0 + z.norm());
    bool stationary = predicts_no_decrease(norms, slack_norms(sol), config.kkt_tolerance,
                                           config.filter_slack);
    if (stationary && damping > config.min_damping) {
      // a heavily damped step predicts nothing; ask the undamped cascade
      const HlspSolution probe =
          solve_cascade(linearize(problem, z, config.min_damping, config.hlsp), config.hlsp);
      stationary = predicts_no_decrease(norms, slack_norms(probe), config.kkt_tolerance,
                                        config.filter_slack);
    }

    if (tiny_step || stationary) {
      rec.level_norms = norms;
      rec.accepted = false;
      report.history.push_back(rec);
      if (observer) observer(rec);
      report.iterations = it;
      report.status = SolveStatus::kConverged;
      report.stop_reason = tiny_step ? "step" : "stationary";
      break;
    }

    // Try the full step first, then the steps that stop after fewer levels.
    bool accepted = false;
    Vector trial;
    Vector trial_norms;
    for (int used = levels; used >= 1 && !accepted; --used) {
      const Vector& step = sol.partial_steps[static_cast<size_t>(used - 1)];
      if (used < levels &&
          (step - sol.partial_steps[static_cast<size_t>(used)]).norm() <= 1e-14 * (1.0 + step.norm())) {
        continue;
      }
      trial = z + step;
      trial_norms = problem.level_norms(trial);
      accepted = used == levels
                     ? accept_step(norms, trial_norms, config.filter_slack)
                     : first_worse_level(norms, trial_norms, config.filter_slack) == -2;
      accepted = accepted || restore_leading_levels(problem, config, norms, trial, trial_norms,
                                                    used < levels, rec.corrections);
      if (accepted) rec.levels_used = used;
    }

    rec.accepted = accepted;
    if (accepted) {
      z = trial;
      norms = trial_norms;
    }
    if (accepted) {
      damping = std::max(config.min_damping, damping * config.damping_decrease);
    } else {
      damping *= config.damping_increase;
    }
    rec.level_norms = norms;
    report.history.push_back(rec);
    if (observer) observer(rec);
    report.iterations = it;

    if (!accepted && damping > config.max_damping) {
      report.status = SolveStatus::kStalled;
      report.stop_reason = "stalled";
      break;
    }
    if (trading_levels(report.history, report.initial_norms, config)) {
      report.status = SolveStatus::kConverged;
      report.stop_reason = "trade_off";
      break;
    }
    if (it == config.max_iterations) report.status = SolveStatus::kBudgetExhausted;
  }

  report.final_z = z;
  report.final_norms = norms;
  report.wall_time_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {z, report};
}

}  // namespace hltoc
