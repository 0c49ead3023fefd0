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

#include <cstdint>
#include <string>
#include <vector>

#include "hltoc/adtoc.hpp"
#include "hltoc/gradcheck.hpp"
#include "hltoc/oracle.hpp"
#include "hltoc/shlsp.hpp"

namespace hltoc {

enum class Scenario { kPointMass, kTwoLink };
enum class Mode { kAdtoc, kDtocFixed, kDtocPadded };

/// Everything one experiment needs. Loaded from "key = value" text (one pair
/// per line, '#' starts a comment) and from "key=value" overrides; keys are
/// listed by config_keys().
struct ExperimentConfig {
  Scenario scenario = Scenario::kPointMass;
  Mode mode = Mode::kAdtoc;
  double dt = 0.1;
  int horizon = 25;
  int k = 4;
  double epsilon = 3.4e-4;
  double sparsity_cutoff = 1e-20;
  double regularization = 1.0;
  int n_star_fixed = -1;           // required by the fixed modes
  double n_star0 = -1.0;           // < 0 selects N/2
  bool n_star0_set = false;
  bool gravity = false;            // two_link only
  int sweep_first = 0;
  int sweep_last = -1;             // < 0 selects N-2
  double feasibility_tol = 1e-6;
  std::string output_dir = "out";
  SolverConfig solver;
  GradientCheckOptions gradients;

  /// Throws ConfigError for inconsistent settings.
  void validate() const;
  /// Non-fatal remarks, e.g. a horizon too short for the expected motion.
  std::vector<std::string> warnings() const;
  double initial_nstar() const { return n_star0_set ? n_star0 : 0.5 * horizon; }
  WeightParams weight_params() const;
};

std::vector<std::string> config_keys();
/// Applies one key/value pair; throws ConfigError for unknown keys or bad values.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);
/// "key=value" form of apply_setting.
void apply_override(ExperimentConfig& config, const std::string& assignment);
ExperimentConfig parse_config(const std::string& text);
/// Throws IoError when the file cannot be read.
ExperimentConfig load_config(const std::string& path);

std::string to_string(Scenario s);
std::string to_string(Mode m);

/// Builds the model/task pair and the hierarchy the config describes.
TimeOptimalProblem build_problem(const ExperimentConfig& config);

struct RunResult {
  SolveReport report;
  Trajectory trajectory;
  Vector task_errors;  // |f_ter(x(j))|, j = 0..N
  double n_star = 0.0;
  double t_star = 0.0;            // n* dt (adtoc) or the fixed n* times dt
  double first_zero_time = 0.0;   // (n* + 1) dt
  double end_error = 0.0;         // |f_ter(x(N))|
  double fixed_error = -1.0;      // fixed modes: terminal error of the constrained rows
  bool has_kkt = false;
  KktResiduals kkt;
  bool lexicographic_monotone = false;
  Vector control_limit;           // u_max of the model
};

RunResult run_experiment(const ExperimentConfig& config);

/// trajectory.csv, report.json and iterations.log inside config.output_dir.
void write_run_outputs(const ExperimentConfig& config, const RunResult& run);

struct SweepRun {
  SweepResult sweep;
  RunResult adtoc;
  SweepAgreement agreement;
};

/// Fixed-mode sweep over [sweep_first, sweep_last] plus an ADTOC run of the
/// same scenario for comparison.
SweepRun run_sweep(const ExperimentConfig& config);
/// sweep.csv, report.json and the ADTOC iterations.log.
void write_sweep_outputs(const ExperimentConfig& config, const SweepRun& run);

struct PropertyOutcome {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SigmaSignCounts {
  int samples = 0;
  int negative = 0;
  int violations = 0;  // sigma >= 0
  int redrawn = 0;     // draws whose weighted terminal rows were all zero
  double largest = -1e300;  // largest non-negative sigma
  double worst_nstar = 0.0;
};

/// Random point-mass trajectories (states uniform in [-1, 1]^2, each step
/// zeroed with probability zero_fraction) and n* uniform in [0, N],
/// redrawn until at least one weighted terminal row is nonzero; classifies
/// the sign of sigma. A cutoff of 0 keeps every weight, however small.
SigmaSignCounts sigma_sign_suite(int horizon, int k, int samples, std::uint64_t seed,
                                 double zero_fraction = 0.3, double sparsity_cutoff = 1e-20);

/// The convergence property suites: sign of sigma, the n* range, the n*
/// stationarity balance and the trend towards the continuous optimum.
std::vector<PropertyOutcome> run_properties(const ExperimentConfig& config);

/// JSON text of reports (stable field names).
std::string run_report_json(const ExperimentConfig& config, const RunResult& run);
std::string gradient_report_json(const GradientReport& report);
std::string property_report_json(const std::vector<PropertyOutcome>& outcomes);

/// Writes text to dir/name, creating dir. Throws IoError.
void write_text_file(const std::string& dir, const std::string& name, const std::string& text);

}  // namespace hltoc
