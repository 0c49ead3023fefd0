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


#include "hltoc/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

#include "hltoc/errors.hpp"
#include "json.hpp"

namespace hltoc {

using nlohmann::json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

long long parse_integer(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError(key + ": expected an integer, got '" + v + "'");
  }
  return out;
}

int parse_int(const std::string& key, const std::string& v) {
  const long long x = parse_integer(key, v);
  if (x < -1000000000LL || x > 1000000000LL) throw ConfigError(key + ": out of range");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": expected true or false, got '" + v + "'");
}

using Setter = void (*)(ExperimentConfig&, const std::string&, const std::string&);

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"scenario",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         if (v == "point_mass") c.scenario = Scenario::kPointMass;
         else if (v == "two_link") c.scenario = Scenario::kTwoLink;
         else throw ConfigError("scenario: expected point_mass or two_link, got '" + v + "'");
       }},
      {"mode",
       [](ExperimentConfig& c, const std::string&, const std::string& v) {
         if (v == "adtoc") c.mode = Mode::kAdtoc;
         else if (v == "dtoc_fixed") c.mode = Mode::kDtocFixed;
         else if (v == "dtoc_padded") c.mode = Mode::kDtocPadded;
         else throw ConfigError("mode: expected adtoc, dtoc_fixed or dtoc_padded, got '" + v + "'");
       }},
      {"dt", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.dt = parse_double(k, v); }},
      {"N", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.horizon = parse_int(k, v); }},
      {"k", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.k = parse_int(k, v); }},
      {"epsilon", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.epsilon = parse_double(k, v); }},
      {"sparsity_cutoff", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sparsity_cutoff = parse_double(k, v); }},
      {"rho", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.regularization = parse_double(k, v); }},
      {"n_star_fixed", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.n_star_fixed = parse_int(k, v); }},
      {"n_star0",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         c.n_star0 = parse_double(k, v);
         c.n_star0_set = true;
       }},
      {"gravity", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.gravity = parse_bool(k, v); }},
      {"sweep_first", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sweep_first = parse_int(k, v); }},
      {"sweep_last", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.sweep_last = parse_int(k, v); }},
      {"feasibility_tol", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.feasibility_tol = parse_double(k, v); }},
      {"output_dir",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         if (v.empty()) throw ConfigError(k + ": must not be empty");
         c.output_dir = v;
       }},
      {"solver.max_iterations", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.max_iterations = parse_int(k, v); }},
      {"solver.step_tolerance", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.step_tolerance = parse_double(k, v); }},
      {"solver.kkt_tolerance", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.kkt_tolerance = parse_double(k, v); }},
      {"solver.initial_damping", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.initial_damping = parse_double(k, v); }},
      {"solver.damping_increase", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.damping_increase = parse_double(k, v); }},
      {"solver.damping_decrease", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.damping_decrease = parse_double(k, v); }},
      {"solver.min_damping", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.min_damping = parse_double(k, v); }},
      {"solver.max_damping", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.max_damping = parse_double(k, v); }},
      {"solver.filter_slack", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.filter_slack = parse_double(k, v); }},
      {"solver.max_corrections", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.max_corrections = parse_int(k, v); }},
      {"solver.trade_window", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.trade_window = parse_int(k, v); }},
      {"solver.activation_margin", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.hlsp.activation_margin = parse_double(k, v); }},
      {"solver.rank_tol", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.solver.hlsp.rank_tol = parse_double(k, v); }},
      {"gradients.samples", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.gradients.samples = parse_int(k, v); }},
      {"gradients.seed",
       [](ExperimentConfig& c, const std::string& k, const std::string& v) {
         const long long s = parse_integer(k, v);
         if (s < 0) throw ConfigError(k + ": must be >= 0");
         c.gradients.seed = static_cast<std::uint64_t>(s);
       }},
      {"gradients.fd_step", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.gradients.fd_step = parse_double(k, v); }},
      {"gradients.tolerance", [](ExperimentConfig& c, const std::string& k, const std::string& v) { c.gradients.tolerance = parse_double(k, v); }},
      {"gradients.corrupt_block", [](ExperimentConfig& c, const std::string&, const std::string& v) { c.gradients.corrupt_block = v; }},
  };
  return table;
}

// minimum-time reference per scenario, only used to warn about short horizons
double reference_time(Scenario s) { return s == Scenario::kPointMass ? 0.632 : 0.57; }

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json vector_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json run_json(const ExperimentConfig& c, const RunResult& r) {
  json j;
  j["scenario"] = to_string(c.scenario);
  j["mode"] = to_string(c.mode);
  j["dt"] = c.dt;
  j["N"] = c.horizon;
  j["k"] = c.k;
  j["epsilon"] = c.epsilon;
  j["status"] = to_string(r.report.status);
  j["stop_reason"] = r.report.stop_reason;
  j["iterations"] = r.report.iterations;
  j["n_star"] = r.n_star;
  j["t_star"] = r.t_star;
  j["first_zero_time"] = r.first_zero_time;
  j["end_error"] = r.end_error;
  j["fixed_terminal_error"] = r.fixed_error < 0.0 ? json(nullptr) : json(r.fixed_error);
  j["initial_level_norms"] = vector_json(r.report.initial_norms);
  j["final_level_norms"] = vector_json(r.report.final_norms);
  if (r.has_kkt) {
    j["kkt"] = {{"k_x_norm", r.kkt.k_x.norm()},
                {"k_u_norm", r.kkt.k_u.norm()},
                {"k_nstar", r.kkt.k_nstar},
                {"sigma", r.kkt.sigma}};
  } else {
    j["kkt"] = nullptr;
  }
  j["lexicographic_monotone"] = r.lexicographic_monotone;
  j["wall_time_seconds"] = r.report.wall_time_seconds;
  j["warnings"] = c.warnings();
  return j;
}

std::string iteration_log(const SolveReport& report) {
  std::string out;
  for (const IterationRecord& rec : report.history) out += format_iteration(rec) + "\n";
  out += "status " + to_string(report.status) + " reason " + report.stop_reason + "\n";
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt must be positive");
  if (horizon < 2) throw ConfigError("N must be >= 2");
  if (!(regularization >= 0.0)) throw ConfigError("rho must be >= 0");
  if (!(feasibility_tol > 0.0)) throw ConfigError("feasibility_tol must be positive");
  try {
    weight_params().validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (mode != Mode::kAdtoc) {
    if (n_star_fixed < 0) throw ConfigError("fixed modes need n_star_fixed");
    if (n_star_fixed > horizon - 2) throw ConfigError("n_star_fixed must be <= N-2");
  }
  solver.validate();
}

std::vector<std::string> ExperimentConfig::warnings() const {
  std::vector<std::string> out;
  const double need = 1.5 * reference_time(scenario);
  if (dt * horizon < need) {
    out.push_back("horizon dt*N = " + fmt(dt * horizon) + " s is short for the expected motion (" +
                  fmt(need) + " s)");
  }
  if (gravity && scenario == Scenario::kPointMass) out.push_back("gravity ignored for point_mass");
  if (mode != Mode::kAdtoc && n_star0_set) out.push_back("n_star0 ignored for fixed modes");
  return out;
}

WeightParams ExperimentConfig::weight_params() const {
  WeightParams w;
  w.k = k;
  w.epsilon = epsilon;
  w.sparsity_cutoff = sparsity_cutoff;
  return w;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& [k, s] : setters()) keys.push_back(k);
  return keys;
}

void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value) {
  const auto it = setters().find(key);
  if (it == setters().end()) throw ConfigError("unknown config key '" + key + "'");
  it->second(config, key, value);
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("expected key=value, got '" + assignment + "'");
  apply_setting(config, trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig config;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    try {
      apply_override(config, line);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_string(Scenario s) { return s == Scenario::kPointMass ? "point_mass" : "two_link"; }

std::string to_string(Mode m) {
  switch (m) {
    case Mode::kAdtoc:
      return "adtoc";
    case Mode::kDtocFixed:
      return "dtoc_fixed";
    case Mode::kDtocPadded:
      return "dtoc_padded";
  }
  return "unknown";
}

TimeOptimalProblem build_problem(const ExperimentConfig& c) {
  c.validate();
  std::shared_ptr<const DynamicsModel> model;
  std::shared_ptr<const TaskFunction> task;
  if (c.scenario == Scenario::kPointMass) {
    model = std::make_shared<PointMass>(c.dt);
    task = std::make_shared<StateTask>(Vector::Zero(2));
  } else {
    ArmParams arm;
    arm.gravity = c.gravity;
    model = std::make_shared<TwoLinkArm>(c.dt, arm);
    Vector fd(2);
    fd << 1.0, 1.0;
    task = std::make_shared<EndEffectorTask>(arm, fd);
  }
  if (c.mode == Mode::kAdtoc) {
    return build_adtoc(model, task, c.horizon, c.weight_params(), c.regularization);
  }
  return build_dtoc_fixed(model, task, c.horizon, c.n_star_fixed, c.mode == Mode::kDtocPadded,
                          c.regularization);
}

RunResult run_experiment(const ExperimentConfig& c) {
  const TimeOptimalProblem p = build_problem(c);
  const Vector z0 = c.mode == Mode::kAdtoc ? p.initial_guess(c.initial_nstar()) : p.initial_guess();
  auto [z, report] = solve(p.hierarchy(), z0, c.solver);
  RunResult r;
  r.report = std::move(report);
  r.trajectory = p.unpack(z);
  r.task_errors = p.task_errors(z);
  r.n_star = c.mode == Mode::kAdtoc ? r.trajectory.n_star : c.n_star_fixed;
  r.t_star = report_tstar(r.n_star, c.dt);
  r.first_zero_time = (r.n_star + 1.0) * c.dt;
  r.end_error = r.task_errors[r.task_errors.size() - 1];
  if (c.mode != Mode::kAdtoc) r.fixed_error = fixed_terminal_error(p, z);
  if (c.mode == Mode::kAdtoc) {
    r.kkt = kkt_residuals(p, z);
    r.has_kkt = true;
  }
  r.lexicographic_monotone = is_lexicographically_monotone(r.report, c.solver.filter_slack);
  r.control_limit = p.model().u_max();
  return r;
}

void write_text_file(const std::string& dir, const std::string& name, const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir + "': " + ec.message());
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string run_report_json(const ExperimentConfig& config, const RunResult& run) {
  return run_json(config, run).dump(2) + "\n";
}

void write_run_outputs(const ExperimentConfig& c, const RunResult& r) {
  const Trajectory& tr = r.trajectory;
  const Eigen::Index nu = tr.controls.rows();
  const Eigen::Index nx = tr.states.rows();
  std::ostringstream csv;
  csv << "step,t";
  for (Eigen::Index i = 0; i < nu; ++i) csv << ",u" << i + 1;
  for (Eigen::Index i = 0; i < nx; ++i) csv << ",x" << i + 1;
  csv << ",task_error\n";
  for (Eigen::Index j = 0; j <= tr.controls.cols(); ++j) {
    csv << j << ',' << fmt(static_cast<double>(j) * c.dt);
    for (Eigen::Index i = 0; i < nu; ++i) {
      csv << ',';
      if (j < tr.controls.cols()) csv << fmt(tr.controls(i, j));
    }
    for (Eigen::Index i = 0; i < nx; ++i) csv << ',' << fmt(tr.states(i, j));
    csv << ',' << fmt(r.task_errors[j]) << '\n';
  }
  write_text_file(c.output_dir, "trajectory.csv", csv.str());
  write_text_file(c.output_dir, "report.json", run_report_json(c, r));
  write_text_file(c.output_dir, "iterations.log", iteration_log(r.report));
}

SweepRun run_sweep(const ExperimentConfig& config) {
  ExperimentConfig c = config;
  if (c.mode == Mode::kAdtoc) throw ConfigError("sweep needs mode dtoc_fixed or dtoc_padded");
  if (c.n_star_fixed < 0) c.n_star_fixed = 0;  // the sweep supplies it
  c.validate();
  const int last = c.sweep_last < 0 ? c.horizon - 2 : c.sweep_last;
  if (c.sweep_first > last) throw ConfigError("sweep range is empty");
  if (c.sweep_first < 0 || last > c.horizon - 2) {
    throw ConfigError("sweep range must lie in [0, N-2]");
  }
  const TimeOptimalProblem p = build_problem(c);
  SweepRun out;
  out.sweep = sweep_nstar(p.model_ptr(), p.task_ptr(), c.horizon, c.sweep_first, last,
                          c.mode == Mode::kDtocPadded, c.feasibility_tol, c.solver,
                          c.regularization);
  ExperimentConfig ac = c;
  ac.mode = Mode::kAdtoc;
  out.adtoc = run_experiment(ac);
  out.agreement = compare_adtoc_to_sweep(out.adtoc.n_star, out.sweep);
  return out;
}

void write_sweep_outputs(const ExperimentConfig& c, const SweepRun& run) {
  std::ostringstream csv;
  write_sweep_csv(csv, run.sweep);
  write_text_file(c.output_dir, "sweep.csv", csv.str());
  ExperimentConfig ac = c;
  ac.mode = Mode::kAdtoc;
  json j;
  json entries = json::array();
  for (const SweepEntry& e : run.sweep.entries) {
    entries.push_back({{"n_star", e.n_star},
                       {"terminal_error", e.terminal_error},
                       {"status", to_string(e.status)},
                       {"iterations", e.iterations}});
  }
  j["sweep"] = {{"padded", run.sweep.padded},
                {"feasibility_tol", run.sweep.feasibility_tol},
                {"minimal_feasible_nstar", run.sweep.minimal_feasible_nstar < 0
                                               ? json(nullptr)
                                               : json(run.sweep.minimal_feasible_nstar)},
                {"max_error_increase", max_error_increase(run.sweep)},
                {"entries", entries}};
  j["adtoc"] = run_json(ac, run.adtoc);
  j["agreement"] = {{"agree", run.agreement.agree},
                    {"adtoc_floor", run.agreement.adtoc_floor},
                    {"message", run.agreement.message}};
  write_text_file(c.output_dir, "report.json", j.dump(2) + "\n");
  write_text_file(c.output_dir, "iterations.log", iteration_log(run.adtoc.report));
}

std::string gradient_report_json(const GradientReport& report) {
  json blocks = json::array();
  for (const BlockCheck& b : report.blocks) {
    blocks.push_back({{"name", b.name},
                      {"samples", b.samples},
                      {"max_rel_error", b.max_rel_error},
                      {"passed", b.passed}});
  }
  json j = {{"tolerance", report.tolerance}, {"all_passed", report.all_passed()}, {"blocks", blocks}};
  return j.dump(2) + "\n";
}

std::string property_report_json(const std::vector<PropertyOutcome>& outcomes) {
  json props = json::array();
  bool all = true;
  for (const PropertyOutcome& o : outcomes) {
    props.push_back({{"name", o.name}, {"passed", o.passed}, {"detail", o.detail}});
    all = all && o.passed;
  }
  json j = {{"all_passed", all}, {"properties", props}};
  return j.dump(2) + "\n";
}

}  // namespace hltoc
