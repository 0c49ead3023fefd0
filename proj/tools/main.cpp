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


// hltoc command line: run, sweep, check-gradients, properties.
// Exit codes: 0 ok, 1 bad config or usage, 2 solver did not converge
// (budget exhausted or stalled; files are still written), 3 a check suite
// failed, 4 any other runtime error.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hltoc/hltoc.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitBudget = 2;
constexpr int kExitSuite = 3;
constexpr int kExitRuntime = 4;

struct Options {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string output_dir;
};

int report_error(hltoc_status status) {
  std::fprintf(stderr, "hltoc: %s: %s\n", hltoc_status_string(status), hltoc_last_error());
  return status == HLTOC_ERR_CONFIG || status == HLTOC_ERR_IO ? kExitConfig : kExitRuntime;
}

// owns a handle for the duration of one command
template <class T, void (*Destroy)(T*)>
struct Handle {
  T* ptr = nullptr;
  ~Handle() { Destroy(ptr); }
};

using ConfigHandle = Handle<hltoc_config, hltoc_config_destroy>;
using ResultHandle = Handle<hltoc_result, hltoc_result_destroy>;

// the sweep supplies n_star_fixed itself and validates on its own
int load(const Options& opt, ConfigHandle& cfg, bool validate = true) {
  hltoc_status s = opt.config_path.empty() ? hltoc_config_create(&cfg.ptr)
                                           : hltoc_config_load(opt.config_path.c_str(), &cfg.ptr);
  if (s != HLTOC_OK) return report_error(s);
  for (const std::string& o : opt.overrides) {
    s = hltoc_config_override(cfg.ptr, o.c_str());
    if (s != HLTOC_OK) return report_error(s);
  }
  if (!opt.output_dir.empty()) {
    s = hltoc_config_set(cfg.ptr, "output_dir", opt.output_dir.c_str());
    if (s != HLTOC_OK) return report_error(s);
  }
  if (validate) {
    s = hltoc_config_validate(cfg.ptr);
    if (s != HLTOC_OK) return report_error(s);
  }
  size_t needed = 0;
  hltoc_config_warnings(cfg.ptr, nullptr, 0, &needed);
  std::string warnings(needed, '\0');
  if (hltoc_config_warnings(cfg.ptr, warnings.data(), warnings.size(), nullptr) == HLTOC_OK) {
    warnings.resize(needed - 1);
    size_t start = 0;
    while (start < warnings.size()) {
      const size_t end = warnings.find('\n', start);
      std::fprintf(stderr, "hltoc: warning: %s\n", warnings.substr(start, end - start).c_str());
      start = end == std::string::npos ? warnings.size() : end + 1;
    }
  }
  return kExitOk;
}

void print_json(const hltoc_result* r) {
  size_t needed = 0;
  hltoc_result_json(r, nullptr, 0, &needed);
  std::string text(needed, '\0');
  if (hltoc_result_json(r, text.data(), text.size(), nullptr) == HLTOC_OK) {
    std::fputs(text.c_str(), stdout);
  }
}

int solver_exit(const hltoc_result* r) {
  hltoc_solve_status st = HLTOC_SOLVE_BUDGET_EXHAUSTED;
  int iterations = 0;
  double n_star = 0.0, t_star = 0.0, end_error = 0.0;
  hltoc_result_solve_status(r, &st);
  hltoc_result_iterations(r, &iterations);
  hltoc_result_nstar(r, &n_star);
  hltoc_result_tstar(r, &t_star);
  hltoc_result_end_error(r, &end_error);
  const char* names[] = {"converged", "stalled", "budget_exhausted"};
  std::printf("status %s iterations %d n_star %.6f t_star %.6f end_error %.3e\n", names[st],
              iterations, n_star, t_star, end_error);
  return st == HLTOC_SOLVE_CONVERGED ? kExitOk : kExitBudget;
}

int cmd_run(const Options& opt) {
  ConfigHandle cfg;
  if (int rc = load(opt, cfg)) return rc;
  ResultHandle res;
  hltoc_status s = hltoc_run(cfg.ptr, &res.ptr);
  if (s != HLTOC_OK) return report_error(s);
  s = hltoc_result_write(res.ptr);
  if (s != HLTOC_OK) return report_error(s);
  return solver_exit(res.ptr);
}

int cmd_sweep(const Options& opt) {
  ConfigHandle cfg;
  if (int rc = load(opt, cfg, false)) return rc;
  ResultHandle res;
  hltoc_status s = hltoc_sweep(cfg.ptr, &res.ptr);
  if (s != HLTOC_OK) return report_error(s);
  s = hltoc_result_write(res.ptr);
  if (s != HLTOC_OK) return report_error(s);
  int minimal = -1, agree = 0;
  hltoc_result_minimal_feasible_nstar(res.ptr, &minimal);
  hltoc_result_sweep_agrees(res.ptr, &agree);
  std::printf("minimal_feasible_nstar %d agree %d\n", minimal, agree);
  return solver_exit(res.ptr);
}

int cmd_suite(const Options& opt, bool gradients) {
  ConfigHandle cfg;
  if (int rc = load(opt, cfg)) return rc;
  ResultHandle res;
  hltoc_status s = gradients ? hltoc_check_gradients(cfg.ptr, &res.ptr)
                             : hltoc_properties(cfg.ptr, &res.ptr);
  if (s != HLTOC_OK) return report_error(s);
  s = hltoc_result_write(res.ptr);
  if (s != HLTOC_OK) return report_error(s);
  print_json(res.ptr);
  int passed = 0;
  hltoc_result_passed(res.ptr, &passed);
  return passed ? kExitOk : kExitSuite;
}

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("-c,--config", opt.config_path, "key = value config file")->check(CLI::ExistingFile);
  sub->add_option("-s,--set", opt.overrides, "key=value override, repeatable");
  sub->add_option("-o,--out", opt.output_dir, "output directory");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hltoc: approximate discrete time-optimal control by hierarchical least squares"};
  app.set_version_flag("--version", std::string(hltoc_version()));
  app.require_subcommand(1);
  Options opt;
  CLI::App* run = app.add_subcommand("run", "solve one experiment");
  CLI::App* sweep = app.add_subcommand("sweep", "fixed-switch sweep plus ADTOC comparison");
  CLI::App* grad = app.add_subcommand("check-gradients", "finite-difference derivative checks");
  CLI::App* props = app.add_subcommand("properties", "convergence property suites");
  for (CLI::App* sub : {run, sweep, grad, props}) add_common(sub, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }
  if (run->parsed()) return cmd_run(opt);
  if (sweep->parsed()) return cmd_sweep(opt);
  if (grad->parsed()) return cmd_suite(opt, true);
  return cmd_suite(opt, false);
}
