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


#include "hltoc/hltoc.h"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <new>
#include <string>

#include "hltoc/errors.hpp"
#include "hltoc/experiment.hpp"

struct hltoc_config {
  hltoc::ExperimentConfig config;
};

struct hltoc_result {
  hltoc_result_kind kind = HLTOC_RESULT_RUN;
  hltoc::ExperimentConfig config;
  hltoc::RunResult run;  // run, or the comparison run of a sweep
  hltoc::SweepRun sweep;
  hltoc::GradientReport gradients;
  std::vector<hltoc::PropertyOutcome> properties;
};

namespace {

thread_local std::string g_last_error;

hltoc_status fail(hltoc_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

hltoc_status from_kind(hltoc::ErrorKind kind) {
  switch (kind) {
    case hltoc::ErrorKind::kConfig:
      return HLTOC_ERR_CONFIG;
    case hltoc::ErrorKind::kDomain:
      return HLTOC_ERR_DOMAIN;
    case hltoc::ErrorKind::kStructural:
      return HLTOC_ERR_STRUCTURAL;
    case hltoc::ErrorKind::kEvaluation:
      return HLTOC_ERR_EVALUATION;
    case hltoc::ErrorKind::kSingular:
      return HLTOC_ERR_SINGULAR;
    case hltoc::ErrorKind::kIo:
      return HLTOC_ERR_IO;
  }
  return HLTOC_ERR_INTERNAL;
}

// every entry point funnels C++ exceptions through here
template <class F>
hltoc_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const hltoc::Error& e) {
    return fail(from_kind(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(HLTOC_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(HLTOC_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(HLTOC_ERR_INTERNAL, "unknown error");
  }
}

hltoc_status copy_text(const std::string& text, char* buf, size_t size, size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (!buf) return size == 0 ? HLTOC_OK : fail(HLTOC_ERR_INVALID_ARGUMENT, "null buffer");
  if (size == 0) return fail(HLTOC_ERR_BUFFER_TOO_SMALL, "buffer too small");
  const size_t n = std::min(size - 1, text.size());
  std::memcpy(buf, text.data(), n);
  buf[n] = '\0';
  return n == text.size() ? HLTOC_OK : fail(HLTOC_ERR_BUFFER_TOO_SMALL, "buffer too small");
}

#define HLTOC_REQUIRE(cond, what) \
  if (!(cond)) return fail(HLTOC_ERR_INVALID_ARGUMENT, what)

const hltoc::RunResult* solve_run(const hltoc_result* r) {
  if (r->kind == HLTOC_RESULT_RUN) return &r->run;
  if (r->kind == HLTOC_RESULT_SWEEP) return &r->sweep.adtoc;
  return nullptr;
}

std::string result_json(const hltoc_result* r) {
  switch (r->kind) {
    case HLTOC_RESULT_RUN:
      return hltoc::run_report_json(r->config, r->run);
    case HLTOC_RESULT_SWEEP: {
      // same text the sweep writes
      return hltoc::run_report_json(r->config, r->sweep.adtoc);
    }
    case HLTOC_RESULT_GRADIENTS:
      return hltoc::gradient_report_json(r->gradients);
    case HLTOC_RESULT_PROPERTIES:
      return hltoc::property_report_json(r->properties);
  }
  return "{}";
}

template <class F>
hltoc_status run_getter(const hltoc_result* r, void* out, F&& get) {
  return guarded([&] {
    HLTOC_REQUIRE(r && out, "null argument");
    const hltoc::RunResult* run = solve_run(r);
    if (!run) return fail(HLTOC_ERR_WRONG_KIND, "result holds no solver run");
    get(*run);
    return HLTOC_OK;
  });
}

}  // namespace

extern "C" {

const char* hltoc_version(void) { return "0.1.0"; }

const char* hltoc_last_error(void) { return g_last_error.c_str(); }

const char* hltoc_status_string(hltoc_status status) {
  switch (status) {
    case HLTOC_OK: return "ok";
    case HLTOC_ERR_CONFIG: return "config error";
    case HLTOC_ERR_DOMAIN: return "domain error";
    case HLTOC_ERR_STRUCTURAL: return "structural error";
    case HLTOC_ERR_EVALUATION: return "evaluation error";
    case HLTOC_ERR_SINGULAR: return "singular system";
    case HLTOC_ERR_IO: return "i/o error";
    case HLTOC_ERR_INVALID_ARGUMENT: return "invalid argument";
    case HLTOC_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case HLTOC_ERR_WRONG_KIND: return "wrong result kind";
    case HLTOC_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

hltoc_status hltoc_config_create(hltoc_config** out) {
  return guarded([&] {
    HLTOC_REQUIRE(out, "null output handle");
    *out = new hltoc_config();
    return HLTOC_OK;
  });
}

hltoc_status hltoc_config_load(const char* path, hltoc_config** out) {
  return guarded([&] {
    HLTOC_REQUIRE(path && out, "null argument");
    *out = nullptr;
    auto* c = new hltoc_config();
    try {
      c->config = hltoc::load_config(path);
    } catch (...) {
      delete c;
      throw;
    }
    *out = c;
    return HLTOC_OK;
  });
}

hltoc_status hltoc_config_parse(const char* text, hltoc_config** out) {
  return guarded([&] {
    HLTOC_REQUIRE(text && out, "null argument");
    *out = nullptr;
    auto* c = new hltoc_config();
    try {
      c->config = hltoc::parse_config(text);
    } catch (...) {
      delete c;
      throw;
    }
    *out = c;
    return HLTOC_OK;
  });
}

void hltoc_config_destroy(hltoc_config* config) { delete config; }

hltoc_status hltoc_config_set(hltoc_config* config, const char* key, const char* value) {
  return guarded([&] {
    HLTOC_REQUIRE(config && key && value, "null argument");
    hltoc::apply_setting(config->config, key, value);
    return HLTOC_OK;
  });
}

hltoc_status hltoc_config_override(hltoc_config* config, const char* assignment) {
  return guarded([&] {
    HLTOC_REQUIRE(config && assignment, "null argument");
    hltoc::apply_override(config->config, assignment);
    return HLTOC_OK;
  });
}

hltoc_status hltoc_config_validate(const hltoc_config* config) {
  return guarded([&] {
    HLTOC_REQUIRE(config, "null config");
    config->config.validate();
    return HLTOC_OK;
  });
}

hltoc_status hltoc_config_warnings(const hltoc_config* config, char* buf, size_t size,
                                   size_t* needed) {
  return guarded([&] {
    HLTOC_REQUIRE(config, "null config");
    std::string text;
    for (const std::string& w : config->config.warnings()) text += w + "\n";
    return copy_text(text, buf, size, needed);
  });
}

hltoc_status hltoc_run(const hltoc_config* config, hltoc_result** out) {
  return guarded([&] {
    HLTOC_REQUIRE(config && out, "null argument");
    *out = nullptr;
    auto r = std::make_unique<hltoc_result>();
    r->kind = HLTOC_RESULT_RUN;
    r->config = config->config;
    r->run = hltoc::run_experiment(r->config);
    *out = r.release();
    return HLTOC_OK;
  });
}

hltoc_status hltoc_sweep(const hltoc_config* config, hltoc_result** out) {
  return guarded([&] {
    HLTOC_REQUIRE(config && out, "null argument");
    *out = nullptr;
    auto r = std::make_unique<hltoc_result>();
    r->kind = HLTOC_RESULT_SWEEP;
    r->config = config->config;
    r->sweep = hltoc::run_sweep(r->config);
    *out = r.release();
    return HLTOC_OK;
  });
}

hltoc_status hltoc_check_gradients(const hltoc_config* config, hltoc_result** out) {
  return guarded([&] {
    HLTOC_REQUIRE(config && out, "null argument");
    *out = nullptr;
    config->config.validate();
    auto r = std::make_unique<hltoc_result>();
    r->kind = HLTOC_RESULT_GRADIENTS;
    r->config = config->config;
    hltoc::GradientCheckOptions opt = r->config.gradients;
    opt.horizon = r->config.horizon;
    opt.dt = r->config.dt;
    opt.k = r->config.k;
    r->gradients = hltoc::check_gradients(opt);
    *out = r.release();
    return HLTOC_OK;
  });
}

hltoc_status hltoc_properties(const hltoc_config* config, hltoc_result** out) {
  return guarded([&] {
    HLTOC_REQUIRE(config && out, "null argument");
    *out = nullptr;
    auto r = std::make_unique<hltoc_result>();
    r->kind = HLTOC_RESULT_PROPERTIES;
    r->config = config->config;
    r->properties = hltoc::run_properties(r->config);
    *out = r.release();
    return HLTOC_OK;
  });
}

void hltoc_result_destroy(hltoc_result* result) { delete result; }

hltoc_status hltoc_result_kind_of(const hltoc_result* result, hltoc_result_kind* kind) {
  return guarded([&] {
    HLTOC_REQUIRE(result && kind, "null argument");
    *kind = result->kind;
    return HLTOC_OK;
  });
}

hltoc_status hltoc_result_write(const hltoc_result* result) {
  return guarded([&] {
    HLTOC_REQUIRE(result, "null result");
    const hltoc::ExperimentConfig& c = result->config;
    switch (result->kind) {
      case HLTOC_RESULT_RUN:
        hltoc::write_run_outputs(c, result->run);
        break;
      case HLTOC_RESULT_SWEEP:
        hltoc::write_sweep_outputs(c, result->sweep);
        break;
      case HLTOC_RESULT_GRADIENTS:
      case HLTOC_RESULT_PROPERTIES:
        hltoc::write_text_file(c.output_dir, "report.json", result_json(result));
        break;
    }
    return HLTOC_OK;
  });
}

hltoc_status hltoc_result_json(const hltoc_result* result, char* buf, size_t size,
                               size_t* needed) {
  return guarded([&] {
    HLTOC_REQUIRE(result, "null result");
    return copy_text(result_json(result), buf, size, needed);
  });
}

hltoc_status hltoc_result_passed(const hltoc_result* result, int* passed) {
  return guarded([&] {
    HLTOC_REQUIRE(result && passed, "null argument");
    if (result->kind == HLTOC_RESULT_GRADIENTS) {
      *passed = result->gradients.all_passed() ? 1 : 0;
    } else if (result->kind == HLTOC_RESULT_PROPERTIES) {
      bool all = true;
      for (const auto& p : result->properties) all = all && p.passed;
      *passed = all ? 1 : 0;
    } else {
      return fail(HLTOC_ERR_WRONG_KIND, "result holds no check suite");
    }
    return HLTOC_OK;
  });
}

hltoc_status hltoc_result_solve_status(const hltoc_result* result, hltoc_solve_status* status) {
  return run_getter(result, status, [&](const hltoc::RunResult& r) {
    switch (r.report.status) {
      case hltoc::SolveStatus::kConverged:
        *status = HLTOC_SOLVE_CONVERGED;
        break;
      case hltoc::SolveStatus::kStalled:
        *status = HLTOC_SOLVE_STALLED;
        break;
      case hltoc::SolveStatus::kBudgetExhausted:
        *status = HLTOC_SOLVE_BUDGET_EXHAUSTED;
        break;
    }
  });
}

hltoc_status hltoc_result_iterations(const hltoc_result* result, int* iterations) {
  return run_getter(result, iterations,
                    [&](const hltoc::RunResult& r) { *iterations = r.report.iterations; });
}

hltoc_status hltoc_result_nstar(const hltoc_result* result, double* n_star) {
  return run_getter(result, n_star, [&](const hltoc::RunResult& r) { *n_star = r.n_star; });
}

hltoc_status hltoc_result_tstar(const hltoc_result* result, double* t_star) {
  return run_getter(result, t_star, [&](const hltoc::RunResult& r) { *t_star = r.t_star; });
}

hltoc_status hltoc_result_end_error(const hltoc_result* result, double* error) {
  return run_getter(result, error, [&](const hltoc::RunResult& r) { *error = r.end_error; });
}

hltoc_status hltoc_result_lexicographic_monotone(const hltoc_result* result, int* monotone) {
  return run_getter(result, monotone,
                    [&](const hltoc::RunResult& r) { *monotone = r.lexicographic_monotone ? 1 : 0; });
}

hltoc_status hltoc_result_trajectory_shape(const hltoc_result* result, int* rows, int* cols) {
  return guarded([&] {
    HLTOC_REQUIRE(result && rows && cols, "null argument");
    const hltoc::RunResult* run = solve_run(result);
    if (!run) return fail(HLTOC_ERR_WRONG_KIND, "result holds no solver run");
    const auto& tr = run->trajectory;
    *rows = static_cast<int>(tr.states.cols());
    *cols = static_cast<int>(2 + tr.controls.rows() + tr.states.rows() + 1);
    return HLTOC_OK;
  });
}

hltoc_status hltoc_result_trajectory(const hltoc_result* result, double* data, size_t count) {
  return guarded([&] {
    HLTOC_REQUIRE(result && data, "null argument");
    const hltoc::RunResult* run = solve_run(result);
    if (!run) return fail(HLTOC_ERR_WRONG_KIND, "result holds no solver run");
    const auto& tr = run->trajectory;
    const Eigen::Index nu = tr.controls.rows();
    const Eigen::Index nx = tr.states.rows();
    const Eigen::Index rows = tr.states.cols();
    const Eigen::Index cols = 2 + nu + nx + 1;
    if (count < static_cast<size_t>(rows * cols)) {
      return fail(HLTOC_ERR_BUFFER_TOO_SMALL, "trajectory buffer too small");
    }
    const double dt = result->config.dt;
    for (Eigen::Index j = 0; j < rows; ++j) {
      double* row = data + j * cols;
      row[0] = static_cast<double>(j);
      row[1] = static_cast<double>(j) * dt;
      for (Eigen::Index i = 0; i < nu; ++i) {
        row[2 + i] = j < tr.controls.cols() ? tr.controls(i, j)
                                            : std::numeric_limits<double>::quiet_NaN();
      }
      for (Eigen::Index i = 0; i < nx; ++i) row[2 + nu + i] = tr.states(i, j);
      row[cols - 1] = run->task_errors[j];
    }
    return HLTOC_OK;
  });
}

hltoc_status hltoc_result_minimal_feasible_nstar(const hltoc_result* result, int* n_star) {
  return guarded([&] {
    HLTOC_REQUIRE(result && n_star, "null argument");
    if (result->kind != HLTOC_RESULT_SWEEP) return fail(HLTOC_ERR_WRONG_KIND, "not a sweep result");
    *n_star = result->sweep.sweep.minimal_feasible_nstar;
    return HLTOC_OK;
  });
}

hltoc_status hltoc_result_sweep_agrees(const hltoc_result* result, int* agree) {
  return guarded([&] {
    HLTOC_REQUIRE(result && agree, "null argument");
    if (result->kind != HLTOC_RESULT_SWEEP) return fail(HLTOC_ERR_WRONG_KIND, "not a sweep result");
    *agree = result->sweep.agreement.agree ? 1 : 0;
    return HLTOC_OK;
  });
}

}  // extern "C"
