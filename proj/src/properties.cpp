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


#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <set>

#include "hltoc/experiment.hpp"
#include "hltoc/weights.hpp"

namespace hltoc {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

ExperimentConfig point_mass_adtoc(const ExperimentConfig& base) {
  ExperimentConfig c = base;
  c.scenario = Scenario::kPointMass;
  c.mode = Mode::kAdtoc;
  return c;
}

PropertyOutcome sigma_negative(const ExperimentConfig& base) {
  PropertyOutcome o;
  o.name = "sigma_negative";
  const int k = integer_k_epsilon(1e-8);
  const SigmaSignCounts s = sigma_sign_suite(base.horizon, k, 1000, 1, 0.3, base.sparsity_cutoff);
  const SigmaSignCounts exact = sigma_sign_suite(base.horizon, k, 1000, 1, 0.3, 0.0);
  const SigmaSignCounts loose = sigma_sign_suite(base.horizon, base.k, 1000, 1, 0.3,
                                                 base.sparsity_cutoff);
  o.passed = s.violations == 0;
  o.detail = "k=" + std::to_string(k) + ": " + std::to_string(s.negative) + "/" +
             std::to_string(s.samples) + " negative (" + std::to_string(s.redrawn) +
             " draws without a nonzero weighted row redrawn); logged only: k=" +
             std::to_string(k) + " without cutoff " + std::to_string(exact.violations) +
             " non-negative, largest " + num(exact.largest) + " at n* " + num(exact.worst_nstar) +
             "; k=" + std::to_string(base.k) + " " + std::to_string(loose.violations) +
             " non-negative, largest " + num(loose.largest);
  return o;
}

PropertyOutcome nstar_range(const ExperimentConfig& base) {
  PropertyOutcome o;
  o.name = "nstar_range";
  o.passed = true;
  std::set<int> ks = {base.k, integer_k_epsilon(base.epsilon)};
  const double n = base.horizon;
  for (int k : ks) {
    for (double start : {-5.0, 0.5 * n, n + 5.0}) {
      ExperimentConfig c = point_mass_adtoc(base);
      c.k = k;
      c.n_star0 = start;
      c.n_star0_set = true;
      const RunResult r = run_experiment(c);
      const bool ok = r.report.status == SolveStatus::kConverged && r.n_star >= 0.0 &&
                      r.n_star <= n && r.lexicographic_monotone;
      o.passed = o.passed && ok;
      o.detail += "k=" + std::to_string(k) + " start " + num(start) + " -> n* " + num(r.n_star) +
                  " (" + to_string(r.report.status) + "); ";
    }
  }
  return o;
}

// n* stationarity balance: sigma cancels the time term while the trajectory
// is still away from the target before the switch.
PropertyOutcome stationarity_balance(const ExperimentConfig& base) {
  PropertyOutcome o;
  o.name = "nstar_stationarity_balance";
  const ExperimentConfig c = point_mass_adtoc(base);
  const RunResult r = run_experiment(c);
  const double time_term = r.n_star * c.dt * c.dt;
  const double balance = std::abs(r.kkt.k_nstar) / std::max(time_term, 1e-300);
  bool errors_positive = true;
  for (int i = 0; i <= static_cast<int>(std::floor(r.n_star)) && i + 1 < r.task_errors.size(); ++i) {
    errors_positive = errors_positive && r.task_errors[i + 1] > 0.0;  // grid i is x(i+1)
  }
  o.passed = r.report.status == SolveStatus::kConverged && balance <= 1e-2 && errors_positive;
  o.detail = "K_n* = " + num(r.kkt.k_nstar) + ", n* dt^2 = " + num(time_term) + ", sigma = " +
             num(r.kkt.sigma) + ", relative imbalance " + num(balance) +
             (errors_positive ? "" : ", a grid error before n* vanished");
  return o;
}

PropertyOutcome continuous_trend(const ExperimentConfig& base) {
  PropertyOutcome o;
  o.name = "trend_to_continuous_optimum";
  const double optimum = 2.0 * std::sqrt(1.0 / 10.0);
  o.passed = true;
  double previous_gap = -1.0;
  for (double dt : {0.2, 0.1, 0.05, 0.02, 0.01}) {
    ExperimentConfig c = point_mass_adtoc(base);
    c.dt = dt;
    c.horizon = std::max(10, static_cast<int>(std::lround(1.0 / dt)));  // one second
    c.n_star0_set = false;
    const RunResult r = run_experiment(c);
    const double gap = std::abs(r.t_star + dt - optimum);
    bool ok = r.report.status == SolveStatus::kConverged && gap <= 2.0 * dt;
    if (previous_gap >= 0.0) ok = ok && gap <= previous_gap + 2.0 * dt;
    previous_gap = gap;
    o.passed = o.passed && ok;
    o.detail += "dt " + num(dt) + ": T*+dt = " + num(r.t_star + dt) + (ok ? "; " : " (off); ");
  }
  return o;
}

}  // namespace

SigmaSignCounts sigma_sign_suite(int horizon, int k, int samples, std::uint64_t seed,
                                 double zero_fraction, double sparsity_cutoff) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  WeightParams wp;
  wp.k = k;
  wp.sparsity_cutoff = sparsity_cutoff;
  SigmaSignCounts out;
  while (out.samples < samples) {
    Vector sq(horizon);
    for (int i = 0; i < horizon; ++i) {
      const double q = 2.0 * unit(rng) - 1.0;
      const double v = 2.0 * unit(rng) - 1.0;
      sq[i] = unit(rng) < zero_fraction ? 0.0 : q * q + v * v;
    }
    if (sq.maxCoeff() == 0.0) sq[std::uniform_int_distribution<int>(0, horizon - 1)(rng)] = 1.0;
    const double n_star = horizon * unit(rng);
    bool live = false;
    for (int i = 0; i < horizon; ++i) {
      live = live || (sq[i] != 0.0 && sparsify(weight(i, n_star, k), wp.sparsity_cutoff) != 0.0);
    }
    if (!live) {
      ++out.redrawn;
      continue;
    }
    const double value = sigma(sq, n_star, wp);
    ++out.samples;
    if (value < 0.0) {
      ++out.negative;
    } else if (value > out.largest) {
      out.largest = value;
      out.worst_nstar = n_star;
    }
  }
  out.violations = out.samples - out.negative;
  return out;
}

std::vector<PropertyOutcome> run_properties(const ExperimentConfig& config) {
  config.validate();
  return {sigma_negative(config), nstar_range(config), stationarity_balance(config),
          continuous_trend(config)};
}

}  // namespace hltoc
