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

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "hltoc/adtoc.hpp"
#include "hltoc/shlsp.hpp"

namespace hltoc {

struct SweepEntry {
  int n_star = 0;
  double terminal_error = 0.0;
  SolveStatus status = SolveStatus::kBudgetExhausted;
  int iterations = 0;
};

struct SweepResult {
  bool padded = false;
  double feasibility_tol = 1e-6;
  std::vector<SweepEntry> entries;  // ascending n_star
  /// Smallest n_star whose terminal error is within feasibility_tol, -1 if none.
  int minimal_feasible_nstar = -1;

  bool has_feasible() const { return minimal_feasible_nstar >= 0; }
  const SweepEntry* find(int n_star) const;
};

/// Terminal error of a fixed-switch solution: |f_ter| at grid n*+1, or the
/// largest |f_ter| over grids n*+1 .. N-1 for the padded variant.
double fixed_terminal_error(const TimeOptimalProblem& problem, const Vector& z);

/// One fixed-n* solve per candidate in [first, last], all with the same
/// solver settings. Requires 0 <= first <= last <= N-2 (a fixed problem
/// needs grid n*+1 inside the horizon). Infeasible sweeps are reported by
/// minimal_feasible_nstar = -1, not thrown.
SweepResult sweep_nstar(std::shared_ptr<const DynamicsModel> model,
                        std::shared_ptr<const TaskFunction> task, int horizon, int first,
                        int last, bool padded, double feasibility_tol,
                        const SolverConfig& solver = {}, double regularization = 1.0);

/// Columns n_star,terminal_error,status,iterations.
void write_sweep_csv(std::ostream& out, const SweepResult& sweep);

/// Largest increase of the terminal error from one candidate to the next.
double max_error_increase(const SweepResult& sweep);

struct SweepAgreement {
  bool agree = false;
  int adtoc_floor = 0;
  int minimal_feasible_nstar = -1;
  std::string message;
};

/// floor(adtoc n*) must equal the minimal feasible n* or that value minus one.
/// Throws DomainError on an empty sweep.
SweepAgreement compare_adtoc_to_sweep(double adtoc_nstar, const SweepResult& sweep);

/// Equality-only level min |A z + b| for the brute-force lexicographic oracle.
struct LinearLevel {
  Matrix a;
  Vector b;
};

struct LexicographicSolution {
  Vector z;
  Vector residual_norms;  // |A_l z + b_l| per level
};

/// Level after level: minimum-norm least squares on an explicit SVD basis
/// of the remaining affine set. Independent of the cascade's QR machinery.
LexicographicSolution lexicographic_oracle(const std::vector<LinearLevel>& levels,
                                           double rank_tol = 1e-10);

}  // namespace hltoc
