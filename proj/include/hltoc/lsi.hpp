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

#include "hltoc/models.hpp"

namespace hltoc {

struct LsiResult {
  Vector y;
  Vector multipliers;  // one per constraint row, zero for rows not in the working set
  int iterations = 0;
  bool converged = false;
};

/// Inequality-constrained linear least squares
///
///   min_y 0.5 |A y + b|^2   s.t.   C y <= d
///
/// by a primal active-set method. A must have full column rank and y0 must
/// be feasible (violations up to feasibility_tol are tolerated). Rows of C
/// that are linearly dependent on the working set are never added to it.
LsiResult solve_lsi(const Matrix& a, const Vector& b, const Matrix& c, const Vector& d,
                    const Vector& y0, double feasibility_tol = 1e-12, int max_iterations = 0);

}  // namespace hltoc
