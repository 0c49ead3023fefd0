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

// Finite-difference helpers shared by the test binaries.

#include <algorithm>
#include <cmath>
#include <functional>

#include "hltoc/models.hpp"

namespace testing {

using hltoc::Matrix;
using hltoc::Vector;

inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& v,
                          double h = 1e-6) {
  const Vector f0 = f(v);
  Matrix j(f0.size(), v.size());
  Vector p = v;
  for (Eigen::Index c = 0; c < v.size(); ++c) {
    p[c] = v[c] + h;
    const Vector fp = f(p);
    p[c] = v[c] - h;
    const Vector fm = f(p);
    p[c] = v[c];
    j.col(c) = (fp - fm) / (2.0 * h);
  }
  return j;
}

inline double rel_error(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1.0});
}

inline double max_rel_error(const Matrix& a, const Matrix& b) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) worst = std::max(worst, rel_error(a.data()[i], b.data()[i]));
  return worst;
}

}  // namespace testing
